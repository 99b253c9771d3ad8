//! Relative translations, proof translation and witness bundles.

mod bundle;
mod proofs;
mod translation;

pub use bundle::*;
pub use proofs::{assemble, translate_proof, TranslatedProof};
pub use translation::*;
