//! Executable arithmetized syntax: Gödel coding, a Hilbert-style proof
//! checker, reflection schemata, relative interpretations, proof
//! transformations and ordinal-indexed progressions.

pub mod calculus;
pub mod codec;
pub mod corpus;
pub mod error;
pub mod interp;
pub mod mutate;
pub mod ordinal;
pub mod presentation;
pub mod progressions;
pub mod reductions;
pub mod schemas;
pub mod sexp;
pub mod syntax;
pub mod theories;

pub use error::{Error, ParseError, ParseErrorKind, Result};
