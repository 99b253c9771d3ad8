//! Hilbert-style proofs, decidable theory presentations, the checker and
//! the evaluator behind computation axioms.

mod check;
pub mod derive;

mod eval;
mod logic;
mod proof;
mod taut;
mod theory;


pub use check::{check_proof, Verdict};
pub use eval::{eval_closed_decidable, eval_term, proof_relation, subst_numerals, MAX_BOUND};
pub use logic::check_logical;
pub use proof::{decode_proof, parse_proof, parse_proof_lenient, proof_size, Axiom, Proof, Rule};
pub use taut::{is_tautology, MAX_ATOMS};
pub use theory::{rfn_tower_presentation, tower_level, tower_name, Family, Filter, Schema, Theory, PLACEHOLDER};

