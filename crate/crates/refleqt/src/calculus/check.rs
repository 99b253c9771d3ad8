use std::fmt;

use super::eval::eval_closed_decidable;
use super::logic::check_logical;
use super::proof::{Proof, Rule};
use super::theory::Theory;
use crate::syntax::{alpha_eq, Formula};

/// Outcome of checking a proof: the first failing step, if any, as a path of
/// premise indices from the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub accepted: bool,
    pub failing_step: Option<(Vec<usize>, String)>,
}

impl Verdict {
    pub fn accept() -> Verdict {
        Verdict { accepted: true, failing_step: None }
    }

    pub fn reject(path: Vec<usize>, reason: impl Into<String>) -> Verdict {
        Verdict { accepted: false, failing_step: Some((path, reason.into())) }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failing_step {
            None => f.write_str("accepted"),
            Some((path, reason)) => {
                let loc: Vec<String> = path.iter().map(|i| i.to_string()).collect();
                write!(f, "rejected at step [{}]: {reason}", loc.join("."))
            }
        }
    }
}

fn step(p: &Proof, theory: &Theory) -> Result<(), String> {
    theory.signature.check_formula(&p.conclusion)?;
    let arity = match &p.rule {
        Rule::ModusPonens => 2,
        Rule::Generalization(_) => 1,
        _ => 0,
    };
    if p.premises.len() != arity {
        return Err(format!("expected {arity} premises, found {}", p.premises.len()));
    }
    match &p.rule {
        Rule::Logical(ax) => check_logical(ax, &p.conclusion),
        Rule::Theory => {
            if theory.recognize_axiom(&p.conclusion) {
                Ok(())
            } else {
                Err(format!("not an axiom of {}", theory.name))
            }
        }
        Rule::Computation => {
            if !p.conclusion.is_sentence() {
                return Err("computation axiom must be closed".into());
            }
            match eval_closed_decidable(&p.conclusion, theory) {
                Ok(true) => Ok(()),
                Ok(false) => Err("computation axiom evaluates to false".into()),
                Err(e) => Err(e.to_string()),
            }
        }
        Rule::ModusPonens => {
            let minor = &p.premises[0].conclusion;
            match &p.premises[1].conclusion {
                Formula::Imp(a, b) if alpha_eq(a, minor) && alpha_eq(b, &p.conclusion) => Ok(()),
                _ => Err("premises do not match modus ponens".into()),
            }
        }
        Rule::Generalization(v) => match &p.conclusion {
            Formula::All(x, body) if x == v && alpha_eq(body, &p.premises[0].conclusion) => Ok(()),
            _ => Err(format!("conclusion is not the generalization over {v} of the premise")),
        },
    }
}

fn walk(p: &Proof, theory: &Theory, path: &mut Vec<usize>) -> Option<Verdict> {
    for (i, q) in p.premises.iter().enumerate() {
        path.push(i);
        let r = walk(q, theory, path);
        path.pop();
        if r.is_some() {
            return r;
        }
    }
    step(p, theory).err().map(|reason| Verdict::reject(path.clone(), reason))
}

/// Checks every step against the logical schemes, the presentation's axiom
/// recognizer and the evaluator for computation axioms.
pub fn check_proof(p: &Proof, theory: &Theory) -> Verdict {
    walk(p, theory, &mut Vec::new()).unwrap_or_else(Verdict::accept)
}
