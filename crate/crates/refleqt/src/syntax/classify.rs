use std::fmt;

use super::{Formula, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundedClass {
    /// Every quantifier bounded by a length term `|t|`.
    Sigma0,
    /// An unbounded universal prefix over a Σ₀ᵇ matrix.
    Delta0Syntactic,
    Sigma(u32),
    Pi(u32),
    Unbounded,
}

impl BoundedClass {
    /// Position in the order Σ₀ᵇ < Δ₀ᵇ-syntactic < Σₙᵇ/Πₙᵇ (by n) < unbounded.
    pub fn rank(self) -> u32 {
        match self {
            BoundedClass::Sigma0 => 0,
            BoundedClass::Delta0Syntactic => 1,
            BoundedClass::Sigma(n) | BoundedClass::Pi(n) => 1 + n,
            BoundedClass::Unbounded => u32::MAX,
        }
    }
}

impl fmt::Display for BoundedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundedClass::Sigma0 => f.write_str("Sigma0b"),
            BoundedClass::Delta0Syntactic => f.write_str("Delta0b-syntactic"),
            BoundedClass::Sigma(n) => write!(f, "Sigma{n}b"),
            BoundedClass::Pi(n) => write!(f, "Pi{n}b"),
            BoundedClass::Unbounded => f.write_str("unbounded"),
        }
    }
}

fn is_length_term(t: &Term) -> bool {
    matches!(t, Term::App(g, args) if g == "len" && args.len() == 1)
}

/// Least (n, m) with f in Σₙᵇ and Πₘᵇ, or None if f has an unbounded quantifier.
fn levels(f: &Formula) -> Option<(u32, u32)> {
    match f {
        Formula::Atom(..) | Formula::Eq(..) => Some((0, 0)),
        Formula::Not(a) => levels(a).map(|(s, p)| (p, s)),
        Formula::And(a, b) | Formula::Or(a, b) => {
            let (sa, pa) = levels(a)?;
            let (sb, pb) = levels(b)?;
            Some((sa.max(sb), pa.max(pb)))
        }
        Formula::Imp(a, b) => {
            let (sa, pa) = levels(a)?;
            let (sb, pb) = levels(b)?;
            Some((pa.max(sb), sa.max(pb)))
        }
        Formula::All(..) | Formula::Ex(..) => None,
        Formula::BAll(_, t, a) | Formula::BEx(_, t, a) => {
            let (s, p) = levels(a)?;
            if is_length_term(t) {
                return Some((s, p));
            }
            if matches!(f, Formula::BEx(..)) {
                let s2 = 1.max(s.min(p + 1));
                Some((s2, s2 + 1))
            } else {
                let p2 = 1.max(p.min(s + 1));
                Some((p2 + 1, p2))
            }
        }
    }
}

pub fn classify_formula(f: &Formula) -> BoundedClass {
    let mut matrix = f;
    let mut prefix = 0;
    while let Formula::All(_, body) = matrix {
        matrix = body;
        prefix += 1;
    }
    match levels(matrix) {
        None => BoundedClass::Unbounded,
        Some((0, _)) if prefix > 0 => BoundedClass::Delta0Syntactic,
        Some(_) if prefix > 0 => BoundedClass::Unbounded,
        Some((0, _)) => BoundedClass::Sigma0,
        Some((s, p)) if s <= p => BoundedClass::Sigma(s),
        Some((_, p)) => BoundedClass::Pi(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Signature};

    fn c(s: &str) -> BoundedClass {
        let sig = Signature::arithmetic("a").with_relation("P", 1).with_relation("Q", 2);
        classify_formula(&parse_formula(s, &sig).unwrap())
    }

    #[test]
    fn examples() {
        assert_eq!(c("(ball x (len t) (P x))"), BoundedClass::Sigma0);
        assert_eq!(c("(bex y t (ball x (len s) (Q x y)))"), BoundedClass::Sigma(1));
        assert_eq!(c("(ex p (Q p x))"), BoundedClass::Unbounded);
        assert_eq!(c("(all x (<= x x))"), BoundedClass::Delta0Syntactic);
        assert_eq!(c("(ball y t (bex x t (Q x y)))"), BoundedClass::Pi(2));
        assert_eq!(c("(not (bex y t (P y)))"), BoundedClass::Pi(1));
        assert_eq!(c("(= 0 0)"), BoundedClass::Sigma0);
    }
}
