//! Cantor normal form notations below ε₀.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `ω^e₁·c₁ + … + ω^eₖ·cₖ` with strictly decreasing exponents and
/// coefficients ≥ 1. Zero is the empty sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ordinal {
    terms: Vec<(Ordinal, u64)>,
}

impl Ordinal {
    pub fn zero() -> Ordinal {
        Ordinal { terms: Vec::new() }
    }

    pub fn nat(n: u64) -> Ordinal {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![(Ordinal::zero(), n)] }
        }
    }

    pub fn omega() -> Ordinal {
        Ordinal::omega_pow(Ordinal::nat(1), 1)
    }

    /// `ω^e · c`.
    pub fn omega_pow(e: Ordinal, c: u64) -> Ordinal {
        if c == 0 {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![(e, c)] }
        }
    }

    /// Builds a notation from terms, checking the normal-form invariant.
    pub fn from_terms(terms: Vec<(Ordinal, u64)>) -> Result<Ordinal> {
        if terms.iter().any(|(_, c)| *c == 0) {
            return Err(Error::Malformed("zero coefficient in normal form".into()));
        }
        if terms.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(Error::Malformed("exponents must strictly decrease".into()));
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[(Ordinal, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_limit(&self) -> bool {
        matches!(self.terms.last(), Some((e, _)) if !e.is_zero())
    }

    pub fn is_successor(&self) -> bool {
        matches!(self.terms.last(), Some((e, _)) if e.is_zero())
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    pub fn succ(&self) -> Ordinal {
        let mut terms = self.terms.clone();
        match terms.last_mut() {
            Some((e, c)) if e.is_zero() => *c += 1,
            _ => terms.push((Ordinal::zero(), 1)),
        }
        Ordinal { terms }
    }

    /// Predecessor of a successor notation.
    pub fn pred(&self) -> Option<Ordinal> {
        if !self.is_successor() {
            return None;
        }
        let mut terms = self.terms.clone();
        let (_, c) = terms.last_mut().unwrap();
        if *c == 1 {
            terms.pop();
        } else {
            *c -= 1;
        }
        Some(Ordinal { terms })
    }

    /// Text without spaces, usable inside a symbol name.
    pub fn compact(&self) -> String {
        self.to_string().replace(' ', "").replace('(', "[").replace(')', "]")
    }

    /// `code(0) = 0`, `code(ω^a·c + β) = 1 + ⟨⟨code a, c−1⟩, code β⟩` with
    /// Cantor pairing.
    pub fn code(&self) -> BigUint {
        self.terms.iter().rev().fold(BigUint::zero(), |rest, (e, c)| {
            BigUint::one() + cantor_pair(&cantor_pair(&e.code(), &BigUint::from(c - 1)), &rest)
        })
    }

    /// Inverse of `code` on codes of notations in normal form.
    pub fn decode(code: &BigUint) -> Option<Ordinal> {
        if code.is_zero() {
            return Some(Ordinal::zero());
        }
        let (head, rest) = cantor_unpair(&(code - 1u32));
        let (e, c) = cantor_unpair(&head);
        let e = Ordinal::decode(&e)?;
        let c = c.to_u64()?.checked_add(1)?;
        let rest = Ordinal::decode(&rest)?;
        if let Some((e2, _)) = rest.terms.first() {
            if *e2 >= e {
                return None;
            }
        }
        let mut terms = vec![(e, c)];
        terms.extend(rest.terms);
        Some(Ordinal { terms })
    }

    /// Reads the CNF text form; `[` `]` are accepted in place of parentheses.
    pub fn parse(text: &str) -> Result<Ordinal> {
        let normalized = text.trim().replace('[', "(").replace(']', ")");
        let text = normalized.as_str();
        if text.is_empty() {
            return Err(Error::Malformed("empty ordinal notation".into()));
        }
        let mut parts = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        for (i, ch) in text.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '+' if depth == 0 => {
                    parts.push(&text[start..i]);
                    start = i + 1;
                }
                _ => {}
            }
            if depth < 0 {
                return Err(Error::Malformed(format!("unbalanced ')' in {text}")));
            }
        }
        if depth != 0 {
            return Err(Error::Malformed(format!("unbalanced '(' in {text}")));
        }
        parts.push(&text[start..]);
        let mut terms = Vec::new();
        for part in parts {
            let part = part.trim();
            let bad = || Error::Malformed(format!("bad ordinal term {part:?}"));
            if let Some(rest) = part.strip_prefix("w^") {
                let (exp_text, coeff_text) = if let Some(inner) = rest.strip_prefix('(') {
                    let close = matching_paren(inner).ok_or_else(bad)?;
                    (&inner[..close], &inner[close + 1..])
                } else {
                    match rest.find('*') {
                        Some(i) => (&rest[..i], &rest[i..]),
                        None => (rest, ""),
                    }
                };
                let exp = Ordinal::parse(exp_text)?;
                let coeff = match coeff_text.trim() {
                    "" => 1,
                    c => c.strip_prefix('*').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?,
                };
                terms.push((exp, coeff));
            } else if part == "w" {
                terms.push((Ordinal::nat(1), 1));
            } else {
                let n: u64 = part.parse().map_err(|_| bad())?;
                if n == 0 && terms.is_empty() {
                    continue;
                }
                terms.push((Ordinal::zero(), n));
            }
        }
        Ordinal::from_terms(terms)
    }
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 1;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

pub fn cantor_pair(x: &BigUint, y: &BigUint) -> BigUint {
    let s = x + y;
    (&s * (&s + 1u32)) / 2u32 + y
}

pub fn cantor_unpair(z: &BigUint) -> (BigUint, BigUint) {
    let w = ((z * 8u32 + 1u32).sqrt() - 1u32) / 2u32;
    let t = (&w * (&w + 1u32)) / 2u32;
    let y = z - t;
    let x = w - &y;
    (x, y)
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            match a.0.cmp(&b.0).then(a.1.cmp(&b.1)) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn compare_notations(a: &Ordinal, b: &Ordinal) -> Ordering {
    a.cmp(b)
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
            } else if let Some(n) = e.as_nat() {
                write!(f, "w^{n}*{c}")?;
            } else {
                write!(f, "w^({e})*{c}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        Ordinal::parse(s).unwrap()
    }

    #[test]
    fn ordering_examples() {
        assert!(o("w^1*2 + 3") < o("w^2*1"));
        assert!(Ordinal::zero() < o("1"));
        assert!(o("w") > o("1000"));
        assert!(o("w^(w^1*1)*1") > o("w^5*7 + 2"));
    }

    #[test]
    fn text_round_trip() {
        for s in ["0", "3", "w^1*1", "w^2*1 + w^1*2 + 3", "w^(w^1*1 + 1)*2 + 5"] {
            assert_eq!(o(s).to_string(), s);
        }
    }

    #[test]
    fn codes_round_trip() {
        for s in ["0", "1", "w^1*1", "w^2*1 + w^1*2 + 3", "w^(w^1*1)*1"] {
            assert_eq!(Ordinal::decode(&o(s).code()), Some(o(s)));
        }
        assert_eq!(o("w^1*1").code(), BigUint::from(2u32));
    }

    #[test]
    fn successor_and_limit() {
        assert!(o("w^1*1").is_limit());
        assert_eq!(o("w^1*1 + 1").pred(), Some(o("w^1*1")));
        assert_eq!(o("w^1*1").pred(), None);
    }
}
