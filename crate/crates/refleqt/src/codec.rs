//! Shortlex coding of strings over {a, b}, code-level concatenation and
//! substitution, and the symbol table that turns syntax into codes.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::syntax::{parse_formula_lenient, Formula, Term};

pub use crate::syntax::{numeral, numeral_u64, numeral_value};

fn bits_of(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            'a' => Ok(false),
            'b' => Ok(true),
            other => Err(Error::Malformed(format!("{other:?} is not in the alphabet {{a,b}}"))),
        })
        .collect()
}

fn encode_bits(bits: &[bool]) -> BigUint {
    // Pack most significant first, left-padding the first byte.
    let pad = (8 - bits.len() % 8) % 8;
    let bytes: Vec<u8> = std::iter::repeat(false)
        .take(pad)
        .chain(bits.iter().copied())
        .collect::<Vec<_>>()
        .chunks(8)
        .map(|c| c.iter().fold(0u8, |acc, &b| (acc << 1) | b as u8))
        .collect();
    let v = BigUint::from_bytes_be(&bytes);
    (BigUint::one() << bits.len()) - 1u32 + v
}

fn decode_bits(c: &BigUint) -> Vec<bool> {
    let c1 = c + 1u32;
    let n = (c1.bits() - 1) as usize;
    let v = c1 - (BigUint::one() << n);
    (0..n).rev().map(|i| v.bit(i as u64)).collect()
}

fn render(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { 'b' } else { 'a' }).collect()
}

/// Position of `s` in length-first, then alphabetical order.
pub fn encode_string(s: &str) -> Result<BigUint> {
    Ok(encode_bits(&bits_of(s)?))
}

pub fn decode_string(c: &BigUint) -> String {
    render(&decode_bits(c))
}

/// Length of the string coded by `c`.
pub fn code_length(c: &BigUint) -> u64 {
    (c + 1u32).bits() - 1
}

pub fn concat_codes(c1: &BigUint, c2: &BigUint) -> BigUint {
    let n2 = code_length(c2);
    let n1 = code_length(c1);
    let v1 = c1 + 1u32 - (BigUint::one() << n1);
    let v2 = c2 + 1u32 - (BigUint::one() << n2);
    (BigUint::one() << (n1 + n2)) - 1u32 + (v1 << n2) + v2
}

/// Replaces every leftmost non-overlapping occurrence of the string coded by
/// `x` in the string coded by `s` with the string coded by `t`.
pub fn subst_codes(s: &BigUint, t: &BigUint, x: &BigUint) -> Result<BigUint> {
    let pat = decode_bits(x);
    if pat.is_empty() {
        return Err(Error::EmptyPattern);
    }
    let src = decode_bits(s);
    let rep = decode_bits(t);
    let mut out = Vec::with_capacity(src.len());
    let mut i = 0;
    while i < src.len() {
        if src[i..].starts_with(&pat) {
            out.extend_from_slice(&rep);
            i += pat.len();
        } else {
            out.push(src[i]);
            i += 1;
        }
    }
    Ok(encode_bits(&out))
}

/// Fixed-width block table over printable ASCII. Each character `c` maps to
/// the 7-bit block of `c - 0x20`, `a` for 0 and `b` for 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymbolTable {
    pub width: usize,
}

pub const TABLE: SymbolTable = SymbolTable { width: 7 };

impl SymbolTable {
    pub fn block(&self, c: char) -> Option<String> {
        if !(' '..='~').contains(&c) {
            return None;
        }
        let k = c as u32 - 0x20;
        Some((0..self.width).rev().map(|i| if (k >> i) & 1 == 1 { 'b' } else { 'a' }).collect())
    }

    fn bits(&self, text: &str) -> Result<Vec<bool>> {
        let mut out = Vec::with_capacity(text.len() * self.width);
        for c in text.chars() {
            if !(' '..='~').contains(&c) {
                return Err(Error::Malformed(format!("character {c:?} has no symbol block")));
            }
            let k = c as u32 - 0x20;
            out.extend((0..self.width).rev().map(|i| (k >> i) & 1 == 1));
        }
        Ok(out)
    }

    /// Block rendering of `text` over {a, b}.
    pub fn render(&self, text: &str) -> Result<String> {
        Ok(render(&self.bits(text)?))
    }

    pub fn encode_text(&self, text: &str) -> Result<BigUint> {
        Ok(encode_bits(&self.bits(text)?))
    }

    /// Inverse of `encode_text`; `None` if the code is not a whole number of
    /// valid blocks.
    pub fn decode_text(&self, c: &BigUint) -> Option<String> {
        let bits = decode_bits(c);
        if bits.len() % self.width != 0 {
            return None;
        }
        let mut out = String::with_capacity(bits.len() / self.width);
        for chunk in bits.chunks(self.width) {
            let k = chunk.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32);
            out.push(char::from_u32(k + 0x20).filter(|c| (' '..='~').contains(c))?);
        }
        Some(out)
    }
}

/// Bound for exhaustive enumerations over codes: `REFLEQT_MAX_CODE` if set
/// to a number, else 2^14.
pub fn max_code() -> u64 {
    std::env::var("REFLEQT_MAX_CODE").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(1 << 14)
}

/// Gödel code of a formula: the code of the block rendering of its canonical text.
pub fn formula_code(f: &Formula) -> BigUint {
    TABLE.encode_text(&f.to_string()).expect("canonical text is printable ASCII")
}

pub fn term_code(t: &Term) -> BigUint {
    TABLE.encode_text(&t.to_string()).expect("canonical text is printable ASCII")
}

/// The formula coded by `c`, if any.
pub fn decode_formula(c: &BigUint) -> Option<Formula> {
    let text = TABLE.decode_text(c)?;
    let f = parse_formula_lenient(&text).ok()?;
    (f.to_string() == text).then_some(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn first_codes() {
        let cases = [("", 0u32), ("a", 1), ("b", 2), ("aa", 3), ("bb", 6), ("aaa", 7)];
        for (s, c) in cases {
            assert_eq!(encode_string(s).unwrap(), BigUint::from(c));
            assert_eq!(decode_string(&BigUint::from(c)), s);
        }
    }

    #[test]
    fn concat_small() {
        assert_eq!(concat_codes(&BigUint::from(1u32), &BigUint::from(2u32)), BigUint::from(4u32));
    }

    #[test]
    fn empty_pattern_rejected() {
        let s = BigUint::from(10u32);
        assert!(matches!(subst_codes(&s, &s, &BigUint::zero()), Err(Error::EmptyPattern)));
    }

    #[test]
    fn text_round_trip() {
        let c = TABLE.encode_text("(= 0 0)").unwrap();
        assert_eq!(TABLE.decode_text(&c).as_deref(), Some("(= 0 0)"));
        assert_eq!(TABLE.decode_text(&BigUint::from(5u32)), None);
    }
}
