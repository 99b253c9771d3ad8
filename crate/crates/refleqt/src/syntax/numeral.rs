use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Term;

fn one() -> Term {
    Term::succ(Term::zero())
}

fn two() -> Term {
    Term::app("+", vec![one(), one()])
}

/// Dyadic numeral: 0, S0, then `2n+1 = S(2·n)` and `2n+2 = 2·(n+1)`.
/// Its size grows with the bit length of `n`, not with `n`.
pub fn numeral(n: &BigUint) -> Term {
    if n.is_zero() {
        return Term::zero();
    }
    if n.is_one() {
        return one();
    }
    let (half, rem) = n.div_rem(&BigUint::from(2u32));
    if rem.is_one() {
        Term::succ(Term::app("*", vec![two(), numeral(&half)]))
    } else {
        Term::app("*", vec![two(), numeral(&half)])
    }
}

pub fn numeral_u64(n: u64) -> Term {
    numeral(&BigUint::from(n))
}

fn value(t: &Term) -> Option<BigUint> {
    match t {
        Term::Const(c) if c == "0" => Some(BigUint::zero()),
        Term::App(f, args) => match (f.as_str(), args.as_slice()) {
            ("S", [a]) => Some(value(a)? + 1u32),
            ("+", [a, b]) => Some(value(a)? + value(b)?),
            ("*", [a, b]) => Some(value(a)? * value(b)?),
            _ => None,
        },
        _ => None,
    }
}

/// The value of `t` if it is exactly the dyadic numeral of that value.
pub fn numeral_value(t: &Term) -> Option<BigUint> {
    let v = value(t)?;
    if numeral(&v) == *t {
        Some(v)
    } else {
        None
    }
}
