use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::check::check_proof;
use super::proof::decode_proof;
use super::theory::Theory;
use crate::codec::{decode_formula, formula_code};
use crate::error::{Error, Result};
use crate::ordinal::{cantor_pair, cantor_unpair};
use crate::syntax::{numeral, subst_formula, Formula, Term, Var, AXIOM_PREFIX, LEQ, PROOF_PREFIX, SUBST_NUMERAL};

/// Largest bound a bounded quantifier may range over during evaluation.
pub const MAX_BOUND: u64 = 1 << 16;
/// Largest bit length a `#` result may have.
const MAX_SMASH_BITS: u64 = 1 << 20;

/// Value of a closed term.
pub fn eval_term(t: &Term) -> Result<BigUint> {
    match t {
        Term::Var(v) => Err(Error::Eval(format!("free variable {v}"))),
        Term::Const(c) if c == "0" => Ok(BigUint::zero()),
        Term::Const(c) => Err(Error::Eval(format!("constant {c} has no value"))),
        Term::Quote(f) => Ok(formula_code(f)),
        Term::App(f, args) => {
            let vals = args.iter().map(eval_term).collect::<Result<Vec<_>>>()?;
            apply(f, &vals)
        }
    }
}

fn apply(f: &str, v: &[BigUint]) -> Result<BigUint> {
    Ok(match (f, v) {
        ("S", [a]) => a + 1u32,
        ("+", [a, b]) => a + b,
        ("*", [a, b]) => a * b,
        ("len", [a]) => BigUint::from(a.bits()),
        ("half", [a]) => a >> 1,
        ("#", [a, b]) => {
            let e = a.bits() * b.bits();
            if e > MAX_SMASH_BITS {
                return Err(Error::Eval("smash result too large".into()));
            }
            BigUint::from(1u32) << e
        }
        ("pair", [a, b]) => cantor_pair(a, b),
        ("fst", [a]) => cantor_unpair(a).0,
        ("snd", [a]) => cantor_unpair(a).1,
        (SUBST_NUMERAL, [c, rest @ ..]) => subst_numerals(c, rest),
        _ => return Err(Error::Eval(format!("cannot evaluate {f} on {} arguments", v.len()))),
    })
}

/// Code of the formula coded by `c` with its free variables, in sorted
/// order, replaced by numerals for `args`. Codes of non-formulas and
/// sentences are returned unchanged.
pub fn subst_numerals(c: &BigUint, args: &[BigUint]) -> BigUint {
    let Some(f) = decode_formula(c) else { return c.clone() };
    let map: BTreeMap<Var, Term> = f.free_vars().into_iter().zip(args.iter().map(numeral)).collect();
    if map.is_empty() {
        return c.clone();
    }
    formula_code(&subst_formula(&f, &map))
}

/// True iff `p` codes a proof that checks in `theory` and concludes the
/// formula coded by `x`.
pub fn proof_relation(theory: &Theory, p: &BigUint, x: &BigUint) -> bool {
    match decode_proof(p) {
        Some(proof) => formula_code(&proof.conclusion) == *x && check_proof(&proof, theory).accepted,
        None => false,
    }
}

fn bound(t: &Term) -> Result<u64> {
    let b = eval_term(t)?;
    b.to_u64()
        .filter(|b| *b <= MAX_BOUND)
        .ok_or_else(|| Error::Eval(format!("quantifier bound {b} exceeds {MAX_BOUND}")))
}

/// Truth value of a closed sentence in the decidable coding fragment.
/// `Proof:σ` and `Ax:σ` are resolved through `ctx`.
pub fn eval_closed_decidable(s: &Formula, ctx: &Theory) -> Result<bool> {
    match s {
        Formula::Eq(a, b) => Ok(eval_term(a)? == eval_term(b)?),
        Formula::Atom(p, args) => {
            if p == LEQ && args.len() == 2 {
                return Ok(eval_term(&args[0])? <= eval_term(&args[1])?);
            }
            if let Some(name) = p.strip_prefix(PROOF_PREFIX) {
                let theory = ctx.lookup(name).ok_or_else(|| Error::UnknownTheory(name.into()))?;
                let (a, b) = (eval_term(&args[0])?, eval_term(&args[1])?);
                return Ok(proof_relation(&theory, &a, &b));
            }
            if let Some(name) = p.strip_prefix(AXIOM_PREFIX) {
                let theory = ctx.lookup(name).ok_or_else(|| Error::UnknownTheory(name.into()))?;
                let c = eval_term(&args[0])?;
                return Ok(decode_formula(&c).is_some_and(|f| theory.recognize_axiom(&f)));
            }
            Err(Error::OutOfFragment(format!("relation {p} is not decidable")))
        }
        Formula::Not(a) => Ok(!eval_closed_decidable(a, ctx)?),
        Formula::And(a, b) => Ok(eval_closed_decidable(a, ctx)? && eval_closed_decidable(b, ctx)?),
        Formula::Or(a, b) => Ok(eval_closed_decidable(a, ctx)? || eval_closed_decidable(b, ctx)?),
        Formula::Imp(a, b) => Ok(!eval_closed_decidable(a, ctx)? || eval_closed_decidable(b, ctx)?),
        Formula::All(..) | Formula::Ex(..) => Err(Error::OutOfFragment(format!("unbounded quantifier in {s}"))),
        Formula::BAll(x, t, a) | Formula::BEx(x, t, a) => {
            let universal = matches!(s, Formula::BAll(..));
            let n = bound(t)?;
            for i in 0..=n {
                let inst = crate::syntax::substitute(a, x, &numeral(&BigUint::from(i)));
                if eval_closed_decidable(&inst, ctx)? != universal {
                    return Ok(!universal);
                }
            }
            Ok(universal)
        }
    }
}
