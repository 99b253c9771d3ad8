//! Oracles and helpers shared by the integration tests.
#![allow(dead_code)]

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigUint;
use refleqt::calculus::derive::{chain_ok, instantiate};
use refleqt::calculus::{Axiom, Proof};
use refleqt::corpus::REFLECTION_FORMULAS;
use refleqt::ordinal::Ordinal;
use refleqt::schemas::ufn_instance;
use refleqt::syntax::{parse_formula, Formula, Term};
use refleqt::theories::arithmetic;

/// Dershowitz–Manna comparison: a CNF notation is the multiset of its
/// exponents, and α < β iff the multisets differ and every exponent α has
/// more copies of is dominated by a larger exponent β has more copies of.
pub fn dm_less(a: &Ordinal, b: &Ordinal) -> bool {
    thread_local! {
        static MEMO: RefCell<HashMap<(BigUint, BigUint), bool>> = RefCell::new(HashMap::new());
    }
    let key = (a.code(), b.code());
    if let Some(v) = MEMO.with(|m| m.borrow().get(&key).copied()) {
        return v;
    }
    let v = dm_less_uncached(a, b);
    MEMO.with(|m| m.borrow_mut().insert(key, v));
    v
}

fn dm_less_uncached(a: &Ordinal, b: &Ordinal) -> bool {
    let count = |o: &Ordinal, e: &Ordinal| -> u64 {
        o.terms().iter().filter(|(x, _)| dm_equal(x, e)).map(|(_, c)| *c).sum()
    };
    let exps: Vec<&Ordinal> = a.terms().iter().chain(b.terms()).map(|(e, _)| e).collect();
    if exps.iter().all(|e| count(a, e) == count(b, e)) {
        return false;
    }
    exps.iter().filter(|x| count(a, x) > count(b, x)).all(|x| {
        exps.iter().any(|y| dm_less(x, y) && count(b, y) > count(a, y))
    })
}

fn dm_equal(a: &Ordinal, b: &Ordinal) -> bool {
    !dm_less(a, b) && !dm_less(b, a)
}

pub fn notations(limit: u64) -> Vec<Ordinal> {
    (0..=limit).filter_map(|c| Ordinal::decode(&BigUint::from(c))).collect()
}

/// Proof of `∀y (Proof(fst y, c(snd y)) → φ(snd y))` from the reflection
/// instance `∀x (∃p Proof(p, c(x)) → φ(x))`.
pub fn template_from_reflection(ufn: &Formula, template: &Formula) -> Proof {
    let Formula::All(y, body) = template else { panic!("not a template: {template}") };
    let Formula::Imp(proof_atom, _) = &**body else { panic!() };
    let Formula::Atom(_, args) = &**proof_atom else { panic!() };
    let Term::App(_, code_args) = &args[1] else { panic!() };
    let snd = code_args[1].clone();
    let inst = instantiate(Proof::axiom(ufn.clone()), &snd);
    let Formula::Imp(ex, _) = &inst.conclusion else { panic!() };
    let exi = Proof::logical(Axiom::ExIntro(args[0].clone()), Formula::imp((**proof_atom).clone(), (**ex).clone()));
    Proof::gen(y.clone(), chain_ok(vec![inst, exi], (**body).clone()))
}

pub fn sample_sentences() -> Vec<Formula> {
    let tau = arithmetic();
    let mut out = tau.axioms.clone();
    for text in REFLECTION_FORMULAS {
        let phi = parse_formula(text, &tau.signature).unwrap();
        out.push(phi.closure());
        out.push(ufn_instance(&tau.name, &phi).unwrap());
        out.push(tau.schemata[0].instance(&phi, &[refleqt::syntax::Var::new("x")]));
    }
    out
}

