//! Ready-made presentations: a schematic arithmetic fragment, its variant
//! with a proper number domain, and a toy successor theory interpreted in
//! it.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::calculus::{Family, Schema, Theory, PLACEHOLDER};
use crate::interp::{RelDef, Translation};
use crate::syntax::{parse_formula, Formula, Signature, Var};

pub const ARITHMETIC: &str = "ari";
pub const ARITHMETIC_NAT: &str = "arin";
pub const NAT_PREDICATE: &str = "Nat";
pub const SUCCESSOR: &str = "succ";

const Q_AXIOMS: &[&str] = &[
    "(all x (not (= (S x) 0)))",
    "(all x (all y (-> (= (S x) (S y)) (= x y))))",
    "(all x (= (+ x 0) x))",
    "(all x (all y (= (+ x (S y)) (S (+ x y)))))",
    "(all x (= (* x 0) 0))",
    "(all x (all y (= (* x (S y)) (+ (* x y) x))))",
    "(all x (all y (iff (<= x y) (ex z (= (+ x z) y)))))",
    "(all x (all y (= (fst (pair x y)) x)))",
    "(all x (all y (= (snd (pair x y)) y)))",
];

fn parse_all(texts: &[&str], sig: &Signature) -> Vec<Formula> {
    texts.iter().map(|t| parse_formula(t, sig).expect("built-in axiom parses")).collect()
}

/// The induction schema `P(0) ∧ ∀x (P(x) → P(Sx)) → ∀x P(x)`.
pub fn induction_schema() -> Schema {
    let sig = Signature::arithmetic("ind").with_relation(PLACEHOLDER, 1);
    let t = parse_formula("(-> (and (?P 0) (all x (-> (?P x) (?P (S x))))) (all x (?P x)))", &sig)
        .expect("induction template parses");
    Schema::new("ind", t)
}

fn nat_identity(sig: &Signature) -> Translation {
    Translation { name: "N".into(), ..Translation::identity(sig) }
}

/// Robinson-style arithmetic with pairing, the induction schema and the
/// code-coherence family. Its number interpretation is the identity.
pub fn arithmetic() -> Arc<Theory> {
    let sig = Signature::arithmetic(ARITHMETIC);
    let axioms = parse_all(Q_AXIOMS, &sig);
    Arc::new(Theory {
        name: ARITHMETIC.into(),
        signature: sig.clone(),
        axioms,
        schemata: vec![induction_schema()],
        families: vec![Family::Coherence],
        nat: Some(nat_identity(&sig)),
    })
}

/// The arithmetic fragment with a number predicate closed under zero,
/// successor and pairing; numbers are interpreted on that subdomain.
pub fn arithmetic_nat() -> Arc<Theory> {
    let sig = Signature::arithmetic(ARITHMETIC_NAT).with_relation(NAT_PREDICATE, 1);
    let mut axioms = parse_all(Q_AXIOMS, &sig);
    axioms.extend(parse_all(
        &[
            "(Nat 0)",
            "(all x (-> (Nat x) (Nat (S x))))",
            "(all x (all y (-> (and (Nat x) (Nat y)) (Nat (pair x y)))))",
        ],
        &sig,
    ));
    let x = Var::new("x");
    let domain = RelDef::new(vec![x.clone()], Formula::atom(NAT_PREDICATE, vec![crate::syntax::Term::Var(x)]));
    let nat = Translation { domain: Some(domain), ..nat_identity(&sig) };
    Arc::new(Theory {
        name: ARITHMETIC_NAT.into(),
        signature: sig,
        axioms,
        schemata: vec![induction_schema()],
        families: vec![Family::Coherence],
        nat: Some(nat),
    })
}

pub fn successor_signature() -> Signature {
    Signature::relational(SUCCESSOR, &[("Z", 1), ("Sc", 2)])
}

/// Zero exists and is not a successor; successor is functional and
/// injective.
pub fn successor_theory() -> Arc<Theory> {
    let sig = successor_signature();
    let axioms = parse_all(
        &[
            "(ex x (Z x))",
            "(all x (all y (-> (and (Z x) (Sc y x)) (not (= x x)))))",
            "(all x (all y (all z (-> (and (Sc x y) (Sc x z)) (= y z)))))",
            "(all x (all y (all z (-> (and (Sc y x) (Sc z x)) (= y z)))))",
        ],
        &sig,
    );
    Arc::new(Theory::finite(SUCCESSOR, sig, axioms))
}

/// `Z ↦ x = 0`, `Sc ↦ y = Sx` over the whole arithmetic domain.
pub fn successor_into_arithmetic() -> Translation {
    let target = Signature::arithmetic(ARITHMETIC);
    let def = |params: &[&str], body: &str| {
        let ps: Vec<Var> = params.iter().map(|p| Var::new(*p)).collect();
        RelDef::new(ps, parse_formula(body, &target).expect("built-in definition parses"))
    };
    let mut relations = BTreeMap::new();
    relations.insert("Z".to_string(), def(&["v0"], "(= v0 0)"));
    relations.insert("Sc".to_string(), def(&["v0", "v1"], "(= v1 (S v0))"));
    Translation {
        name: "succ2ari".into(),
        source: successor_signature(),
        target: target.clone(),
        domain: Some(def(&["v0"], "(= v0 v0)")),
        relations,
        equality: None,
    }
}
