mod common;

use std::sync::Arc;

use common::template_from_reflection;
use refleqt::calculus::{check_proof, rfn_tower_presentation, tower_name, Proof, Theory};
use refleqt::corpus::REFLECTION_FORMULAS;
use refleqt::ordinal::Ordinal;
use refleqt::progressions::{
    commitments_at_stage, ic_base, ic_limit, reflection_from_template, reflection_instance, run_script, witness_key,
};
use refleqt::reductions::{Polynomial, ReductionWitness, Transformer};
use refleqt::schemas::{gen_small_reflection_theory, small_reflection_template, ufn_instance};
use refleqt::syntax::{parse_formula, Formula, Var};
use refleqt::theories::{arithmetic, arithmetic_nat};
use refleqt::Error;

fn formula(tau: &Theory, s: &str) -> Formula {
    parse_formula(s, &tau.signature).unwrap()
}

#[test]
fn template_implies_reflection_in_base() {
    for tau in [arithmetic(), arithmetic_nat()] {
        for text in REFLECTION_FORMULAS {
            let phi = formula(&tau, text);
            let (all_t, proof) = reflection_from_template(&tau, &phi).unwrap();
            let goal = reflection_instance(&tau, &phi).unwrap();
            assert_eq!(proof.conclusion, Formula::imp(all_t, goal));
            let v = check_proof(&proof, &tau);
            assert!(v.accepted, "{} {text}: {v}", tau.name);
        }
    }
}

#[test]
fn base_stage_admits_axioms() {
    let tau = arithmetic();
    let mut st = ic_base(&tau);
    st.seed().unwrap();
    assert_eq!(st.i_facts.len(), tau.axioms.len());
    let bogus = Proof::axiom(formula(&tau, "(= 0 (S 0))"));
    assert!(matches!(st.admit(&Ordinal::zero(), bogus), Err(Error::Premise(_))));
}

#[test]
fn limit_stage_admission() {
    let tau = arithmetic();
    let w = Ordinal::omega();
    let one = Arc::new(rfn_tower_presentation(&tau, &Ordinal::nat(1)));
    assert!(matches!(ic_limit(&tau, &Ordinal::nat(3), vec![]), Err(Error::NotLimit(_))));
    assert!(matches!(ic_limit(&tau, &w, vec![(w.clone(), one.clone())]), Err(Error::Premise(_))));
    let mut st = ic_limit(&tau, &w, vec![(Ordinal::zero(), one)]).unwrap();
    // A sentence proved in τ₁ = RFN¹(τ) by one of its reflection axioms.
    let phi = formula(&tau, "(= (+ x 0) x)");
    let inst = ufn_instance(&tau.name, &phi).unwrap();
    st.admit(&Ordinal::zero(), Proof::axiom(inst.clone())).unwrap();
    assert_eq!(st.i_facts, vec![inst.clone()]);
    assert!(matches!(st.admit(&w, Proof::axiom(inst.clone())), Err(Error::Premise(_))));
    assert!(matches!(st.admit(&Ordinal::nat(1), Proof::axiom(inst)), Err(Error::Premise(_))));
}

#[test]
fn ref_requires_a_covering_family() {
    let tau = arithmetic();
    let phi = formula(&tau, "(= (+ x 0) x)");
    let y = Var::new("y");
    let template = small_reflection_template(&tau.name, &phi, &y, None);
    let mut st = ic_base(&tau);
    assert!(matches!(st.apply_ref(&tau, &template), Err(Error::Premise(_))));
    let sr = Arc::new(gen_small_reflection_theory(&tau, &phi).unwrap());
    st.apply_ref(&sr, &template).unwrap();
    st.apply_ref(&sr, &template).unwrap();
    assert_eq!(st.j_facts.len(), 1);
    assert_eq!(st.log.len(), 2);
}

#[test]
fn unregistered_witness_is_rejected() {
    let mut st = ic_base(&arithmetic());
    assert!(matches!(st.apply_inv("a->b"), Err(Error::UnregisteredWitness(_))));
}

fn identity_witness(a: &Arc<Theory>, b: &Arc<Theory>) -> ReductionWitness {
    ReductionWitness {
        source: a.clone(),
        target: b.clone(),
        transformer: Transformer::Identity,
        bound: Polynomial(vec![0, 1]),
        provenance: "inclusion".into(),
    }
}

#[test]
fn transfers_compose_and_identity_preserves_content() {
    let tau = arithmetic();
    let phi = formula(&tau, "(= (+ x 0) x)");
    let mut st = ic_base(&tau);
    let sr = st.ref_small(&phi).unwrap();
    let before: Vec<Formula> = st.j_facts.iter().map(|j| j.sentence.clone()).collect();
    let sr2 = Arc::new(Theory { name: format!("{}'", sr.name), ..(*sr).clone() });
    let sr3 = Arc::new(Theory { name: format!("{}''", sr.name), ..(*sr).clone() });
    let corpus = vec![Proof::axiom(tau.axioms[0].clone())];
    let k1 = st.register_witness(identity_witness(&sr, &sr2), corpus.clone()).unwrap();
    let k2 = st.register_witness(identity_witness(&sr2, &sr3), corpus).unwrap();
    st.apply_inv(&k1).unwrap();
    st.apply_inv(&k2).unwrap();
    for name in [&sr2.name, &sr3.name] {
        let got: Vec<Formula> =
            st.j_facts.iter().filter(|j| &j.theory == name).map(|j| j.sentence.clone()).collect();
        assert_eq!(got, before);
    }
}

#[test]
fn failing_certification_blocks_registration() {
    let tau = arithmetic();
    let phi = formula(&tau, "(= (+ x 0) x)");
    let sr = Arc::new(gen_small_reflection_theory(&tau, &phi).unwrap());
    let mut st = ic_base(&tau);
    let linear = ReductionWitness {
        source: sr.clone(),
        target: st.i_theory(),
        transformer: Transformer::SmallReflection,
        bound: Polynomial(vec![0, 1]),
        provenance: "too tight".into(),
    };
    let key = witness_key(&linear);
    let corpus = refleqt::corpus::small_reflection_proofs(&sr, 5);
    assert!(matches!(st.register_witness(linear, corpus), Err(Error::Premise(_))));
    assert!(matches!(st.apply_inv(&key), Err(Error::UnregisteredWitness(_))));
}

fn pipeline(tau: &Arc<Theory>, text: &str) {
    let phi = formula(tau, text);
    let script = format!("seed\nref-small {text}\ninv-small {text}\n");
    let st = run_script(tau, &script).unwrap();
    let goal = reflection_instance(tau, &phi).unwrap();
    assert!(st.has_j(&st.i_theory_name(), &goal), "{text}: {goal} missing");
    assert_eq!(st.replay().unwrap(), st);
}

#[test]
fn small_reflection_pipeline() {
    let tau = arithmetic();
    for text in &REFLECTION_FORMULAS[..10] {
        pipeline(&tau, text);
    }
}

#[test]
fn relativized_pipeline() {
    let tau = arithmetic_nat();
    for text in &REFLECTION_FORMULAS[..3] {
        pipeline(&tau, text);
    }
}

#[test]
fn script_errors() {
    let tau = arithmetic();
    assert!(matches!(run_script(&tau, "jump"), Err(Error::Malformed(_))));
    assert!(matches!(run_script(&tau, "ref-small"), Err(Error::Malformed(_))));
    assert!(matches!(run_script(&tau, "ref-small (= x y)"), Err(Error::Premise(_))));
    assert!(matches!(run_script(&tau, "ref-small (= x"), Err(Error::Parse(_))));
}

#[test]
fn empty_script_commits_nothing() {
    let tau = arithmetic();
    let th = commitments_at_stage(&tau, &Ordinal::zero(), "# nothing\n").unwrap();
    assert!(th.axioms.is_empty());
}

#[test]
fn two_stage_shadow() {
    let tau = arithmetic();
    let text = REFLECTION_FORMULAS[0];
    let phi = formula(&tau, text);
    let script = format!("reflect {text}\n");
    let s1 = Arc::new(commitments_at_stage(&tau, &Ordinal::zero(), &script).unwrap());
    let inst0 = ufn_instance(&tau.name, &phi).unwrap();
    assert!(s1.axioms.iter().any(|a| *a == inst0));
    // Stage-0 output is contained in RFN¹(τ): the reflection instance is an
    // axiom there and the paired template follows from it.
    let t1 = rfn_tower_presentation(&tau, &Ordinal::nat(1));
    assert_eq!(s1.axioms.len(), 2);
    for a in &s1.axioms {
        let proof = if t1.recognize_axiom(a) { Proof::axiom(a.clone()) } else { template_from_reflection(&inst0, a) };
        assert_eq!(&proof.conclusion, a);
        let v = check_proof(&proof, &t1);
        assert!(v.accepted, "{v}");
    }
    let s2 = commitments_at_stage(&s1, &Ordinal::nat(1), &script).unwrap();
    let inst1 = ufn_instance(&s1.name, &phi).unwrap();
    assert!(s2.axioms.iter().any(|a| *a == inst1));
    // Its tower counterpart is an axiom of RFN²(τ).
    let t2 = rfn_tower_presentation(&tau, &Ordinal::nat(2));
    let counterpart = ufn_instance(&tower_name(&tau.name, &Ordinal::nat(1)), &phi).unwrap();
    assert!(t2.recognize_axiom(&counterpart));
    assert!(!t1.recognize_axiom(&counterpart));
}
