mod common;

use num_bigint::BigUint;
use refleqt::calculus::{rfn_tower_presentation, tower_name};
use refleqt::codec::{decode_formula, max_code};
use refleqt::corpus::REFLECTION_FORMULAS;
use refleqt::ordinal::Ordinal;
use refleqt::schemas::ufn_instance;
use refleqt::syntax::parse_formula;
use refleqt::theories::arithmetic;

use common::sample_sentences;

#[test]
fn level_zero_agrees_with_base() {
    let tau = arithmetic();
    let t0 = rfn_tower_presentation(&tau, &Ordinal::zero());
    for c in 0..=max_code() {
        if let Some(f) = decode_formula(&BigUint::from(c)) {
            assert_eq!(t0.recognize_axiom(&f), tau.recognize_axiom(&f), "{f}");
        }
    }
    // Codes this small cover one-character texts only, so a generated sample
    // backs up the enumeration.
    for f in sample_sentences() {
        assert_eq!(t0.recognize_axiom(&f), tau.recognize_axiom(&f), "{f}");
    }
}

#[test]
fn successor_levels_reflect_on_the_predecessor() {
    let tau = arithmetic();
    let phi = parse_formula("(= (+ x 0) x)", &tau.signature).unwrap();
    let t1 = rfn_tower_presentation(&tau, &Ordinal::nat(1));
    assert!(t1.recognize_axiom(&ufn_instance(&tau.name, &phi).unwrap()));
    let t3 = rfn_tower_presentation(&tau, &Ordinal::nat(3));
    assert!(t3.recognize_axiom(&ufn_instance(&tower_name(&tau.name, &Ordinal::nat(2)), &phi).unwrap()));
    assert!(!t3.recognize_axiom(&ufn_instance(&tower_name(&tau.name, &Ordinal::nat(1)), &phi).unwrap()));
    assert!(t3.recognize_axiom(&tau.axioms[0]));
}

#[test]
fn limit_level_is_a_strict_union() {
    let tau = arithmetic();
    let phi = parse_formula("(<= 0 x)", &tau.signature).unwrap();
    let w = Ordinal::omega();
    let tw = rfn_tower_presentation(&tau, &w);
    assert!(tw.recognize_axiom(&ufn_instance(&tower_name(&tau.name, &Ordinal::nat(3)), &phi).unwrap()));
    assert!(!tw.recognize_axiom(&ufn_instance(&tower_name(&tau.name, &w), &phi).unwrap()));
}

#[test]
fn limit_levels_contain_lower_levels() {
    let tau = arithmetic();
    let w = Ordinal::omega();
    let w2 = Ordinal::parse("w^1*2").unwrap();
    let limits = [rfn_tower_presentation(&tau, &w), rfn_tower_presentation(&tau, &w2)];
    let below = [Ordinal::nat(1), Ordinal::nat(2), Ordinal::nat(5), Ordinal::parse("w^1*1 + 3").unwrap()];
    for beta in &below {
        let tb = rfn_tower_presentation(&tau, beta);
        let pred = beta.pred().unwrap();
        let mut sample = sample_sentences();
        for text in REFLECTION_FORMULAS {
            let phi = parse_formula(text, &tau.signature).unwrap();
            sample.push(ufn_instance(&tower_name(&tau.name, &pred), &phi).unwrap());
        }
        for f in &sample {
            if !tb.recognize_axiom(f) {
                continue;
            }
            for lim in &limits {
                if let Some(level) = refleqt::calculus::tower_level(&tau.name, &lim.name) {
                    if *beta < level {
                        assert!(lim.recognize_axiom(f), "{} misses {f}", lim.name);
                    }
                }
            }
        }
    }
}
