use std::collections::BTreeSet;

use num_bigint::BigUint;
use proptest::prelude::*;

use refleqt::calculus::is_tautology;
use refleqt::codec::{code_length, concat_codes, decode_formula, decode_string, encode_string, formula_code, subst_codes};
use refleqt::ordinal::{compare_notations, Ordinal};
use refleqt::syntax::{
    alpha_eq, numeral, numeral_value, parse_formula, substitute, Formula, Signature, Term, Var,
};

fn sig() -> Signature {
    Signature::arithmetic("props").with_relation("P", 1).with_relation("Q", 2)
}

fn var() -> impl Strategy<Value = Var> {
    prop_oneof![Just(Var::new("x")), Just(Var::new("y")), Just(Var::new("z"))]
}

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![var().prop_map(Term::Var), Just(Term::zero())];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Term::succ),
            (inner.clone(), inner).prop_map(|(a, b)| Term::app("+", vec![a, b])),
        ]
    })
}

fn formula() -> impl Strategy<Value = Formula> {
    let atom = prop_oneof![
        (term(), term()).prop_map(|(a, b)| Formula::eq(a, b)),
        term().prop_map(|t| Formula::atom("P", vec![t])),
        (term(), term()).prop_map(|(a, b)| Formula::atom("Q", vec![a, b])),
    ];
    atom.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            (var(), inner.clone()).prop_map(|(v, a)| Formula::all(v, a)),
            (var(), inner).prop_map(|(v, a)| Formula::ex(v, a)),
        ]
    })
}

/// Propositional formulas over the atoms `P(0)`, ..., `P(3)`.
fn propositional() -> impl Strategy<Value = Formula> {
    let atom = (0u64..4).prop_map(|i| Formula::atom("P", vec![numeral(&BigUint::from(i))]));
    atom.prop_recursive(5, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::imp(a, b)),
        ]
    })
}

fn truth(f: &Formula, row: u32) -> bool {
    match f {
        Formula::Atom(_, args) => {
            let i = numeral_value(&args[0]).unwrap().to_u32_digits().first().copied().unwrap_or(0);
            row >> i & 1 == 1
        }
        Formula::Not(a) => !truth(a, row),
        Formula::And(a, b) => truth(a, row) && truth(b, row),
        Formula::Or(a, b) => truth(a, row) || truth(b, row),
        Formula::Imp(a, b) => !truth(a, row) || truth(b, row),
        other => panic!("not propositional: {other}"),
    }
}

fn ab_string() -> impl Strategy<Value = String> {
    proptest::collection::vec(prop_oneof![Just('a'), Just('b')], 0..40).prop_map(|v| v.into_iter().collect())
}

fn ordinal() -> impl Strategy<Value = Ordinal> {
    let leaf = (0u64..4).prop_map(Ordinal::nat);
    leaf.prop_recursive(3, 10, 3, |inner| {
        proptest::collection::vec((inner, 1u64..4), 1..4).prop_map(|mut terms| {
            terms.sort_by(|a, b| compare_notations(&b.0, &a.0));
            terms.dedup_by(|a, b| compare_notations(&a.0, &b.0).is_eq());
            Ordinal::from_terms(terms).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn formula_text_round_trips(f in formula()) {
        prop_assert_eq!(parse_formula(&f.to_string(), &sig()).unwrap(), f);
    }

    #[test]
    fn formula_code_round_trips(f in formula()) {
        prop_assert_eq!(decode_formula(&formula_code(&f)), Some(f));
    }

    #[test]
    fn string_code_round_trips(s in ab_string()) {
        let c = encode_string(&s).unwrap();
        prop_assert_eq!(code_length(&c), s.len() as u64);
        prop_assert_eq!(decode_string(&c), s);
    }

    #[test]
    fn concat_is_string_concatenation(s in ab_string(), t in ab_string()) {
        let c = concat_codes(&encode_string(&s).unwrap(), &encode_string(&t).unwrap());
        prop_assert_eq!(decode_string(&c), format!("{s}{t}"));
    }

    #[test]
    fn code_substitution_matches_string_replace(s in ab_string(), t in ab_string(), x in ab_string()) {
        prop_assume!(!x.is_empty());
        let enc = |w: &str| encode_string(w).unwrap();
        let c = subst_codes(&enc(&s), &enc(&t), &enc(&x)).unwrap();
        prop_assert_eq!(decode_string(&c), s.replace(&x, &t));
    }

    #[test]
    fn tautology_check_matches_truth_tables(f in propositional()) {
        let oracle = (0..16).all(|row| truth(&f, row));
        prop_assert_eq!(is_tautology(&f), oracle);
    }

    #[test]
    fn substituting_a_variable_for_itself_is_identity(f in formula(), x in var()) {
        prop_assert!(alpha_eq(&substitute(&f, &x, &Term::Var(x.clone())), &f));
    }

    #[test]
    fn substitution_never_captures(f in formula(), x in var(), t in term()) {
        let g = substitute(&f, &x, &t);
        let mut expect: BTreeSet<Var> = f.free_vars();
        if expect.remove(&x) {
            expect.extend(t.free_var_set());
        }
        prop_assert_eq!(g.free_vars(), expect);
    }

    #[test]
    fn closed_substitution_commutes_with_alpha_renaming(f in formula(), x in var()) {
        let t = Term::succ(Term::zero());
        let renamed = substitute(&f, &x, &Term::var("fresh"));
        let back = substitute(&renamed, &Var::new("fresh"), &t);
        prop_assert!(alpha_eq(&back, &substitute(&f, &x, &t)));
    }

    #[test]
    fn numerals_evaluate_back(n in any::<u128>()) {
        let n = BigUint::from(n);
        prop_assert_eq!(numeral_value(&numeral(&n)), Some(n));
    }

    #[test]
    fn ordinal_code_and_text_round_trip(o in ordinal()) {
        prop_assert_eq!(Ordinal::decode(&o.code()), Some(o.clone()));
        prop_assert_eq!(Ordinal::parse(&o.to_string()).unwrap(), o);
    }

    #[test]
    fn ordinal_order_is_antisymmetric_and_successor_is_larger(a in ordinal(), b in ordinal()) {
        prop_assert_eq!(compare_notations(&a, &b), compare_notations(&b, &a).reverse());
        prop_assert_eq!(compare_notations(&a, &b).is_eq(), a == b);
        prop_assert!(compare_notations(&a, &a.succ()).is_lt());
    }
}
