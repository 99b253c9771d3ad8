mod common;

use std::cmp::Ordering;

use common::{dm_less, notations};
use num_bigint::BigUint;
use refleqt::ordinal::{compare_notations, Ordinal};

#[test]
fn order_matches_multiset_oracle() {
    let all = notations(1 << 12);
    assert!(all.len() > 100);
    for a in &all {
        for b in &all {
            let oracle = if dm_less(a, b) {
                Ordering::Less
            } else if dm_less(b, a) {
                Ordering::Greater
            } else {
                Ordering::Equal
            };
            assert_eq!(compare_notations(a, b), oracle, "{a} vs {b}");
        }
    }
}

#[test]
fn order_is_strict_total() {
    let all = notations(1 << 10);
    for a in &all {
        assert_eq!(compare_notations(a, a), Ordering::Equal);
        for b in &all {
            assert_eq!(compare_notations(a, b), compare_notations(b, a).reverse());
            if a != b {
                assert_ne!(compare_notations(a, b), Ordering::Equal);
            }
        }
    }
    let mut sorted = all.clone();
    sorted.sort_by(compare_notations);
    for w in sorted.windows(3) {
        assert_eq!(compare_notations(&w[0], &w[2]), Ordering::Less);
    }
}

#[test]
fn textbook_comparisons() {
    let o = |s: &str| Ordinal::parse(s).unwrap();
    assert_eq!(compare_notations(&o("w^1*2 + 3"), &o("w^2*1")), Ordering::Less);
    for s in ["1", "w^1*1", "w^(w^1*1)*1"] {
        assert_eq!(compare_notations(&Ordinal::zero(), &o(s)), Ordering::Less);
    }
}

#[test]
fn codes_round_trip_on_enumeration() {
    for (c, o) in (0..=1u64 << 12).filter_map(|c| Ordinal::decode(&BigUint::from(c)).map(|o| (c, o))) {
        assert_eq!(o.code(), BigUint::from(c));
        assert_eq!(Ordinal::parse(&o.to_string()).unwrap(), o);
    }
}
