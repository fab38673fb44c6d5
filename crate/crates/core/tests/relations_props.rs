mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::{oracle_complete_tuples, oracle_saturate_pair};
use tiekit::relations::{
    enumerate_complete_relations, interval_to_point, invert, point_to_interval, saturate_point,
    Convention, IntervalRelation, PointOrder, PointRelation, TemporalRelation,
};

use PointOrder::{After as A, Before as B, Equal as E, Undefined as U};

const ORDERS: [PointOrder; 4] = [B, A, E, U];

/// Every 4-slot tuple, defined or not: 4^4 = 256 of them.
fn all_tuples() -> Vec<PointRelation> {
    let mut out = Vec::with_capacity(256);
    for &a in &ORDERS {
        for &b in &ORDERS {
            for &c in &ORDERS {
                for &d in &ORDERS {
                    out.push(PointRelation::new(a, b, c, d));
                }
            }
        }
    }
    out
}

#[test]
fn thirteen_complete_relations_match_brute_force() {
    let listed = enumerate_complete_relations();
    assert_eq!(listed.len(), 13);

    let tuples: BTreeSet<[PointOrder; 4]> =
        listed.iter().map(|(_, p)| p.as_array()).collect();
    assert_eq!(tuples.len(), 13, "tuples must be pairwise distinct");
    assert_eq!(tuples, oracle_complete_tuples());

    // Each tuple maps back to the interval relation it came from.
    for (relation, point) in listed {
        assert_eq!(point_to_interval(point), Ok(Some(relation)));
    }
}

#[test]
fn saturation_agrees_with_oracle_on_every_tuple() {
    for p in all_tuples() {
        match (saturate_point(p), oracle_saturate_pair(p)) {
            (Ok(got), Some(want)) => {
                assert_eq!(got, want, "saturation of {p:?} disagrees with enumeration")
            }
            (Err(_), None) => {}
            (got, want) => {
                panic!("{p:?}: library said {got:?}, enumeration said {want:?}")
            }
        }
    }
}

#[test]
fn interval_inverse_is_involutive_and_matches_point_inversion() {
    for r in IntervalRelation::ALL {
        assert_eq!(r.inverse().inverse(), r);
        assert_eq!(interval_to_point(r.inverse()), interval_to_point(r).invert());
        // Exactly one of a non-symmetric pair is primary.
        if r.inverse() == r {
            assert!(r.is_primary());
        } else {
            assert_ne!(r.is_primary(), r.inverse().is_primary());
        }
    }
}

#[test]
fn inverting_a_partial_tuple_swaps_the_cross_slots() {
    // start(X) relates to both of Y's endpoints and to end(Y), but the
    // end(X)/start(Y) slot is unknown. Seen from Y, the unknown moves to the
    // start(Y)/end(X) position — slot two — and every order flips.
    let p = PointRelation::new(B, B, U, B);
    assert_eq!(p.invert(), PointRelation::new(A, U, A, A));
    assert_eq!(p.invert().invert(), p);
}

#[test]
fn the_vague_tuple_is_a_fixed_point() {
    let vague = PointRelation::vague();
    assert_eq!(vague.invert(), vague);
    assert_eq!(saturate_point(vague), Ok(vague));
    assert_eq!(point_to_interval(vague), Ok(None));
}

#[test]
fn equal_starts_and_equal_ends_saturates_to_equality() {
    let p = PointRelation::new(E, U, U, E);
    let saturated = saturate_point(p).unwrap();
    assert_eq!(saturated, PointRelation::new(E, B, A, E));
    assert_eq!(point_to_interval(p), Ok(Some(IntervalRelation::Equal)));
}

#[test]
fn labels_parse_the_same_across_separators_and_case() {
    for label in ["IS_INCLUDED", "is-included", "isIncluded", " is included "] {
        let r = tiekit::relations::parse_relation(label, Convention::TimeML).unwrap();
        assert_eq!(r.interval(), Some(IntervalRelation::During));
    }
    let meets = tiekit::relations::parse_relation("IBEFORE", Convention::TimeML).unwrap();
    assert_eq!(meets.interval(), Some(IntervalRelation::Meets));
}

fn arb_order() -> impl Strategy<Value = PointOrder> {
    prop_oneof![Just(B), Just(A), Just(E), Just(U)]
}

fn arb_tuple() -> impl Strategy<Value = PointRelation> {
    (arb_order(), arb_order(), arb_order(), arb_order())
        .prop_map(|(a, b, c, d)| PointRelation::new(a, b, c, d))
}

proptest! {
    #[test]
    fn inversion_is_involutive(p in arb_tuple()) {
        prop_assert_eq!(p.invert().invert(), p);
    }

    #[test]
    fn saturation_is_idempotent(p in arb_tuple()) {
        if let Ok(s) = saturate_point(p) {
            prop_assert_eq!(saturate_point(s), Ok(s));
        }
    }

    #[test]
    fn saturation_never_retracts_a_defined_slot(p in arb_tuple()) {
        if let Ok(s) = saturate_point(p) {
            let before = p.as_array();
            let after = s.as_array();
            for (b, a) in before.iter().zip(after.iter()) {
                if b.is_defined() {
                    prop_assert_eq!(b, a);
                }
            }
            prop_assert!(s.defined_slots() >= p.defined_slots());
        }
    }

    #[test]
    fn saturation_commutes_with_inversion(p in arb_tuple()) {
        match (saturate_point(p), saturate_point(p.invert())) {
            (Ok(s), Ok(si)) => prop_assert_eq!(s.invert(), si),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "consistency differs under inversion: {:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn complete_tuples_survive_interval_round_trips(idx in 0usize..13) {
        let r = IntervalRelation::ALL[idx];
        let p = interval_to_point(r);
        prop_assert!(p.is_complete());
        prop_assert_eq!(point_to_interval(p), Ok(Some(r)));

        let rel = TemporalRelation::from_interval(r);
        prop_assert_eq!(rel.interval(), Some(r));
        prop_assert_eq!(invert(&invert(&rel)).point(), rel.point());
        prop_assert_eq!(invert(&rel).interval(), Some(r.inverse()));
    }
}
