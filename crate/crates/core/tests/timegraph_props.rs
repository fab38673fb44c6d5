mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{keyed_by_pair, oracle_closure_tlinks, random_tlink_set, tl};
use tiekit::model::TLink;
use tiekit::relations::{interval_to_point, IntervalRelation, PointRelation};
use tiekit::timegraph::{
    check_consistency, is_consistent, temporal_closure, temporal_reduction, Timegraph,
    TimegraphError,
};

fn before() -> PointRelation {
    interval_to_point(IntervalRelation::Before)
}

#[test]
fn closure_matches_enumeration_on_random_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7161);
    let mut consistent = 0usize;
    let mut inconsistent = 0usize;

    for _ in 0..400 {
        let links = random_tlink_set(&mut rng);
        match oracle_closure_tlinks(&links) {
            Some(expected) => {
                consistent += 1;
                assert!(is_consistent(&links), "enumeration admits a timeline: {links:?}");
                let closure = temporal_closure(&links).expect("consistent set must close");
                assert_eq!(
                    keyed_by_pair(&closure),
                    expected,
                    "closure differs from enumeration for {links:?}"
                );
            }
            None => {
                inconsistent += 1;
                assert!(!is_consistent(&links), "no timeline exists for {links:?}");
                let err = temporal_closure(&links).unwrap_err();
                let TimegraphError::Inconsistent { witness } = err else {
                    panic!("expected an inconsistency, got {err:?}");
                };
                assert!(!witness.is_empty());
                assert!(witness.len() <= links.len());
                assert!(
                    oracle_closure_tlinks(&witness).is_none(),
                    "witness must itself be unsatisfiable: {witness:?}"
                );
            }
        }
    }

    // The generator must exercise both outcomes meaningfully.
    assert!(consistent >= 100, "only {consistent} consistent draws");
    assert!(inconsistent >= 10, "only {inconsistent} inconsistent draws");
}

#[test]
fn reduction_preserves_the_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let mut checked = 0usize;

    while checked < 150 {
        let links = random_tlink_set(&mut rng);
        if !is_consistent(&links) {
            continue;
        }
        checked += 1;

        let closure = temporal_closure(&links).unwrap();
        let reduction = temporal_reduction(&links).unwrap();
        assert!(reduction.len() <= closure.len());

        // Reducing loses no information...
        assert_eq!(
            keyed_by_pair(&temporal_closure(&reduction).unwrap()),
            keyed_by_pair(&closure),
        );
        // ...and every reduced link only states facts the closure entails.
        // A reduced link may carry fewer slots than the closure's tuple for
        // that pair — the rest is recovered transitively — but never a
        // different order.
        let closed = keyed_by_pair(&closure);
        for (pair, tuple) in keyed_by_pair(&reduction) {
            let full = closed
                .get(&pair)
                .unwrap_or_else(|| panic!("reduced pair {pair:?} missing from closure"));
            for (slot, entailed) in tuple.as_array().iter().zip(full.as_array()) {
                if slot.is_defined() {
                    assert_eq!(*slot, entailed, "pair {pair:?}: {tuple:?} vs {full:?}");
                }
            }
        }
    }
}

#[test]
fn inverting_every_link_leaves_the_scenario_unchanged() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xFACADE);
    let mut checked = 0usize;

    while checked < 100 {
        let links = random_tlink_set(&mut rng);
        let flipped: Vec<TLink> = links.iter().map(TLink::inverted).collect();
        assert_eq!(is_consistent(&links), is_consistent(&flipped));
        if !is_consistent(&links) {
            continue;
        }
        checked += 1;
        assert_eq!(
            keyed_by_pair(&temporal_closure(&links).unwrap()),
            keyed_by_pair(&temporal_closure(&flipped).unwrap()),
        );
    }
}

#[test]
fn relation_between_agrees_with_the_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xBEE);
    let mut checked = 0usize;

    while checked < 50 {
        let links = random_tlink_set(&mut rng);
        let Some(expected) = oracle_closure_tlinks(&links) else {
            continue;
        };
        checked += 1;

        let graph = Timegraph::build(&links).unwrap();
        for ((a, b), tuple) in &expected {
            let forward = graph.relation_between(a, b).unwrap();
            assert_eq!(forward.point(), *tuple);
            let backward = graph.relation_between(b, a).unwrap();
            assert_eq!(backward.point(), tuple.invert());
        }
        assert!(matches!(
            graph.relation_between("n0", "no_such_entity"),
            Err(TimegraphError::UnknownEntity { .. })
        ));
    }
}

#[test]
fn closure_output_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD0);
    for _ in 0..20 {
        let links = random_tlink_set(&mut rng);
        if !is_consistent(&links) {
            continue;
        }
        let first = temporal_closure(&links).unwrap();
        let second = temporal_closure(&links).unwrap();
        assert_eq!(first, second, "closure must be reproducible, order included");
    }
}

#[test]
fn a_three_cycle_is_rejected_with_a_small_conflict() {
    let links = vec![
        tl("a", "b", before()),
        tl("b", "c", before()),
        tl("c", "a", before()),
    ];
    let report = check_consistency(&links);
    assert!(!report.consistent);
    let conflict = report.conflict.expect("inconsistent report carries a conflict");
    assert!(conflict.len() <= 3);
    assert!(oracle_closure_tlinks(&conflict).is_none());

    // Dropping any single link restores a timeline.
    for skip in 0..links.len() {
        let rest: Vec<TLink> = links
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, l)| l.clone())
            .collect();
        assert!(is_consistent(&rest));
    }
}

#[test]
fn a_long_chain_closes_to_all_pairs() {
    let n = 100usize;
    let links: Vec<TLink> = (0..n - 1)
        .map(|i| tl(&format!("c{i:03}"), &format!("c{:03}", i + 1), before()))
        .collect();

    let closure = temporal_closure(&links).unwrap();
    assert_eq!(closure.len(), n * (n - 1) / 2);
    for link in &closure {
        assert_eq!(link.relation().point(), before());
    }

    let reduction = temporal_reduction(&links).unwrap();
    assert_eq!(reduction.len(), n - 1);
    assert_eq!(keyed_by_pair(&reduction), keyed_by_pair(&links));
}
