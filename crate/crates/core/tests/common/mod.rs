//! Brute-force enumeration oracle shared by the test suites.
//!
//! Everything here works by enumerating weak orderings of interval endpoints
//! and reading facts off the surviving assignments. It deliberately shares no
//! machinery with the library: no saturation rules, no union-find, no
//! reachability. Slow but obviously correct, and only run on small instances.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use tiekit::model::TLink;
use tiekit::relations::{PointOrder, PointRelation, TemporalRelation};

/// Order of two concrete ranks.
fn rank_order(a: usize, b: usize) -> PointOrder {
    match a.cmp(&b) {
        std::cmp::Ordering::Less => PointOrder::Before,
        std::cmp::Ordering::Greater => PointOrder::After,
        std::cmp::Ordering::Equal => PointOrder::Equal,
    }
}

fn slot_matches(slot: PointOrder, a: usize, b: usize) -> bool {
    slot == PointOrder::Undefined || rank_order(a, b) == slot
}

/// Saturate a single 4-slot tuple by enumerating all rank assignments of the
/// four endpoints (sx, ex, sy, ey) over 0..4. Returns `None` when no
/// assignment satisfies the defined slots together with sx<ex and sy<ey.
pub fn oracle_saturate_pair(p: PointRelation) -> Option<PointRelation> {
    let mut seen = [0u8; 4]; // bitmask per slot: 1=Before, 2=After, 4=Equal
    let mut any = false;
    for sx in 0..4usize {
        for ex in 0..4usize {
            if sx >= ex {
                continue;
            }
            for sy in 0..4usize {
                for ey in 0..4usize {
                    if sy >= ey {
                        continue;
                    }
                    if !slot_matches(p.xs_ys, sx, sy)
                        || !slot_matches(p.xs_ye, sx, ey)
                        || !slot_matches(p.xe_ys, ex, sy)
                        || !slot_matches(p.xe_ye, ex, ey)
                    {
                        continue;
                    }
                    any = true;
                    for (k, (a, b)) in [(sx, sy), (sx, ey), (ex, sy), (ex, ey)]
                        .into_iter()
                        .enumerate()
                    {
                        seen[k] |= order_bit(rank_order(a, b));
                    }
                }
            }
        }
    }
    if !any {
        return None;
    }
    let slot = |k: usize| forced_from_bits(seen[k]);
    Some(PointRelation::new(slot(0), slot(1), slot(2), slot(3)))
}

fn order_bit(o: PointOrder) -> u8 {
    match o {
        PointOrder::Before => 1,
        PointOrder::After => 2,
        PointOrder::Equal => 4,
        PointOrder::Undefined => 0,
    }
}

fn forced_from_bits(bits: u8) -> PointOrder {
    match bits {
        1 => PointOrder::Before,
        2 => PointOrder::After,
        4 => PointOrder::Equal,
        _ => PointOrder::Undefined,
    }
}

/// All fully-defined consistent 4-slot tuples between two intervals, found by
/// projecting every admissible rank assignment of the four endpoints.
pub fn oracle_complete_tuples() -> BTreeSet<[PointOrder; 4]> {
    let mut out = BTreeSet::new();
    for sx in 0..4usize {
        for ex in 0..4usize {
            if sx >= ex {
                continue;
            }
            for sy in 0..4usize {
                for ey in 0..4usize {
                    if sy >= ey {
                        continue;
                    }
                    out.insert([
                        rank_order(sx, sy),
                        rank_order(sx, ey),
                        rank_order(ex, sy),
                        rank_order(ex, ey),
                    ]);
                }
            }
        }
    }
    out
}

/// A constraint between two endpoints (indices into 0..2n, entity i owning
/// endpoints 2i = start and 2i+1 = end). Order is always defined here.
pub type Constraint = (usize, usize, PointOrder);

/// Closure oracle over a set of endpoint constraints: enumerate every weak
/// ordering of the 2n endpoints satisfying all constraints (plus the implicit
/// start-before-end of each entity) and intersect the observed slot orders.
///
/// Returns `None` when the constraint set is unsatisfiable; otherwise a map
/// from entity pair (i, j), i < j, to the forced slot tuple (pairs with no
/// forced slot omitted).
pub fn oracle_closure(
    n_entities: usize,
    constraints: &[Constraint],
) -> Option<BTreeMap<(usize, usize), PointRelation>> {
    let n_endpoints = 2 * n_entities;
    let mut all: Vec<Constraint> = constraints.to_vec();
    for i in 0..n_entities {
        all.push((2 * i, 2 * i + 1, PointOrder::Before));
    }
    // Constraints checked as soon as their later endpoint is placed.
    let mut by_later: Vec<Vec<(usize, usize, PointOrder)>> = vec![Vec::new(); n_endpoints];
    for &(a, b, o) in &all {
        assert!(o != PointOrder::Undefined);
        by_later[a.max(b)].push((a, b, o));
    }

    let n_pairs = n_entities * n_entities; // indexed i * n + j, only i < j used
    let mut seen = vec![[0u8; 4]; n_pairs];
    let mut leaves = 0usize;
    let mut ranks = vec![0usize; n_endpoints];
    place(
        0,
        0,
        n_endpoints,
        &by_later,
        &mut ranks,
        &mut |ranks: &[usize]| {
            leaves += 1;
            for i in 0..n_entities {
                for j in (i + 1)..n_entities {
                    let cell = &mut seen[i * n_entities + j];
                    let (sx, ex, sy, ey) =
                        (ranks[2 * i], ranks[2 * i + 1], ranks[2 * j], ranks[2 * j + 1]);
                    cell[0] |= order_bit(rank_order(sx, sy));
                    cell[1] |= order_bit(rank_order(sx, ey));
                    cell[2] |= order_bit(rank_order(ex, sy));
                    cell[3] |= order_bit(rank_order(ex, ey));
                }
            }
        },
    );
    if leaves == 0 {
        return None;
    }
    let mut out = BTreeMap::new();
    for i in 0..n_entities {
        for j in (i + 1)..n_entities {
            let cell = seen[i * n_entities + j];
            let p = PointRelation::new(
                forced_from_bits(cell[0]),
                forced_from_bits(cell[1]),
                forced_from_bits(cell[2]),
                forced_from_bits(cell[3]),
            );
            if p.defined_slots() > 0 {
                out.insert((i, j), p);
            }
        }
    }
    Some(out)
}

/// Satisfiability probe: does any weak ordering satisfy the constraints?
pub fn oracle_is_consistent(n_entities: usize, constraints: &[Constraint]) -> bool {
    let n_endpoints = 2 * n_entities;
    let mut all: Vec<Constraint> = constraints.to_vec();
    for i in 0..n_entities {
        all.push((2 * i, 2 * i + 1, PointOrder::Before));
    }
    let mut by_later: Vec<Vec<(usize, usize, PointOrder)>> = vec![Vec::new(); n_endpoints];
    for &(a, b, o) in &all {
        by_later[a.max(b)].push((a, b, o));
    }
    let mut ranks = vec![0usize; n_endpoints];
    let mut found = false;
    place_early_exit(0, 0, n_endpoints, &by_later, &mut ranks, &mut found);
    found
}

/// Recursive placement of endpoint `next` into the weak ordering built so
/// far. `n_levels` counts distinct rank values among endpoints 0..next.
fn place(
    next: usize,
    n_levels: usize,
    n_endpoints: usize,
    by_later: &[Vec<(usize, usize, PointOrder)>],
    ranks: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if next == n_endpoints {
        visit(ranks);
        return;
    }
    // Either share an existing level...
    for level in 0..n_levels {
        ranks[next] = level;
        if constraints_hold(next, by_later, ranks) {
            place(next + 1, n_levels, n_endpoints, by_later, ranks, visit);
        }
    }
    // ...or open a new level at any gap (before level g for g in 0..=n_levels).
    for gap in 0..=n_levels {
        for r in ranks[..next].iter_mut() {
            if *r >= gap {
                *r += 1;
            }
        }
        ranks[next] = gap;
        if constraints_hold(next, by_later, ranks) {
            place(next + 1, n_levels + 1, n_endpoints, by_later, ranks, visit);
        }
        for r in ranks[..next].iter_mut() {
            if *r > gap {
                *r -= 1;
            }
        }
    }
}

fn place_early_exit(
    next: usize,
    n_levels: usize,
    n_endpoints: usize,
    by_later: &[Vec<(usize, usize, PointOrder)>],
    ranks: &mut Vec<usize>,
    found: &mut bool,
) {
    if *found {
        return;
    }
    if next == n_endpoints {
        *found = true;
        return;
    }
    for level in 0..n_levels {
        ranks[next] = level;
        if constraints_hold(next, by_later, ranks) {
            place_early_exit(next + 1, n_levels, n_endpoints, by_later, ranks, found);
            if *found {
                return;
            }
        }
    }
    for gap in 0..=n_levels {
        for r in ranks[..next].iter_mut() {
            if *r >= gap {
                *r += 1;
            }
        }
        ranks[next] = gap;
        if constraints_hold(next, by_later, ranks) {
            place_early_exit(next + 1, n_levels + 1, n_endpoints, by_later, ranks, found);
        }
        for r in ranks[..next].iter_mut() {
            if *r > gap {
                *r -= 1;
            }
        }
        if *found {
            ranks[next] = 0;
            return;
        }
    }
}

fn constraints_hold(
    placed: usize,
    by_later: &[Vec<(usize, usize, PointOrder)>],
    ranks: &[usize],
) -> bool {
    by_later[placed]
        .iter()
        .all(|&(a, b, o)| rank_order(ranks[a], ranks[b]) == o)
}

/// Convert a tlink set over string entity ids into the oracle's index space:
/// sorted entity ids plus one constraint per defined slot.
pub fn tlinks_to_constraints(tlinks: &[TLink]) -> (Vec<String>, Vec<Constraint>) {
    let ids: BTreeSet<&str> = tlinks
        .iter()
        .flat_map(|t| [t.source(), t.target()])
        .collect();
    let ids: Vec<String> = ids.into_iter().map(str::to_owned).collect();
    let index: BTreeMap<&str, usize> = ids.iter().map(|s| s.as_str()).zip(0..).collect();
    let mut constraints = Vec::new();
    for t in tlinks {
        let x = index[t.source()];
        let y = index[t.target()];
        let p = t.relation().point();
        let slots = [
            (2 * x, 2 * y, p.xs_ys),
            (2 * x, 2 * y + 1, p.xs_ye),
            (2 * x + 1, 2 * y, p.xe_ys),
            (2 * x + 1, 2 * y + 1, p.xe_ye),
        ];
        for (a, b, o) in slots {
            if o != PointOrder::Undefined {
                constraints.push((a, b, o));
            }
        }
    }
    (ids, constraints)
}

/// Closure of a tlink set per the oracle, keyed by entity id pair (lexicographic).
pub fn oracle_closure_tlinks(
    tlinks: &[TLink],
) -> Option<BTreeMap<(String, String), PointRelation>> {
    let (ids, constraints) = tlinks_to_constraints(tlinks);
    let by_index = oracle_closure(ids.len(), &constraints)?;
    Some(
        by_index
            .into_iter()
            .map(|((i, j), p)| ((ids[i].clone(), ids[j].clone()), p))
            .collect(),
    )
}

/// Project an implementation-produced tlink list into the same keyed form the
/// oracle reports (pair sorted lexicographically, the tuple oriented to match).
pub fn keyed_by_pair(tlinks: &[TLink]) -> BTreeMap<(String, String), PointRelation> {
    let mut out = BTreeMap::new();
    for t in tlinks {
        let (key, p) = if t.source() <= t.target() {
            (
                (t.source().to_owned(), t.target().to_owned()),
                t.relation().point(),
            )
        } else {
            (
                (t.target().to_owned(), t.source().to_owned()),
                t.relation().point().invert(),
            )
        };
        if out.insert(key.clone(), p).is_some() {
            panic!("duplicate pair {key:?} in tlink list");
        }
    }
    out
}

/// Test helper: build a tlink from a raw tuple (saturating it).
pub fn tl(source: &str, target: &str, p: PointRelation) -> TLink {
    TLink::new(
        source,
        target,
        TemporalRelation::new(p, None).expect("consistent test tuple"),
    )
    .expect("test tlink")
}

/// The partial ("vague") tuple templates used by the random generators.
pub fn vague_templates() -> Vec<PointRelation> {
    use PointOrder::{After as A, Before as B, Undefined as U};
    vec![
        PointRelation::new(B, B, U, B), // before-or-overlaps
        PointRelation::new(A, U, A, A), // overlapped-by-or-after
        PointRelation::new(U, B, A, U), // some intersection
        PointRelation::new(B, U, U, U), // start-point before
        PointRelation::new(U, U, U, B), // end-point before
    ]
}

fn pick_relation(
    rng: &mut impl rand::Rng,
    complete: &[PointRelation],
    vague: &[PointRelation],
) -> PointRelation {
    use rand::RngExt;

    // Complete relations weighted 3:1 over the partial templates: partial
    // tuples prune the enumeration oracle far less, so a run dominated by
    // them would be slow without testing anything extra.
    if rng.random_range(0..4u8) < 3 {
        complete[rng.random_range(0..complete.len())]
    } else {
        vague[rng.random_range(0..vague.len())]
    }
}

/// A random tlink set over 2..=5 entities and at most 7 links: a
/// relation-labelled path visiting every entity (keeping the enumeration
/// oracle fast — no endpoint is left floating free) plus a few extra links
/// on random pairs, which is where contradictions come from.
pub fn random_tlink_set(rng: &mut impl rand::Rng) -> Vec<TLink> {
    use rand::seq::SliceRandom;
    use rand::RngExt;

    let complete: Vec<PointRelation> = tiekit::relations::enumerate_complete_relations()
        .into_iter()
        .map(|(_, p)| p)
        .collect();
    let vague = vague_templates();

    let n = rng.random_range(2..=5usize);
    let ids: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut links = Vec::new();
    for w in order.windows(2) {
        links.push(tl(&ids[w[0]], &ids[w[1]], pick_relation(rng, &complete, &vague)));
    }
    let max_extra = (7 - links.len()).min(3);
    for _ in 0..rng.random_range(0..=max_extra) {
        let a = rng.random_range(0..n);
        let mut b = rng.random_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        links.push(tl(&ids[a], &ids[b], pick_relation(rng, &complete, &vague)));
    }
    links
}
