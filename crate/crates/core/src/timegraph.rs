//! Point-based temporal reasoning over tlink sets.
//!
//! Every entity contributes two graph nodes, its start and its end. Equal
//! slots merge nodes into equality classes; Before/After slots become
//! directed "strictly before" edges between classes (After edges are stored
//! reversed so everything points forward); each entity adds the implicit
//! start→end edge. The result must be a DAG — any cycle means the
//! constraints cannot be realized on a timeline.
//!
//! On top of the DAG, per-class reachability bitsets answer "is this
//! endpoint before that one" in constant time, which is all it takes to
//! read off the relation between any two entities ([`relation_between`]),
//! enumerate everything the annotations entail ([`temporal_closure`]), or
//! shrink them to a non-redundant core ([`temporal_reduction`]).
//!
//! [`relation_between`]: Timegraph::relation_between

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::model::TLink;
use crate::relations::{self, PointOrder, PointRelation, TemporalRelation};

/// Outcome of [`check_consistency`]: either the constraints admit a
/// timeline, or a small witness of tlinks that cannot hold together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub consistent: bool,
    /// Present exactly when `consistent` is false. Minimized greedily, so it
    /// is small but not guaranteed to be the smallest possible.
    pub conflict: Option<Vec<TLink>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TimegraphError {
    #[error("temporal constraints are inconsistent ({} tlinks in conflict)", witness.len())]
    Inconsistent { witness: Vec<TLink> },
    #[error("entity {id:?} is not part of the graph")]
    UnknownEntity { id: String },
}

/// Immutable reasoning structure over an entity set: endpoint equality
/// classes, strict-order edges between them, and precomputed reachability.
#[derive(Debug, Clone)]
pub struct Timegraph {
    /// Entity ids, sorted; index into this vector is the entity handle.
    entities: Vec<String>,
    index: HashMap<String, usize>,
    /// Equality class of each endpoint; endpoint `2i` is the start of entity
    /// `i`, endpoint `2i + 1` its end.
    class_of: Vec<usize>,
    n_classes: usize,
    /// Strict-edge adjacency between classes, deduplicated and sorted.
    succ: Vec<Vec<usize>>,
    /// `reach[c]` holds a bit per class strictly after `c`.
    reach: Vec<Vec<u64>>,
}

impl Timegraph {
    /// Build the graph, or report why the tlinks are contradictory.
    pub fn build(tlinks: &[TLink]) -> Result<Self, TimegraphError> {
        match graph_core(tlinks) {
            Some(g) => Ok(g),
            None => Err(TimegraphError::Inconsistent {
                witness: minimize_witness(tlinks),
            }),
        }
    }

    /// Entity ids known to the graph, sorted.
    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    pub fn contains(&self, entity: &str) -> bool {
        self.index.contains_key(entity)
    }

    /// Everything the graph knows about the pair `(a, b)`: Equal where the
    /// endpoints share a class, Before/After where a directed path exists,
    /// Undefined otherwise. The tuple is saturated by construction because
    /// class membership is transitive and so is reachability.
    pub fn relation_between(&self, a: &str, b: &str) -> Result<TemporalRelation, TimegraphError> {
        let i = self.lookup(a)?;
        let j = self.lookup(b)?;
        Ok(TemporalRelation::from_saturated(self.relation_idx(i, j)))
    }

    /// All tlinks entailed by the graph, one per entity pair with at least
    /// one defined slot, canonically oriented and sorted by endpoint ids.
    pub fn closure_links(&self) -> Vec<TLink> {
        let n = self.entities.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let tuple = self.relation_idx(i, j);
                if tuple.defined_slots() == 0 {
                    continue;
                }
                out.push(canonical_link(&self.entities[i], &self.entities[j], tuple));
            }
        }
        sort_links(&mut out);
        out
    }

    /// A smallest-by-construction tlink set with the same closure: the
    /// transitive reduction of the strict-edge DAG plus one equality link
    /// per spanning connection inside each shared class, mapped back to
    /// entity pairs. Edges every rebuild regenerates on its own (an
    /// entity's start strictly before its own end) are left out.
    pub fn reduction_links(&self) -> Vec<TLink> {
        let n = self.entities.len();

        // Entities with an endpoint in each class, ascending.
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); self.n_classes];
        // Class pairs covered by an entity's implicit start→end edge.
        let mut implicit: BTreeSet<(usize, usize)> = BTreeSet::new();
        for e in 0..n {
            let (s, t) = (self.class_of[2 * e], self.class_of[2 * e + 1]);
            members[s].push(e);
            members[t].push(e);
            implicit.insert((s, t));
        }

        // One partial tuple per unordered entity pair, other slots left
        // undefined; keyed by ascending indices (entities are sorted, so
        // index order is id order).
        let mut atoms: BTreeMap<(usize, usize), PointRelation> = BTreeMap::new();
        let mut add_atom = |a: usize, b: usize, slot: usize, order: PointOrder| {
            let mut arr = [PointOrder::Undefined; 4];
            arr[slot] = order;
            let mut tuple = PointRelation::from_array(arr);
            let key = if a < b {
                (a, b)
            } else {
                tuple = tuple.invert();
                (b, a)
            };
            let entry = atoms
                .entry(key)
                .or_insert_with(|| PointRelation::from_array([PointOrder::Undefined; 4]));
            let mut merged = entry.as_array();
            for (dst, src) in merged.iter_mut().zip(tuple.as_array()) {
                if src.is_defined() {
                    debug_assert!(*dst == PointOrder::Undefined || *dst == src);
                    *dst = src;
                }
            }
            *entry = PointRelation::from_array(merged);
        };

        // Strict part: the unique transitive reduction of the class DAG.
        for u in 0..self.n_classes {
            for &v in &self.succ[u] {
                let redundant = self
                    .succ[u]
                    .iter()
                    .any(|&w| w != v && bit_test(&self.reach[w], v));
                if redundant || implicit.contains(&(u, v)) {
                    continue;
                }
                let (a, b) = representative_pair(&members[u], &members[v])
                    .expect("a kept strict edge connects two distinct entities");
                let slot = 2 * self.endpoint_in(a, u) + self.endpoint_in(b, v);
                add_atom(a, b, slot, PointOrder::Before);
            }
        }

        // Equality part: chain the entities sharing each class.
        for (c, ents) in members.iter().enumerate() {
            for pair in ents.windows(2) {
                let (a, b) = (pair[0], pair[1]);
                let slot = 2 * self.endpoint_in(a, c) + self.endpoint_in(b, c);
                add_atom(a, b, slot, PointOrder::Equal);
            }
        }

        let mut out = Vec::new();
        for ((i, j), tuple) in atoms {
            let rel = TemporalRelation::new(tuple, None)
                .expect("slots read off a consistent graph cannot contradict");
            out.push(canonical_link(&self.entities[i], &self.entities[j], rel.point()));
        }
        sort_links(&mut out);
        out
    }

    fn lookup(&self, entity: &str) -> Result<usize, TimegraphError> {
        self.index
            .get(entity)
            .copied()
            .ok_or_else(|| TimegraphError::UnknownEntity {
                id: entity.to_owned(),
            })
    }

    fn relation_idx(&self, i: usize, j: usize) -> PointRelation {
        let order = |p: usize, q: usize| {
            let (u, v) = (self.class_of[p], self.class_of[q]);
            if u == v {
                PointOrder::Equal
            } else if bit_test(&self.reach[u], v) {
                PointOrder::Before
            } else if bit_test(&self.reach[v], u) {
                PointOrder::After
            } else {
                PointOrder::Undefined
            }
        };
        let (si, ei) = (2 * i, 2 * i + 1);
        let (sj, ej) = (2 * j, 2 * j + 1);
        PointRelation::new(order(si, sj), order(si, ej), order(ei, sj), order(ei, ej))
    }

    /// Which endpoint of entity `e` lies in class `c`: 0 for start, 1 for end.
    fn endpoint_in(&self, e: usize, c: usize) -> usize {
        if self.class_of[2 * e] == c {
            0
        } else {
            debug_assert_eq!(self.class_of[2 * e + 1], c);
            1
        }
    }
}

/// Build the graph without witness bookkeeping; `None` means inconsistent.
fn graph_core(tlinks: &[TLink]) -> Option<Timegraph> {
    let names: BTreeSet<&str> = tlinks
        .iter()
        .flat_map(|t| [t.source(), t.target()])
        .collect();
    let entities: Vec<String> = names.into_iter().map(str::to_owned).collect();
    let index: HashMap<String, usize> = entities
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i))
        .collect();
    let n = entities.len();

    // Merge endpoints connected by Equal slots.
    let mut sets = DisjointSets::new(2 * n);
    for t in tlinks {
        let (i, j) = (index[t.source()], index[t.target()]);
        for (slot, order) in t.relation().point().as_array().into_iter().enumerate() {
            if order == PointOrder::Equal {
                let (p, q) = slot_endpoints(i, j, slot);
                sets.union(p, q);
            }
        }
    }

    // Dense class ids, numbered by first appearance over endpoint index so
    // construction is deterministic.
    let mut class_of = vec![usize::MAX; 2 * n];
    let mut n_classes = 0;
    let mut root_class: HashMap<usize, usize> = HashMap::new();
    for p in 0..2 * n {
        let root = sets.find(p);
        let class = *root_class.entry(root).or_insert_with(|| {
            let c = n_classes;
            n_classes += 1;
            c
        });
        class_of[p] = class;
    }

    // Strict edges: one per defined Before/After slot (After reversed), plus
    // the implicit start→end edge of every entity. An edge inside a single
    // class is a contradiction outright.
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut add_edge = |from: usize, to: usize| -> Option<()> {
        if from == to {
            return None;
        }
        edges.insert((from, to));
        Some(())
    };
    for t in tlinks {
        let (i, j) = (index[t.source()], index[t.target()]);
        for (slot, order) in t.relation().point().as_array().into_iter().enumerate() {
            let (p, q) = slot_endpoints(i, j, slot);
            match order {
                PointOrder::Before => add_edge(class_of[p], class_of[q])?,
                PointOrder::After => add_edge(class_of[q], class_of[p])?,
                PointOrder::Equal | PointOrder::Undefined => {}
            }
        }
    }
    for e in 0..n {
        add_edge(class_of[2 * e], class_of[2 * e + 1])?;
    }

    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    let mut indegree = vec![0usize; n_classes];
    for &(u, v) in &edges {
        succ[u].push(v);
        indegree[v] += 1;
    }

    // Kahn's algorithm: a leftover node means a cycle, i.e. inconsistency.
    let mut queue: Vec<usize> = (0..n_classes).filter(|&c| indegree[c] == 0).collect();
    let mut topo = Vec::with_capacity(n_classes);
    while let Some(u) = queue.pop() {
        topo.push(u);
        for &v in &succ[u] {
            indegree[v] -= 1;
            if indegree[v] == 0 {
                queue.push(v);
            }
        }
    }
    if topo.len() != n_classes {
        return None;
    }

    // Reachability in reverse topological order: a class reaches its
    // successors and everything they reach.
    let words = n_classes.div_ceil(64);
    let mut reach = vec![vec![0u64; words]; n_classes];
    for &u in topo.iter().rev() {
        let mut bits = vec![0u64; words];
        for &v in &succ[u] {
            bit_or(&mut bits, &reach[v]);
            bits[v / 64] |= 1 << (v % 64);
        }
        reach[u] = bits;
    }

    Some(Timegraph {
        entities,
        index,
        class_of,
        n_classes,
        succ,
        reach,
    })
}

/// First pair of distinct entities drawn from two class member lists, in
/// index order. `None` only if every combination is one entity with itself.
fn representative_pair(from: &[usize], to: &[usize]) -> Option<(usize, usize)> {
    from.iter()
        .flat_map(|&a| to.iter().map(move |&b| (a, b)))
        .find(|(a, b)| a != b)
}

/// Endpoint pair addressed by tuple slot `slot` for entity indices `(i, j)`.
fn slot_endpoints(i: usize, j: usize, slot: usize) -> (usize, usize) {
    let p = 2 * i + slot / 2; // slots 0,1 start from X's start; 2,3 from its end
    let q = 2 * j + slot % 2;
    (p, q)
}

/// Drop tlinks one at a time, keeping each removal that preserves the
/// contradiction. The result is locally minimal: removing any single
/// remaining tlink restores consistency.
fn minimize_witness(tlinks: &[TLink]) -> Vec<TLink> {
    let mut keep: Vec<TLink> = tlinks.to_vec();
    let mut i = 0;
    while i < keep.len() {
        let mut candidate = keep.clone();
        candidate.remove(i);
        if graph_core(&candidate).is_none() {
            keep = candidate;
        } else {
            i += 1;
        }
    }
    keep
}

/// Orient a pair so complete relations land in the Before/Meets/... family
/// (never After/MetBy/...), with the lexicographically smaller source for
/// symmetric and partial tuples; `a` must sort before `b`.
fn canonical_link(a: &str, b: &str, tuple: PointRelation) -> TLink {
    let rel = TemporalRelation::from_saturated(tuple);
    let keep = match rel.interval() {
        Some(iv) => iv.is_primary(),
        None => true,
    };
    if keep {
        TLink::new_unchecked(a.to_owned(), b.to_owned(), rel)
    } else {
        TLink::new_unchecked(b.to_owned(), a.to_owned(), relations::invert(&rel))
    }
}

fn sort_links(links: &mut [TLink]) {
    links.sort_by(|x, y| {
        (x.source(), x.target()).cmp(&(y.source(), y.target()))
    });
}

fn bit_test(bits: &[u64], i: usize) -> bool {
    bits[i / 64] & (1 << (i % 64)) != 0
}

fn bit_or(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d |= s;
    }
}

struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

/// Every tlink entailed by `tlinks`: one per entity pair with at least one
/// defined slot, saturated, canonically oriented, sorted. A superset of the
/// input (slot-wise) and idempotent.
pub fn temporal_closure(tlinks: &[TLink]) -> Result<Vec<TLink>, TimegraphError> {
    Ok(Timegraph::build(tlinks)?.closure_links())
}

/// A non-redundant tlink set whose closure equals `closure(tlinks)`.
pub fn temporal_reduction(tlinks: &[TLink]) -> Result<Vec<TLink>, TimegraphError> {
    Ok(Timegraph::build(tlinks)?.reduction_links())
}

/// Check whether the tlinks admit a timeline; on failure the report carries
/// a greedily minimized conflicting subset.
pub fn check_consistency(tlinks: &[TLink]) -> ConsistencyReport {
    match graph_core(tlinks) {
        Some(_) => ConsistencyReport {
            consistent: true,
            conflict: None,
        },
        None => ConsistencyReport {
            consistent: false,
            conflict: Some(minimize_witness(tlinks)),
        },
    }
}

pub fn is_consistent(tlinks: &[TLink]) -> bool {
    graph_core(tlinks).is_some()
}
