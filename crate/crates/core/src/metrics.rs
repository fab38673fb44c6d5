//! Evaluation of predicted temporal annotations against gold annotations.
//!
//! Three families of scores are provided:
//!
//! * [`identification_scores`] — span or pair identification as
//!   precision/recall/F1, micro-pooled and macro-averaged over documents;
//! * [`classification_scores`] — relation-label accuracy over gold entity
//!   pairs, with per-label precision/recall/F1;
//! * [`temporal_awareness`] / [`temporal_awareness_dataset`] — graph-based
//!   precision/recall over transitive reductions, comparing what each side's
//!   closure entails rather than raw link lists.
//!
//! All scores share one zero-denominator convention: a ratio with an empty
//! denominator is 1.0 when the opposite side is also empty (nothing to find,
//! nothing claimed) and 0.0 otherwise.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::model::{Dataset, Document, EntityKind, TLink};
use crate::relations::TemporalRelation;
use crate::timegraph::{self, Timegraph, TimegraphError};

/// Errors raised while pairing inputs or scoring them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    /// A predicted document has no gold counterpart to be scored against.
    #[error("prediction document {name:?} has no gold counterpart")]
    UnknownPredictionDocument {
        /// Name of the offending predicted document.
        name: String,
    },
    /// The same document name appeared twice on one side of the input.
    #[error("duplicate document name {name:?} in the {side} input")]
    DuplicateDocument {
        /// The repeated name.
        name: String,
        /// Which side repeated it: `"gold"` or `"predictions"`.
        side: &'static str,
    },
    /// Two predicted tlinks in one document address the same entity pair.
    #[error("duplicate prediction for entity pair ({a}, {b}) in document {document:?}")]
    DuplicatePrediction {
        /// Document containing the duplicates.
        document: String,
        /// Lexicographically smaller entity id of the pair.
        a: String,
        /// Lexicographically larger entity id of the pair.
        b: String,
    },
    /// Gold annotations contradict themselves; awareness is undefined.
    #[error("gold annotations{} are inconsistent", match document { Some(d) => format!(" of document {d:?}"), None => String::new() })]
    InconsistentGold {
        /// Document name when scoring a dataset, `None` for bare link sets.
        document: Option<String>,
        /// A minimal set of mutually contradictory gold tlinks.
        witness: Vec<TLink>,
    },
    /// Predictions contradict themselves and the policy forbids repair.
    #[error("predictions{} are inconsistent and the policy is fail-hard", match document { Some(d) => format!(" of document {d:?}"), None => String::new() })]
    InconsistentPredictions {
        /// Document name when scoring a dataset, `None` for bare link sets.
        document: Option<String>,
        /// A minimal set of mutually contradictory predicted tlinks.
        witness: Vec<TLink>,
    },
}

impl From<TimegraphError> for MetricsError {
    fn from(err: TimegraphError) -> Self {
        match err {
            TimegraphError::Inconsistent { witness } => {
                MetricsError::InconsistentPredictions { document: None, witness }
            }
            // Entity lookups inside this module only use ids taken from the
            // very graphs being queried, so this arm is unreachable in
            // practice; map it to an empty witness rather than panicking.
            TimegraphError::UnknownEntity { .. } => {
                MetricsError::InconsistentPredictions { document: None, witness: Vec::new() }
            }
        }
    }
}

/// Gold documents paired with their predicted counterparts by name.
///
/// Every predicted document must match a gold document; gold documents
/// without a prediction are scored against an empty prediction. Pairs are
/// iterated in name order, so every report derived from one input is
/// deterministic.
#[derive(Debug, Clone)]
pub struct EvaluationInput<'a> {
    entries: Vec<(&'a Document, Option<&'a Document>)>,
}

impl<'a> EvaluationInput<'a> {
    /// Pairs gold and predicted documents by name.
    ///
    /// Fails when either side repeats a name or a prediction names a
    /// document absent from the gold side.
    pub fn new(
        gold: impl IntoIterator<Item = &'a Document>,
        pred: impl IntoIterator<Item = &'a Document>,
    ) -> Result<Self, MetricsError> {
        let mut gold_by_name = BTreeMap::new();
        for doc in gold {
            if gold_by_name.insert(doc.name().to_owned(), doc).is_some() {
                return Err(MetricsError::DuplicateDocument {
                    name: doc.name().to_owned(),
                    side: "gold",
                });
            }
        }
        let mut pred_by_name: BTreeMap<String, &Document> = BTreeMap::new();
        for doc in pred {
            if !gold_by_name.contains_key(doc.name()) {
                return Err(MetricsError::UnknownPredictionDocument {
                    name: doc.name().to_owned(),
                });
            }
            if pred_by_name.insert(doc.name().to_owned(), doc).is_some() {
                return Err(MetricsError::DuplicateDocument {
                    name: doc.name().to_owned(),
                    side: "predictions",
                });
            }
        }
        let entries = gold_by_name
            .into_iter()
            .map(|(name, doc)| (doc, pred_by_name.get(name.as_str()).copied()))
            .collect();
        Ok(EvaluationInput { entries })
    }

    /// Pairs two datasets, using all documents of both splits on each side.
    pub fn from_datasets(gold: &'a Dataset, pred: &'a Dataset) -> Result<Self, MetricsError> {
        EvaluationInput::new(gold.documents(), pred.documents())
    }

    /// The paired documents in name order: `(gold, prediction if any)`.
    pub fn pairs(&self) -> impl Iterator<Item = (&'a Document, Option<&'a Document>)> + '_ {
        self.entries.iter().copied()
    }

    /// Number of gold documents under evaluation.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Whether the input contains no documents at all.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// What [`identification_scores`] counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetKind {
    /// Temporal-expression mentions, matched on character spans.
    Timex,
    /// Event mentions, matched on character spans.
    Event,
    /// Unordered entity-id pairs carrying a tlink, ignoring the relation.
    TLinkPair,
}

/// How spans are compared by [`identification_scores`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Matching {
    /// Spans must be exactly equal.
    Strict,
    /// Any character overlap counts; each span matches at most once.
    Relaxed,
}

/// Precision, recall, and their harmonic mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prf {
    /// Fraction of predicted items that are correct.
    pub precision: f64,
    /// Fraction of gold items that were found.
    pub recall: f64,
    /// Harmonic mean of precision and recall (0.0 when both are 0).
    pub f1: f64,
}

impl Prf {
    fn from_counts(tp: usize, fp: usize, fn_: usize) -> Prf {
        let precision = ratio_or_vacuous(tp, tp + fp, fn_ == 0);
        let recall = ratio_or_vacuous(tp, tp + fn_, fp == 0);
        Prf { precision, recall, f1: harmonic(precision, recall) }
    }

    /// All-1.0 scores, used when there is nothing on either side to compare.
    fn vacuous() -> Prf {
        Prf { precision: 1.0, recall: 1.0, f1: 1.0 }
    }
}

/// `num / den`, falling back to the zero-denominator convention: 1.0 when the
/// opposite side is also empty, 0.0 otherwise.
fn ratio_or_vacuous(num: usize, den: usize, other_side_empty: bool) -> f64 {
    if den > 0 {
        num as f64 / den as f64
    } else if other_side_empty {
        1.0
    } else {
        0.0
    }
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

/// Match counts for a single document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DocumentCounts {
    /// Document name.
    pub document: String,
    /// Predicted items confirmed by the gold side.
    pub tp: usize,
    /// Predicted items with no gold counterpart.
    pub fp: usize,
    /// Gold items no prediction accounted for.
    #[serde(rename = "fn")]
    pub missed: usize,
}

impl DocumentCounts {
    fn prf(&self) -> Prf {
        Prf::from_counts(self.tp, self.fp, self.missed)
    }
}

/// Identification scores pooled two ways over the same per-document counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentificationReport {
    /// Scores over the summed counts of all documents.
    pub micro: Prf,
    /// Unweighted means of the per-document scores.
    #[serde(rename = "macro")]
    pub macro_avg: Prf,
    /// The counts each pooling was computed from, in document-name order.
    pub per_document: Vec<DocumentCounts>,
}

/// Scores how well predictions identify mentions or linked pairs.
///
/// For [`TargetKind::Timex`] and [`TargetKind::Event`] the compared items
/// are character spans of entities of that kind; entities without a span are
/// ignored. [`Matching::Strict`] demands exact span equality (as multisets),
/// [`Matching::Relaxed`] accepts any character overlap, pairing spans
/// greedily in position order with each span used at most once.
///
/// For [`TargetKind::TLinkPair`] the compared items are the unordered entity
/// id pairs carrying at least one tlink; relation labels and the `matching`
/// argument play no role.
///
/// Gold documents without a predicted counterpart count every gold item as
/// missed. Macro scores over an empty document list are defined as 1.0.
pub fn identification_scores(
    input: &EvaluationInput,
    kind: TargetKind,
    matching: Matching,
) -> IdentificationReport {
    let per_document: Vec<DocumentCounts> = input
        .pairs()
        .map(|(gold, pred)| match kind {
            TargetKind::Timex => span_counts(gold, pred, EntityKind::Timex, matching),
            TargetKind::Event => span_counts(gold, pred, EntityKind::Event, matching),
            TargetKind::TLinkPair => pair_counts(gold, pred),
        })
        .collect();
    pool(per_document)
}

fn pool(per_document: Vec<DocumentCounts>) -> IdentificationReport {
    let (tp, fp, missed) = per_document
        .iter()
        .fold((0, 0, 0), |(tp, fp, m), c| (tp + c.tp, fp + c.fp, m + c.missed));
    let micro = Prf::from_counts(tp, fp, missed);
    let macro_avg = if per_document.is_empty() {
        Prf::vacuous()
    } else {
        let n = per_document.len() as f64;
        let sum = per_document.iter().map(DocumentCounts::prf).fold(
            (0.0, 0.0, 0.0),
            |(p, r, f), s| (p + s.precision, r + s.recall, f + s.f1),
        );
        Prf { precision: sum.0 / n, recall: sum.1 / n, f1: sum.2 / n }
    };
    IdentificationReport { micro, macro_avg, per_document }
}

/// Character spans of a document's entities of one kind, sorted by position.
fn spans_of(doc: &Document, kind: EntityKind) -> Vec<(usize, usize)> {
    let mut spans: Vec<(usize, usize)> = doc
        .entities()
        .iter()
        .filter(|e| e.kind == kind)
        .filter_map(|e| e.span)
        .collect();
    spans.sort_unstable();
    spans
}

fn span_counts(
    gold: &Document,
    pred: Option<&Document>,
    kind: EntityKind,
    matching: Matching,
) -> DocumentCounts {
    let gold_spans = spans_of(gold, kind);
    let pred_spans = pred.map(|d| spans_of(d, kind)).unwrap_or_default();
    let tp = match matching {
        Matching::Strict => multiset_overlap(&gold_spans, &pred_spans),
        Matching::Relaxed => greedy_overlap(&gold_spans, &pred_spans),
    };
    DocumentCounts {
        document: gold.name().to_owned(),
        tp,
        fp: pred_spans.len() - tp,
        missed: gold_spans.len() - tp,
    }
}

/// Size of the multiset intersection of two sorted span lists.
fn multiset_overlap(gold: &[(usize, usize)], pred: &[(usize, usize)]) -> usize {
    let (mut i, mut j, mut tp) = (0, 0, 0);
    while i < gold.len() && j < pred.len() {
        match gold[i].cmp(&pred[j]) {
            std::cmp::Ordering::Equal => {
                tp += 1;
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    tp
}

/// Pairs overlapping spans greedily in position order, each used at most
/// once. Both lists must be sorted.
fn greedy_overlap(gold: &[(usize, usize)], pred: &[(usize, usize)]) -> usize {
    let (mut i, mut j, mut tp) = (0, 0, 0);
    while i < gold.len() && j < pred.len() {
        let (gs, ge) = gold[i];
        let (ps, pe) = pred[j];
        if gs < pe && ps < ge {
            tp += 1;
            i += 1;
            j += 1;
        } else if ge <= ps {
            i += 1;
        } else {
            j += 1;
        }
    }
    tp
}

/// Unordered entity-id pairs carrying at least one tlink.
fn linked_pairs(doc: &Document) -> BTreeSet<(String, String)> {
    doc.tlinks().iter().map(|t| unordered_pair(t)).collect()
}

fn unordered_pair(tlink: &TLink) -> (String, String) {
    let (s, t) = (tlink.source(), tlink.target());
    if s <= t {
        (s.to_owned(), t.to_owned())
    } else {
        (t.to_owned(), s.to_owned())
    }
}

fn pair_counts(gold: &Document, pred: Option<&Document>) -> DocumentCounts {
    let gold_pairs = linked_pairs(gold);
    let pred_pairs = pred.map(linked_pairs).unwrap_or_default();
    let tp = gold_pairs.intersection(&pred_pairs).count();
    DocumentCounts {
        document: gold.name().to_owned(),
        tp,
        fp: pred_pairs.len() - tp,
        missed: gold_pairs.len() - tp,
    }
}

/// Per-label counts and scores in a [`ClassificationReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelScores {
    /// Fraction of predictions with this label that were correct.
    pub precision: f64,
    /// Fraction of gold pairs with this label that were labelled correctly.
    pub recall: f64,
    /// Harmonic mean of precision and recall.
    pub f1: f64,
    /// Gold pairs with this label predicted with this label.
    pub tp: usize,
    /// Gold pairs predicted with this label whose gold label differs.
    pub fp: usize,
    /// Gold pairs with this label predicted otherwise or not at all.
    #[serde(rename = "fn")]
    pub missed: usize,
}

/// Relation-labelling scores over gold entity pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    /// Correctly labelled gold pairs divided by all gold pairs.
    pub micro_accuracy: f64,
    /// Scores per relation label, keyed by the normalized label name.
    pub per_label: BTreeMap<String, LabelScores>,
    /// Gold pairs across all documents.
    pub gold_pairs: usize,
    /// Gold pairs whose predicted relation matched exactly.
    pub correct: usize,
    /// Predicted pairs with no gold counterpart; not scored per label.
    pub spurious_predictions: usize,
}

/// Scores relation labels over the entity pairs annotated in the gold side.
///
/// Every tlink is first normalized to its unordered entity pair: the pair is
/// keyed by the lexicographically smaller id first, and the relation is
/// inverted whenever the stored direction disagrees. A prediction is correct
/// when its normalized relation equals the gold one, so `B after A` matches
/// gold `A before B`.
///
/// Predicted pairs absent from the gold side are counted as
/// `spurious_predictions` but do not enter the per-label scores. Two
/// predictions for the same pair in one document are an error. When gold
/// annotates the same pair more than once, the first annotation wins.
///
/// `micro_accuracy` divides correct pairs by all gold pairs; with no gold
/// pairs at all it is 1.0 if nothing was predicted and 0.0 otherwise.
pub fn classification_scores(
    input: &EvaluationInput,
) -> Result<ClassificationReport, MetricsError> {
    // label → (tp, fp, missed)
    let mut by_label: BTreeMap<String, (usize, usize, usize)> = BTreeMap::new();
    let mut gold_pairs = 0usize;
    let mut correct = 0usize;
    let mut spurious = 0usize;
    let mut total_predictions = 0usize;

    for (gold_doc, pred_doc) in input.pairs() {
        let mut gold_map: BTreeMap<(String, String), TemporalRelation> = BTreeMap::new();
        for tlink in gold_doc.tlinks() {
            let (pair, relation) = normalized(tlink);
            gold_map.entry(pair).or_insert(relation);
        }
        let mut pred_map: BTreeMap<(String, String), TemporalRelation> = BTreeMap::new();
        if let Some(doc) = pred_doc {
            for tlink in doc.tlinks() {
                total_predictions += 1;
                let (pair, relation) = normalized(tlink);
                if pred_map.insert(pair.clone(), relation).is_some() {
                    return Err(MetricsError::DuplicatePrediction {
                        document: gold_doc.name().to_owned(),
                        a: pair.0,
                        b: pair.1,
                    });
                }
            }
        }

        gold_pairs += gold_map.len();
        for (pair, gold_relation) in &gold_map {
            let gold_label = gold_relation.canonical_name();
            match pred_map.get(pair) {
                Some(pred_relation) if pred_relation == gold_relation => {
                    correct += 1;
                    by_label.entry(gold_label).or_default().0 += 1;
                }
                Some(pred_relation) => {
                    by_label.entry(gold_label).or_default().2 += 1;
                    by_label.entry(pred_relation.canonical_name()).or_default().1 += 1;
                }
                None => by_label.entry(gold_label).or_default().2 += 1,
            }
        }
        spurious += pred_map.keys().filter(|pair| !gold_map.contains_key(*pair)).count();
    }

    let per_label = by_label
        .into_iter()
        .map(|(label, (tp, fp, missed))| {
            let prf = Prf::from_counts(tp, fp, missed);
            (
                label,
                LabelScores {
                    precision: prf.precision,
                    recall: prf.recall,
                    f1: prf.f1,
                    tp,
                    fp,
                    missed,
                },
            )
        })
        .collect();
    let micro_accuracy = ratio_or_vacuous(correct, gold_pairs, total_predictions == 0);
    Ok(ClassificationReport {
        micro_accuracy,
        per_label,
        gold_pairs,
        correct,
        spurious_predictions: spurious,
    })
}

/// A tlink as (lexicographically ordered entity pair, matching relation).
fn normalized(tlink: &TLink) -> ((String, String), TemporalRelation) {
    if tlink.source() <= tlink.target() {
        (
            (tlink.source().to_owned(), tlink.target().to_owned()),
            tlink.relation().clone(),
        )
    } else {
        (
            (tlink.target().to_owned(), tlink.source().to_owned()),
            crate::relations::invert(tlink.relation()),
        )
    }
}

/// What to do with self-contradictory predictions before awareness scoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InconsistencyPolicy {
    /// Re-add links one at a time in input order, dropping each link that
    /// would contradict those already kept.
    DropGreedy,
    /// Refuse to score: inconsistent predictions are an error.
    FailHard,
}

/// Reduces a link set to a consistent subset according to `policy`.
///
/// Returns the kept links and the number dropped. Links are considered in
/// input order (annotation order, with ties between otherwise unordered
/// links broken by source and target id before calling this), so the result
/// is deterministic: under [`InconsistencyPolicy::DropGreedy`] a link is
/// dropped exactly when it contradicts the links kept before it. Consistent
/// input is returned unchanged under either policy.
pub fn resolve_inconsistencies(
    tlinks: &[TLink],
    policy: InconsistencyPolicy,
) -> Result<(Vec<TLink>, usize), MetricsError> {
    if timegraph::is_consistent(tlinks) {
        return Ok((tlinks.to_vec(), 0));
    }
    match policy {
        InconsistencyPolicy::FailHard => {
            let report = timegraph::check_consistency(tlinks);
            Err(MetricsError::InconsistentPredictions {
                document: None,
                witness: report.conflict.unwrap_or_default(),
            })
        }
        InconsistencyPolicy::DropGreedy => {
            let mut kept: Vec<TLink> = Vec::with_capacity(tlinks.len());
            let mut dropped = 0usize;
            for tlink in tlinks {
                kept.push(tlink.clone());
                if !timegraph::is_consistent(&kept) {
                    kept.pop();
                    dropped += 1;
                }
            }
            Ok((kept, dropped))
        }
    }
}

/// Awareness counts for one gold/prediction pair of link sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AwarenessCounts {
    /// Reduced predicted links entailed by the gold closure.
    pub precision_numerator: usize,
    /// All reduced predicted links.
    pub precision_denominator: usize,
    /// Reduced gold links entailed by the predicted closure.
    pub recall_numerator: usize,
    /// All reduced gold links.
    pub recall_denominator: usize,
    /// Predicted links dropped to restore consistency.
    pub dropped: usize,
    /// Predicted links over entities unknown to the gold links, excluded
    /// from scoring because nothing can verify them.
    pub spurious: usize,
}

impl AwarenessCounts {
    /// Temporal precision for these counts alone.
    pub fn precision(&self) -> f64 {
        ratio_or_vacuous(
            self.precision_numerator,
            self.precision_denominator,
            self.recall_denominator == 0,
        )
    }

    /// Temporal recall for these counts alone.
    pub fn recall(&self) -> f64 {
        ratio_or_vacuous(
            self.recall_numerator,
            self.recall_denominator,
            self.precision_denominator == 0,
        )
    }

    /// Harmonic mean of temporal precision and recall.
    pub fn tf1(&self) -> f64 {
        harmonic(self.precision(), self.recall())
    }
}

/// Scores one predicted link set against one gold link set.
///
/// Gold must be consistent — inconsistent gold is an error, not a score.
/// Predicted links over entities that no gold link mentions are set aside as
/// spurious (their correctness is unknowable), and what remains is repaired
/// per `policy`. Both sides are then reduced to their minimal link sets:
/// temporal precision is the fraction of reduced predicted links whose
/// relation is entailed by the gold closure, temporal recall the fraction of
/// reduced gold links entailed by the predicted closure. A link is entailed
/// when every defined endpoint order of its relation is reproduced exactly.
///
/// An empty reduced side makes its score 1.0 when the other reduced side is
/// empty too, and 0.0 otherwise.
pub fn temporal_awareness(
    gold: &[TLink],
    pred: &[TLink],
    policy: InconsistencyPolicy,
) -> Result<AwarenessCounts, MetricsError> {
    let gold_graph = Timegraph::build(gold).map_err(|err| match err {
        TimegraphError::Inconsistent { witness } => {
            MetricsError::InconsistentGold { document: None, witness }
        }
        other => MetricsError::from(other),
    })?;

    let gold_entities: BTreeSet<&str> = gold
        .iter()
        .flat_map(|t| [t.source(), t.target()])
        .collect();
    let (scorable, spurious): (Vec<TLink>, Vec<TLink>) = pred.iter().cloned().partition(|t| {
        gold_entities.contains(t.source()) && gold_entities.contains(t.target())
    });

    let (kept, dropped) = resolve_inconsistencies(&scorable, policy)?;
    let pred_graph = Timegraph::build(&kept)
        .expect("links kept by resolve_inconsistencies are consistent");

    let reduced_pred = pred_graph.reduction_links();
    let reduced_gold = gold_graph.reduction_links();
    let precision_numerator = reduced_pred
        .iter()
        .filter(|link| entails(&gold_graph, link))
        .count();
    let recall_numerator = reduced_gold
        .iter()
        .filter(|link| entails(&pred_graph, link))
        .count();

    Ok(AwarenessCounts {
        precision_numerator,
        precision_denominator: reduced_pred.len(),
        recall_numerator,
        recall_denominator: reduced_gold.len(),
        dropped,
        spurious: spurious.len(),
    })
}

/// Whether the graph's closure reproduces every defined endpoint order of
/// the link's relation. Links over entities the graph has never seen are
/// not entailed.
fn entails(graph: &Timegraph, link: &TLink) -> bool {
    let Ok(known) = graph.relation_between(link.source(), link.target()) else {
        return false;
    };
    let claimed = link.relation().point().as_array();
    let established = known.point().as_array();
    claimed
        .iter()
        .zip(established.iter())
        .all(|(c, e)| !c.is_defined() || c == e)
}

/// One document's awareness counts inside an [`AwarenessReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AwarenessDocument {
    /// Document name.
    pub document: String,
    /// The counts pooled into the dataset-level scores.
    #[serde(flatten)]
    pub counts: AwarenessCounts,
}

/// A document whose predictions had to be repaired before scoring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InconsistencyRecord {
    /// Document name.
    pub document: String,
    /// Predicted links dropped to restore consistency.
    pub dropped: usize,
}

/// Dataset-level temporal awareness scores.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AwarenessReport {
    /// Pooled fraction of reduced predicted links entailed by gold closures.
    pub temporal_precision: f64,
    /// Pooled fraction of reduced gold links entailed by prediction closures.
    pub temporal_recall: f64,
    /// Harmonic mean of the two.
    pub tf1: f64,
    /// The per-document counts the pooled scores were computed from.
    pub per_document: Vec<AwarenessDocument>,
    /// Documents whose predictions required repair, with dropped-link counts.
    pub inconsistency_log: Vec<InconsistencyRecord>,
    /// Predicted links excluded across all documents because their entities
    /// appear in no gold link.
    pub spurious_predictions: usize,
}

/// Pools [`temporal_awareness`] over every document of an input.
///
/// Numerators and denominators are summed across documents before the
/// division, so large documents weigh more than small ones. Documents whose
/// predictions needed repair are listed in the `inconsistency_log`.
pub fn temporal_awareness_dataset(
    input: &EvaluationInput,
    policy: InconsistencyPolicy,
) -> Result<AwarenessReport, MetricsError> {
    let mut per_document = Vec::with_capacity(input.len());
    let mut inconsistency_log = Vec::new();
    let mut spurious_predictions = 0usize;
    let (mut tp_num, mut tp_den, mut tr_num, mut tr_den) = (0usize, 0usize, 0usize, 0usize);

    for (gold_doc, pred_doc) in input.pairs() {
        let pred_links = pred_doc.map(|d| d.tlinks()).unwrap_or(&[]);
        let counts = temporal_awareness(gold_doc.tlinks(), pred_links, policy).map_err(
            |err| match err {
                MetricsError::InconsistentGold { witness, .. } => MetricsError::InconsistentGold {
                    document: Some(gold_doc.name().to_owned()),
                    witness,
                },
                MetricsError::InconsistentPredictions { witness, .. } => {
                    MetricsError::InconsistentPredictions {
                        document: Some(gold_doc.name().to_owned()),
                        witness,
                    }
                }
                other => other,
            },
        )?;
        tp_num += counts.precision_numerator;
        tp_den += counts.precision_denominator;
        tr_num += counts.recall_numerator;
        tr_den += counts.recall_denominator;
        spurious_predictions += counts.spurious;
        if counts.dropped > 0 {
            inconsistency_log.push(InconsistencyRecord {
                document: gold_doc.name().to_owned(),
                dropped: counts.dropped,
            });
        }
        per_document.push(AwarenessDocument { document: gold_doc.name().to_owned(), counts });
    }

    let temporal_precision = ratio_or_vacuous(tp_num, tp_den, tr_den == 0);
    let temporal_recall = ratio_or_vacuous(tr_num, tr_den, tp_den == 0);
    Ok(AwarenessReport {
        temporal_precision,
        temporal_recall,
        tf1: harmonic(temporal_precision, temporal_recall),
        per_document,
        inconsistency_log,
        spurious_predictions,
    })
}
