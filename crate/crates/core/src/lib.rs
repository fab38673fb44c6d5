//! Temporal information extraction toolkit.
//!
//! `tiekit` provides a unified in-memory model for temporally annotated
//! corpora (events, time expressions, and the temporal links between them),
//! together with the machinery such corpora usually demand:
//!
//! - [`relations`] — temporal relations in endpoint normal form: the 13
//!   interval relations, partial ("vague") relations, saturation, inversion,
//!   and parsers for the label conventions found in the wild.
//! - [`model`] — documents, entities, tlinks, and datasets with validated
//!   invariants (unique ids, resolvable endpoints, exact text spans).
//! - [`timegraph`] — a point-based reasoner over endpoint equality classes:
//!   consistency checking, entailment queries, temporal closure, and
//!   transitive reduction.
//! - [`readers`] — TimeML XML and delimiter-separated tlink files, a
//!   registry-driven downloader, and a canonical JSON-lines interchange
//!   format.
//! - [`metrics`] — evaluation for the four standard subtasks: timex/event
//!   identification, tlink identification, and tlink classification with
//!   the closure-based temporal awareness scores.
//! - [`cli`] — the `tiekit` command-line tool wiring it all together.

pub mod cli;
pub mod metrics;
pub mod model;
pub mod readers;
pub mod relations;
pub mod timegraph;

pub use metrics::{
    classification_scores, identification_scores, resolve_inconsistencies, temporal_awareness,
    temporal_awareness_dataset, AwarenessCounts, AwarenessReport, ClassificationReport,
    EvaluationInput, IdentificationReport, InconsistencyPolicy, Matching, MetricsError,
    TargetKind,
};
pub use model::{
    dataset_stats, find_duplicate_texts, split_stats, Dataset, DatasetStats, Document, Entity,
    EntityKind, ModelError, TLink,
};
pub use readers::{
    fetch, read_dataset, read_dataset_with_warnings, read_jsonl, read_tabular, read_timeml,
    write_jsonl, CorpusFormat, ReadError, ReaderWarning, Registry, TabularSchema,
};
pub use relations::{
    enumerate_complete_relations, interval_to_point, invert, parse_relation, point_to_interval,
    saturate_point, Convention, IntervalRelation, PointOrder, PointRelation, RelationError,
    TemporalRelation,
};
pub use timegraph::{
    check_consistency, is_consistent, temporal_closure, temporal_reduction, ConsistencyReport,
    Timegraph, TimegraphError,
};
