use std::path::{Path, PathBuf};

use tiekit::metrics::{
    classification_scores, identification_scores, temporal_awareness, temporal_awareness_dataset,
    EvaluationInput, InconsistencyPolicy, Matching, MetricsError, TargetKind,
};
use tiekit::model::Document;
use tiekit::readers::{document_from_json, read_jsonl, read_timeml, Registry};

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

/// Every parseable bundled document, across formats.
fn all_fixture_documents() -> Vec<Document> {
    let mut docs = Vec::new();
    let dir = fixture("timeml");
    let ds = tiekit::readers::read_dataset(dir.to_str().unwrap(), &Registry::empty(), Path::new("."))
        .unwrap();
    docs.extend(ds.documents().cloned());
    docs.push(read_timeml(fixture("edge/chain_meets.tml")).unwrap());
    docs.extend(
        read_jsonl(fixture("jsonl/awareness_gold.jsonl"))
            .unwrap()
            .documents()
            .cloned(),
    );
    docs
}

#[test]
fn gold_scored_against_itself_is_perfect() {
    let docs = all_fixture_documents();
    let input = EvaluationInput::new(&docs, &docs).unwrap();

    for kind in [TargetKind::Timex, TargetKind::Event, TargetKind::TLinkPair] {
        for matching in [Matching::Strict, Matching::Relaxed] {
            let report = identification_scores(&input, kind, matching);
            assert_eq!(report.micro.f1, 1.0, "{kind:?}/{matching:?} micro");
            assert_eq!(report.macro_avg.f1, 1.0, "{kind:?}/{matching:?} macro");
            for doc in &report.per_document {
                assert_eq!(doc.fp, 0, "{}", doc.document);
                assert_eq!(doc.missed, 0, "{}", doc.document);
            }
        }
    }

    let classification = classification_scores(&input).unwrap();
    assert_eq!(classification.micro_accuracy, 1.0);
    assert_eq!(classification.spurious_predictions, 0);

    // FailHard proves no repair was silently needed anywhere.
    let awareness = temporal_awareness_dataset(&input, InconsistencyPolicy::FailHard).unwrap();
    assert_eq!(awareness.temporal_precision, 1.0);
    assert_eq!(awareness.temporal_recall, 1.0);
    assert_eq!(awareness.tf1, 1.0);
    assert!(awareness.inconsistency_log.is_empty());
    assert_eq!(awareness.spurious_predictions, 0);
}

#[test]
fn the_entailment_example_scores_as_worked_out_by_hand() {
    let gold = read_jsonl(fixture("jsonl/awareness_gold.jsonl")).unwrap();
    let pred = read_jsonl(fixture("jsonl/awareness_pred.jsonl")).unwrap();
    let input = EvaluationInput::from_datasets(&gold, &pred).unwrap();

    let report = temporal_awareness_dataset(&input, InconsistencyPolicy::FailHard).unwrap();
    assert_eq!(report.temporal_precision, 1.0);
    assert_eq!(report.temporal_recall, 0.5);
    assert!((report.tf1 - 2.0 / 3.0).abs() < 5e-4);
}

#[test]
fn inconsistent_gold_is_an_error_not_a_score() {
    let ds = read_jsonl(fixture("jsonl/cycle.jsonl")).unwrap();
    let doc = ds.documents().next().unwrap();
    match temporal_awareness(doc.tlinks(), doc.tlinks(), InconsistencyPolicy::DropGreedy) {
        Err(MetricsError::InconsistentGold { witness, .. }) => {
            assert!(!witness.is_empty());
            assert!(witness.len() <= 3);
        }
        other => panic!("expected inconsistent gold, got {other:?}"),
    }
}

#[test]
fn matching_modes_differ_exactly_on_partial_overlap() {
    let gold: Document = document_from_json(
        r#"{"name":"d","text":"last week it rained","dct":{"id":"t0","kind":"timex","text":"","attributes":{"functionInDocument":"CREATION_TIME","value":"2020-01-01"}},"entities":[{"id":"t1","kind":"timex","text":"last week","span":[0,9]}],"tlinks":[]}"#,
    )
    .unwrap();
    let pred: Document = document_from_json(
        r#"{"name":"d","text":"last week it rained","dct":{"id":"t0","kind":"timex","text":"","attributes":{"functionInDocument":"CREATION_TIME","value":"2020-01-01"}},"entities":[{"id":"t1","kind":"timex","text":"week","span":[5,9]}],"tlinks":[]}"#,
    )
    .unwrap();

    let gold_docs = [gold];
    let pred_docs = [pred];
    let input = EvaluationInput::new(&gold_docs, &pred_docs).unwrap();

    let strict = identification_scores(&input, TargetKind::Timex, Matching::Strict);
    assert_eq!(strict.micro.f1, 0.0);

    let relaxed = identification_scores(&input, TargetKind::Timex, Matching::Relaxed);
    assert_eq!(relaxed.micro.f1, 1.0);
}

#[test]
fn flipped_prediction_orientation_still_counts_as_correct() {
    let gold: Document = document_from_json(
        r#"{"name":"d","text":"","dct":{"id":"t0","kind":"timex","text":"","attributes":{"functionInDocument":"CREATION_TIME"}},"entities":[{"id":"e1","kind":"event","text":"a"},{"id":"e2","kind":"event","text":"b"}],"tlinks":[{"id":"l1","source":"e1","target":"e2","relation":{"xs_ys":"<","xs_ye":"<","xe_ys":"<","xe_ye":"<"}}]}"#,
    )
    .unwrap();
    let pred: Document = document_from_json(
        r#"{"name":"d","text":"","dct":{"id":"t0","kind":"timex","text":"","attributes":{"functionInDocument":"CREATION_TIME"}},"entities":[{"id":"e1","kind":"event","text":"a"},{"id":"e2","kind":"event","text":"b"}],"tlinks":[{"id":"p1","source":"e2","target":"e1","relation":{"xs_ys":">","xs_ye":">","xe_ys":">","xe_ye":">"}}]}"#,
    )
    .unwrap();

    let gold_docs = [gold];
    let pred_docs = [pred];
    let input = EvaluationInput::new(&gold_docs, &pred_docs).unwrap();
    let report = classification_scores(&input).unwrap();
    assert_eq!(report.micro_accuracy, 1.0);
    assert_eq!(report.gold_pairs, 1);
    assert_eq!(report.correct, 1);
}

#[test]
fn predictions_for_unknown_documents_are_refused() {
    let gold = read_jsonl(fixture("jsonl/awareness_gold.jsonl")).unwrap();
    let pred = read_jsonl(fixture("jsonl/cycle.jsonl")).unwrap();
    match EvaluationInput::from_datasets(&gold, &pred) {
        Err(MetricsError::UnknownPredictionDocument { name }) => assert_eq!(name, "cycle_doc"),
        other => panic!("expected an unknown-document error, got {other:?}"),
    }
}
