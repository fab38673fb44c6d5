//! The `tiekit` command-line tool.
//!
//! Five subcommands cover the usual corpus workflows:
//!
//! * `fetch <name>` — download and unpack a registry corpus into the data
//!   directory;
//! * `stats <corpus>` — per-split document/event/timex/tlink counts;
//! * `closure <file>` — temporal closure of one document's tlinks;
//! * `evaluate --task <t> <gold> <predictions>` — identification,
//!   classification, and awareness scores;
//! * `convert <input> --to jsonl` — rewrite any supported format as
//!   canonical JSON lines.
//!
//! Exit codes are a stable contract: 0 on success, 1 for input or
//! configuration problems, 2 for temporally inconsistent input where the
//! command demands consistency. With `--output json` exactly one JSON object
//! is printed to standard output; human-oriented notes go to standard error.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

use crate::metrics::{
    classification_scores, identification_scores, temporal_awareness_dataset, EvaluationInput,
    InconsistencyPolicy, Matching, MetricsError, TargetKind,
};
use crate::model::{split_stats, Document};
use crate::readers::{
    self, read_dataset_with_warnings, read_jsonl, read_tabular_with_warnings,
    read_timeml_with_warnings, write_jsonl, ColumnRole, ReadError, ReaderWarning, Registry,
    TabularSchema,
};
use crate::relations::Convention;
use crate::timegraph::{temporal_closure, TimegraphError};

/// Resolved global settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct CliConfig {
    /// Where fetched corpora live; created on demand.
    pub data_dir: PathBuf,
    /// The corpus registry; a missing file acts as an empty registry for
    /// every command except `fetch`, which needs real entries.
    pub registry_path: PathBuf,
    /// Report format on standard output.
    pub output: OutputMode,
}

/// How reports are rendered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    /// Human-readable lines and tables.
    Text,
    /// One JSON object on standard output, nothing else.
    Json,
}

#[derive(Parser)]
#[command(
    name = "tiekit",
    version,
    about = "Temporal information extraction toolkit",
    max_term_width = 100
)]
struct Cli {
    /// Directory corpora are fetched into.
    #[arg(long, global = true, env = "TIE_DATA_DIR", default_value = "./data")]
    data_dir: PathBuf,

    /// Corpus registry file (TOML).
    #[arg(long, global = true, default_value = "./registry.toml")]
    registry: PathBuf,

    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = OutputMode::Text)]
    output: OutputMode,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Download a registry corpus into the data directory.
    Fetch {
        /// Corpus name as listed in the registry.
        name: String,
    },
    /// Count documents, events, timexs, and tlinks per split.
    Stats {
        /// Registry corpus name, or a path (TimeML directory or file, JSONL).
        corpus: String,
    },
    /// Print the temporal closure of one document's tlinks.
    Closure {
        /// A TimeML file or a JSONL file holding exactly one document.
        input: PathBuf,
        /// Force the input format instead of inferring it from the extension.
        #[arg(long, value_enum)]
        format: Option<DocFormat>,
    },
    /// Score predictions against gold annotations.
    Evaluate {
        /// Which subtask to score.
        #[arg(long, value_enum)]
        task: Task,
        /// Gold side: registry corpus name, TimeML directory or file, or JSONL.
        gold: String,
        /// Predictions in canonical JSONL.
        predictions: PathBuf,
        /// Span comparison for the identification tasks.
        #[arg(long, value_enum, default_value_t = MatchingArg::Strict)]
        matching: MatchingArg,
        /// What to do with self-contradictory predictions (tlink-cls only).
        #[arg(long, value_enum, default_value_t = PolicyArg::DropGreedy)]
        inconsistency_policy: PolicyArg,
    },
    /// Rewrite a corpus in the canonical JSONL interchange format.
    Convert {
        /// Registry corpus name, TimeML directory or file, JSONL, or a
        /// delimiter-separated tlink table (.csv/.tsv/.tab, or --columns).
        input: String,
        /// Target format.
        #[arg(long, value_enum, default_value_t = ConvertTarget::Jsonl)]
        to: ConvertTarget,
        /// Output path; defaults to the input name with a .jsonl extension.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Column roles of a tabular input, comma-separated
        /// (doc_name,source_id,target_id,relation,ignore). Omitting this for
        /// a tabular input assumes the MATRES column layout.
        #[arg(long)]
        columns: Option<String>,
        /// Field delimiter of a tabular input.
        #[arg(long, default_value_t = '\t')]
        delimiter: char,
        /// Whether a tabular input starts with a header row to skip.
        #[arg(long, default_value_t = false)]
        has_header: bool,
        /// Relation label convention of a tabular input.
        #[arg(long, default_value = "matres")]
        convention: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Task {
    /// Time-expression identification (span matching).
    TimexId,
    /// Event identification (span matching).
    EventId,
    /// TLink identification (unordered entity pairs).
    TlinkId,
    /// TLink classification plus temporal awareness.
    TlinkCls,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MatchingArg {
    Strict,
    Relaxed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    DropGreedy,
    FailHard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DocFormat {
    Timeml,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConvertTarget {
    Jsonl,
}

/// A command failure: message for standard error plus the process exit code.
struct Failure {
    message: String,
    code: i32,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure { message: message.into(), code: 1 }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<ReadError> for Failure {
    fn from(err: ReadError) -> Failure {
        Failure::input(err.to_string())
    }
}

impl From<MetricsError> for Failure {
    fn from(err: MetricsError) -> Failure {
        let code = match err {
            MetricsError::InconsistentGold { .. }
            | MetricsError::InconsistentPredictions { .. } => 2,
            _ => 1,
        };
        Failure { message: err.to_string(), code }
    }
}

/// Parse the process arguments, run the selected command, and return the
/// exit code for the process.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let informational =
                matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = err.print();
            return if informational { 0 } else { 1 };
        }
    };
    let config = CliConfig {
        data_dir: cli.data_dir,
        registry_path: cli.registry,
        output: cli.output,
    };
    match execute(cli.command, &config) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {failure}");
            failure.code
        }
    }
}

fn execute(command: Command, config: &CliConfig) -> Result<i32, Failure> {
    match command {
        Command::Fetch { name } => cmd_fetch(config, &name),
        Command::Stats { corpus } => cmd_stats(config, &corpus),
        Command::Closure { input, format } => cmd_closure(config, &input, format),
        Command::Evaluate { task, gold, predictions, matching, inconsistency_policy } => {
            cmd_evaluate(config, task, &gold, &predictions, matching, inconsistency_policy)
        }
        Command::Convert { input, to, out, columns, delimiter, has_header, convention } => {
            let ConvertTarget::Jsonl = to;
            cmd_convert(config, &input, out, columns.as_deref(), delimiter, has_header, &convention)
        }
    }
}

/// The registry, or an empty one when the file does not exist.
fn load_registry(config: &CliConfig) -> Result<Registry, Failure> {
    if config.registry_path.is_file() {
        Ok(Registry::load(&config.registry_path)?)
    } else {
        Ok(Registry::empty())
    }
}

fn report_warnings(warnings: &[ReaderWarning]) {
    for warning in warnings {
        eprintln!("warning: {warning}");
    }
}

fn print_json(value: &serde_json::Value) {
    println!("{value}");
}

fn cmd_fetch(config: &CliConfig, name: &str) -> Result<i32, Failure> {
    if !config.registry_path.is_file() {
        return Err(Failure::input(format!(
            "registry not found at {}",
            config.registry_path.display()
        )));
    }
    let registry = load_registry(config)?;
    let already_present = readers::is_fetched(name, &config.data_dir);
    let path = readers::fetch(name, &registry, &config.data_dir)?;
    match config.output {
        OutputMode::Json => print_json(&serde_json::json!({
            "name": name,
            "path": path.display().to_string(),
            "already_present": already_present,
        })),
        OutputMode::Text => {
            if already_present {
                println!("{name} already present at {}", path.display());
            } else {
                println!("fetched {name} to {}", path.display());
            }
        }
    }
    Ok(0)
}

fn cmd_stats(config: &CliConfig, corpus: &str) -> Result<i32, Failure> {
    let registry = load_registry(config)?;
    let (dataset, warnings) = read_dataset_with_warnings(corpus, &registry, &config.data_dir)?;
    report_warnings(&warnings);

    let train = split_stats(dataset.train());
    let test = split_stats(dataset.test());
    let total = train + test;
    match config.output {
        OutputMode::Json => print_json(&serde_json::json!({
            "corpus": dataset.name(),
            "splits": { "train": train, "test": test },
            "total": total,
        })),
        OutputMode::Text => {
            println!("corpus: {}", dataset.name());
            println!("{:<8} {:>10} {:>8} {:>8} {:>8}", "split", "documents", "events", "timexs", "tlinks");
            for (label, stats) in [("train", train), ("test", test), ("total", total)] {
                println!(
                    "{:<8} {:>10} {:>8} {:>8} {:>8}",
                    label, stats.docs, stats.events, stats.timexs, stats.tlinks
                );
            }
        }
    }
    Ok(0)
}

/// Parse the single document a `closure` invocation operates on.
fn load_single_document(input: &Path, format: Option<DocFormat>) -> Result<Document, Failure> {
    let format = match format {
        Some(f) => f,
        None => match input.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase) {
            Some(ext) if ext == "tml" || ext == "xml" => DocFormat::Timeml,
            Some(ext) if ext == "jsonl" => DocFormat::Jsonl,
            _ => {
                return Err(Failure::input(format!(
                    "cannot infer the format of {}; pass --format",
                    input.display()
                )))
            }
        },
    };
    match format {
        DocFormat::Timeml => {
            let (doc, warnings) = read_timeml_with_warnings(input)?;
            report_warnings(&warnings);
            Ok(doc)
        }
        DocFormat::Jsonl => {
            let dataset = read_jsonl(input)?;
            let mut docs = dataset.documents();
            match (docs.next(), docs.next()) {
                (Some(doc), None) => Ok(doc.clone()),
                (first, _) => {
                    let found = dataset.documents().count().max(usize::from(first.is_some()));
                    Err(Failure::input(format!(
                        "closure expects exactly one document, found {found} in {}",
                        input.display()
                    )))
                }
            }
        }
    }
}

fn cmd_closure(
    config: &CliConfig,
    input: &Path,
    format: Option<DocFormat>,
) -> Result<i32, Failure> {
    let document = load_single_document(input, format)?;
    match temporal_closure(document.tlinks()) {
        Ok(links) => {
            let records = readers::tlinks_to_json(&links);
            match config.output {
                OutputMode::Json => print_json(&serde_json::json!({ "tlinks": records })),
                OutputMode::Text => {
                    for record in records.as_array().into_iter().flatten() {
                        println!("{record}");
                    }
                }
            }
            Ok(0)
        }
        Err(TimegraphError::Inconsistent { witness }) => {
            let records = readers::tlinks_to_json(&witness);
            match config.output {
                OutputMode::Json => print_json(&serde_json::json!({
                    "consistent": false,
                    "witness": records,
                })),
                OutputMode::Text => {
                    eprintln!(
                        "input is temporally inconsistent; {} conflicting tlinks:",
                        witness.len()
                    );
                    for record in records.as_array().into_iter().flatten() {
                        eprintln!("{record}");
                    }
                }
            }
            Ok(2)
        }
        Err(other) => Err(Failure::input(other.to_string())),
    }
}

fn cmd_evaluate(
    config: &CliConfig,
    task: Task,
    gold: &str,
    predictions: &Path,
    matching: MatchingArg,
    policy: PolicyArg,
) -> Result<i32, Failure> {
    let registry = load_registry(config)?;
    let (gold_ds, warnings) = read_dataset_with_warnings(gold, &registry, &config.data_dir)?;
    report_warnings(&warnings);

    if predictions.extension().and_then(|e| e.to_str()) != Some("jsonl") {
        return Err(Failure::input(format!(
            "predictions must be a canonical JSONL file, got {}",
            predictions.display()
        )));
    }
    let pred_ds = read_jsonl(predictions)?;
    let input = EvaluationInput::from_datasets(&gold_ds, &pred_ds)?;

    let matching = match matching {
        MatchingArg::Strict => Matching::Strict,
        MatchingArg::Relaxed => Matching::Relaxed,
    };
    let kind = match task {
        Task::TimexId => TargetKind::Timex,
        Task::EventId => TargetKind::Event,
        Task::TlinkId => TargetKind::TLinkPair,
        Task::TlinkCls => return evaluate_classification(config, &input, policy),
    };

    let report = identification_scores(&input, kind, matching);
    match config.output {
        OutputMode::Json => print_json(&serde_json::to_value(&report).expect("report is JSON")),
        OutputMode::Text => {
            println!("documents: {}", report.per_document.len());
            for (label, prf) in [("micro", report.micro), ("macro", report.macro_avg)] {
                println!(
                    "{label:<6} precision {:.4}  recall {:.4}  f1 {:.4}",
                    prf.precision, prf.recall, prf.f1
                );
            }
        }
    }
    Ok(0)
}

fn evaluate_classification(
    config: &CliConfig,
    input: &EvaluationInput,
    policy: PolicyArg,
) -> Result<i32, Failure> {
    let policy = match policy {
        PolicyArg::DropGreedy => InconsistencyPolicy::DropGreedy,
        PolicyArg::FailHard => InconsistencyPolicy::FailHard,
    };
    let classification = classification_scores(input)?;
    let awareness = temporal_awareness_dataset(input, policy)?;
    match config.output {
        OutputMode::Json => print_json(&serde_json::json!({
            "classification": classification,
            "awareness": awareness,
        })),
        OutputMode::Text => {
            println!(
                "gold pairs: {}  correct: {}  spurious predictions: {}",
                classification.gold_pairs, classification.correct,
                classification.spurious_predictions
            );
            println!("micro accuracy: {:.4}", classification.micro_accuracy);
            if !classification.per_label.is_empty() {
                println!(
                    "{:<16} {:>9} {:>9} {:>9} {:>5} {:>5} {:>5}",
                    "label", "precision", "recall", "f1", "tp", "fp", "fn"
                );
                for (label, scores) in &classification.per_label {
                    println!(
                        "{:<16} {:>9.4} {:>9.4} {:>9.4} {:>5} {:>5} {:>5}",
                        label, scores.precision, scores.recall, scores.f1,
                        scores.tp, scores.fp, scores.missed
                    );
                }
            }
            println!(
                "temporal precision: {:.4}  temporal recall: {:.4}  tf1: {:.4}",
                awareness.temporal_precision, awareness.temporal_recall, awareness.tf1
            );
            if !awareness.inconsistency_log.is_empty() {
                let dropped: usize =
                    awareness.inconsistency_log.iter().map(|r| r.dropped).sum();
                println!(
                    "repaired documents: {} ({} links dropped)",
                    awareness.inconsistency_log.len(),
                    dropped
                );
            }
        }
    }
    Ok(0)
}

/// File extensions treated as delimiter-separated tlink tables.
fn looks_tabular(input: &str) -> bool {
    Path::new(input)
        .extension()
        .and_then(|e| e.to_str())
        .map(|ext| matches!(ext.to_ascii_lowercase().as_str(), "csv" | "tsv" | "tab"))
        .unwrap_or(false)
}

#[allow(clippy::too_many_arguments)]
fn cmd_convert(
    config: &CliConfig,
    input: &str,
    out: Option<PathBuf>,
    columns: Option<&str>,
    delimiter: char,
    has_header: bool,
    convention: &str,
) -> Result<i32, Failure> {
    let (dataset, warnings) = if columns.is_some() || looks_tabular(input) {
        let schema = match columns {
            Some(spec) => {
                let roles = spec
                    .split(',')
                    .map(|role| ColumnRole::from_str(role.trim()))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(Failure::input)?;
                if !delimiter.is_ascii() {
                    return Err(Failure::input("delimiter must be a single ASCII character"));
                }
                TabularSchema::new(roles, delimiter as u8, has_header)?
            }
            None => TabularSchema::matres(),
        };
        let convention = Convention::from_str(convention)
            .map_err(|err| Failure::input(err.to_string()))?;
        read_tabular_with_warnings(Path::new(input), &schema, convention, None)?
    } else {
        let registry = load_registry(config)?;
        read_dataset_with_warnings(input, &registry, &config.data_dir)?
    };
    report_warnings(&warnings);

    let out = out.unwrap_or_else(|| default_convert_path(input));
    if out.as_os_str() == input {
        return Err(Failure::input(format!(
            "refusing to overwrite the input; pass --out, got {}",
            out.display()
        )));
    }
    write_jsonl(&dataset, &out)?;
    let documents = dataset.documents().count();
    match config.output {
        OutputMode::Json => print_json(&serde_json::json!({
            "documents": documents,
            "path": out.display().to_string(),
        })),
        OutputMode::Text => println!("wrote {documents} documents to {}", out.display()),
    }
    Ok(0)
}

/// `corpus.tml` → `corpus.jsonl`, `dir/` → `dir.jsonl`, names likewise.
fn default_convert_path(input: &str) -> PathBuf {
    let trimmed = input.trim_end_matches(['/', '\\']);
    Path::new(trimmed).with_extension("jsonl")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_output_paths_swap_extensions() {
        assert_eq!(default_convert_path("corpus.tml"), PathBuf::from("corpus.jsonl"));
        assert_eq!(default_convert_path("data/dir/"), PathBuf::from("data/dir.jsonl"));
        assert_eq!(default_convert_path("fixture_corpus"), PathBuf::from("fixture_corpus.jsonl"));
    }

    #[test]
    fn tabular_inputs_are_recognized_by_extension() {
        assert!(looks_tabular("a/b.tsv"));
        assert!(looks_tabular("a/B.CSV"));
        assert!(!looks_tabular("a/b.jsonl"));
        assert!(!looks_tabular("name"));
    }

    #[test]
    fn argument_parsing_covers_the_documented_surface() {
        let cli = Cli::try_parse_from([
            "tiekit",
            "evaluate",
            "--task",
            "tlink-cls",
            "gold.jsonl",
            "pred.jsonl",
            "--inconsistency-policy",
            "fail-hard",
            "--output",
            "json",
        ])
        .unwrap();
        assert_eq!(cli.output, OutputMode::Json);
        match cli.command {
            Command::Evaluate { task, inconsistency_policy, matching, .. } => {
                assert_eq!(task, Task::TlinkCls);
                assert_eq!(inconsistency_policy, PolicyArg::FailHard);
                assert_eq!(matching, MatchingArg::Strict);
            }
            _ => panic!("parsed into the wrong subcommand"),
        }
    }

    #[test]
    fn data_dir_defaults_and_parses() {
        let cli = Cli::try_parse_from(["tiekit", "stats", "x"]).unwrap();
        assert_eq!(cli.data_dir, PathBuf::from("./data"));
        assert_eq!(cli.registry, PathBuf::from("./registry.toml"));
        assert_eq!(cli.output, OutputMode::Text);
    }

    #[test]
    fn closure_format_inference_rejects_unknown_extensions() {
        let err = load_single_document(Path::new("doc.txt"), None).unwrap_err();
        assert_eq!(err.code, 1);
        assert!(err.message.contains("--format"));
    }
}
