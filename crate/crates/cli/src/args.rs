//! Argument surface for every subcommand.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "policy-audit",
    version,
    about = "Audit privacy policies for GDPR Article 13 disclosures and readability",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Read, clean, and filter the policy files listed in a manifest
    Ingest(IngestArgs),
    /// Summarize an ingested corpus, optionally with gold annotations
    Stats(StatsArgs),
    /// Train the sentence classifier on gold annotations
    Train(TrainArgs),
    /// Merge annotator triples into gold data, or score predictions
    Evaluate(EvaluateArgs),
    /// Label every sentence of a corpus with a trained model
    Classify(ClassifyArgs),
    /// Run the full compliance and readability audit
    Audit(AuditArgs),
    /// Re-render the markdown report from existing audit artifacts
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Manifest CSV or JSON listing the policy files
    #[arg(long)]
    pub manifest: PathBuf,
    /// Corpus JSONL output path
    #[arg(long)]
    pub output: PathBuf,
    /// Optional JSON ingestion log (summary plus per-entry errors)
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// Minimum document size in bytes
    #[arg(long, default_value_t = 2048)]
    pub min_bytes: usize,
    /// Minimum stopword share for English detection; 0 disables
    #[arg(long, default_value_t = 0.08)]
    pub language_threshold: f64,
    /// Measure --min-bytes against the cleaned text instead of the raw file
    #[arg(long)]
    pub size_on_cleaned_text: bool,
    /// Treat unreadable manifest entries as fatal
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Corpus JSONL produced by `ingest`
    #[arg(long)]
    pub corpus: PathBuf,
    /// Gold annotations JSONL for per-label statistics
    #[arg(long)]
    pub gold: Option<PathBuf>,
    /// Statistics JSON output; defaults to stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also write the per-label table as CSV
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Gold annotations JSONL
    #[arg(long)]
    pub gold: PathBuf,
    /// Where to write the trained model JSON
    #[arg(long)]
    pub model_out: PathBuf,
    /// Train/test split, e.g. 80/20
    #[arg(long, default_value = "80/20")]
    pub split: SplitSpec,
    /// Seed for the split shuffle
    #[arg(long, default_value_t = 0)]
    pub split_seed: u64,
    /// Seed for training-time randomness (oversampling draws)
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Oversample minority labels to the majority count
    #[arg(long)]
    pub oversample: bool,
    /// Full-batch optimizer epochs
    #[arg(long, default_value_t = 100)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.1)]
    pub learning_rate: f64,
    /// Learning rate decay per epoch: lr / (1 + decay * epoch)
    #[arg(long, default_value_t = 0.01)]
    pub lr_decay: f64,
    /// L2 penalty on weights
    #[arg(long, default_value_t = 0.01)]
    pub l2_penalty: f64,
    /// Write the held-out evaluation report JSON here
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["triples", "gold"])))]
pub struct EvaluateArgs {
    /// Annotator triples JSONL; selects merge mode
    #[arg(long, requires = "gold_out", conflicts_with_all = ["predictions", "report"])]
    pub triples: Option<PathBuf>,
    /// Unanimous gold JSONL output (merge mode)
    #[arg(long)]
    pub gold_out: Option<PathBuf>,
    /// Disputed triples JSONL output (merge mode)
    #[arg(long)]
    pub disputes_out: Option<PathBuf>,
    /// Gold annotations JSONL; selects scoring mode
    #[arg(long, requires = "predictions", conflicts_with_all = ["gold_out", "disputes_out"])]
    pub gold: Option<PathBuf>,
    /// Predictions JSONL to score
    #[arg(long)]
    pub predictions: Option<PathBuf>,
    /// Write the evaluation report JSON here
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["corpus", "sentences"])))]
pub struct ClassifyArgs {
    /// Trained model JSON
    #[arg(long)]
    pub model: PathBuf,
    /// Corpus JSONL; accepted documents are segmented and labelled
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Pre-segmented sentences JSONL to label directly
    #[arg(long)]
    pub sentences: Option<PathBuf>,
    /// Predictions JSONL output
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["manifest", "corpus"])))]
#[command(group(ArgGroup::new("classifier").required(true).args(["model", "predictions"])))]
pub struct AuditArgs {
    /// Manifest CSV or JSON; the corpus is ingested as part of the audit
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Pre-ingested corpus JSONL
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Trained model JSON used to label sentences
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// External predictions JSONL covering every corpus sentence
    #[arg(long)]
    pub predictions: Option<PathBuf>,
    /// Directory for all audit artifacts
    #[arg(long, env = "POLICY_AUDIT_OUTPUT_DIR")]
    pub output_dir: PathBuf,
    /// Artifact formats to write
    #[arg(
        long,
        value_delimiter = ',',
        default_values_t = [OutputFormat::Json, OutputFormat::Csv, OutputFormat::Markdown]
    )]
    pub formats: Vec<OutputFormat>,
    /// Recorded in the audit log; the audit itself draws no randomness
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Minimum supporting sentences for a rule to count as present
    #[arg(long, default_value_t = 1)]
    pub min_evidence: usize,
    /// Minimum document size in bytes (with --manifest)
    #[arg(long, default_value_t = 2048)]
    pub min_bytes: usize,
    /// Minimum stopword share for English detection; 0 disables (with --manifest)
    #[arg(long, default_value_t = 0.08)]
    pub language_threshold: f64,
    /// Measure --min-bytes against the cleaned text (with --manifest)
    #[arg(long)]
    pub size_on_cleaned_text: bool,
    /// Escalate warnings (unreadable entries, undefined readability) to errors
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Directory holding the JSON artifacts of a previous audit
    #[arg(long)]
    pub input_dir: PathBuf,
    /// Markdown output; defaults to <input-dir>/audit.md
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Train/test proportions written as `TRAIN/TEST`, e.g. `80/20`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub train_fraction: f64,
}

impl FromStr for SplitSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (train, test) = s
            .split_once('/')
            .ok_or_else(|| format!("expected TRAIN/TEST, e.g. 80/20, got {s:?}"))?;
        let train: f64 = train
            .trim()
            .parse()
            .map_err(|_| format!("invalid train share {train:?}"))?;
        let test: f64 = test
            .trim()
            .parse()
            .map_err(|_| format!("invalid test share {test:?}"))?;
        if !train.is_finite() || !test.is_finite() || train < 0.0 || test < 0.0 || train + test <= 0.0 {
            return Err(format!("split shares must be non-negative and not both zero, got {s:?}"));
        }
        Ok(SplitSpec {
            train_fraction: train / (train + test),
        })
    }
}

impl fmt::Display for SplitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:.0}/{:.0}",
            self.train_fraction * 100.0,
            (1.0 - self.train_fraction) * 100.0
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Markdown,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Markdown => "markdown",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_spec_parses_usual_shapes() {
        assert_eq!("80/20".parse::<SplitSpec>().unwrap().train_fraction, 0.8);
        assert_eq!("3/1".parse::<SplitSpec>().unwrap().train_fraction, 0.75);
        assert_eq!("100/0".parse::<SplitSpec>().unwrap().train_fraction, 1.0);
        assert!("80".parse::<SplitSpec>().is_err());
        assert!("0/0".parse::<SplitSpec>().is_err());
        assert!("-1/2".parse::<SplitSpec>().is_err());
    }

    #[test]
    fn cli_parses_and_rejects() {
        use clap::Parser;
        assert!(Cli::try_parse_from(["policy-audit", "ingest", "--manifest", "m.csv", "--output", "c.jsonl"]).is_ok());
        // Audit requires a corpus source and a classifier source.
        assert!(Cli::try_parse_from(["policy-audit", "audit", "--output-dir", "out"]).is_err());
        assert!(Cli::try_parse_from([
            "policy-audit", "audit", "--manifest", "m.csv", "--model", "m.json", "--output-dir", "out"
        ])
        .is_ok());
        // Evaluate modes are mutually exclusive.
        assert!(Cli::try_parse_from([
            "policy-audit", "evaluate", "--triples", "t.jsonl", "--gold-out", "g.jsonl", "--gold", "x.jsonl"
        ])
        .is_err());
    }
}
