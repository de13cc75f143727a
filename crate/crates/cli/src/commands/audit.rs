//! `policy-audit audit`: corpus to compliance and readability artifacts.
//!
//! Output layout under `--output-dir`:
//!
//! ```text
//! audit_log.json                  run record: sources, counts, warnings
//! compliance/<id>.json            per-policy rule presence and evidence
//! compliance_summary.json         corpus rollup (bands, per-rule rates)
//! compliance_summary_rules.csv    one row per rule
//! compliance_summary_buckets.csv  one row per band
//! readability/<id>.json           per-policy statistics and metrics
//! readability_summary.json        corpus aggregates
//! readability.csv                 one row per policy
//! audit.md                        human-readable report
//! ```
//!
//! All writes are deterministic for fixed inputs and flags: corpus order
//! drives per-policy artifacts, maps are sorted, and nothing records
//! timestamps.

use std::collections::{BTreeMap, BTreeSet};
use std::io;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};

use policy_audit::classifier::{import_predictions, predict};
use policy_audit::compliance::{check_policy_with_threshold, summarize_corpus};
use policy_audit::corpus::{
    ingest, read_corpus_jsonl, CorpusManifest, FilterStatus, IngestEntryError, IngestOptions,
    IngestSummary, PolicyDocument,
};
use policy_audit::readability::readability_report;
use policy_audit::textstats::{compute_statistics, segment, Sentence};
use policy_audit::{ClassifierModel, ComplianceReport, Prediction};

use crate::args::{AuditArgs, OutputFormat};
use crate::artifacts::{readability_csv, AuditLog, PolicyReadability, ReadabilitySummary};
use crate::commands::{open_reader, sanitized_names, write_json_pretty, write_text};
use crate::render::{render_audit_markdown, AuditReportData};
use crate::UsageError;

pub fn run(args: AuditArgs) -> Result<()> {
    let formats: BTreeSet<OutputFormat> = args.formats.iter().copied().collect();
    let mut warnings: Vec<String> = Vec::new();

    // Corpus: ingest a manifest or load a pre-ingested corpus file.
    let (corpus_name, documents, entry_errors, ingest_summary) = load_corpus(&args)?;
    let accepted: Vec<&PolicyDocument> = documents
        .iter()
        .filter(|d| d.filter_status == FilterStatus::Accepted)
        .collect();
    if accepted.is_empty() {
        bail!("no accepted policies to audit in {corpus_name:?}");
    }
    let mut ids = BTreeSet::new();
    for document in &accepted {
        if !ids.insert(document.id.as_str()) {
            bail!("duplicate policy id {:?} in corpus", document.id);
        }
    }

    let per_policy: Vec<(&PolicyDocument, Vec<Sentence>)> = accepted
        .iter()
        .map(|d| (*d, segment(&d.id, &d.cleaned_text)))
        .collect();
    let total_sentences: usize = per_policy.iter().map(|(_, s)| s.len()).sum();

    // Predictions: run the model or import an external file.
    let (classifier_source, predictions) = label_sentences(&args, &per_policy, &mut warnings)?;

    // Compliance, per policy in corpus order.
    let mut grouped: BTreeMap<&str, Vec<&Prediction>> = BTreeMap::new();
    for prediction in &predictions {
        grouped
            .entry(prediction.policy_id.as_str())
            .or_default()
            .push(prediction);
    }
    let mut compliance_reports: Vec<ComplianceReport> = Vec::with_capacity(per_policy.len());
    for (document, _) in &per_policy {
        let owned: Vec<Prediction> = grouped
            .remove(document.id.as_str())
            .unwrap_or_default()
            .into_iter()
            .cloned()
            .collect();
        compliance_reports.push(check_policy_with_threshold(
            &document.id,
            &owned,
            args.min_evidence,
        )?);
    }
    let compliance_summary = summarize_corpus(&compliance_reports)?;

    // Readability, skipping policies without enough text.
    let mut readability: Vec<PolicyReadability> = Vec::new();
    for (document, sentences) in &per_policy {
        match compute_statistics(sentences).map_err(anyhow::Error::new).and_then(|statistics| {
            let report = readability_report(&statistics)?;
            Ok(PolicyReadability {
                policy_id: document.id.clone(),
                statistics,
                report,
            })
        }) {
            Ok(entry) => readability.push(entry),
            Err(error) => warnings.push(format!("policy {:?}: {error}", document.id)),
        }
    }
    let readability_summary = ReadabilitySummary::from_policies(&readability);

    let log = AuditLog {
        corpus: corpus_name,
        classifier_source,
        seed: args.seed,
        min_evidence: args.min_evidence,
        policies_audited: accepted.len(),
        sentences_labelled: total_sentences,
        ingest_summary: Some(ingest_summary),
        entry_errors,
        warnings,
    };

    write_artifacts(
        &args.output_dir,
        &formats,
        &log,
        &compliance_reports,
        &compliance_summary,
        &readability,
        readability_summary.as_ref(),
    )?;

    for warning in &log.warnings {
        eprintln!("warning: {warning}");
    }
    for error in &log.entry_errors {
        eprintln!("warning: {error}");
    }
    println!(
        "audited {} policies ({} sentences); mean compliance {:.2}%; artifacts in {}",
        log.policies_audited,
        log.sentences_labelled,
        compliance_summary.mean_compliance_pct,
        args.output_dir.display()
    );

    if args.strict {
        if !log.entry_errors.is_empty() {
            let message = format!("{} manifest entries were unreadable", log.entry_errors.len());
            return Err(anyhow::Error::new(io::Error::other(message))
                .context("strict mode: audit incomplete"));
        }
        if !log.warnings.is_empty() {
            bail!("strict mode: {} warnings recorded", log.warnings.len());
        }
    }
    Ok(())
}

type LoadedCorpus = (String, Vec<PolicyDocument>, Vec<IngestEntryError>, IngestSummary);

fn load_corpus(args: &AuditArgs) -> Result<LoadedCorpus> {
    match (&args.manifest, &args.corpus) {
        (Some(path), None) => {
            let manifest = CorpusManifest::load(path)?;
            let options = IngestOptions {
                min_bytes: args.min_bytes,
                language_threshold: args.language_threshold,
                size_on_cleaned_text: args.size_on_cleaned_text,
            };
            let outcome = ingest(&manifest, &options)?;
            let summary = outcome.summary();
            Ok((manifest.name, outcome.documents, outcome.errors, summary))
        }
        (None, Some(path)) => {
            let documents = read_corpus_jsonl(open_reader(path)?)
                .with_context(|| format!("malformed corpus {}", path.display()))?;
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "corpus".to_string());
            let summary = summary_of(&documents);
            Ok((name, documents, Vec::new(), summary))
        }
        _ => Err(UsageError("pass exactly one of --manifest or --corpus".into()).into()),
    }
}

fn summary_of(documents: &[PolicyDocument]) -> IngestSummary {
    let mut summary = IngestSummary {
        manifest_entries: documents.len(),
        ..IngestSummary::default()
    };
    for document in documents {
        match document.filter_status {
            FilterStatus::Accepted => summary.accepted += 1,
            FilterStatus::RejectedNonEnglish => summary.rejected_non_english += 1,
            FilterStatus::RejectedTooShort => summary.rejected_too_short += 1,
            FilterStatus::RejectedDuplicate => summary.rejected_duplicate += 1,
        }
    }
    summary
}

fn label_sentences(
    args: &AuditArgs,
    per_policy: &[(&PolicyDocument, Vec<Sentence>)],
    warnings: &mut Vec<String>,
) -> Result<(String, Vec<Prediction>)> {
    match (&args.model, &args.predictions) {
        (Some(path), None) => {
            let model = ClassifierModel::load(path)
                .with_context(|| format!("cannot load model {}", path.display()))?;
            let predictions = per_policy
                .iter()
                .flat_map(|(_, sentences)| predict(&model, sentences))
                .collect();
            Ok((format!("model:{}", path.display()), predictions))
        }
        (None, Some(path)) => {
            let expected: Vec<Sentence> = per_policy
                .iter()
                .flat_map(|(_, sentences)| sentences.iter().cloned())
                .collect();
            let imported = import_predictions::<f64, _>(open_reader(path)?, &expected)
                .with_context(|| format!("cannot import predictions {}", path.display()))?;
            for extra in &imported.extra {
                warnings.push(format!("prediction for unknown sentence {extra} ignored"));
            }
            Ok((format!("predictions:{}", path.display()), imported.predictions))
        }
        _ => Err(UsageError("pass exactly one of --model or --predictions".into()).into()),
    }
}

#[allow(clippy::too_many_arguments)]
fn write_artifacts(
    output_dir: &PathBuf,
    formats: &BTreeSet<OutputFormat>,
    log: &AuditLog,
    compliance_reports: &[ComplianceReport],
    compliance_summary: &policy_audit::CorpusComplianceSummary,
    readability: &[PolicyReadability],
    readability_summary: Option<&ReadabilitySummary>,
) -> Result<()> {
    std::fs::create_dir_all(output_dir)
        .with_context(|| format!("cannot create {}", output_dir.display()))?;

    let names: BTreeMap<&str, String> =
        sanitized_names(compliance_reports.iter().map(|r| r.policy_id.as_str()))?
            .into_iter()
            .map(|(name, id)| (id, name))
            .collect();

    if formats.contains(&OutputFormat::Json) {
        write_json_pretty(&output_dir.join("audit_log.json"), log)?;
        for report in compliance_reports {
            let path = output_dir
                .join("compliance")
                .join(format!("{}.json", names[report.policy_id.as_str()]));
            write_json_pretty(&path, report)?;
        }
        write_json_pretty(&output_dir.join("compliance_summary.json"), compliance_summary)?;
        for entry in readability {
            let path = output_dir
                .join("readability")
                .join(format!("{}.json", names[entry.policy_id.as_str()]));
            write_json_pretty(&path, entry)?;
        }
        if let Some(summary) = readability_summary {
            write_json_pretty(&output_dir.join("readability_summary.json"), summary)?;
        }
    }

    if formats.contains(&OutputFormat::Csv) {
        write_text(
            &output_dir.join("compliance_summary_rules.csv"),
            &compliance_summary.rules_csv(),
        )?;
        write_text(
            &output_dir.join("compliance_summary_buckets.csv"),
            &compliance_summary.buckets_csv(),
        )?;
        write_text(&output_dir.join("readability.csv"), &readability_csv(readability))?;
    }

    if formats.contains(&OutputFormat::Markdown) {
        let by_id: BTreeMap<&str, &PolicyReadability> = readability
            .iter()
            .map(|entry| (entry.policy_id.as_str(), entry))
            .collect();
        let policies: Vec<(ComplianceReport, Option<PolicyReadability>)> = compliance_reports
            .iter()
            .map(|report| {
                (
                    report.clone(),
                    by_id.get(report.policy_id.as_str()).map(|&r| r.clone()),
                )
            })
            .collect();
        let markdown = render_audit_markdown(&AuditReportData {
            log,
            compliance: compliance_summary,
            policies: &policies,
            readability: readability_summary,
        });
        write_text(&output_dir.join("audit.md"), &markdown)?;
    }
    Ok(())
}
