//! Aggregation and markdown rendering for audit artifacts.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use policy_audit::classifier::GdprLabel;
use policy_audit::compliance::RateBucket;
use policy_audit::{ComplianceReport, CorpusComplianceSummary};

use crate::artifacts::{AuditLog, PolicyReadability, ReadabilitySummary};

/// Mean, sample standard deviation, minimum, and maximum of a series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub max: f64,
}

/// Summarizes a series; `None` when it is empty. A single value has a
/// standard deviation of 0 rather than an undefined one.
pub fn summarize(values: &[f64]) -> Option<SummaryStats> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = if values.len() < 2 {
        0.0
    } else {
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        (ss / (n - 1.0)).sqrt()
    };
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Some(SummaryStats { mean, sd, min, max })
}

/// A GitHub-style markdown table.
pub fn markdown_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str("| ");
    out.push_str(&headers.join(" | "));
    out.push_str(" |\n| ");
    out.push_str(&vec!["---"; headers.len()].join(" | "));
    out.push_str(" |\n");
    for row in rows {
        out.push_str("| ");
        out.push_str(&row.join(" | "));
        out.push_str(" |\n");
    }
    out
}

fn two(value: f64) -> String {
    format!("{value:.2}")
}

fn stat_row(name: &str, stats: &SummaryStats) -> Vec<String> {
    vec![
        name.to_string(),
        two(stats.mean),
        two(stats.sd),
        two(stats.min),
        two(stats.max),
    ]
}

/// Everything the markdown report is rendered from. Both the audit
/// command and the report command build this, so re-rendering from saved
/// artifacts reproduces the original file byte for byte.
pub struct AuditReportData<'a> {
    pub log: &'a AuditLog,
    pub compliance: &'a CorpusComplianceSummary,
    /// Per-policy reports with readability where defined; any order.
    pub policies: &'a [(ComplianceReport, Option<PolicyReadability>)],
    pub readability: Option<&'a ReadabilitySummary>,
}

pub fn render_audit_markdown(data: &AuditReportData<'_>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# Privacy policy audit: {}", data.log.corpus);
    out.push('\n');
    let _ = writeln!(
        out,
        "Audited {} policies ({} sentences), classifier source: {}.",
        data.log.policies_audited, data.log.sentences_labelled, data.log.classifier_source
    );
    out.push('\n');

    out.push_str("## Compliance\n\n");
    let _ = writeln!(
        out,
        "Mean compliance rate: {}% of the ten disclosure rules.",
        two(data.compliance.mean_compliance_pct)
    );
    out.push('\n');

    out.push_str("### Policies per compliance band\n\n");
    let rows: Vec<Vec<String>> = RateBucket::ALL
        .iter()
        .map(|bucket| {
            vec![
                bucket.label().to_string(),
                two(data.compliance.bucket_pct[bucket]),
            ]
        })
        .collect();
    out.push_str(&markdown_table(&["Band", "Policies (%)"], &rows));
    out.push('\n');

    out.push_str("### Rule presence\n\n");
    let rows: Vec<Vec<String>> = GdprLabel::RULES
        .iter()
        .map(|rule| {
            vec![
                rule.code().to_string(),
                rule.description().to_string(),
                two(data.compliance.per_rule_pct[rule]),
            ]
        })
        .collect();
    out.push_str(&markdown_table(&["Rule", "Disclosure", "Policies (%)"], &rows));
    out.push('\n');

    out.push_str("## Readability\n\n");
    match data.readability {
        Some(summary) => {
            let rows = vec![
                stat_row("Words per policy", &summary.word_count),
                stat_row("Sentences per policy", &summary.sentence_count),
                stat_row("Average sentence length", &summary.avg_sentence_length),
                stat_row("Flesch Reading Ease", &summary.flesch_reading_ease),
                stat_row("Flesch-Kincaid Grade", &summary.flesch_kincaid_grade),
                stat_row("SMOG Index", &summary.smog_index),
                stat_row("Automated Readability Index", &summary.automated_readability_index),
            ];
            out.push_str(&markdown_table(&["Metric", "Mean", "SD", "Min", "Max"], &rows));
        }
        None => out.push_str("No policy had enough text for readability metrics.\n"),
    }
    out.push('\n');

    out.push_str("## Per-policy results\n\n");
    let mut by_id: BTreeMap<&str, &(ComplianceReport, Option<PolicyReadability>)> =
        BTreeMap::new();
    for entry in data.policies {
        by_id.insert(entry.0.policy_id.as_str(), entry);
    }
    let rows: Vec<Vec<String>> = by_id
        .values()
        .map(|(compliance, readability)| {
            let missing = if compliance.violations.is_empty() {
                "-".to_string()
            } else {
                compliance
                    .violations
                    .iter()
                    .map(|rule| rule.code())
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let (fkg, smog_band) = match readability {
                Some(r) => (two(r.report.fkg), r.report.smog_band.label().to_string()),
                None => ("-".to_string(), "-".to_string()),
            };
            vec![
                compliance.policy_id.clone(),
                format!("{}/10", compliance.present_count()),
                two(compliance.compliance_rate * 100.0),
                missing,
                fkg,
                smog_band,
            ]
        })
        .collect();
    out.push_str(&markdown_table(
        &["Policy", "Rules present", "Rate (%)", "Missing", "FKG", "Education band (SMOG)"],
        &rows,
    ));

    if !data.log.entry_errors.is_empty() || !data.log.warnings.is_empty() {
        out.push('\n');
        out.push_str("## Warnings\n\n");
        for error in &data.log.entry_errors {
            let _ = writeln!(out, "- unreadable entry: {error}");
        }
        for warning in &data.log.warnings {
            let _ = writeln!(out, "- {warning}");
        }
    }
    out
}
