//! Serialized shapes shared between the audit writer and the report
//! re-renderer. Everything here is deterministic: no timestamps, no
//! environment-dependent fields beyond the paths the user passed in.

use serde::{Deserialize, Serialize};

use policy_audit::corpus::{IngestEntryError, IngestSummary};
use policy_audit::{ReadabilityReport, TextStatistics};

use crate::render::{summarize, SummaryStats};

/// Top-level record of one audit run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditLog {
    /// Corpus name (manifest name or corpus file stem).
    pub corpus: String,
    /// `model:<path>` or `predictions:<path>`.
    pub classifier_source: String,
    pub seed: u64,
    pub min_evidence: usize,
    pub policies_audited: usize,
    pub sentences_labelled: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ingest_summary: Option<IngestSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub entry_errors: Vec<IngestEntryError>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Text statistics and readability metrics for one policy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyReadability {
    pub policy_id: String,
    pub statistics: TextStatistics,
    pub report: ReadabilityReport,
}

/// Corpus-level readability aggregates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadabilitySummary {
    /// Policies with defined readability (non-empty text).
    pub policies: usize,
    pub word_count: SummaryStats,
    pub sentence_count: SummaryStats,
    pub avg_sentence_length: SummaryStats,
    pub flesch_reading_ease: SummaryStats,
    pub flesch_kincaid_grade: SummaryStats,
    pub smog_index: SummaryStats,
    pub automated_readability_index: SummaryStats,
}

impl ReadabilitySummary {
    /// Aggregates per-policy readability; `None` when the list is empty.
    pub fn from_policies(policies: &[PolicyReadability]) -> Option<Self> {
        let series = |f: &dyn Fn(&PolicyReadability) -> f64| -> Option<SummaryStats> {
            summarize(&policies.iter().map(f).collect::<Vec<_>>())
        };
        Some(ReadabilitySummary {
            policies: policies.len(),
            word_count: series(&|p| p.statistics.word_count as f64)?,
            sentence_count: series(&|p| p.statistics.sentence_count as f64)?,
            avg_sentence_length: series(&|p| p.statistics.asl)?,
            flesch_reading_ease: series(&|p| p.report.fre)?,
            flesch_kincaid_grade: series(&|p| p.report.fkg)?,
            smog_index: series(&|p| p.report.smog)?,
            automated_readability_index: series(&|p| p.report.ari)?,
        })
    }
}

/// One row per policy for `readability.csv`.
pub fn readability_csv(policies: &[PolicyReadability]) -> String {
    let mut out = String::from(
        "policy_id,words,sentences,asl,fre,fre_band,fkg,smog,smog_band,ari\n",
    );
    for p in policies {
        out.push_str(&format!(
            "{},{},{},{:.4},{:.4},{},{:.4},{:.4},{},{:.4}\n",
            p.policy_id,
            p.statistics.word_count,
            p.statistics.sentence_count,
            p.statistics.asl,
            p.report.fre,
            p.report.fre_band.label(),
            p.report.fkg,
            p.report.smog,
            p.report.smog_band.label(),
            p.report.ari,
        ));
    }
    out
}
