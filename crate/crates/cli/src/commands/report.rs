//! `policy-audit report`: re-render the markdown report from the JSON
//! artifacts of a previous audit run.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use policy_audit::{ComplianceReport, CorpusComplianceSummary};

use crate::args::ReportArgs;
use crate::artifacts::{AuditLog, PolicyReadability, ReadabilitySummary};
use crate::commands::{read_json, write_text};
use crate::render::{render_audit_markdown, AuditReportData};

pub fn run(args: ReportArgs) -> Result<()> {
    let dir = &args.input_dir;
    let log: AuditLog = read_json(&dir.join("audit_log.json"))
        .context("an audit run with json format is required first")?;
    let compliance_summary: CorpusComplianceSummary = read_json(&dir.join("compliance_summary.json"))?;
    let compliance_reports: Vec<ComplianceReport> = read_json_dir(&dir.join("compliance"))?;
    let readability: Vec<PolicyReadability> = read_json_dir(&dir.join("readability"))?;
    let readability_summary: Option<ReadabilitySummary> = {
        let path = dir.join("readability_summary.json");
        if path.exists() {
            Some(read_json(&path)?)
        } else {
            None
        }
    };

    let policies: Vec<(ComplianceReport, Option<PolicyReadability>)> = compliance_reports
        .into_iter()
        .map(|report| {
            let entry = readability
                .iter()
                .find(|r| r.policy_id == report.policy_id)
                .cloned();
            (report, entry)
        })
        .collect();

    let markdown = render_audit_markdown(&AuditReportData {
        log: &log,
        compliance: &compliance_summary,
        policies: &policies,
        readability: readability_summary.as_ref(),
    });
    let output = args.output.clone().unwrap_or_else(|| dir.join("audit.md"));
    write_text(&output, &markdown)?;
    println!("report written to {}", output.display());
    Ok(())
}

/// Every `.json` file in `dir`, parsed, in file-name order. A missing
/// directory is an empty list.
fn read_json_dir<T: serde::de::DeserializeOwned>(dir: &Path) -> Result<Vec<T>> {
    if !dir.is_dir() {
        return Ok(Vec::new());
    }
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("cannot list {}", dir.display()))?
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .map(|entry| entry.path())
        .filter(|path| path.extension().is_some_and(|ext| ext == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|path| read_json(path)).collect()
}
