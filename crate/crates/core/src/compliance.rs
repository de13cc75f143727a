//! Policy-level transparency checks over sentence predictions.
//!
//! A disclosure rule counts as present in a policy when at least one
//! sentence (configurable via a minimum-evidence threshold) is labelled
//! with it. The compliance rate is the fraction of the ten rules present,
//! so it always lands on a tenth between 0.0 and 1.0. Corpus summaries
//! bucket those rates in 20-point bands; the top band is closed, so a rate
//! of exactly 0.8 falls in "80-100%".

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classifier::{GdprLabel, Prediction};
use crate::scalar::{ratio, real, Real};

/// Compliance failure modes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplianceError {
    #[error("policy {expected:?} cannot be checked with predictions for {found:?}")]
    MixedPolicyIds { expected: String, found: String },
    #[error("cannot summarize an empty corpus")]
    EmptyCorpus,
    #[error("duplicate policy id {0:?} in corpus summary")]
    DuplicatePolicyId(String),
}

/// Rule coverage for one policy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplianceReport<F> {
    pub policy_id: String,
    /// One entry per disclosure rule.
    pub rule_present: BTreeMap<GdprLabel, bool>,
    /// Supporting sentence indices, ascending; an entry exists exactly for
    /// the rules that are present.
    pub evidence: BTreeMap<GdprLabel, Vec<usize>>,
    /// Present rules over ten: one of 0.0, 0.1, ..., 1.0.
    pub compliance_rate: F,
    /// Missing rules in canonical order.
    pub violations: Vec<GdprLabel>,
}

impl<F> ComplianceReport<F> {
    /// Number of rules present.
    pub fn present_count(&self) -> usize {
        self.rule_present.values().filter(|&&p| p).count()
    }
}

/// Checks one policy with the default single-sentence evidence threshold.
pub fn check_policy<F: Real>(
    policy_id: &str,
    predictions: &[Prediction<F>],
) -> Result<ComplianceReport<F>, ComplianceError> {
    check_policy_with_threshold(policy_id, predictions, 1)
}

/// Checks one policy, requiring `min_evidence` supporting sentences per
/// rule. A threshold of zero is treated as one: presence always needs a
/// sentence.
///
/// An empty prediction set is valid input and yields an all-absent report
/// with rate 0; callers that consider that suspicious should log it, not
/// fail.
pub fn check_policy_with_threshold<F: Real>(
    policy_id: &str,
    predictions: &[Prediction<F>],
    min_evidence: usize,
) -> Result<ComplianceReport<F>, ComplianceError> {
    let min_evidence = min_evidence.max(1);
    let mut support: BTreeMap<GdprLabel, Vec<usize>> = BTreeMap::new();
    for prediction in predictions {
        if prediction.policy_id != policy_id {
            return Err(ComplianceError::MixedPolicyIds {
                expected: policy_id.to_string(),
                found: prediction.policy_id.clone(),
            });
        }
        if prediction.label != GdprLabel::Other {
            support
                .entry(prediction.label)
                .or_default()
                .push(prediction.sentence_index);
        }
    }

    let mut rule_present = BTreeMap::new();
    let mut evidence = BTreeMap::new();
    let mut violations = Vec::new();
    for rule in GdprLabel::RULES {
        let mut indices = support.remove(&rule).unwrap_or_default();
        indices.sort_unstable();
        indices.dedup();
        let present = indices.len() >= min_evidence;
        rule_present.insert(rule, present);
        if present {
            evidence.insert(rule, indices);
        } else {
            violations.push(rule);
        }
    }
    let present_count = rule_present.values().filter(|&&p| p).count();

    Ok(ComplianceReport {
        policy_id: policy_id.to_string(),
        rule_present,
        evidence,
        compliance_rate: ratio(present_count, GdprLabel::RULES.len()),
        violations,
    })
}

/// 20-point compliance-rate band. The top band includes its lower edge, so
/// the bands partition every reachable rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RateBucket {
    #[serde(rename = "0-20%")]
    Below20,
    #[serde(rename = "20-40%")]
    From20To40,
    #[serde(rename = "40-60%")]
    From40To60,
    #[serde(rename = "60-80%")]
    From60To80,
    #[serde(rename = "80-100%")]
    From80To100,
}

impl RateBucket {
    pub const ALL: [RateBucket; 5] = [
        RateBucket::Below20,
        RateBucket::From20To40,
        RateBucket::From40To60,
        RateBucket::From60To80,
        RateBucket::From80To100,
    ];

    /// Bucket for a policy with `present_count` rules present. Bucketing
    /// on the integer count keeps boundary rates like 0.2 and 0.8 exact.
    pub fn from_present_count(present_count: usize) -> RateBucket {
        match present_count {
            0..=1 => RateBucket::Below20,
            2..=3 => RateBucket::From20To40,
            4..=5 => RateBucket::From40To60,
            6..=7 => RateBucket::From60To80,
            _ => RateBucket::From80To100,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            RateBucket::Below20 => "0-20%",
            RateBucket::From20To40 => "20-40%",
            RateBucket::From40To60 => "40-60%",
            RateBucket::From60To80 => "60-80%",
            RateBucket::From80To100 => "80-100%",
        }
    }
}

impl std::fmt::Display for RateBucket {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Corpus-wide compliance distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusComplianceSummary<F> {
    pub policy_count: usize,
    /// Percent of policies per rate band; all five bands always present.
    pub bucket_pct: BTreeMap<RateBucket, F>,
    /// Percent of policies stating each rule.
    pub per_rule_pct: BTreeMap<GdprLabel, F>,
    /// Mean per-policy compliance rate, in percent.
    pub mean_compliance_pct: F,
}

/// Aggregates per-policy reports; policy ids must be distinct.
pub fn summarize_corpus<F: Real>(
    reports: &[ComplianceReport<F>],
) -> Result<CorpusComplianceSummary<F>, ComplianceError> {
    if reports.is_empty() {
        return Err(ComplianceError::EmptyCorpus);
    }
    let mut seen = std::collections::HashSet::new();
    for report in reports {
        if !seen.insert(report.policy_id.as_str()) {
            return Err(ComplianceError::DuplicatePolicyId(report.policy_id.clone()));
        }
    }

    let n = reports.len();
    let mut bucket_counts: BTreeMap<RateBucket, usize> =
        RateBucket::ALL.iter().map(|&b| (b, 0)).collect();
    let mut rule_counts: BTreeMap<GdprLabel, usize> =
        GdprLabel::RULES.iter().map(|&r| (r, 0)).collect();
    let mut total_present = 0usize;
    for report in reports {
        let present = report.present_count();
        total_present += present;
        *bucket_counts
            .get_mut(&RateBucket::from_present_count(present))
            .unwrap() += 1;
        for (&rule, &present) in &report.rule_present {
            if present {
                *rule_counts.get_mut(&rule).unwrap() += 1;
            }
        }
    }

    Ok(CorpusComplianceSummary {
        policy_count: n,
        bucket_pct: bucket_counts
            .into_iter()
            .map(|(bucket, count)| (bucket, ratio::<F>(count, n) * real(100.0)))
            .collect(),
        per_rule_pct: rule_counts
            .into_iter()
            .map(|(rule, count)| (rule, ratio::<F>(count, n) * real(100.0)))
            .collect(),
        mean_compliance_pct: ratio::<F>(total_present, n) * real(10.0),
    })
}

impl<F: Real> CorpusComplianceSummary<F> {
    /// CSV of per-rule presence percentages, two decimals.
    pub fn rules_csv(&self) -> String {
        let mut out = String::from("rule,percent_present\n");
        for rule in GdprLabel::RULES {
            out.push_str(&format!("{},{:.2}\n", rule.code(), self.per_rule_pct[&rule]));
        }
        out
    }

    /// CSV of the rate-band distribution, two decimals.
    pub fn buckets_csv(&self) -> String {
        let mut out = String::from("bucket,percent_of_policies\n");
        for bucket in RateBucket::ALL {
            out.push_str(&format!("{},{:.2}\n", bucket.label(), self.bucket_pct[&bucket]));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pred(id: &str, index: usize, label: GdprLabel) -> Prediction<f64> {
        Prediction {
            policy_id: id.to_string(),
            sentence_index: index,
            label,
            scores: BTreeMap::new(),
        }
    }

    fn report_with_rules(id: &str, rules: &[GdprLabel]) -> ComplianceReport<f64> {
        let preds: Vec<Prediction<f64>> = rules
            .iter()
            .enumerate()
            .map(|(i, &label)| pred(id, i, label))
            .collect();
        check_policy(id, &preds).unwrap()
    }

    #[test]
    fn presence_needs_one_sentence_by_default() {
        let preds = vec![
            pred("p", 0, GdprLabel::Cpi),
            pred("p", 3, GdprLabel::Cpi),
            pred("p", 1, GdprLabel::Dpp),
            pred("p", 2, GdprLabel::Other),
            pred("p", 4, GdprLabel::Other),
        ];
        let report = check_policy("p", &preds).unwrap();
        assert!(report.rule_present[&GdprLabel::Cpi]);
        assert!(report.rule_present[&GdprLabel::Dpp]);
        assert!(!report.rule_present[&GdprLabel::Drp]);
        assert_eq!(report.rule_present.len(), 10);
        assert_eq!(report.evidence[&GdprLabel::Cpi], vec![0, 3]);
        assert_eq!(report.evidence.len(), 2);
        assert_eq!(report.compliance_rate, 0.2);
        assert_eq!(report.violations.len(), 8);
        assert_eq!(report.violations[0], GdprLabel::Drp);
    }

    #[test]
    fn threshold_demands_more_evidence() {
        let preds = vec![
            pred("p", 0, GdprLabel::Cpi),
            pred("p", 1, GdprLabel::Cpi),
            pred("p", 2, GdprLabel::Dpp),
        ];
        let report = check_policy_with_threshold("p", &preds, 2).unwrap();
        assert!(report.rule_present[&GdprLabel::Cpi]);
        assert!(!report.rule_present[&GdprLabel::Dpp]);
        assert!(!report.evidence.contains_key(&GdprLabel::Dpp));
        assert_eq!(report.compliance_rate, 0.1);
        // Zero threshold still requires a sentence.
        let zero = check_policy_with_threshold("p", &preds, 0).unwrap();
        assert_eq!(zero.compliance_rate, 0.2);
    }

    #[test]
    fn empty_predictions_mean_fully_absent_not_an_error() {
        let report = check_policy::<f64>("p", &[]).unwrap();
        assert_eq!(report.compliance_rate, 0.0);
        assert!(report.evidence.is_empty());
        assert_eq!(report.violations, GdprLabel::RULES.to_vec());
    }

    #[test]
    fn other_predictions_are_never_evidence() {
        let preds = vec![pred("p", 0, GdprLabel::Other)];
        let report = check_policy("p", &preds).unwrap();
        assert_eq!(report.compliance_rate, 0.0);
    }

    #[test]
    fn mixed_policy_ids_are_rejected() {
        let preds = vec![pred("q", 0, GdprLabel::Cpi)];
        assert_eq!(
            check_policy("p", &preds),
            Err(ComplianceError::MixedPolicyIds {
                expected: "p".into(),
                found: "q".into()
            })
        );
    }

    #[test]
    fn buckets_by_integer_count_with_closed_top() {
        use RateBucket::*;
        let expected = [
            (0, Below20),
            (1, Below20),
            (2, From20To40),
            (3, From20To40),
            (4, From40To60),
            (5, From40To60),
            (6, From60To80),
            (7, From60To80),
            (8, From80To100),
            (9, From80To100),
            (10, From80To100),
        ];
        for (count, bucket) in expected {
            assert_eq!(RateBucket::from_present_count(count), bucket, "count {count}");
        }
    }

    #[test]
    fn four_policy_hand_summary() {
        // Rates 1.0, 0.9, 0.3, 0.5.
        let reports = vec![
            report_with_rules("a", &GdprLabel::RULES),
            report_with_rules("b", &GdprLabel::RULES[..9]),
            report_with_rules("c", &GdprLabel::RULES[..3]),
            report_with_rules("d", &GdprLabel::RULES[..5]),
        ];
        assert_eq!(reports[0].compliance_rate, 1.0);
        assert_eq!(reports[1].compliance_rate, 0.9);
        assert_eq!(reports[2].compliance_rate, 0.3);
        assert_eq!(reports[3].compliance_rate, 0.5);

        let summary = summarize_corpus(&reports).unwrap();
        assert_eq!(summary.policy_count, 4);
        assert_eq!(summary.bucket_pct[&RateBucket::From80To100], 50.0);
        assert_eq!(summary.bucket_pct[&RateBucket::From20To40], 25.0);
        assert_eq!(summary.bucket_pct[&RateBucket::From40To60], 25.0);
        assert_eq!(summary.bucket_pct[&RateBucket::Below20], 0.0);
        assert_eq!(summary.bucket_pct[&RateBucket::From60To80], 0.0);
        assert_eq!(summary.mean_compliance_pct, 67.5);
        // CPI is present in all four, RLC only in the fully compliant one.
        assert_eq!(summary.per_rule_pct[&GdprLabel::Cpi], 100.0);
        assert_eq!(summary.per_rule_pct[&GdprLabel::Rlc], 25.0);

        let total: f64 = summary.bucket_pct.values().sum();
        assert!((total - 100.0).abs() < 1e-9);
    }

    #[test]
    fn summary_rejects_empty_and_duplicate_ids() {
        assert_eq!(
            summarize_corpus::<f64>(&[]),
            Err(ComplianceError::EmptyCorpus)
        );
        let reports = vec![
            report_with_rules("a", &GdprLabel::RULES[..2]),
            report_with_rules("a", &GdprLabel::RULES[..3]),
        ];
        assert_eq!(
            summarize_corpus(&reports),
            Err(ComplianceError::DuplicatePolicyId("a".into()))
        );
    }

    #[test]
    fn csv_exports_round_to_two_decimals() {
        let reports = vec![
            report_with_rules("a", &GdprLabel::RULES[..1]),
            report_with_rules("b", &GdprLabel::RULES[..1]),
            report_with_rules("c", &[]),
        ];
        let summary = summarize_corpus(&reports).unwrap();
        let rules = summary.rules_csv();
        assert!(rules.starts_with("rule,percent_present\n"));
        assert!(rules.contains("CPI,66.67\n"), "got: {rules}");
        assert!(rules.contains("DRP,0.00\n"));
        let buckets = summary.buckets_csv();
        assert!(buckets.contains("0-20%,100.00\n"), "got: {buckets}");
        assert_eq!(buckets.lines().count(), 6);
    }

    #[test]
    fn serialized_maps_use_band_labels() {
        let reports = vec![report_with_rules("a", &GdprLabel::RULES[..8])];
        let summary = summarize_corpus(&reports).unwrap();
        let json = serde_json::to_string(&summary).unwrap();
        assert!(json.contains("\"80-100%\":100.0"), "got: {json}");
        assert!(json.contains("\"mean_compliance_pct\":80.0"));
    }
}
