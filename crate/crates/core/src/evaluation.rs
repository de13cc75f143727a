//! Annotation merging and classifier scoring.
//!
//! Gold labels come from triple-annotated sentences: only unanimous triples
//! become gold, everything else goes to a dispute queue for re-annotation.
//! Scoring produces a per-label precision/recall/F1 table with an 11x11
//! confusion matrix. The macro average covers the ten disclosure rules
//! only; `Other` is reported as its own row so that the dominant
//! background class cannot inflate the summary.

use std::collections::{BTreeMap, HashSet};
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classifier::{AnnotatedSentence, GdprLabel, Prediction, UnknownLabelError};
use crate::jsonl::{self, JsonlError};
use crate::scalar::{ratio, real, Real};
use crate::textstats::{format_ref_list, Sentence, SentenceRef};

/// One sentence labelled independently by three annotators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TripleRecord", into = "TripleRecord")]
pub struct AnnotationTriple {
    pub sentence: Sentence,
    pub labels: [GdprLabel; 3],
}

#[derive(Clone, Serialize, Deserialize)]
struct TripleRecord {
    policy_id: String,
    sentence_index: usize,
    text: String,
    labels: Vec<String>,
}

/// Triple record with the wrong number of labels or an unknown code.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TripleFormatError {
    #[error("expected exactly 3 labels, found {0}")]
    WrongArity(usize),
    #[error(transparent)]
    UnknownLabel(#[from] UnknownLabelError),
}

impl TryFrom<TripleRecord> for AnnotationTriple {
    type Error = TripleFormatError;

    fn try_from(record: TripleRecord) -> Result<Self, Self::Error> {
        if record.labels.len() != 3 {
            return Err(TripleFormatError::WrongArity(record.labels.len()));
        }
        let mut labels = [GdprLabel::Other; 3];
        for (slot, raw) in labels.iter_mut().zip(&record.labels) {
            *slot = raw.parse()?;
        }
        Ok(AnnotationTriple {
            sentence: Sentence {
                policy_id: record.policy_id,
                index: record.sentence_index,
                text: record.text,
            },
            labels,
        })
    }
}

impl From<AnnotationTriple> for TripleRecord {
    fn from(triple: AnnotationTriple) -> Self {
        TripleRecord {
            policy_id: triple.sentence.policy_id,
            sentence_index: triple.sentence.index,
            text: triple.sentence.text,
            labels: triple.labels.iter().map(|l| l.code().to_string()).collect(),
        }
    }
}

/// Result of merging triple annotations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeOutcome {
    /// Unanimously labelled sentences, in input order.
    pub gold: Vec<AnnotatedSentence>,
    /// Full triples with any disagreement; they go back to the annotators
    /// for re-annotation, never to a majority vote.
    pub disputes: Vec<AnnotationTriple>,
}

/// Keeps unanimous triples as gold and queues the rest as disputes.
pub fn merge_annotations(triples: &[AnnotationTriple]) -> MergeOutcome {
    let mut gold = Vec::new();
    let mut disputes = Vec::new();
    for triple in triples {
        let [a, b, c] = triple.labels;
        if a == b && b == c {
            gold.push(AnnotatedSentence {
                sentence: triple.sentence.clone(),
                label: a,
            });
        } else {
            disputes.push(triple.clone());
        }
    }
    MergeOutcome { gold, disputes }
}

/// Precision, recall, F1, and gold support for one label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabelMetrics<F> {
    pub precision: F,
    pub recall: F,
    pub f1: F,
    pub support: usize,
}

impl<F: Real> LabelMetrics<F> {
    /// Metrics from raw counts; any 0/0 is reported as 0.
    pub fn from_counts(tp: usize, fp: usize, fn_: usize, support: usize) -> Self {
        let precision = ratio::<F>(tp, tp + fp);
        let recall = ratio::<F>(tp, tp + fn_);
        let denom = precision + recall;
        let f1 = if denom > F::zero() {
            real::<F>(2.0) * precision * recall / denom
        } else {
            F::zero()
        };
        LabelMetrics {
            precision,
            recall,
            f1,
            support,
        }
    }
}

/// Unweighted mean of per-label metrics over the ten disclosure rules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MacroMetrics<F> {
    pub precision: F,
    pub recall: F,
    pub f1: F,
}

/// Gold-major confusion counts over all eleven labels in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub labels: Vec<GdprLabel>,
    pub counts: Vec<Vec<usize>>,
}

impl Confusion {
    pub fn count(&self, gold: GdprLabel, predicted: GdprLabel) -> usize {
        self.counts[label_position(gold)][label_position(predicted)]
    }

    pub fn total(&self) -> usize {
        self.counts.iter().map(|row| row.iter().sum::<usize>()).sum()
    }

    pub fn diagonal(&self) -> usize {
        (0..self.labels.len()).map(|i| self.counts[i][i]).sum()
    }
}

fn label_position(label: GdprLabel) -> usize {
    GdprLabel::ALL.iter().position(|&l| l == label).unwrap()
}

/// Full scoring output for one gold set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport<F> {
    pub per_label: BTreeMap<GdprLabel, LabelMetrics<F>>,
    /// Mean over the ten rules; `Other` is excluded.
    pub macro_avg: MacroMetrics<F>,
    /// The `Other` row, kept out of the macro average.
    pub other_row: LabelMetrics<F>,
    pub confusion: Confusion,
    /// Fraction of sentences labelled correctly, all labels included.
    pub accuracy: F,
}

/// Scoring failure modes.
#[derive(Debug, Error)]
pub enum EvaluationError {
    #[error("duplicate gold annotation for sentence {0}")]
    DuplicateGold(SentenceRef),
    #[error("duplicate prediction for sentence {0}")]
    DuplicatePrediction(SentenceRef),
    #[error("predictions do not cover gold: missing [{}], extra [{}]",
            format_ref_list(missing), format_ref_list(extra))]
    CoverageMismatch {
        missing: Vec<SentenceRef>,
        extra: Vec<SentenceRef>,
    },
    #[error(transparent)]
    Jsonl(#[from] JsonlError),
}

/// Scores predictions against gold labels.
///
/// Predictions must cover exactly the gold sentences, keyed by
/// `(policy_id, sentence_index)`; anything missing or extra is an error
/// that names the offending sentences.
pub fn evaluate<F: Real>(
    gold: &[AnnotatedSentence],
    predictions: &[Prediction<F>],
) -> Result<EvaluationReport<F>, EvaluationError> {
    let mut gold_keys: HashSet<(&str, usize)> = HashSet::with_capacity(gold.len());
    for g in gold {
        if !gold_keys.insert((g.sentence.policy_id.as_str(), g.sentence.index)) {
            return Err(EvaluationError::DuplicateGold(g.sentence.to_ref()));
        }
    }
    let mut predicted: BTreeMap<(&str, usize), GdprLabel> = BTreeMap::new();
    for p in predictions {
        if predicted
            .insert((p.policy_id.as_str(), p.sentence_index), p.label)
            .is_some()
        {
            return Err(EvaluationError::DuplicatePrediction(p.to_ref()));
        }
    }

    let mut missing: Vec<SentenceRef> = gold
        .iter()
        .filter(|g| !predicted.contains_key(&(g.sentence.policy_id.as_str(), g.sentence.index)))
        .map(|g| g.sentence.to_ref())
        .collect();
    let mut extra: Vec<SentenceRef> = predictions
        .iter()
        .filter(|p| !gold_keys.contains(&(p.policy_id.as_str(), p.sentence_index)))
        .map(|p| p.to_ref())
        .collect();
    if !missing.is_empty() || !extra.is_empty() {
        missing.sort();
        extra.sort();
        return Err(EvaluationError::CoverageMismatch { missing, extra });
    }

    let k = GdprLabel::ALL.len();
    let mut counts = vec![vec![0usize; k]; k];
    for g in gold {
        let p = predicted[&(g.sentence.policy_id.as_str(), g.sentence.index)];
        counts[label_position(g.label)][label_position(p)] += 1;
    }
    let confusion = Confusion {
        labels: GdprLabel::ALL.to_vec(),
        counts,
    };

    let mut per_label = BTreeMap::new();
    for &label in &GdprLabel::ALL {
        let i = label_position(label);
        let tp = confusion.counts[i][i];
        let support: usize = confusion.counts[i].iter().sum();
        let fn_ = support - tp;
        let fp: usize = (0..k).map(|g| confusion.counts[g][i]).sum::<usize>() - tp;
        per_label.insert(label, LabelMetrics::<F>::from_counts(tp, fp, fn_, support));
    }

    let n_rules = real::<F>(GdprLabel::RULES.len() as f64);
    let mut macro_avg = MacroMetrics {
        precision: F::zero(),
        recall: F::zero(),
        f1: F::zero(),
    };
    for rule in GdprLabel::RULES {
        let m = &per_label[&rule];
        macro_avg.precision += m.precision;
        macro_avg.recall += m.recall;
        macro_avg.f1 += m.f1;
    }
    macro_avg.precision /= n_rules;
    macro_avg.recall /= n_rules;
    macro_avg.f1 /= n_rules;

    let other_row = per_label[&GdprLabel::Other];
    let accuracy = ratio::<F>(confusion.diagonal(), confusion.total());

    Ok(EvaluationReport {
        per_label,
        macro_avg,
        other_row,
        confusion,
        accuracy,
    })
}

/// Scores a trained model against annotated sentences in one step.
///
/// Coverage always matches because the predictions are generated from the
/// gold sentences themselves, so the only reachable error is a duplicate
/// `(policy_id, sentence_index)` pair in `gold`.
pub fn evaluate_model<F: Real>(
    model: &crate::classifier::ClassifierModel<F>,
    gold: &[AnnotatedSentence],
) -> Result<EvaluationReport<F>, EvaluationError> {
    let sentences: Vec<Sentence> = gold.iter().map(|g| g.sentence.clone()).collect();
    let predictions = crate::classifier::predict(model, &sentences);
    evaluate(gold, &predictions)
}

impl<F: Real> EvaluationReport<F> {
    /// Aligned plain-text table: one row per rule, the rule average, then
    /// `Other`.
    pub fn to_text_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<6} {:>9} {:>7} {:>6} {:>8}\n",
            "Label", "Precision", "Recall", "F1", "Support"
        ));
        for rule in GdprLabel::RULES {
            let m = &self.per_label[&rule];
            out.push_str(&format!(
                "{:<6} {:>9.2} {:>7.2} {:>6.2} {:>8}\n",
                rule.code(),
                m.precision,
                m.recall,
                m.f1,
                m.support
            ));
        }
        out.push_str(&format!(
            "{:<6} {:>9.2} {:>7.2} {:>6.2} {:>8}\n",
            "Avg", self.macro_avg.precision, self.macro_avg.recall, self.macro_avg.f1, "-"
        ));
        out.push_str(&format!(
            "{:<6} {:>9.2} {:>7.2} {:>6.2} {:>8}\n",
            "Other",
            self.other_row.precision,
            self.other_row.recall,
            self.other_row.f1,
            self.other_row.support
        ));
        out
    }
}

/// Writes gold annotations as flat JSON lines.
pub fn write_gold_jsonl<W: Write>(writer: W, gold: &[AnnotatedSentence]) -> io::Result<()> {
    jsonl::write_lines(writer, gold)
}

/// Reads gold annotations; label codes are matched leniently.
pub fn read_gold_jsonl<R: BufRead>(reader: R) -> Result<Vec<AnnotatedSentence>, JsonlError> {
    jsonl::read_lines(reader)
}

/// Writes annotation triples as flat JSON lines.
pub fn write_triples_jsonl<W: Write>(writer: W, triples: &[AnnotationTriple]) -> io::Result<()> {
    jsonl::write_lines(writer, triples)
}

/// Reads annotation triples; label codes are matched leniently.
pub fn read_triples_jsonl<R: BufRead>(reader: R) -> Result<Vec<AnnotationTriple>, JsonlError> {
    jsonl::read_lines(reader)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sentence(id: &str, index: usize, text: &str) -> Sentence {
        Sentence {
            policy_id: id.to_string(),
            index,
            text: text.to_string(),
        }
    }

    fn gold(id: &str, index: usize, label: GdprLabel) -> AnnotatedSentence {
        AnnotatedSentence {
            sentence: sentence(id, index, "text"),
            label,
        }
    }

    fn pred(id: &str, index: usize, label: GdprLabel) -> Prediction<f64> {
        Prediction {
            policy_id: id.to_string(),
            sentence_index: index,
            label,
            scores: BTreeMap::new(),
        }
    }

    #[test]
    fn merge_keeps_unanimous_and_queues_disputes() {
        let triples = vec![
            AnnotationTriple {
                sentence: sentence("p", 0, "We collect email."),
                labels: [GdprLabel::Cpi; 3],
            },
            AnnotationTriple {
                sentence: sentence("p", 1, "Contact us."),
                labels: [GdprLabel::Cd, GdprLabel::Cd, GdprLabel::Other],
            },
            AnnotationTriple {
                sentence: sentence("p", 2, "Filler."),
                labels: [GdprLabel::Other; 3],
            },
        ];
        let outcome = merge_annotations(&triples);
        assert_eq!(outcome.gold.len(), 2);
        assert_eq!(outcome.gold[0].label, GdprLabel::Cpi);
        assert_eq!(outcome.gold[1].label, GdprLabel::Other);
        // Two out of three agreeing is still a dispute, and the full
        // triple is queued so it can be re-annotated.
        assert_eq!(outcome.disputes.len(), 1);
        assert_eq!(outcome.disputes[0], triples[1]);
    }

    #[test]
    fn hand_checked_four_sentence_example() {
        let gold_set = vec![
            gold("p", 0, GdprLabel::Cpi),
            gold("p", 1, GdprLabel::Cpi),
            gold("p", 2, GdprLabel::Drp),
            gold("p", 3, GdprLabel::Other),
        ];
        let preds = vec![
            pred("p", 0, GdprLabel::Cpi),
            pred("p", 1, GdprLabel::Drp),
            pred("p", 2, GdprLabel::Drp),
            pred("p", 3, GdprLabel::Other),
        ];
        let report = evaluate(&gold_set, &preds).unwrap();

        let cpi = &report.per_label[&GdprLabel::Cpi];
        assert_eq!(cpi.precision, 1.0);
        assert_eq!(cpi.recall, 0.5);
        assert!((cpi.f1 - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(cpi.support, 2);

        let drp = &report.per_label[&GdprLabel::Drp];
        assert_eq!(drp.precision, 0.5);
        assert_eq!(drp.recall, 1.0);
        assert!((drp.f1 - 2.0 / 3.0).abs() < 1e-12);

        assert_eq!(report.other_row.precision, 1.0);
        assert_eq!(report.other_row.support, 1);

        // Macro averages cover the ten rules only.
        assert!((report.macro_avg.precision - 1.5 / 10.0).abs() < 1e-12);
        assert!((report.macro_avg.recall - 1.5 / 10.0).abs() < 1e-12);
        assert!((report.macro_avg.f1 - (4.0 / 3.0) / 10.0).abs() < 1e-12);

        assert_eq!(report.accuracy, 0.75);
        assert_eq!(report.confusion.count(GdprLabel::Cpi, GdprLabel::Drp), 1);
        assert_eq!(report.confusion.total(), 4);
    }

    #[test]
    fn other_is_excluded_from_macro_but_reported() {
        // Perfect on Other, useless on everything else: macro must be 0.
        let gold_set = vec![gold("p", 0, GdprLabel::Other), gold("p", 1, GdprLabel::Cpi)];
        let preds = vec![pred("p", 0, GdprLabel::Other), pred("p", 1, GdprLabel::Drp)];
        let report = evaluate(&gold_set, &preds).unwrap();
        assert_eq!(report.macro_avg.f1, 0.0);
        assert_eq!(report.other_row.f1, 1.0);
    }

    #[test]
    fn absent_labels_score_zero_not_nan() {
        let gold_set = vec![gold("p", 0, GdprLabel::Cpi)];
        let preds = vec![pred("p", 0, GdprLabel::Cpi)];
        let report = evaluate(&gold_set, &preds).unwrap();
        let rlc = &report.per_label[&GdprLabel::Rlc];
        assert_eq!(rlc.precision, 0.0);
        assert_eq!(rlc.recall, 0.0);
        assert_eq!(rlc.f1, 0.0);
        assert_eq!(rlc.support, 0);
    }

    #[test]
    fn coverage_mismatch_names_sentences() {
        let gold_set = vec![gold("p", 0, GdprLabel::Cpi), gold("p", 1, GdprLabel::Cd)];
        let preds = vec![pred("p", 0, GdprLabel::Cpi), pred("q", 7, GdprLabel::Cd)];
        let err = evaluate(&gold_set, &preds).unwrap_err();
        let message = err.to_string();
        assert!(message.contains("p#1"), "got: {message}");
        assert!(message.contains("q#7"), "got: {message}");
    }

    #[test]
    fn duplicates_are_rejected() {
        let gold_set = vec![gold("p", 0, GdprLabel::Cpi), gold("p", 0, GdprLabel::Cd)];
        let preds = vec![pred("p", 0, GdprLabel::Cpi)];
        assert!(matches!(
            evaluate(&gold_set, &preds),
            Err(EvaluationError::DuplicateGold(_))
        ));

        let gold_set = vec![gold("p", 0, GdprLabel::Cpi)];
        let preds = vec![pred("p", 0, GdprLabel::Cpi), pred("p", 0, GdprLabel::Cpi)];
        assert!(matches!(
            evaluate(&gold_set, &preds),
            Err(EvaluationError::DuplicatePrediction(_))
        ));
    }

    #[test]
    fn text_table_lists_all_rules_then_avg_then_other() {
        let gold_set = vec![gold("p", 0, GdprLabel::Cpi)];
        let preds = vec![pred("p", 0, GdprLabel::Cpi)];
        let table = evaluate(&gold_set, &preds).unwrap().to_text_table();
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 13);
        assert!(lines[0].starts_with("Label"));
        assert!(lines[1].starts_with("CPI"));
        assert!(lines[10].starts_with("RLC"));
        assert!(lines[11].starts_with("Avg"));
        assert!(lines[12].starts_with("Other"));
    }

    #[test]
    fn triples_jsonl_round_trip_with_lenient_labels() {
        let line = "{\"policy_id\":\"p\",\"sentence_index\":0,\"text\":\"x\",\"labels\":[\"cpi\",\"CPI \",\"CPI\"]}\n";
        let triples = read_triples_jsonl(line.as_bytes()).unwrap();
        assert_eq!(triples[0].labels, [GdprLabel::Cpi; 3]);
        let mut buf = Vec::new();
        write_triples_jsonl(&mut buf, &triples).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("\"labels\":[\"CPI\",\"CPI\",\"CPI\"]"));

        let bad = "{\"policy_id\":\"p\",\"sentence_index\":0,\"text\":\"x\",\"labels\":[\"CPI\"]}\n";
        assert!(read_triples_jsonl(bad.as_bytes()).is_err());
    }
}
