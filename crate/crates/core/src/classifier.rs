//! The ten GDPR Article 13 disclosure labels and a sentence classifier
//! for them: tf-idf unigram/bigram features into multinomial logistic
//! regression, trained full-batch with a fixed seed so that identical
//! inputs always produce an identical model.
//!
//! Predictions can also be imported from a file produced by an external
//! model, so the audit pipeline downstream does not care where labels came
//! from.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::{self, BufRead, Write};
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::jsonl::{self, JsonlError};
use crate::scalar::{from_count, real, Real};
use crate::textstats::{format_ref_list, tokenize_words, Sentence, SentenceRef};

/// Sentence-level disclosure label: one of the ten GDPR Article 13
/// transparency rules, or `Other` for sentences that state none of them.
///
/// The declaration order is the canonical order used for reports, maps,
/// and tie-breaking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GdprLabel {
    #[serde(rename = "CPI")]
    Cpi,
    #[serde(rename = "DRP")]
    Drp,
    #[serde(rename = "DPP")]
    Dpp,
    #[serde(rename = "CD")]
    Cd,
    #[serde(rename = "RA")]
    Ra,
    #[serde(rename = "RRE")]
    Rre,
    #[serde(rename = "RRP")]
    Rrp,
    #[serde(rename = "ROP")]
    Rop,
    #[serde(rename = "RDP")]
    Rdp,
    #[serde(rename = "RLC")]
    Rlc,
    Other,
}

impl GdprLabel {
    /// Every label in canonical order, `Other` last.
    pub const ALL: [GdprLabel; 11] = [
        GdprLabel::Cpi,
        GdprLabel::Drp,
        GdprLabel::Dpp,
        GdprLabel::Cd,
        GdprLabel::Ra,
        GdprLabel::Rre,
        GdprLabel::Rrp,
        GdprLabel::Rop,
        GdprLabel::Rdp,
        GdprLabel::Rlc,
        GdprLabel::Other,
    ];

    /// The ten disclosure rules a compliant policy must state.
    pub const RULES: [GdprLabel; 10] = [
        GdprLabel::Cpi,
        GdprLabel::Drp,
        GdprLabel::Dpp,
        GdprLabel::Cd,
        GdprLabel::Ra,
        GdprLabel::Rre,
        GdprLabel::Rrp,
        GdprLabel::Rop,
        GdprLabel::Rdp,
        GdprLabel::Rlc,
    ];

    pub fn code(&self) -> &'static str {
        match self {
            GdprLabel::Cpi => "CPI",
            GdprLabel::Drp => "DRP",
            GdprLabel::Dpp => "DPP",
            GdprLabel::Cd => "CD",
            GdprLabel::Ra => "RA",
            GdprLabel::Rre => "RRE",
            GdprLabel::Rrp => "RRP",
            GdprLabel::Rop => "ROP",
            GdprLabel::Rdp => "RDP",
            GdprLabel::Rlc => "RLC",
            GdprLabel::Other => "Other",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            GdprLabel::Cpi => "Collect Personal Information",
            GdprLabel::Drp => "Data Retention Period",
            GdprLabel::Dpp => "Data Processing Purposes",
            GdprLabel::Cd => "Contact Details",
            GdprLabel::Ra => "Right to Access",
            GdprLabel::Rre => "Right to Rectify or Erase",
            GdprLabel::Rrp => "Right to Restrict Processing",
            GdprLabel::Rop => "Right to Object to Processing",
            GdprLabel::Rdp => "Right to Data Portability",
            GdprLabel::Rlc => "Right to Lodge a Complaint",
            GdprLabel::Other => "Other",
        }
    }
}

impl std::fmt::Display for GdprLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

/// Label string that matches no known code.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown label {0:?}")]
pub struct UnknownLabelError(pub String);

impl FromStr for GdprLabel {
    type Err = UnknownLabelError;

    /// Parses a label code, ignoring surrounding whitespace and case.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let token = s.trim();
        GdprLabel::ALL
            .into_iter()
            .find(|label| label.code().eq_ignore_ascii_case(token))
            .ok_or_else(|| UnknownLabelError(s.to_string()))
    }
}

/// A sentence with its gold label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GoldRecord", into = "GoldRecord")]
pub struct AnnotatedSentence {
    pub sentence: Sentence,
    pub label: GdprLabel,
}

/// Flat serialized form of [`AnnotatedSentence`].
#[derive(Clone, Serialize, Deserialize)]
struct GoldRecord {
    policy_id: String,
    sentence_index: usize,
    text: String,
    label: String,
}

impl TryFrom<GoldRecord> for AnnotatedSentence {
    type Error = UnknownLabelError;

    fn try_from(record: GoldRecord) -> Result<Self, Self::Error> {
        Ok(AnnotatedSentence {
            sentence: Sentence {
                policy_id: record.policy_id,
                index: record.sentence_index,
                text: record.text,
            },
            label: record.label.parse()?,
        })
    }
}

impl From<AnnotatedSentence> for GoldRecord {
    fn from(annotated: AnnotatedSentence) -> Self {
        GoldRecord {
            policy_id: annotated.sentence.policy_id,
            sentence_index: annotated.sentence.index,
            text: annotated.sentence.text,
            label: annotated.label.code().to_string(),
        }
    }
}

/// A predicted label for one sentence, with per-label decision scores.
///
/// Scores are raw linear scores, not probabilities; the predicted label is
/// the argmax, ties broken by canonical label order. Imported predictions
/// may omit the map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction<F> {
    pub policy_id: String,
    pub sentence_index: usize,
    pub label: GdprLabel,
    #[serde(default = "BTreeMap::new", skip_serializing_if = "BTreeMap::is_empty")]
    pub scores: BTreeMap<GdprLabel, F>,
}

impl<F> Prediction<F> {
    pub fn to_ref(&self) -> SentenceRef {
        SentenceRef {
            policy_id: self.policy_id.clone(),
            sentence_index: self.sentence_index,
        }
    }
}

/// Classifier failure modes.
#[derive(Debug, Error)]
pub enum ClassifierError {
    #[error("degenerate training data: need at least two distinct labels, found {found}")]
    DegenerateTrainingData { found: usize },
    #[error("cannot oversample an empty training set")]
    EmptyTrainingSet,
    #[error("unknown label {value:?} on line {line}")]
    UnknownLabel { line: usize, value: String },
    #[error("duplicate prediction for sentence {0}")]
    DuplicatePrediction(SentenceRef),
    #[error("predictions missing for {} sentence(s): {}", .0.len(), format_ref_list(.0))]
    MissingPredictions(Vec<SentenceRef>),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Jsonl(#[from] JsonlError),
    #[error("malformed model file: {0}")]
    ModelFormat(String),
}

/// Hyperparameters for [`train`]. The defaults are the ones every shipped
/// artifact was produced with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig<F> {
    /// Full-batch gradient descent passes.
    pub epochs: usize,
    /// Base learning rate, decayed as `lr / (1 + decay * epoch)`.
    pub learning_rate: F,
    pub lr_decay: F,
    /// L2 penalty on weights (not biases).
    pub l2_penalty: F,
    /// Randomly oversample minority labels to the majority count first.
    pub oversample: bool,
}

impl<F: Real> Default for TrainConfig<F> {
    fn default() -> Self {
        TrainConfig {
            epochs: 100,
            learning_rate: real(0.1),
            lr_decay: real(0.01),
            l2_penalty: real(0.01),
            oversample: false,
        }
    }
}

/// Training-run metadata recorded inside a saved model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub seed: u64,
    pub epochs: usize,
    pub oversampled: bool,
    /// Annotated sentences given to `train`.
    pub original_sentences: usize,
    /// Sentences actually optimized over, after any oversampling.
    pub trained_sentences: usize,
}

/// Trained linear classifier.
///
/// `weights` is label-major over `label_set`; feature index `j` is the
/// vocabulary rank of the j-th term in sorted order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierModel<F> {
    pub vocabulary: BTreeMap<String, usize>,
    pub idf: Vec<F>,
    pub label_set: Vec<GdprLabel>,
    pub weights: Vec<Vec<F>>,
    pub bias: Vec<F>,
    pub training: TrainingMeta,
}

/// Lowercased unigrams and space-joined bigrams of a sentence.
pub fn sentence_terms(text: &str) -> Vec<String> {
    let tokens: Vec<String> = tokenize_words(text)
        .into_iter()
        .map(|w| w.to_lowercase())
        .collect();
    let mut terms = Vec::with_capacity(tokens.len().saturating_mul(2));
    for pair in tokens.windows(2) {
        terms.push(format!("{} {}", pair[0], pair[1]));
    }
    terms.extend(tokens);
    terms
}

/// L2-normalized sparse tf-idf vector for a sentence, sorted by feature
/// index. Terms outside the vocabulary are ignored.
pub fn featurize<F: Real>(
    text: &str,
    vocabulary: &BTreeMap<String, usize>,
    idf: &[F],
) -> Vec<(usize, F)> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for term in sentence_terms(text) {
        if let Some(&index) = vocabulary.get(&term) {
            *counts.entry(index).or_insert(0) += 1;
        }
    }
    let mut features: Vec<(usize, F)> = counts
        .into_iter()
        .map(|(index, count)| (index, from_count::<F>(count) * idf[index]))
        .collect();
    let norm = features
        .iter()
        .map(|&(_, v)| v * v)
        .fold(F::zero(), |a, b| a + b)
        .sqrt();
    if norm > F::zero() {
        for (_, v) in &mut features {
            *v /= norm;
        }
    }
    features
}

/// Duplicates minority-label sentences, chosen uniformly with a seeded
/// generator, until every label matches the majority count.
///
/// The input order is preserved as a prefix; duplicates are appended
/// label by label in canonical order, so the result is fully determined
/// by `(data, seed)`.
pub fn oversample(
    data: &[AnnotatedSentence],
    seed: u64,
) -> Result<Vec<AnnotatedSentence>, ClassifierError> {
    if data.is_empty() {
        return Err(ClassifierError::EmptyTrainingSet);
    }
    let mut by_label: BTreeMap<GdprLabel, Vec<usize>> = BTreeMap::new();
    for (i, sample) in data.iter().enumerate() {
        by_label.entry(sample.label).or_default().push(i);
    }
    let target = by_label.values().map(Vec::len).max().unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = data.to_vec();
    for indices in by_label.values() {
        for _ in indices.len()..target {
            let pick = indices[rng.gen_range(0..indices.len())];
            out.push(data[pick].clone());
        }
    }
    Ok(out)
}

/// Splits annotated data into train and test parts, stratified by label.
///
/// Each label's sentences are shuffled with the seeded generator and cut
/// at `round(count * fraction)`, so label proportions carry over to both
/// sides instead of drifting with the shuffle. The same inputs always
/// produce the same partition; each side keeps the input order.
pub fn train_test_split(
    data: &[AnnotatedSentence],
    train_fraction: f64,
    seed: u64,
) -> (Vec<AnnotatedSentence>, Vec<AnnotatedSentence>) {
    use rand::seq::SliceRandom;
    let fraction = train_fraction.clamp(0.0, 1.0);
    let mut by_label: BTreeMap<GdprLabel, Vec<usize>> = BTreeMap::new();
    for (i, sample) in data.iter().enumerate() {
        by_label.entry(sample.label).or_default().push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train_idx = Vec::new();
    let mut test_idx = Vec::new();
    for indices in by_label.values_mut() {
        indices.shuffle(&mut rng);
        let cut = ((indices.len() as f64) * fraction).round() as usize;
        let cut = cut.min(indices.len());
        train_idx.extend_from_slice(&indices[..cut]);
        test_idx.extend_from_slice(&indices[cut..]);
    }
    train_idx.sort_unstable();
    test_idx.sort_unstable();
    let pick = |idx: &[usize]| idx.iter().map(|&i| data[i].clone()).collect();
    (pick(&train_idx), pick(&test_idx))
}

/// Trains the classifier with full-batch gradient descent from zero
/// weights. Requires at least two distinct labels.
///
/// `seed` only drives oversampling; the optimization itself is
/// deterministic in the data order.
pub fn train<F: Real>(
    data: &[AnnotatedSentence],
    config: &TrainConfig<F>,
    seed: u64,
) -> Result<ClassifierModel<F>, ClassifierError> {
    let distinct: BTreeSet<GdprLabel> = data.iter().map(|s| s.label).collect();
    if distinct.len() < 2 {
        return Err(ClassifierError::DegenerateTrainingData {
            found: distinct.len(),
        });
    }

    let oversampled;
    let samples: &[AnnotatedSentence] = if config.oversample {
        oversampled = oversample(data, seed)?;
        &oversampled
    } else {
        data
    };

    // Document frequencies over the (possibly oversampled) training set;
    // sorted term order defines the feature indices.
    let mut df: BTreeMap<String, usize> = BTreeMap::new();
    for sample in samples {
        let unique: BTreeSet<String> = sentence_terms(&sample.sentence.text).into_iter().collect();
        for term in unique {
            *df.entry(term).or_insert(0) += 1;
        }
    }
    let vocabulary: BTreeMap<String, usize> = df
        .keys()
        .enumerate()
        .map(|(index, term)| (term.clone(), index))
        .collect();
    let n_samples = samples.len();
    let idf: Vec<F> = df
        .values()
        .map(|&count| (from_count::<F>(n_samples) / from_count(count)).ln())
        .collect();

    let label_set: Vec<GdprLabel> = distinct.into_iter().collect();
    let label_index: BTreeMap<GdprLabel, usize> = label_set
        .iter()
        .enumerate()
        .map(|(i, &label)| (label, i))
        .collect();

    let features: Vec<Vec<(usize, F)>> = samples
        .iter()
        .map(|s| featurize(&s.sentence.text, &vocabulary, &idf))
        .collect();
    let targets: Vec<usize> = samples.iter().map(|s| label_index[&s.label]).collect();

    let n_labels = label_set.len();
    let n_features = vocabulary.len();
    let batch = from_count::<F>(n_samples);
    let mut weights = vec![vec![F::zero(); n_features]; n_labels];
    let mut bias = vec![F::zero(); n_labels];
    let mut grad_w = vec![vec![F::zero(); n_features]; n_labels];
    let mut grad_b = vec![F::zero(); n_labels];

    for epoch in 0..config.epochs {
        for row in &mut grad_w {
            for g in row.iter_mut() {
                *g = F::zero();
            }
        }
        for g in grad_b.iter_mut() {
            *g = F::zero();
        }

        for (x, &target) in features.iter().zip(&targets) {
            let mut probs: Vec<F> = (0..n_labels)
                .map(|l| {
                    let mut z = bias[l];
                    for &(j, v) in x {
                        z += weights[l][j] * v;
                    }
                    z
                })
                .collect();
            softmax_in_place(&mut probs);
            for l in 0..n_labels {
                let diff = probs[l] - if l == target { F::one() } else { F::zero() };
                grad_b[l] += diff;
                for &(j, v) in x {
                    grad_w[l][j] += diff * v;
                }
            }
        }

        let lr = config.learning_rate / (F::one() + config.lr_decay * from_count(epoch));
        for l in 0..n_labels {
            bias[l] -= lr * grad_b[l] / batch;
            for j in 0..n_features {
                let w = weights[l][j];
                weights[l][j] = w - lr * (grad_w[l][j] / batch + config.l2_penalty * w);
            }
        }
    }

    Ok(ClassifierModel {
        vocabulary,
        idf,
        label_set,
        weights,
        bias,
        training: TrainingMeta {
            seed,
            epochs: config.epochs,
            oversampled: config.oversample,
            original_sentences: data.len(),
            trained_sentences: n_samples,
        },
    })
}

fn softmax_in_place<F: Real>(scores: &mut [F]) {
    let max = scores
        .iter()
        .copied()
        .fold(F::neg_infinity(), |a, b| if b > a { b } else { a });
    let mut sum = F::zero();
    for s in scores.iter_mut() {
        *s = (*s - max).exp();
        sum += *s;
    }
    for s in scores.iter_mut() {
        *s /= sum;
    }
}

impl<F: Real> ClassifierModel<F> {
    /// Sparse tf-idf vector of a sentence under this model's vocabulary.
    pub fn featurize(&self, text: &str) -> Vec<(usize, F)> {
        featurize(text, &self.vocabulary, &self.idf)
    }

    /// Raw decision score per label.
    pub fn score(&self, text: &str) -> BTreeMap<GdprLabel, F> {
        let x = self.featurize(text);
        self.label_set
            .iter()
            .enumerate()
            .map(|(l, &label)| {
                let mut z = self.bias[l];
                for &(j, v) in &x {
                    z += self.weights[l][j] * v;
                }
                (label, z)
            })
            .collect()
    }
}

/// Labels every sentence with the model's argmax label.
pub fn predict<F: Real>(model: &ClassifierModel<F>, sentences: &[Sentence]) -> Vec<Prediction<F>> {
    sentences
        .iter()
        .map(|sentence| {
            let scores = model.score(&sentence.text);
            // label_set is canonically ordered and `>` is strict, so ties
            // resolve to the earlier label.
            let mut best = model.label_set[0];
            let mut best_score = scores[&best];
            for &label in &model.label_set[1..] {
                if scores[&label] > best_score {
                    best = label;
                    best_score = scores[&label];
                }
            }
            Prediction {
                policy_id: sentence.policy_id.clone(),
                sentence_index: sentence.index,
                label: best,
                scores,
            }
        })
        .collect()
}

impl<F: Real + Serialize> ClassifierModel<F> {
    /// Writes the model as a single pretty-printed JSON document.
    pub fn save(&self, path: &Path) -> Result<(), ClassifierError> {
        let mut json = serde_json::to_string_pretty(self)
            .map_err(|e| ClassifierError::ModelFormat(e.to_string()))?;
        json.push('\n');
        std::fs::write(path, json)?;
        Ok(())
    }
}

impl<F: Real + DeserializeOwned> ClassifierModel<F> {
    pub fn load(path: &Path) -> Result<Self, ClassifierError> {
        let json = std::fs::read_to_string(path)?;
        serde_json::from_str(&json).map_err(|e| ClassifierError::ModelFormat(e.to_string()))
    }
}

/// Writes predictions as one JSON object per line.
pub fn write_predictions_jsonl<F: Real + Serialize, W: Write>(
    writer: W,
    predictions: &[Prediction<F>],
) -> io::Result<()> {
    jsonl::write_lines(writer, predictions)
}

/// Reads predictions in the exact format written by
/// [`write_predictions_jsonl`].
pub fn read_predictions_jsonl<F: Real + DeserializeOwned, R: BufRead>(
    reader: R,
) -> Result<Vec<Prediction<F>>, ClassifierError> {
    Ok(jsonl::read_lines(reader)?)
}

/// Predictions imported from an external classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportedPredictions<F> {
    /// One prediction per expected sentence, in file order.
    pub predictions: Vec<Prediction<F>>,
    /// Well-formed records that match no expected sentence; reported, not
    /// fatal.
    pub extra: Vec<SentenceRef>,
}

#[derive(Deserialize)]
struct RawPrediction<F> {
    policy_id: String,
    sentence_index: usize,
    label: String,
    scores: Option<BTreeMap<String, F>>,
}

/// Imports external predictions and checks they cover `expected` exactly.
///
/// Labels are matched leniently (whitespace and case ignored). Duplicate
/// records for a sentence and any uncovered expected sentence are errors;
/// extra sentences are only reported.
pub fn import_predictions<F: Real + DeserializeOwned, R: BufRead>(
    reader: R,
    expected: &[Sentence],
) -> Result<ImportedPredictions<F>, ClassifierError> {
    let wanted: HashSet<(&str, usize)> = expected
        .iter()
        .map(|s| (s.policy_id.as_str(), s.index))
        .collect();

    let mut predictions = Vec::new();
    let mut extra = Vec::new();
    let mut seen: HashSet<(String, usize)> = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let number = i + 1;
        let raw: RawPrediction<F> =
            serde_json::from_str(&line).map_err(|e| JsonlError::Malformed {
                line: number,
                message: e.to_string(),
            })?;
        let label = raw
            .label
            .parse::<GdprLabel>()
            .map_err(|e| ClassifierError::UnknownLabel {
                line: number,
                value: e.0,
            })?;
        let mut scores = BTreeMap::new();
        for (key, value) in raw.scores.unwrap_or_default() {
            let label = key
                .parse::<GdprLabel>()
                .map_err(|e| ClassifierError::UnknownLabel {
                    line: number,
                    value: e.0,
                })?;
            scores.insert(label, value);
        }
        let prediction = Prediction {
            policy_id: raw.policy_id,
            sentence_index: raw.sentence_index,
            label,
            scores,
        };
        if !wanted.contains(&(prediction.policy_id.as_str(), prediction.sentence_index)) {
            extra.push(prediction.to_ref());
            continue;
        }
        if !seen.insert((prediction.policy_id.clone(), prediction.sentence_index)) {
            return Err(ClassifierError::DuplicatePrediction(prediction.to_ref()));
        }
        predictions.push(prediction);
    }

    let missing: Vec<SentenceRef> = expected
        .iter()
        .filter(|s| !seen.contains(&(s.policy_id.clone(), s.index)))
        .map(Sentence::to_ref)
        .collect();
    if !missing.is_empty() {
        return Err(ClassifierError::MissingPredictions(missing));
    }

    Ok(ImportedPredictions { predictions, extra })
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

    fn annotated(id: &str, index: usize, text: &str, label: GdprLabel) -> AnnotatedSentence {
        AnnotatedSentence {
            sentence: sentence(id, index, text),
            label,
        }
    }

    #[test]
    fn canonical_order_is_declaration_order() {
        let codes: Vec<&str> = GdprLabel::ALL.iter().map(|l| l.code()).collect();
        assert_eq!(
            codes,
            vec!["CPI", "DRP", "DPP", "CD", "RA", "RRE", "RRP", "ROP", "RDP", "RLC", "Other"]
        );
        assert_eq!(GdprLabel::RULES.len(), 10);
        assert!(GdprLabel::Cpi < GdprLabel::Other);
        assert!(!GdprLabel::RULES.contains(&GdprLabel::Other));
    }

    #[test]
    fn label_parsing_is_lenient() {
        assert_eq!("CPI".parse::<GdprLabel>().unwrap(), GdprLabel::Cpi);
        assert_eq!("CPI ".parse::<GdprLabel>().unwrap(), GdprLabel::Cpi);
        assert_eq!(" rlc".parse::<GdprLabel>().unwrap(), GdprLabel::Rlc);
        assert_eq!("other".parse::<GdprLabel>().unwrap(), GdprLabel::Other);
        assert!("CPJ".parse::<GdprLabel>().is_err());
        assert!("".parse::<GdprLabel>().is_err());
    }

    #[test]
    fn label_serializes_to_code() {
        assert_eq!(serde_json::to_string(&GdprLabel::Cpi).unwrap(), "\"CPI\"");
        assert_eq!(serde_json::to_string(&GdprLabel::Other).unwrap(), "\"Other\"");
    }

    #[test]
    fn terms_are_unigrams_and_bigrams() {
        let terms = sentence_terms("We collect Data");
        assert!(terms.contains(&"we".to_string()));
        assert!(terms.contains(&"data".to_string()));
        assert!(terms.contains(&"we collect".to_string()));
        assert!(terms.contains(&"collect data".to_string()));
        assert_eq!(terms.len(), 5);
    }

    #[test]
    fn featurize_matches_hand_computation() {
        // Corpus of two sentences; df=2 terms get idf 0, df=1 terms ln 2.
        let data = [
            annotated("p", 0, "we collect data", GdprLabel::Cpi),
            annotated("p", 1, "we store data", GdprLabel::Drp),
        ];
        let model = train(&data, &TrainConfig::<f64>::default(), 1).unwrap();
        let features = model.featurize("we collect data");
        // Non-zero features: "collect", "we collect", "collect data", each
        // tf=1 * ln 2, normalized to 1/sqrt(3).
        let nonzero: Vec<f64> = features.iter().map(|&(_, v)| v).filter(|v| *v != 0.0).collect();
        assert_eq!(nonzero.len(), 3);
        for v in nonzero {
            assert!((v - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        }
        let norm: f64 = features.iter().map(|&(_, v)| v * v).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn vocabulary_indices_follow_sorted_order() {
        let data = [
            annotated("p", 0, "b a", GdprLabel::Cpi),
            annotated("p", 1, "c a", GdprLabel::Drp),
        ];
        let model = train(&data, &TrainConfig::<f64>::default(), 1).unwrap();
        let mut terms: Vec<(&String, &usize)> = model.vocabulary.iter().collect();
        terms.sort_by_key(|&(_, i)| *i);
        let ordered: Vec<&str> = terms.iter().map(|(t, _)| t.as_str()).collect();
        assert_eq!(ordered, vec!["a", "b", "b a", "c", "c a"]);
        assert_eq!(model.idf.len(), model.vocabulary.len());
    }

    #[test]
    fn train_rejects_degenerate_labels() {
        let data = [
            annotated("p", 0, "we collect data", GdprLabel::Cpi),
            annotated("p", 1, "we collect more", GdprLabel::Cpi),
        ];
        let err = train(&data, &TrainConfig::<f64>::default(), 1).unwrap_err();
        assert!(err.to_string().contains("degenerate"));
        assert!(train::<f64>(&[], &TrainConfig::default(), 1).is_err());
    }

    #[test]
    fn train_separates_distinct_vocabularies() {
        let mut data = Vec::new();
        for i in 0..8 {
            data.push(annotated("p", i, "you may opt out of processing", GdprLabel::Rop));
            data.push(annotated("p", 8 + i, "we keep records for two years", GdprLabel::Drp));
        }
        let model = train(&data, &TrainConfig::<f64>::default(), 7).unwrap();
        let preds = predict(
            &model,
            &[
                sentence("q", 0, "opt out of processing here"),
                sentence("q", 1, "records kept for five years"),
            ],
        );
        assert_eq!(preds[0].label, GdprLabel::Rop);
        assert_eq!(preds[1].label, GdprLabel::Drp);
        assert_eq!(preds[0].scores.len(), 2);
    }

    #[test]
    fn training_is_deterministic() {
        let data: Vec<AnnotatedSentence> = (0..6)
            .map(|i| {
                let label = if i % 2 == 0 { GdprLabel::Cpi } else { GdprLabel::Cd };
                annotated("p", i, &format!("sample text number {i}"), label)
            })
            .collect();
        let a = train(&data, &TrainConfig::<f64>::default(), 42).unwrap();
        let b = train(&data, &TrainConfig::<f64>::default(), 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn oversample_balances_and_preserves_originals() {
        let mut data = Vec::new();
        for i in 0..9 {
            data.push(annotated("p", i, "majority sentence", GdprLabel::Cpi));
        }
        data.push(annotated("p", 9, "minority sentence", GdprLabel::Rlc));
        let balanced = oversample(&data, 3).unwrap();
        assert_eq!(balanced.len(), 18);
        assert_eq!(&balanced[..10], &data[..]);
        let minority = balanced.iter().filter(|s| s.label == GdprLabel::Rlc).count();
        assert_eq!(minority, 9);
        // Repeatable and only consisting of input sentences.
        assert_eq!(oversample(&data, 3).unwrap(), balanced);
        for s in &balanced {
            assert!(data.contains(s));
        }
        assert!(oversample(&[], 3).is_err());
    }

    #[test]
    fn split_is_seeded_and_exhaustive() {
        let data: Vec<AnnotatedSentence> = (0..10)
            .map(|i| annotated("p", i, &format!("text {i}"), GdprLabel::Cpi))
            .collect();
        let (train_a, test_a) = train_test_split(&data, 0.8, 11);
        let (train_b, test_b) = train_test_split(&data, 0.8, 11);
        assert_eq!(train_a, train_b);
        assert_eq!(test_a, test_b);
        assert_eq!(train_a.len(), 8);
        assert_eq!(test_a.len(), 2);
        let mut all: Vec<usize> = train_a.iter().chain(&test_a).map(|s| s.sentence.index).collect();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn model_save_load_round_trip() {
        let data = [
            annotated("p", 0, "we collect data", GdprLabel::Cpi),
            annotated("p", 1, "contact us by mail", GdprLabel::Cd),
        ];
        let model = train(&data, &TrainConfig::<f64>::default(), 5).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        model.save(&path).unwrap();
        let loaded = ClassifierModel::<f64>::load(&path).unwrap();
        assert_eq!(loaded, model);
    }

    #[test]
    fn predictions_jsonl_round_trip() {
        let data = [
            annotated("p", 0, "we collect data", GdprLabel::Cpi),
            annotated("p", 1, "contact us by mail", GdprLabel::Cd),
        ];
        let model = train(&data, &TrainConfig::<f64>::default(), 5).unwrap();
        let preds = predict(&model, &[sentence("p", 0, "we collect data")]);
        let mut buf = Vec::new();
        write_predictions_jsonl(&mut buf, &preds).unwrap();
        let back: Vec<Prediction<f64>> = read_predictions_jsonl(buf.as_slice()).unwrap();
        assert_eq!(back, preds);
    }

    #[test]
    fn import_accepts_lenient_labels_and_reports_extras() {
        let expected = [sentence("p", 0, "a"), sentence("p", 1, "b")];
        let file = concat!(
            "{\"policy_id\":\"p\",\"sentence_index\":0,\"label\":\"CPI \"}\n",
            "{\"policy_id\":\"p\",\"sentence_index\":1,\"label\":\"other\",\"scores\":{\"cpi\":0.2}}\n",
            "{\"policy_id\":\"zz\",\"sentence_index\":9,\"label\":\"RA\"}\n",
        );
        let imported: ImportedPredictions<f64> =
            import_predictions(file.as_bytes(), &expected).unwrap();
        assert_eq!(imported.predictions.len(), 2);
        assert_eq!(imported.predictions[0].label, GdprLabel::Cpi);
        assert_eq!(imported.predictions[1].label, GdprLabel::Other);
        assert_eq!(imported.predictions[1].scores[&GdprLabel::Cpi], 0.2);
        assert_eq!(imported.extra.len(), 1);
        assert_eq!(imported.extra[0].policy_id, "zz");
    }

    #[test]
    fn import_rejects_missing_duplicate_and_unknown() {
        let expected = [sentence("p", 0, "a"), sentence("p", 1, "b")];

        let missing = "{\"policy_id\":\"p\",\"sentence_index\":0,\"label\":\"CPI\"}\n";
        let err = import_predictions::<f64, _>(missing.as_bytes(), &expected).unwrap_err();
        assert!(err.to_string().contains("p#1"), "got: {err}");

        let dup = concat!(
            "{\"policy_id\":\"p\",\"sentence_index\":0,\"label\":\"CPI\"}\n",
            "{\"policy_id\":\"p\",\"sentence_index\":0,\"label\":\"RA\"}\n",
        );
        let err = import_predictions::<f64, _>(dup.as_bytes(), &expected).unwrap_err();
        assert!(err.to_string().contains("duplicate"));

        let unknown = "{\"policy_id\":\"p\",\"sentence_index\":0,\"label\":\"BOGUS\"}\n";
        let err = import_predictions::<f64, _>(unknown.as_bytes(), &expected).unwrap_err();
        assert!(err.to_string().contains("BOGUS"));
    }

    #[test]
    fn gold_record_round_trip_is_flat_and_lenient() {
        let a = annotated("p", 3, "We collect emails.", GdprLabel::Cpi);
        let json = serde_json::to_string(&a).unwrap();
        assert!(json.contains("\"sentence_index\":3"));
        assert!(json.contains("\"label\":\"CPI\""));
        let back: AnnotatedSentence = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        let lenient: AnnotatedSentence = serde_json::from_str(
            "{\"policy_id\":\"p\",\"sentence_index\":3,\"text\":\"x\",\"label\":\" cpi \"}",
        )
        .unwrap();
        assert_eq!(lenient.label, GdprLabel::Cpi);
    }

    #[test]
    fn trains_at_f32_too() {
        let data = [
            annotated("p", 0, "we collect data", GdprLabel::Cpi),
            annotated("p", 1, "contact us by mail", GdprLabel::Cd),
        ];
        let model = train(&data, &TrainConfig::<f32>::default(), 5).unwrap();
        let preds = predict(&model, &[sentence("p", 0, "we collect data")]);
        assert_eq!(preds[0].label, GdprLabel::Cpi);
    }
}
