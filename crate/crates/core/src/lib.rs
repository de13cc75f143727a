//! Audit toolkit for privacy-policy corpora.
//!
//! The pipeline runs in three stages: ingest HTML policies into a cleaned,
//! filtered corpus ([`corpus`]), label sentences against the ten GDPR
//! Article 13 disclosure rules with a linear classifier or imported
//! predictions ([`classifier`]), then score transparency ([`compliance`])
//! and reading difficulty ([`readability`]) per policy and corpus-wide.
//!
//! All real-valued math is generic over the scalar type through
//! [`scalar::Real`]. The aliases at the crate root fix `f64`, which is what
//! the command-line tools and most callers want.

pub mod classifier;
pub mod compliance;
pub mod corpus;
pub mod evaluation;
pub mod jsonl;
pub mod readability;
pub mod scalar;
pub mod synthetic;
pub mod textstats;

/// Per-document count and ratio aggregates at `f64` precision.
pub type TextStatistics = textstats::TextStatistics<f64>;
/// Readability scores and bands at `f64` precision.
pub type ReadabilityReport = readability::ReadabilityReport<f64>;
/// Corpus-wide descriptive statistics at `f64` precision.
pub type CorpusStatistics = corpus::CorpusStatistics<f64>;
/// Trained sentence classifier at `f64` precision.
pub type ClassifierModel = classifier::ClassifierModel<f64>;
/// Classifier hyperparameters at `f64` precision.
pub type TrainConfig = classifier::TrainConfig<f64>;
/// A labelled sentence prediction with `f64` scores.
pub type Prediction = classifier::Prediction<f64>;
/// Precision/recall/F1 breakdown at `f64` precision.
pub type EvaluationReport = evaluation::EvaluationReport<f64>;
/// Single-policy rule coverage report at `f64` precision.
pub type ComplianceReport = compliance::ComplianceReport<f64>;
/// Corpus-wide rule coverage summary at `f64` precision.
pub type CorpusComplianceSummary = compliance::CorpusComplianceSummary<f64>;
