//! End-to-end flows through the library using the crate-root `f64` aliases.

use policy_audit::classifier::{predict, train, train_test_split, GdprLabel};
use policy_audit::compliance::{check_policy, summarize_corpus, RateBucket};
use policy_audit::evaluation::evaluate_model;
use policy_audit::corpus::clean_html;
use policy_audit::readability::readability_report;
use policy_audit::synthetic::{balanced_corpus, imbalanced_fixture, policy_html};
use policy_audit::textstats::{compute_statistics, segment};
use policy_audit::TrainConfig;

/// Train on a balanced synthetic corpus, score the held-out part, and
/// require strong macro metrics over the ten rules.
#[test]
fn balanced_corpus_trains_to_high_macro_f1() {
    let corpus = balanced_corpus(42, 50);
    let (train_set, test_set) = train_test_split(&corpus, 0.8, 7);
    let model = train(&train_set, &TrainConfig::default(), 42).unwrap();
    let report = evaluate_model(&model, &test_set).unwrap();
    assert!(
        report.macro_avg.f1 >= 0.95,
        "macro F1 {:.4} below 0.95",
        report.macro_avg.f1
    );
    assert!(report.accuracy >= 0.95, "accuracy {:.4}", report.accuracy);
}

/// Oversampling the skewed fixture must improve recall on the starved
/// label; everything else equal.
#[test]
fn oversampling_lifts_minority_recall() {
    let fixture = imbalanced_fixture(11, 30, 3, 12);

    let mut config = TrainConfig::default();
    let baseline = train(&fixture.train, &config, 5).unwrap();
    config.oversample = true;
    let balanced = train(&fixture.train, &config, 5).unwrap();

    let before = evaluate_model(&baseline, &fixture.test).unwrap();
    let after = evaluate_model(&balanced, &fixture.test).unwrap();
    let recall_before = before.per_label[&fixture.minority].recall;
    let recall_after = after.per_label[&fixture.minority].recall;
    assert!(
        recall_after > recall_before,
        "minority recall did not improve: {recall_before:.4} -> {recall_after:.4}"
    );
}

/// HTML all the way to a readability report.
#[test]
fn html_to_readability_report() {
    let html = policy_html(3, &GdprLabel::RULES, 4);
    let text = clean_html(html.as_bytes());
    let sentences = segment("doc", &text);
    // Title, heading, ten rule sentences, four filler paragraphs.
    assert_eq!(sentences.len(), 16);
    let stats = compute_statistics::<f64>(&sentences).unwrap();
    let report = readability_report(&stats).unwrap();
    assert!(report.fre.is_finite());
    assert!(report.smog >= 3.0);
}

/// Predictions through compliance checking into a corpus summary.
#[test]
fn predictions_to_compliance_summary() {
    let corpus = balanced_corpus(9, 40);
    let (train_set, _) = train_test_split(&corpus, 0.8, 1);
    let model = train(&train_set, &TrainConfig::default(), 9).unwrap();

    let full = policy_html(21, &GdprLabel::RULES, 2);
    let sparse = policy_html(22, &[GdprLabel::Cpi, GdprLabel::Dpp], 5);

    let mut reports = Vec::new();
    for (id, html) in [("full", &full), ("sparse", &sparse)] {
        let sentences = segment(id, &clean_html(html.as_bytes()));
        let predictions = predict(&model, &sentences);
        reports.push(check_policy(id, &predictions).unwrap());
    }

    assert!(reports[0].present_count() >= 8);
    assert!(reports[1].present_count() < reports[0].present_count());

    let summary = summarize_corpus(&reports).unwrap();
    assert_eq!(summary.policy_count, 2);
    assert_eq!(summary.bucket_pct.len(), RateBucket::ALL.len());
    let total: f64 = summary.bucket_pct.values().sum();
    assert!((total - 100.0).abs() < 1e-9);
}
