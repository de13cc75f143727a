//! Deterministic synthetic corpora for tests, benchmarks, and demos.
//!
//! Every label owns six coined keywords that appear in no other label's
//! sentences, so annotated corpora are separable by construction; the
//! generated HTML documents additionally mix in common English filler so
//! they pass the language filter. Everything is driven by a seeded
//! generator: the same seed always yields byte-identical fixtures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classifier::{AnnotatedSentence, GdprLabel};
use crate::textstats::Sentence;

/// Filler words shared by every label; all are common English stopwords.
pub const FILLER_WORDS: [&str; 12] = [
    "the", "we", "you", "our", "your", "this", "of", "to", "and", "for", "may", "will",
];

/// The six coined keywords owned by a label.
pub fn label_keywords(label: GdprLabel) -> [String; 6] {
    let code = label.code().to_lowercase();
    std::array::from_fn(|k| format!("{code}kw{k}"))
}

/// One synthetic sentence: `n_keywords` distinct picks from `keywords`
/// (capped at the pool size) plus `n_fillers` filler draws, shuffled,
/// capitalized, and terminated.
pub fn compose_sentence<R: Rng>(
    rng: &mut R,
    keywords: &[String],
    n_keywords: usize,
    n_fillers: usize,
) -> String {
    use rand::seq::SliceRandom;
    let mut words: Vec<&str> = keywords
        .choose_multiple(rng, n_keywords.min(keywords.len()))
        .map(String::as_str)
        .collect();
    for _ in 0..n_fillers {
        words.push(FILLER_WORDS[rng.gen_range(0..FILLER_WORDS.len())]);
    }
    words.shuffle(rng);
    let mut text = words.join(" ");
    if let Some(first) = text.get_mut(0..1) {
        first.make_ascii_uppercase();
    }
    text.push('.');
    text
}

/// Pure keyword mix: every unigram and bigram is owned by the label, so
/// the corpus is linearly separable by construction. This is the fixture
/// for exercising the training machinery, not linguistic realism.
fn standard_sentence<R: Rng>(rng: &mut R, label: GdprLabel) -> String {
    let keywords = label_keywords(label);
    compose_sentence(rng, &keywords, 4, 0)
}

/// Prose-like mix used for generated HTML: half filler words, so the
/// documents pass the English language filter.
fn prose_sentence<R: Rng>(rng: &mut R, label: GdprLabel) -> String {
    let keywords = label_keywords(label);
    compose_sentence(rng, &keywords, 3, 3)
}

/// Annotated sentences under one synthetic policy id, in the order of
/// `counts`; `counts` pairs a label with how many sentences to generate.
pub fn labeled_sentences(
    seed: u64,
    policy_id: &str,
    counts: &[(GdprLabel, usize)],
) -> Vec<AnnotatedSentence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for &(label, count) in counts {
        for _ in 0..count {
            let text = standard_sentence(&mut rng, label);
            out.push(AnnotatedSentence {
                sentence: Sentence {
                    policy_id: policy_id.to_string(),
                    index: out.len(),
                    text,
                },
                label,
            });
        }
    }
    out
}

/// `per_label` sentences for each of the eleven labels.
pub fn balanced_corpus(seed: u64, per_label: usize) -> Vec<AnnotatedSentence> {
    let counts: Vec<(GdprLabel, usize)> =
        GdprLabel::ALL.iter().map(|&l| (l, per_label)).collect();
    labeled_sentences(seed, "synthetic", &counts)
}

/// An imbalanced corpus where the minority label is easy to mistake for a
/// majority one.
#[derive(Debug, Clone)]
pub struct ImbalancedFixture {
    pub train: Vec<AnnotatedSentence>,
    pub test: Vec<AnnotatedSentence>,
    pub minority: GdprLabel,
    /// Majority label whose keywords also appear in minority sentences.
    pub confuser: GdprLabel,
}

/// Builds a train set with `majority_per_label` sentences for every label
/// except the minority, which gets only `minority_count`, plus a balanced
/// test set of `test_per_label` sentences per label.
///
/// Minority sentences mix two confuser keywords with two of their own, so
/// an undertrained model leans toward the confuser; this is the fixture
/// for showing what oversampling buys.
pub fn imbalanced_fixture(
    seed: u64,
    majority_per_label: usize,
    minority_count: usize,
    test_per_label: usize,
) -> ImbalancedFixture {
    let minority = GdprLabel::Rlc;
    let confuser = GdprLabel::Cpi;
    let minority_keywords = label_keywords(minority);
    let confuser_keywords = label_keywords(confuser);
    let overlap_pool: Vec<String> = confuser_keywords
        .iter()
        .take(2)
        .chain(minority_keywords.iter().take(2))
        .cloned()
        .collect();

    let overlap_sentence = |rng: &mut ChaCha8Rng| {
        // One draw from each side plus a wildcard keeps the mix hard.
        let mut words = [
            overlap_pool[rng.gen_range(0..2)].clone(),
            overlap_pool[2 + rng.gen_range(0..2)].clone(),
            overlap_pool[rng.gen_range(0..overlap_pool.len())].clone(),
        ];
        use rand::seq::SliceRandom;
        words.shuffle(rng);
        let mut text = words.join(" ");
        if let Some(first) = text.get_mut(0..1) {
            first.make_ascii_uppercase();
        }
        text.push('.');
        text
    };

    let build = |rng_seed: u64, policy_id: &str, per_majority: usize, minority_n: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let mut out = Vec::new();
        for &label in &GdprLabel::ALL {
            let count = if label == minority { minority_n } else { per_majority };
            for _ in 0..count {
                let text = if label == minority {
                    overlap_sentence(&mut rng)
                } else {
                    standard_sentence(&mut rng, label)
                };
                out.push(AnnotatedSentence {
                    sentence: Sentence {
                        policy_id: policy_id.to_string(),
                        index: out.len(),
                        text,
                    },
                    label,
                });
            }
        }
        out
    };

    ImbalancedFixture {
        train: build(seed, "synthetic-train", majority_per_label, minority_count),
        test: build(
            seed.wrapping_add(1),
            "synthetic-test",
            test_per_label,
            test_per_label,
        ),
        minority,
        confuser,
    }
}

/// HTML for a synthetic policy that states exactly `present_rules`, plus
/// `filler_paragraphs` paragraphs of background text.
pub fn policy_html(seed: u64, present_rules: &[GdprLabel], filler_paragraphs: usize) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut html = String::from("<html><head><title>Privacy Policy</title></head><body>\n");
    html.push_str("<h1>Privacy Policy</h1>\n");
    for &rule in present_rules {
        html.push_str(&format!("<p>{}</p>\n", prose_sentence(&mut rng, rule)));
    }
    for _ in 0..filler_paragraphs {
        html.push_str(&format!(
            "<p>{}</p>\n",
            prose_sentence(&mut rng, GdprLabel::Other)
        ));
    }
    html.push_str("</body></html>\n");
    html
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{clean_html, english_stopword_ratio};

    #[test]
    fn keyword_pools_are_disjoint() {
        let mut all = std::collections::HashSet::new();
        for label in GdprLabel::ALL {
            for keyword in label_keywords(label) {
                assert!(all.insert(keyword));
            }
        }
        assert_eq!(all.len(), 66);
    }

    #[test]
    fn generation_is_deterministic() {
        assert_eq!(balanced_corpus(9, 5), balanced_corpus(9, 5));
        assert_eq!(
            policy_html(3, &[GdprLabel::Cpi], 2),
            policy_html(3, &[GdprLabel::Cpi], 2)
        );
        let a = imbalanced_fixture(7, 20, 2, 5);
        let b = imbalanced_fixture(7, 20, 2, 5);
        assert_eq!(a.train, b.train);
        assert_eq!(a.test, b.test);
    }

    #[test]
    fn balanced_corpus_has_expected_shape() {
        let corpus = balanced_corpus(1, 4);
        assert_eq!(corpus.len(), 44);
        for label in GdprLabel::ALL {
            assert_eq!(corpus.iter().filter(|s| s.label == label).count(), 4);
        }
        // Indices are unique within the synthetic policy.
        let mut indices: Vec<usize> = corpus.iter().map(|s| s.sentence.index).collect();
        indices.sort_unstable();
        indices.dedup();
        assert_eq!(indices.len(), 44);
    }

    #[test]
    fn imbalanced_fixture_is_imbalanced() {
        let fixture = imbalanced_fixture(7, 50, 5, 20);
        let minority = fixture
            .train
            .iter()
            .filter(|s| s.label == fixture.minority)
            .count();
        let majority = fixture
            .train
            .iter()
            .filter(|s| s.label == fixture.confuser)
            .count();
        assert_eq!(minority, 5);
        assert_eq!(majority, 50);
        assert_eq!(fixture.test.len(), 11 * 20);
    }

    #[test]
    fn synthetic_policies_pass_the_language_filter() {
        let html = policy_html(5, &GdprLabel::RULES, 10);
        let text = clean_html(html.as_bytes());
        assert!(english_stopword_ratio(&text) >= 0.08);
        assert!(text.contains("Privacy Policy"));
    }
}
