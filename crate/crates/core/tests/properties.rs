//! Randomized invariants over the text, classifier, and compliance layers.

use std::collections::BTreeMap;

use proptest::prelude::*;

use policy_audit::classifier::{oversample, AnnotatedSentence, GdprLabel, Prediction};
use policy_audit::compliance::{check_policy, RateBucket};
use policy_audit::textstats::{
    compute_statistics, count_syllables, segment, split_sentences, tokenize_words, Sentence,
    TextStatistics,
};

/// Text-ish strings: words, punctuation, newlines.
fn text_strategy() -> impl Strategy<Value = String> {
    proptest::string::string_regex("[A-Za-z0-9 .!?,;:'\\-\n\t]{0,200}").unwrap()
}

fn label_strategy() -> impl Strategy<Value = GdprLabel> {
    proptest::sample::select(GdprLabel::ALL.to_vec())
}

proptest! {
    /// Segmentation only ever cuts at whitespace, so the sequence of
    /// whitespace-delimited chunks survives a split/join round trip.
    #[test]
    fn segmentation_round_trip(text in text_strategy()) {
        let sentences = split_sentences(&text);
        let rejoined = sentences.join(" ");
        let original: Vec<&str> = text.split_whitespace().collect();
        let recovered: Vec<&str> = rejoined.split_whitespace().collect();
        prop_assert_eq!(original, recovered);
        for sentence in sentences {
            prop_assert_eq!(sentence, sentence.trim());
            prop_assert!(!sentence.is_empty());
        }
    }

    /// The same holds for completely arbitrary unicode.
    #[test]
    fn segmentation_round_trip_unicode(text in any::<String>()) {
        let sentences = split_sentences(&text);
        let rejoined = sentences.join(" ");
        let original: Vec<&str> = text.split_whitespace().collect();
        let recovered: Vec<&str> = rejoined.split_whitespace().collect();
        prop_assert_eq!(original, recovered);
    }

    /// Tokens are non-empty and contain no whitespace.
    #[test]
    fn tokens_are_clean(text in any::<String>()) {
        for token in tokenize_words(&text) {
            prop_assert!(!token.is_empty());
            prop_assert!(!token.chars().any(char::is_whitespace));
        }
    }

    /// Every word has at least one syllable and no more syllables than
    /// letters (when it has letters at all).
    #[test]
    fn syllable_bounds(text in text_strategy()) {
        for token in tokenize_words(&text) {
            let syllables = count_syllables(token);
            prop_assert!(syllables >= 1);
            let letters = token.chars().filter(|c| c.is_alphabetic()).count();
            if letters > 0 {
                prop_assert!(syllables <= letters, "{token}: {syllables} > {letters}");
            }
        }
    }

    /// Statistics over concatenated sentence lists are field-wise sums of
    /// the parts, and the stored ratios stay consistent with the counts.
    #[test]
    fn statistics_are_additive(a in text_strategy(), b in text_strategy()) {
        let left = segment("a", &a);
        let right = segment("b", &b);
        let stats =
            |s: &[Sentence]| -> Option<TextStatistics<f64>> { compute_statistics(s).ok() };
        let combined: Vec<Sentence> = left.iter().chain(right.iter()).cloned().collect();
        if let (Some(sa), Some(sb), Some(sc)) = (stats(&left), stats(&right), stats(&combined)) {
            prop_assert_eq!(sc.word_count, sa.word_count + sb.word_count);
            prop_assert_eq!(sc.sentence_count, sa.sentence_count + sb.sentence_count);
            prop_assert_eq!(sc.syllable_count, sa.syllable_count + sb.syllable_count);
            prop_assert_eq!(sc.letter_count, sa.letter_count + sb.letter_count);
            prop_assert_eq!(sc.complex_word_count, sa.complex_word_count + sb.complex_word_count);
            prop_assert_eq!(sc.long_word_count, sa.long_word_count + sb.long_word_count);
            prop_assert!((sc.asl * sc.sentence_count as f64 - sc.word_count as f64).abs() < 1e-6);
            prop_assert!((sc.asw * sc.word_count as f64 - sc.syllable_count as f64).abs() < 1e-6);
        }
    }

    /// Structural counts that feed readability never contradict each other.
    #[test]
    fn count_invariants(text in text_strategy()) {
        let sentences = segment("p", &text);
        if let Ok(stats) = compute_statistics::<f64>(&sentences) {
            prop_assert!(stats.syllable_count >= stats.word_count);
            prop_assert!(stats.complex_word_count <= stats.word_count);
            prop_assert!(stats.long_word_count <= stats.word_count);
        }
    }

    /// Compliance reports are internally consistent for any prediction
    /// multiset: the rate is the present count over ten, violations are
    /// the complement, and evidence exists exactly for present rules.
    #[test]
    fn compliance_consistency(
        labels in proptest::collection::vec((0usize..60, label_strategy()), 0..40)
    ) {
        let predictions: Vec<Prediction<f64>> = labels
            .iter()
            .map(|&(index, label)| Prediction {
                policy_id: "p".to_string(),
                sentence_index: index,
                label,
                scores: BTreeMap::new(),
            })
            .collect();
        let report = check_policy("p", &predictions).unwrap();
        let present = report.present_count();
        prop_assert_eq!(report.compliance_rate, present as f64 / 10.0);
        prop_assert_eq!(report.violations.len(), 10 - present);
        prop_assert_eq!(report.evidence.len(), present);
        for (rule, indices) in &report.evidence {
            prop_assert!(report.rule_present[rule]);
            prop_assert!(!indices.is_empty());
            prop_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        }
        for rule in &report.violations {
            prop_assert!(!report.rule_present[rule]);
        }
        let bucket = RateBucket::from_present_count(present);
        let expected = match present {
            0..=1 => RateBucket::Below20,
            2..=3 => RateBucket::From20To40,
            4..=5 => RateBucket::From40To60,
            6..=7 => RateBucket::From60To80,
            _ => RateBucket::From80To100,
        };
        prop_assert_eq!(bucket, expected);
    }

    /// Oversampling yields a uniform label histogram, keeps the input as a
    /// prefix, and only ever duplicates input sentences.
    #[test]
    fn oversample_invariants(
        labels in proptest::collection::vec(label_strategy(), 1..60),
        seed in any::<u64>()
    ) {
        let data: Vec<AnnotatedSentence> = labels
            .iter()
            .enumerate()
            .map(|(i, &label)| AnnotatedSentence {
                sentence: Sentence {
                    policy_id: "p".to_string(),
                    index: i,
                    text: format!("sentence number {i}"),
                },
                label,
            })
            .collect();
        let balanced = oversample(&data, seed).unwrap();

        let mut histogram: BTreeMap<GdprLabel, usize> = BTreeMap::new();
        for sample in &balanced {
            *histogram.entry(sample.label).or_insert(0) += 1;
        }
        let max = histogram.values().copied().max().unwrap();
        prop_assert!(histogram.values().all(|&count| count == max));

        prop_assert_eq!(&balanced[..data.len()], &data[..]);
        for sample in &balanced {
            prop_assert!(data.contains(sample));
        }
    }
}
