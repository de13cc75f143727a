//! Sentence segmentation, word tokenization, and per-document counts.
//!
//! Everything downstream (readability scores, corpus statistics, classifier
//! features) consumes the output of this module, so the rules here are
//! deliberately fixed and deterministic:
//!
//! * sentences end at `.`, `!`, or `?` followed by whitespace and an
//!   uppercase letter or digit, and at blank lines; a short abbreviation
//!   list ("Dr.", "e.g.", ...) suppresses false splits,
//! * words are maximal alphanumeric runs, keeping internal apostrophes and
//!   hyphens ("data-controller's" is one word),
//! * syllables are vowel groups over `aeiouy` ('y' only when not
//!   word-initial), minus a final lone 'e' ("like"), never less than one.

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::jsonl::{self, JsonlError};
use crate::scalar::{from_count, Real};

/// Errors from statistics construction.
#[derive(Debug, Error)]
pub enum StatsError {
    #[error("empty document: statistics are undefined")]
    EmptyDocument,
    #[error("statistics are undefined for zero sentences")]
    ZeroSentences,
    #[error("statistics are undefined for zero words")]
    ZeroWords,
    #[error(transparent)]
    Jsonl(#[from] JsonlError),
}

/// One segmented sentence of a policy, addressed by `(policy_id, index)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub policy_id: String,
    pub index: usize,
    pub text: String,
}

impl Sentence {
    pub fn to_ref(&self) -> SentenceRef {
        SentenceRef {
            policy_id: self.policy_id.clone(),
            sentence_index: self.index,
        }
    }
}

/// Address of a sentence without its text.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SentenceRef {
    pub policy_id: String,
    pub sentence_index: usize,
}

impl std::fmt::Display for SentenceRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}#{}", self.policy_id, self.sentence_index)
    }
}

/// First ten refs joined for error messages, with a count of the rest.
pub(crate) fn format_ref_list(refs: &[SentenceRef]) -> String {
    let shown: Vec<String> = refs.iter().take(10).map(|r| r.to_string()).collect();
    if refs.len() > 10 {
        format!("{}, and {} more", shown.join(", "), refs.len() - 10)
    } else {
        shown.join(", ")
    }
}

/// Count and ratio aggregates for one document.
///
/// `asl` is words per sentence, `asw` syllables per word, `alw` letters per
/// word. Complex words have three or more syllables; long words have more
/// than six characters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextStatistics<F> {
    pub word_count: usize,
    pub sentence_count: usize,
    pub syllable_count: usize,
    pub letter_count: usize,
    pub complex_word_count: usize,
    pub long_word_count: usize,
    pub asl: F,
    pub asw: F,
    pub alw: F,
}

impl<F: Real> TextStatistics<F> {
    /// Builds the aggregate from raw counts, refusing zero denominators.
    pub fn from_counts(
        word_count: usize,
        sentence_count: usize,
        syllable_count: usize,
        letter_count: usize,
        complex_word_count: usize,
        long_word_count: usize,
    ) -> Result<Self, StatsError> {
        if sentence_count == 0 {
            return Err(StatsError::ZeroSentences);
        }
        if word_count == 0 {
            return Err(StatsError::ZeroWords);
        }
        Ok(TextStatistics {
            word_count,
            sentence_count,
            syllable_count,
            letter_count,
            complex_word_count,
            long_word_count,
            asl: from_count::<F>(word_count) / from_count(sentence_count),
            asw: from_count::<F>(syllable_count) / from_count(word_count),
            alw: from_count::<F>(letter_count) / from_count(word_count),
        })
    }
}

/// Computes document statistics over already-segmented sentences.
pub fn compute_statistics<F: Real>(sentences: &[Sentence]) -> Result<TextStatistics<F>, StatsError> {
    if sentences.is_empty() {
        return Err(StatsError::EmptyDocument);
    }
    let mut words = 0;
    let mut syllables = 0;
    let mut letters = 0;
    let mut complex = 0;
    let mut long = 0;
    for sentence in sentences {
        for word in tokenize_words(&sentence.text) {
            let syl = count_syllables(word);
            words += 1;
            syllables += syl;
            letters += word.chars().filter(|c| c.is_alphabetic()).count();
            if syl >= 3 {
                complex += 1;
            }
            if word.chars().count() > 6 {
                long += 1;
            }
        }
    }
    TextStatistics::from_counts(words, sentences.len(), syllables, letters, complex, long)
}

/// Periods after these tokens never end a sentence (compared lowercase).
const ABBREVIATIONS: &[&str] = &[
    "mr", "mrs", "dr", "inc", "ltd", "e.g", "i.e", "etc", "no", "st", "vs",
];

/// Splits text into trimmed, non-empty sentences.
///
/// Text without any boundary comes back as a single sentence. Joining the
/// result with single spaces preserves every non-whitespace character in
/// order.
pub fn split_sentences(text: &str) -> Vec<&str> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let n = chars.len();
    let mut sentences = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;
    while i < n {
        let (pos, c) = chars[i];
        if matches!(c, '.' | '!' | '?') {
            // Runs like "?!" or "..." split at most once, after the run.
            if i + 1 < n && matches!(chars[i + 1].1, '.' | '!' | '?') {
                i += 1;
                continue;
            }
            let end = pos + c.len_utf8();
            let protected = c == '.' && ends_with_abbreviation(&text[start..pos]);
            if !protected && upper_or_digit_follows(&chars[i + 1..]) {
                push_sentence(&mut sentences, &text[start..end]);
                start = end;
            }
            i += 1;
        } else if c == '\n' {
            let mut j = i;
            let mut newlines = 0;
            while j < n && chars[j].1.is_whitespace() {
                if chars[j].1 == '\n' {
                    newlines += 1;
                }
                j += 1;
            }
            if newlines >= 2 {
                push_sentence(&mut sentences, &text[start..pos]);
                start = if j < n { chars[j].0 } else { text.len() };
            }
            i = j;
        } else {
            i += 1;
        }
    }
    push_sentence(&mut sentences, &text[start..]);
    sentences
}

/// Segments a document and addresses each sentence by position.
pub fn segment(policy_id: &str, text: &str) -> Vec<Sentence> {
    split_sentences(text)
        .into_iter()
        .enumerate()
        .map(|(index, text)| Sentence {
            policy_id: policy_id.to_string(),
            index,
            text: text.to_string(),
        })
        .collect()
}

fn push_sentence<'a>(sentences: &mut Vec<&'a str>, raw: &'a str) {
    let trimmed = raw.trim();
    if !trimmed.is_empty() {
        sentences.push(trimmed);
    }
}

fn upper_or_digit_follows(rest: &[(usize, char)]) -> bool {
    let mut saw_whitespace = false;
    for &(_, c) in rest {
        if c.is_whitespace() {
            saw_whitespace = true;
        } else {
            return saw_whitespace && (c.is_uppercase() || c.is_ascii_digit());
        }
    }
    false
}

fn ends_with_abbreviation(prefix: &str) -> bool {
    let tail_start = prefix
        .char_indices()
        .rev()
        .take_while(|(_, c)| c.is_alphanumeric() || *c == '.')
        .last()
        .map(|(i, _)| i);
    match tail_start {
        Some(i) => {
            let token = prefix[i..].trim_matches('.').to_lowercase();
            ABBREVIATIONS.contains(&token.as_str())
        }
        None => false,
    }
}

/// Tokenizes text into words: alphanumeric runs plus internal `'`/`-`.
pub fn tokenize_words(text: &str) -> Vec<&str> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let n = chars.len();
    let mut words = Vec::new();
    let mut i = 0usize;
    while i < n {
        if chars[i].1.is_alphanumeric() {
            let start = chars[i].0;
            let mut j = i + 1;
            while j < n {
                let c = chars[j].1;
                let continues = c.is_alphanumeric()
                    || (j + 1 < n
                        && matches!(c, '\'' | '\u{2019}' | '-')
                        && chars[j - 1].1.is_alphanumeric()
                        && chars[j + 1].1.is_alphanumeric());
                if !continues {
                    break;
                }
                j += 1;
            }
            let end = if j < n { chars[j].0 } else { text.len() };
            words.push(&text[start..end]);
            i = j;
        } else {
            i += 1;
        }
    }
    words
}

/// Heuristic syllable count; at least one for any word.
pub fn count_syllables(word: &str) -> usize {
    let chars: Vec<char> = word.chars().map(|c| c.to_ascii_lowercase()).collect();
    if !chars.iter().any(|c| c.is_alphabetic()) {
        return 1;
    }
    let is_vowel =
        |i: usize| matches!(chars[i], 'a' | 'e' | 'i' | 'o' | 'u') || (chars[i] == 'y' && i > 0);
    let mut groups = 0usize;
    let mut in_group = false;
    for i in 0..chars.len() {
        if is_vowel(i) {
            if !in_group {
                groups += 1;
            }
            in_group = true;
        } else {
            in_group = false;
        }
    }
    // A final lone 'e' is treated as silent ("like"), but a final vowel
    // group keeps it ("free", "agree"), and the count never drops to zero.
    let mut count = groups;
    if count > 1 && chars.len() >= 2 && *chars.last().unwrap() == 'e' {
        let before = chars[chars.len() - 2];
        if !matches!(before, 'a' | 'e' | 'i' | 'o' | 'u' | 'y') {
            count -= 1;
        }
    }
    count.max(1)
}

/// True for words of three or more syllables.
pub fn is_complex_word(word: &str) -> bool {
    count_syllables(word) >= 3
}

/// Writes sentences as one JSON object per line.
pub fn write_sentences_jsonl<W: Write>(writer: W, sentences: &[Sentence]) -> io::Result<()> {
    jsonl::write_lines(writer, sentences)
}

/// Reads sentences written by [`write_sentences_jsonl`].
pub fn read_sentences_jsonl<R: BufRead>(reader: R) -> Result<Vec<Sentence>, StatsError> {
    Ok(jsonl::read_lines(reader)?)
}
