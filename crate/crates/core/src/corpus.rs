//! Corpus ingestion: manifests, HTML-to-text cleaning, the document
//! filter funnel, and corpus-level descriptive statistics.
//!
//! Ingestion applies three filters in a fixed order: an English check
//! based on stopword density, a minimum size check, then deduplication of
//! cleaned text (case- and whitespace-insensitive, first occurrence in
//! manifest order wins). Every readable document is kept with its filter
//! status so rejects stay auditable; unreadable files are recorded as
//! per-entry errors without aborting the run.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::sync::LazyLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classifier::{AnnotatedSentence, GdprLabel};
use crate::jsonl::{self, JsonlError};
use crate::scalar::{percent, ratio, Real};
use crate::textstats::{split_sentences, tokenize_words};

/// Corpus-level failure modes.
#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("malformed manifest {path}: {message}")]
    Manifest { path: PathBuf, message: String },
    #[error("duplicate manifest id {0:?}")]
    DuplicateManifestId(String),
    #[error("annotations reference unknown policy id {0:?}")]
    UnknownPolicyId(String),
    #[error(transparent)]
    Jsonl(#[from] JsonlError),
}

/// One row of a corpus manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub company: String,
    pub source_uri: String,
    pub local_path: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jurisdiction: Option<String>,
}

/// A named list of policy files to ingest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub name: String,
    pub entries: Vec<ManifestEntry>,
}

impl CorpusManifest {
    pub fn new(name: impl Into<String>, entries: Vec<ManifestEntry>) -> Self {
        CorpusManifest {
            name: name.into(),
            entries,
        }
    }

    /// Loads a manifest from a `.csv` file (header
    /// `id,company,source_uri,local_path`, optional `jurisdiction`) or a
    /// `.json` array of entries. Other extensions are sniffed by content.
    /// Relative `local_path`s are resolved against the manifest location.
    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        let data = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let extension = path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase());
        let entries = match extension.as_deref() {
            Some("csv") => parse_manifest_csv(&data),
            Some("json") => parse_manifest_json(&data),
            _ if data.trim_start().starts_with('[') => parse_manifest_json(&data),
            _ => parse_manifest_csv(&data),
        }
        .map_err(|message| CorpusError::Manifest {
            path: path.to_path_buf(),
            message,
        })?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "corpus".to_string());
        let mut manifest = CorpusManifest { name, entries };
        if let Some(base) = path.parent() {
            manifest.resolve_relative_to(base);
        }
        manifest.validate()?;
        Ok(manifest)
    }

    /// Rewrites relative entry paths against `base`.
    pub fn resolve_relative_to(&mut self, base: &Path) {
        for entry in &mut self.entries {
            if entry.local_path.is_relative() {
                entry.local_path = base.join(&entry.local_path);
            }
        }
    }

    /// Checks that entry ids are pairwise distinct.
    pub fn validate(&self) -> Result<(), CorpusError> {
        let mut seen = HashSet::new();
        for entry in &self.entries {
            if !seen.insert(entry.id.as_str()) {
                return Err(CorpusError::DuplicateManifestId(entry.id.clone()));
            }
        }
        Ok(())
    }
}

fn parse_manifest_csv(data: &str) -> Result<Vec<ManifestEntry>, String> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(data.as_bytes());
    let headers = reader.headers().map_err(|e| e.to_string())?.clone();
    for required in ["id", "company", "source_uri", "local_path"] {
        if !headers.iter().any(|h| h == required) {
            return Err(format!("missing column {required:?}"));
        }
    }
    reader
        .deserialize()
        .collect::<Result<Vec<ManifestEntry>, _>>()
        .map_err(|e| e.to_string())
}

fn parse_manifest_json(data: &str) -> Result<Vec<ManifestEntry>, String> {
    serde_json::from_str(data).map_err(|e| e.to_string())
}

/// Where a document ended up in the filter funnel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FilterStatus {
    Accepted,
    RejectedNonEnglish,
    RejectedTooShort,
    RejectedDuplicate,
}

/// One ingested policy document.
///
/// `raw_bytes` is only populated in memory right after ingestion; the
/// serialized form keeps `byte_size` (the raw size at ingest time) and the
/// cleaned text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyDocument {
    pub id: String,
    pub company: String,
    pub source_uri: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jurisdiction: Option<String>,
    #[serde(skip)]
    pub raw_bytes: Vec<u8>,
    pub cleaned_text: String,
    pub byte_size: usize,
    pub filter_status: FilterStatus,
}

/// Ingestion thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IngestOptions {
    /// Minimum document size in bytes; smaller documents are rejected.
    pub min_bytes: usize,
    /// Minimum stopword share for a document to count as English. Zero
    /// disables the language filter.
    pub language_threshold: f64,
    /// Measure `min_bytes` against the cleaned text instead of the raw
    /// file, for corpora where boilerplate markup dwarfs the content.
    pub size_on_cleaned_text: bool,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            min_bytes: 2048,
            language_threshold: 0.08,
            size_on_cleaned_text: false,
        }
    }
}

/// A manifest entry that could not be read.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Error)]
#[error("entry {id:?} ({path}): {message}")]
pub struct IngestEntryError {
    pub id: String,
    pub path: PathBuf,
    pub message: String,
}

/// Counts per filter outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct IngestSummary {
    pub manifest_entries: usize,
    pub accepted: usize,
    pub rejected_non_english: usize,
    pub rejected_too_short: usize,
    pub rejected_duplicate: usize,
    pub unreadable: usize,
}

/// Result of ingesting a manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestOutcome {
    /// One document per readable entry, in manifest order.
    pub documents: Vec<PolicyDocument>,
    /// Entries whose files could not be read.
    pub errors: Vec<IngestEntryError>,
}

impl IngestOutcome {
    pub fn accepted(&self) -> impl Iterator<Item = &PolicyDocument> {
        self.documents
            .iter()
            .filter(|d| d.filter_status == FilterStatus::Accepted)
    }

    pub fn summary(&self) -> IngestSummary {
        let mut summary = IngestSummary {
            manifest_entries: self.documents.len() + self.errors.len(),
            unreadable: self.errors.len(),
            ..IngestSummary::default()
        };
        for document in &self.documents {
            match document.filter_status {
                FilterStatus::Accepted => summary.accepted += 1,
                FilterStatus::RejectedNonEnglish => summary.rejected_non_english += 1,
                FilterStatus::RejectedTooShort => summary.rejected_too_short += 1,
                FilterStatus::RejectedDuplicate => summary.rejected_duplicate += 1,
            }
        }
        summary
    }
}

/// Reads, cleans, and filters every manifest entry.
///
/// Per-entry reads and cleaning run in parallel; the duplicate check is a
/// sequential pass in manifest order, so results do not depend on thread
/// scheduling. Filter precedence per document: language, size, duplicate.
pub fn ingest(
    manifest: &CorpusManifest,
    options: &IngestOptions,
) -> Result<IngestOutcome, CorpusError> {
    manifest.validate()?;
    let processed: Vec<Result<PolicyDocument, IngestEntryError>> = manifest
        .entries
        .par_iter()
        .map(|entry| {
            let raw = std::fs::read(&entry.local_path).map_err(|e| IngestEntryError {
                id: entry.id.clone(),
                path: entry.local_path.clone(),
                message: e.to_string(),
            })?;
            let cleaned_text = clean_html(&raw);
            let measured = if options.size_on_cleaned_text {
                cleaned_text.len()
            } else {
                raw.len()
            };
            let filter_status = if english_stopword_ratio(&cleaned_text)
                < options.language_threshold
            {
                FilterStatus::RejectedNonEnglish
            } else if measured < options.min_bytes {
                FilterStatus::RejectedTooShort
            } else {
                FilterStatus::Accepted
            };
            Ok(PolicyDocument {
                id: entry.id.clone(),
                company: entry.company.clone(),
                source_uri: entry.source_uri.clone(),
                jurisdiction: entry.jurisdiction.clone(),
                byte_size: raw.len(),
                raw_bytes: raw,
                cleaned_text,
                filter_status,
            })
        })
        .collect();

    let mut documents = Vec::new();
    let mut errors = Vec::new();
    let mut seen = HashSet::new();
    for result in processed {
        match result {
            Ok(mut document) => {
                if document.filter_status == FilterStatus::Accepted
                    && !seen.insert(dedup_key(&document.cleaned_text))
                {
                    document.filter_status = FilterStatus::RejectedDuplicate;
                }
                documents.push(document);
            }
            Err(error) => errors.push(error),
        }
    }
    Ok(IngestOutcome { documents, errors })
}

fn dedup_key(text: &str) -> String {
    let lowered = text.to_lowercase();
    lowered.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// The hundred most common English words, all lowercase.
pub const ENGLISH_STOPWORDS: [&str; 100] = [
    "the", "be", "to", "of", "and", "a", "in", "that", "have", "i", "it", "for", "not", "on",
    "with", "he", "as", "you", "do", "at", "this", "but", "his", "by", "from", "they", "we",
    "say", "her", "she", "or", "an", "will", "my", "one", "all", "would", "there", "their",
    "what", "so", "up", "out", "if", "about", "who", "get", "which", "go", "me", "when", "make",
    "can", "like", "time", "no", "just", "him", "know", "take", "people", "into", "year", "your",
    "good", "some", "could", "them", "see", "other", "than", "then", "now", "look", "only",
    "come", "its", "over", "think", "also", "back", "after", "use", "two", "how", "our", "work",
    "first", "well", "way", "even", "new", "want", "because", "any", "these", "give", "day",
    "most", "us",
];

static STOPWORD_SET: LazyLock<HashSet<&'static str>> =
    LazyLock::new(|| ENGLISH_STOPWORDS.into_iter().collect());

/// Share of tokens that are common English words; 0 for empty text.
pub fn english_stopword_ratio(text: &str) -> f64 {
    let tokens = tokenize_words(text);
    if tokens.is_empty() {
        return 0.0;
    }
    let hits = tokens
        .iter()
        .filter(|t| STOPWORD_SET.contains(t.to_lowercase().as_str()))
        .count();
    hits as f64 / tokens.len() as f64
}

/// Corpus-wide descriptive statistics over accepted documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStatistics<F> {
    pub policy_count: usize,
    pub total_words: usize,
    pub total_sentences: usize,
    pub mean_words_per_policy: F,
    /// Annotated sentences per label; every label has an entry.
    pub per_label_frequency: BTreeMap<GdprLabel, usize>,
    /// Percent of policies with at least one sentence of the label.
    pub per_label_coverage_pct: BTreeMap<GdprLabel, F>,
    /// Mean word count of the label's sentences.
    pub per_label_avg_words: BTreeMap<GdprLabel, F>,
}

/// Computes corpus statistics over the accepted documents.
///
/// Annotations are optional (pass an empty slice for an unannotated
/// corpus) but must reference accepted policy ids.
pub fn corpus_statistics<F: Real>(
    documents: &[PolicyDocument],
    annotations: &[AnnotatedSentence],
) -> Result<CorpusStatistics<F>, CorpusError> {
    let accepted: Vec<&PolicyDocument> = documents
        .iter()
        .filter(|d| d.filter_status == FilterStatus::Accepted)
        .collect();
    let ids: HashSet<&str> = accepted.iter().map(|d| d.id.as_str()).collect();
    for annotation in annotations {
        if !ids.contains(annotation.sentence.policy_id.as_str()) {
            return Err(CorpusError::UnknownPolicyId(
                annotation.sentence.policy_id.clone(),
            ));
        }
    }

    let (total_words, total_sentences) = accepted
        .par_iter()
        .map(|d| {
            (
                tokenize_words(&d.cleaned_text).len(),
                split_sentences(&d.cleaned_text).len(),
            )
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    let mut frequency: BTreeMap<GdprLabel, usize> =
        GdprLabel::ALL.iter().map(|&l| (l, 0)).collect();
    let mut covered: BTreeMap<GdprLabel, BTreeSet<&str>> =
        GdprLabel::ALL.iter().map(|&l| (l, BTreeSet::new())).collect();
    let mut word_sums: BTreeMap<GdprLabel, usize> =
        GdprLabel::ALL.iter().map(|&l| (l, 0)).collect();
    for annotation in annotations {
        let label = annotation.label;
        *frequency.get_mut(&label).unwrap() += 1;
        covered
            .get_mut(&label)
            .unwrap()
            .insert(annotation.sentence.policy_id.as_str());
        *word_sums.get_mut(&label).unwrap() += tokenize_words(&annotation.sentence.text).len();
    }

    let policy_count = accepted.len();
    Ok(CorpusStatistics {
        policy_count,
        total_words,
        total_sentences,
        mean_words_per_policy: ratio(total_words, policy_count),
        per_label_coverage_pct: covered
            .iter()
            .map(|(&label, ids)| (label, percent(ids.len(), policy_count)))
            .collect(),
        per_label_avg_words: word_sums
            .iter()
            .map(|(&label, &words)| (label, ratio(words, frequency[&label])))
            .collect(),
        per_label_frequency: frequency,
    })
}

impl<F: Real> CorpusStatistics<F> {
    /// CSV with one row per label, percentages and means to two decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,description,frequency,coverage_pct,avg_words\n");
        for label in GdprLabel::ALL {
            out.push_str(&format!(
                "{},{},{},{:.2},{:.2}\n",
                label.code(),
                label.description(),
                self.per_label_frequency[&label],
                self.per_label_coverage_pct[&label],
                self.per_label_avg_words[&label],
            ));
        }
        out
    }
}

/// Converts raw HTML bytes (lossily decoded as UTF-8) to plain text.
///
/// Tags are dropped; `script`, `style`, and comments lose their content;
/// block-level tags become newlines so paragraph structure survives as
/// blank lines; common entities are decoded; whitespace is collapsed.
pub fn clean_html(raw: &[u8]) -> String {
    let text = String::from_utf8_lossy(raw);
    collapse_whitespace(&strip_markup(&text))
}

const BLOCK_TAGS: &[&str] = &[
    "address", "article", "aside", "blockquote", "body", "br", "dd", "div", "dl", "dt",
    "fieldset", "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6",
    "header", "hr", "li", "main", "nav", "ol", "p", "pre", "section", "table", "tbody", "td",
    "tfoot", "th", "thead", "title", "tr", "ul",
];

fn strip_markup(html: &str) -> String {
    let chars: Vec<char> = html.chars().collect();
    let n = chars.len();
    let mut out = String::with_capacity(html.len());
    let mut i = 0usize;
    while i < n {
        let c = chars[i];
        if c == '<' {
            if matches_at(&chars, i, "<!--") {
                i = skip_comment(&chars, i + 4);
            } else if is_tag_start(&chars, i) {
                let (name, closing, end) = parse_tag(&chars, i);
                if !closing && (name == "script" || name == "style") {
                    i = skip_element(&chars, end, &name);
                } else {
                    if BLOCK_TAGS.contains(&name.as_str()) {
                        out.push('\n');
                    }
                    i = end;
                }
            } else {
                out.push('<');
                i += 1;
            }
        } else if c == '&' {
            let (decoded, end) = decode_entity(&chars, i);
            match decoded {
                Some(text) => out.push_str(&text),
                None => out.push('&'),
            }
            i = end;
        } else if c.is_whitespace() {
            // Source whitespace is soft; only block tags make newlines.
            out.push(' ');
            i += 1;
        } else {
            out.push(c);
            i += 1;
        }
    }
    out
}

fn collapse_whitespace(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pending_newlines = 0usize;
    let mut pending_space = false;
    for c in text.chars() {
        if c == '\n' {
            pending_newlines += 1;
        } else if c.is_whitespace() {
            pending_space = true;
        } else {
            if !out.is_empty() {
                if pending_newlines >= 2 {
                    out.push_str("\n\n");
                } else if pending_newlines == 1 {
                    out.push('\n');
                } else if pending_space {
                    out.push(' ');
                }
            }
            pending_newlines = 0;
            pending_space = false;
            out.push(c);
        }
    }
    out
}

fn matches_at(chars: &[char], at: usize, pattern: &str) -> bool {
    pattern
        .chars()
        .enumerate()
        .all(|(k, p)| chars.get(at + k) == Some(&p))
}

fn matches_at_ci(chars: &[char], at: usize, pattern: &[char]) -> bool {
    pattern
        .iter()
        .enumerate()
        .all(|(k, p)| chars.get(at + k).map(|c| c.to_ascii_lowercase()) == Some(*p))
}

fn is_tag_start(chars: &[char], at: usize) -> bool {
    matches!(
        chars.get(at + 1),
        Some(c) if c.is_ascii_alphabetic() || matches!(c, '/' | '!' | '?')
    )
}

/// Parses from `<`; returns (lowercased name, is-closing, index after `>`).
fn parse_tag(chars: &[char], at: usize) -> (String, bool, usize) {
    let n = chars.len();
    let mut i = at + 1;
    let closing = chars.get(i) == Some(&'/');
    if closing {
        i += 1;
    }
    let mut name = String::new();
    while i < n && (chars[i].is_ascii_alphanumeric()) {
        name.push(chars[i].to_ascii_lowercase());
        i += 1;
    }
    while i < n && chars[i] != '>' {
        i += 1;
    }
    (name, closing, if i < n { i + 1 } else { n })
}

fn skip_comment(chars: &[char], mut i: usize) -> usize {
    let n = chars.len();
    while i < n {
        if matches_at(chars, i, "-->") {
            return i + 3;
        }
        i += 1;
    }
    n
}

fn skip_element(chars: &[char], mut i: usize, name: &str) -> usize {
    let closing: Vec<char> = format!("</{name}").chars().collect();
    let n = chars.len();
    while i < n {
        if chars[i] == '<' && matches_at_ci(chars, i, &closing) {
            let mut j = i;
            while j < n && chars[j] != '>' {
                j += 1;
            }
            return if j < n { j + 1 } else { n };
        }
        i += 1;
    }
    n
}

/// Decodes an entity starting at `&`; `(None, at + 1)` if it is not one.
fn decode_entity(chars: &[char], at: usize) -> (Option<String>, usize) {
    let n = chars.len();
    let mut end = at + 1;
    while end < n
        && end - at <= 10
        && (chars[end].is_ascii_alphanumeric() || chars[end] == '#')
    {
        end += 1;
    }
    if end >= n || chars[end] != ';' || end == at + 1 {
        return (None, at + 1);
    }
    let body: String = chars[at + 1..end].iter().collect();
    let decoded = if let Some(code) = body.strip_prefix('#') {
        let value = if let Some(hex) = code.strip_prefix(['x', 'X']) {
            u32::from_str_radix(hex, 16).ok()
        } else {
            code.parse::<u32>().ok()
        };
        value.and_then(char::from_u32).map(String::from)
    } else {
        named_entity(&body.to_ascii_lowercase())
    };
    match decoded {
        Some(text) => (Some(text), end + 1),
        None => (None, at + 1),
    }
}

fn named_entity(name: &str) -> Option<String> {
    let text = match name {
        "amp" => "&",
        "lt" => "<",
        "gt" => ">",
        "quot" => "\"",
        "apos" => "'",
        "nbsp" => " ",
        "ndash" => "\u{2013}",
        "mdash" => "\u{2014}",
        "lsquo" => "\u{2018}",
        "rsquo" => "\u{2019}",
        "ldquo" => "\u{201C}",
        "rdquo" => "\u{201D}",
        "hellip" => "\u{2026}",
        "copy" => "\u{A9}",
        "reg" => "\u{AE}",
        "trade" => "\u{2122}",
        "sect" => "\u{A7}",
        "middot" => "\u{B7}",
        "bull" => "\u{2022}",
        "deg" => "\u{B0}",
        "euro" => "\u{20AC}",
        "pound" => "\u{A3}",
        "shy" => "",
        _ => return None,
    };
    Some(text.to_string())
}

/// Writes documents as JSON lines; `raw_bytes` is dropped.
pub fn write_corpus_jsonl<W: Write>(writer: W, documents: &[PolicyDocument]) -> io::Result<()> {
    jsonl::write_lines(writer, documents)
}

/// Reads documents written by [`write_corpus_jsonl`]. `raw_bytes` comes
/// back empty; `byte_size` still records the ingest-time size.
pub fn read_corpus_jsonl<R: BufRead>(reader: R) -> Result<Vec<PolicyDocument>, JsonlError> {
    jsonl::read_lines(reader)
}
