//! Text ingestion: raw files to clean token streams.
//!
//! Tokenization erases non-word strings (numbers, special-character runs)
//! and case-folds what remains; an optional dictionary filter flags or
//! removes tokens absent from a word list. Everything that gets erased is
//! recorded in a reject list so the removals can be reviewed by hand.

use std::collections::HashSet;
use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::config::{sha256_hex, ConfigFingerprint, TokenizationRules};
use crate::error::{Error, Result};

/// One raw input text, fully decoded.
#[derive(Debug, Clone)]
pub struct RawText {
    /// Unique identifier within a run (usually the file stem).
    pub id: String,
    /// Language code, e.g. "en" or "pl".
    pub language: String,
    /// Full text content.
    pub body: String,
}

impl RawText {
    pub fn new(id: impl Into<String>, language: impl Into<String>, body: impl Into<String>) -> Self {
        RawText {
            id: id.into(),
            language: language.into(),
            body: body.into(),
        }
    }

    /// Read a UTF-8 text file. Invalid UTF-8 is an input error naming the
    /// first bad byte offset.
    pub fn from_file(id: impl Into<String>, language: impl Into<String>, path: &Path) -> Result<Self> {
        let id = id.into();
        let bytes = std::fs::read(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let body = String::from_utf8(bytes).map_err(|e| Error::InvalidUnicode {
            id: id.clone(),
            offset: e.utf8_error().valid_up_to(),
        })?;
        Ok(RawText {
            id,
            language: language.into(),
            body,
        })
    }
}

/// Ordered sequence of normalized word tokens from one text.
///
/// A token's position is its index in the stream; filtering operations
/// renumber, and the accompanying reject records keep the pre-filter
/// indices for auditing.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenStream {
    tokens: Vec<String>,
    fingerprint: ConfigFingerprint,
}

impl TokenStream {
    pub fn new(tokens: Vec<String>, fingerprint: ConfigFingerprint) -> Self {
        TokenStream {
            tokens,
            fingerprint,
        }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, String> {
        self.tokens.iter()
    }

    pub fn fingerprint(&self) -> &ConfigFingerprint {
        &self.fingerprint
    }

    /// Keep only the first `n` tokens (used by matched-size trimming).
    pub fn truncate(&mut self, n: usize) {
        self.tokens.truncate(n);
    }

    /// Serialize as space-separated plain text so generated streams can
    /// round-trip through `tokenize`.
    pub fn write_plain_text(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path).map_err(|source| {
            Error::Write {
                path: path.to_path_buf(),
                source,
            }
        })?);
        let mut first = true;
        for token in &self.tokens {
            if !first {
                out.write_all(b" ").map_err(|source| Error::Write {
                    path: path.to_path_buf(),
                    source,
                })?;
            }
            out.write_all(token.as_bytes()).map_err(|source| Error::Write {
                path: path.to_path_buf(),
                source,
            })?;
            first = false;
        }
        out.write_all(b"\n").map_err(|source| Error::Write {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(())
    }
}

/// Why a string was erased from the stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RejectReason {
    /// Digits or special characters; not a word.
    NonWord,
    /// Token absent from the reference dictionary.
    DictionaryMiss,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::NonWord => f.write_str("non-word"),
            RejectReason::DictionaryMiss => f.write_str("dictionary-miss"),
        }
    }
}

/// One erased string, kept for manual review.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectRecord {
    /// The string as it appeared before erasure.
    pub original: String,
    /// Index in the pre-filter sequence (candidates for `tokenize`,
    /// input-stream positions for the dictionary filter).
    pub position: usize,
    pub reason: RejectReason,
}

/// Write reject records as TSV (original, position, reason).
pub fn write_rejects_tsv(path: &Path, rejects: &[RejectRecord]) -> Result<()> {
    let mut out = String::new();
    for r in rejects {
        out.push_str(&r.original);
        out.push('\t');
        out.push_str(&r.position.to_string());
        out.push('\t');
        out.push_str(&r.reason.to_string());
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

fn is_mark(c: char, rules: &TokenizationRules) -> bool {
    (rules.allow_apostrophe && is_apostrophe(c)) || (rules.allow_hyphen && c == '-')
}

fn is_word_char(c: char, rules: &TokenizationRules) -> bool {
    c.is_alphabetic() || c.is_numeric() || is_mark(c, rules)
}

/// Split a raw text into a token stream plus the reject list.
///
/// Candidates are maximal runs of word characters (letters, digits, and
/// the permitted marks). A run with no letter at all is rejected whole;
/// otherwise marks not flanked by letters on both sides act as
/// separators, and each resulting piece becomes a token unless it
/// contains a digit. Reject positions index the combined sequence of
/// emitted pieces in document order.
pub fn tokenize(raw: &RawText, rules: &TokenizationRules) -> (TokenStream, Vec<RejectRecord>) {
    let body: String = if rules.nfc_normalize {
        raw.body.nfc().collect()
    } else {
        raw.body.clone()
    };

    let mut tokens = Vec::new();
    let mut rejects = Vec::new();
    let mut emitted = 0usize;

    let mut emit_piece = |piece: &str, tokens: &mut Vec<String>, rejects: &mut Vec<RejectRecord>| {
        if piece.is_empty() {
            return;
        }
        if piece.chars().any(|c| c.is_numeric()) || !piece.chars().any(|c| c.is_alphabetic()) {
            rejects.push(RejectRecord {
                original: piece.to_string(),
                position: emitted,
                reason: RejectReason::NonWord,
            });
        } else {
            let surface = if rules.fold_case {
                piece.to_lowercase()
            } else {
                piece.to_string()
            };
            tokens.push(surface);
        }
        emitted += 1;
    };

    let chars: Vec<char> = body.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if !is_word_char(chars[i], rules) {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && is_word_char(chars[i], rules) {
            i += 1;
        }
        let run = &chars[start..i];

        if !run.iter().any(|c| c.is_alphabetic()) {
            // Pure digit/mark run: reject it whole, as one record.
            emit_piece(&run.iter().collect::<String>(), &mut tokens, &mut rejects);
            continue;
        }

        // Marks survive only between two letters; elsewhere they split.
        let mut piece = String::new();
        for (j, &c) in run.iter().enumerate() {
            if is_mark(c, rules) {
                let prev_letter = j > 0 && run[j - 1].is_alphabetic();
                let next_letter = j + 1 < run.len() && run[j + 1].is_alphabetic();
                if prev_letter && next_letter {
                    piece.push(c);
                } else {
                    emit_piece(&piece, &mut tokens, &mut rejects);
                    piece.clear();
                }
            } else {
                piece.push(c);
            }
        }
        emit_piece(&piece, &mut tokens, &mut rejects);
    }

    let stream = TokenStream::new(tokens, ConfigFingerprint::of_rules(rules));
    (stream, rejects)
}

/// Case-folded word list used to flag likely spelling errors.
#[derive(Debug, Clone)]
pub struct Dictionary {
    entries: HashSet<String>,
    /// Duplicate lines found while loading (tolerated, reported).
    pub duplicates: usize,
    content_hash: String,
}

impl Dictionary {
    /// Build from an iterator of words; case-folds like `tokenize` does.
    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut entries = HashSet::new();
        let mut duplicates = 0;
        for w in words {
            let folded = w.as_ref().to_lowercase();
            if folded.is_empty() {
                continue;
            }
            if !entries.insert(folded) {
                duplicates += 1;
            }
        }
        let mut sorted: Vec<&String> = entries.iter().collect();
        sorted.sort();
        let joined = sorted
            .iter()
            .map(|s| s.as_str())
            .collect::<Vec<_>>()
            .join("\n");
        Dictionary {
            content_hash: sha256_hex(joined.as_bytes()),
            entries,
            duplicates,
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains(word)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Stable hash of the deduplicated entry set.
    pub fn content_hash(&self) -> &str {
        &self.content_hash
    }
}

/// Load a dictionary file: UTF-8, one word per line. Duplicates are
/// tolerated and deduplicated; the count is reported on the result.
pub fn load_dictionary(path: &Path) -> Result<Dictionary> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(Dictionary::from_words(
        text.lines().map(str::trim).filter(|l| !l.is_empty()),
    ))
}

/// What to do with tokens missing from the dictionary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterPolicy {
    /// Remove misses from the stream and log them as rejects.
    DropMisses,
    /// Keep everything; misses are only reported.
    KeepMisses,
    /// Audit mode: output equals input, only the miss report is produced.
    ReviewOnly,
}

impl Default for FilterPolicy {
    /// Destructive filtering is opt-in; the default only reports misses.
    fn default() -> Self {
        FilterPolicy::KeepMisses
    }
}

impl fmt::Display for FilterPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterPolicy::DropMisses => f.write_str("drop-misses"),
            FilterPolicy::KeepMisses => f.write_str("keep-misses"),
            FilterPolicy::ReviewOnly => f.write_str("review-only"),
        }
    }
}

/// Result of a dictionary pass: the (possibly filtered) stream, the
/// records actually removed, and the full miss report.
#[derive(Debug, Clone)]
pub struct FilterOutcome {
    pub stream: TokenStream,
    /// Tokens removed from the stream (empty unless policy is drop-misses).
    pub rejects: Vec<RejectRecord>,
    /// Every dictionary miss, removed or not, with its input position.
    pub misses: Vec<RejectRecord>,
}

/// Check each token against the dictionary under the given policy.
///
/// Only `DropMisses` changes the stream (and its fingerprint); the other
/// policies pass the stream through untouched and report misses so they
/// can be checked by hand.
pub fn apply_dictionary_filter(
    stream: &TokenStream,
    dict: &Dictionary,
    policy: FilterPolicy,
) -> Result<FilterOutcome> {
    if dict.is_empty() && policy == FilterPolicy::DropMisses {
        return Err(Error::Config(
            "refusing to drop dictionary misses with an empty dictionary (would erase the entire text)"
                .into(),
        ));
    }

    let mut misses = Vec::new();
    for (position, token) in stream.iter().enumerate() {
        if !dict.contains(token) {
            misses.push(RejectRecord {
                original: token.clone(),
                position,
                reason: RejectReason::DictionaryMiss,
            });
        }
    }

    match policy {
        FilterPolicy::DropMisses => {
            let kept: Vec<String> = stream
                .iter()
                .filter(|t| dict.contains(t.as_str()))
                .cloned()
                .collect();
            let fingerprint = stream
                .fingerprint()
                .chain("dict-drop", dict.content_hash());
            Ok(FilterOutcome {
                stream: TokenStream::new(kept, fingerprint),
                rejects: misses.clone(),
                misses,
            })
        }
        FilterPolicy::KeepMisses | FilterPolicy::ReviewOnly => Ok(FilterOutcome {
            stream: stream.clone(),
            rejects: Vec::new(),
            misses,
        }),
    }
}
