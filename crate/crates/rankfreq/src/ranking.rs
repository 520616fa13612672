//! Rank-frequency distributions.
//!
//! Counting is exact; ranking sorts by descending frequency with a
//! deterministic lexicographic tiebreak, so identical inputs produce
//! byte-identical tables on every platform. Class-specific sub-rankings
//! come in two flavors: token-level (count only tokens tagged with a
//! class) and type-level (extract words from the global ranking whole).

use std::collections::{HashMap, HashSet};
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::ConfigFingerprint;
use crate::error::{Error, Result};
use crate::ingest::TokenStream;
use crate::lexicon::{PosTag, TaggedStream};

/// Exact multiset counts for one sample (text or corpus).
#[derive(Debug, Clone)]
pub struct FrequencyTable {
    counts: HashMap<String, u64>,
    total: u64,
    fingerprint: ConfigFingerprint,
}

impl FrequencyTable {
    /// Build from explicit counts (test and synthetic use).
    pub fn from_counts<I, S>(counts: I, fingerprint: ConfigFingerprint) -> Self
    where
        I: IntoIterator<Item = (S, u64)>,
        S: Into<String>,
    {
        let mut map = HashMap::new();
        let mut total = 0u64;
        for (word, count) in counts {
            if count == 0 {
                continue;
            }
            total += count;
            *map.entry(word.into()).or_insert(0) += count;
        }
        FrequencyTable {
            counts: map,
            total,
            fingerprint,
        }
    }

    pub fn count(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    /// Number of distinct words.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn fingerprint(&self) -> &ConfigFingerprint {
        &self.fingerprint
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(w, &c)| (w.as_str(), c))
    }
}

/// Count every token in the stream.
pub fn count_frequencies(stream: &TokenStream) -> FrequencyTable {
    let mut counts: HashMap<String, u64> = HashMap::new();
    for token in stream.iter() {
        *counts.entry(token.clone()).or_insert(0) += 1;
    }
    FrequencyTable {
        counts,
        total: stream.len() as u64,
        fingerprint: stream.fingerprint().clone(),
    }
}

/// Pointwise sum of tables built under the same preprocessing
/// configuration; mixing fingerprints is refused.
pub fn merge_tables(tables: &[FrequencyTable]) -> Result<FrequencyTable> {
    let first = tables
        .first()
        .ok_or_else(|| Error::Config("cannot merge an empty list of tables".into()))?;
    let mut counts = first.counts.clone();
    let mut total = first.total;
    for table in &tables[1..] {
        if table.fingerprint != first.fingerprint {
            return Err(Error::FingerprintMismatch {
                left: first.fingerprint.as_str().to_string(),
                right: table.fingerprint.as_str().to_string(),
            });
        }
        total += table.total;
        for (word, &count) in &table.counts {
            *counts.entry(word.clone()).or_insert(0) += count;
        }
    }
    Ok(FrequencyTable {
        counts,
        total,
        fingerprint: first.fingerprint.clone(),
    })
}

/// One row of a rank-frequency table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    /// 1-based rank; rank 1 is the most frequent word.
    pub rank: usize,
    pub word: String,
    /// Occurrence count; real-valued only for synthetic tables.
    pub frequency: f64,
}

/// The full rank-frequency table: ranks exactly 1..V, frequencies
/// non-increasing, ties broken lexicographically.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankedDistribution {
    entries: Vec<RankEntry>,
    total: f64,
    /// True for synthetic tables whose frequencies are exact reals rather
    /// than integer counts.
    real_valued: bool,
    fingerprint: ConfigFingerprint,
}

impl RankedDistribution {
    /// Construct from already-ordered positive frequencies (synthetic
    /// tables and test fixtures). Frequencies must be non-increasing.
    pub fn from_real_frequencies<I, S>(pairs: I, fingerprint: ConfigFingerprint) -> Result<Self>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let mut entries = Vec::new();
        let mut total = 0.0;
        let mut prev = f64::INFINITY;
        for (i, (word, frequency)) in pairs.into_iter().enumerate() {
            if !(frequency > 0.0) {
                return Err(Error::Config(format!(
                    "frequency at rank {} must be positive, got {frequency}",
                    i + 1
                )));
            }
            if frequency > prev {
                return Err(Error::Config(format!(
                    "frequencies must be non-increasing (rank {} rises to {frequency})",
                    i + 1
                )));
            }
            prev = frequency;
            total += frequency;
            entries.push(RankEntry {
                rank: i + 1,
                word: word.into(),
                frequency,
            });
        }
        Ok(RankedDistribution {
            entries,
            total,
            real_valued: true,
            fingerprint,
        })
    }

    pub fn entries(&self) -> &[RankEntry] {
        &self.entries
    }

    /// Vocabulary size V.
    pub fn vocabulary_size(&self) -> usize {
        self.entries.len()
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn is_real_valued(&self) -> bool {
        self.real_valued
    }

    pub fn fingerprint(&self) -> &ConfigFingerprint {
        &self.fingerprint
    }

    /// Frequency at a 1-based rank.
    pub fn frequency_at(&self, rank: usize) -> Option<f64> {
        self.entries.get(rank.checked_sub(1)?).map(|e| e.frequency)
    }

    /// Write as CSV with header `rank,word,frequency`; any preamble lines
    /// are emitted first, prefixed with `# `.
    pub fn write_csv<W: Write>(&self, writer: W, preamble: &[String]) -> Result<()> {
        let to_err = |e: std::io::Error| Error::Write {
            path: "<csv>".into(),
            source: e,
        };
        let mut w = writer;
        for line in preamble {
            writeln!(w, "# {line}").map_err(to_err)?;
        }
        let mut csv = csv::Writer::from_writer(w);
        let csv_err = |e: csv::Error| Error::Write {
            path: "<csv>".into(),
            source: std::io::Error::other(e),
        };
        csv.write_record(["rank", "word", "frequency"]).map_err(csv_err)?;
        for entry in &self.entries {
            let freq = if self.real_valued {
                entry.frequency.to_string()
            } else {
                (entry.frequency as u64).to_string()
            };
            csv.write_record([entry.rank.to_string(), entry.word.clone(), freq])
                .map_err(csv_err)?;
        }
        csv.flush().map_err(to_err)?;
        Ok(())
    }

    /// Write the JSON variant: totals, fingerprint, and all entries.
    pub fn write_json(&self, path: &Path) -> Result<()> {
        let value = serde_json::json!({
            "total_tokens": self.total,
            "vocabulary_size": self.vocabulary_size(),
            "real_valued": self.real_valued,
            "fingerprint": self.fingerprint.as_str(),
            "entries": self.entries,
        });
        std::fs::write(path, serde_json::to_string_pretty(&value).expect("serializable"))
            .map_err(|source| Error::Write {
                path: path.to_path_buf(),
                source,
            })
    }
}

/// Rank a frequency table: descending frequency, ties broken by word
/// (ascending code-point order).
pub fn rank(table: &FrequencyTable) -> RankedDistribution {
    let mut pairs: Vec<(&str, u64)> = table.iter().collect();
    pairs.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let entries = pairs
        .into_iter()
        .enumerate()
        .map(|(i, (word, count))| RankEntry {
            rank: i + 1,
            word: word.to_string(),
            frequency: count as f64,
        })
        .collect();
    RankedDistribution {
        entries,
        total: table.total() as f64,
        real_valued: false,
        fingerprint: table.fingerprint().clone(),
    }
}

/// Which form of a tagged token to count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountForm {
    Surface,
    Lemma,
}

/// Token-level class sub-ranking: count only tokens tagged `pos`, in the
/// requested form. A class with no tokens yields an empty distribution.
pub fn class_sub_ranking(tagged: &TaggedStream, pos: PosTag, form: CountForm) -> RankedDistribution {
    let mut counts: HashMap<String, u64> = HashMap::new();
    let mut total = 0u64;
    for token in &tagged.tokens {
        if token.pos != pos {
            continue;
        }
        let key = match form {
            CountForm::Surface => &token.surface,
            CountForm::Lemma => &token.lemma,
        };
        *counts.entry(key.clone()).or_insert(0) += 1;
        total += 1;
    }
    let form_label = match form {
        CountForm::Surface => "surface",
        CountForm::Lemma => "lemma",
    };
    let table = FrequencyTable {
        counts,
        total,
        fingerprint: tagged
            .fingerprint()
            .chain("class", &format!("{pos}:{form_label}")),
    };
    rank(&table)
}

/// Type-level approximate sub-ranking: keep the global entries whose word
/// is in the set, re-ranked 1..k with their original frequencies. Each
/// word's full count goes to one class, unlike the token-level counting.
pub fn extract_sub_ranking(global: &RankedDistribution, words: &HashSet<String>) -> RankedDistribution {
    let mut total = 0.0;
    let entries: Vec<RankEntry> = global
        .entries
        .iter()
        .filter(|e| words.contains(&e.word))
        .enumerate()
        .map(|(i, e)| {
            total += e.frequency;
            RankEntry {
                rank: i + 1,
                word: e.word.clone(),
                frequency: e.frequency,
            }
        })
        .collect();
    RankedDistribution {
        entries,
        total,
        real_valued: global.real_valued,
        fingerprint: global.fingerprint.chain("extract", ""),
    }
}
