//! Lexicon-driven part-of-speech tagging and lemmatization.
//!
//! All linguistic knowledge lives in lexicon files (TSV: surface, lemma,
//! pos); there is no built-in morphology. Unambiguous surfaces are tagged
//! automatically; ambiguous ones either take their priority analysis or
//! are routed to a human-editable review queue.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::{sha256_hex, ConfigFingerprint};
use crate::error::{Error, Result};
use crate::ingest::TokenStream;

/// Word class. `Other` is the catch-all black-box category for everything
/// outside the inflectable classes of interest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PosTag {
    Noun,
    Verb,
    Adj,
    Adv,
    Pron,
    Other,
}

impl PosTag {
    pub const ALL: [PosTag; 6] = [
        PosTag::Noun,
        PosTag::Verb,
        PosTag::Adj,
        PosTag::Adv,
        PosTag::Pron,
        PosTag::Other,
    ];
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PosTag::Noun => "NOUN",
            PosTag::Verb => "VERB",
            PosTag::Adj => "ADJ",
            PosTag::Adv => "ADV",
            PosTag::Pron => "PRON",
            PosTag::Other => "OTHER",
        };
        f.write_str(s)
    }
}

impl FromStr for PosTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "NOUN" => Ok(PosTag::Noun),
            "VERB" => Ok(PosTag::Verb),
            "ADJ" => Ok(PosTag::Adj),
            "ADV" => Ok(PosTag::Adv),
            "PRON" => Ok(PosTag::Pron),
            "OTHER" => Ok(PosTag::Other),
            other => Err(format!("unknown pos label {other:?}")),
        }
    }
}

/// One reading of a surface form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analysis {
    pub lemma: String,
    pub pos: PosTag,
}

/// Surface form to analyses mapping, grouped on load.
///
/// The order of a surface's analyses is the file order, which doubles as
/// the disambiguation priority.
#[derive(Debug, Clone)]
pub struct Lexicon {
    entries: HashMap<String, Vec<Analysis>>,
    /// Rows read from the file (before grouping and deduplication).
    pub rows: usize,
    content_hash: String,
}

impl Lexicon {
    /// Build a lexicon from (surface, lemma, pos) rows, in priority order.
    pub fn from_rows<I, S1, S2>(rows: I) -> Self
    where
        I: IntoIterator<Item = (S1, S2, PosTag)>,
        S1: AsRef<str>,
        S2: AsRef<str>,
    {
        let mut entries: HashMap<String, Vec<Analysis>> = HashMap::new();
        let mut count = 0usize;
        let mut material = String::new();
        for (surface, lemma, pos) in rows {
            count += 1;
            let surface = surface.as_ref().to_lowercase();
            let analysis = Analysis {
                lemma: lemma.as_ref().to_lowercase(),
                pos,
            };
            material.push_str(&surface);
            material.push('\t');
            material.push_str(&analysis.lemma);
            material.push('\t');
            material.push_str(&pos.to_string());
            material.push('\n');
            let group = entries.entry(surface).or_default();
            if !group.contains(&analysis) {
                group.push(analysis);
            }
        }
        Lexicon {
            entries,
            rows: count,
            content_hash: sha256_hex(material.as_bytes()),
        }
    }

    pub fn analyses(&self, surface: &str) -> Option<&[Analysis]> {
        self.entries.get(surface).map(Vec::as_slice)
    }

    /// Number of distinct surface forms.
    pub fn surface_count(&self) -> usize {
        self.entries.len()
    }

    pub fn content_hash(&self) -> &str {
        &self.content_hash
    }
}

/// Load a TSV lexicon: columns (surface, lemma, pos), multiple rows per
/// surface allowed. Unknown pos labels and empty lemmas are parse errors
/// naming the line.
pub fn load_lexicon(path: &Path) -> Result<Lexicon> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: line_no,
                message: format!("expected 3 tab-separated columns, found {}", fields.len()),
            });
        }
        let (surface, lemma, pos) = (fields[0].trim(), fields[1].trim(), fields[2].trim());
        if lemma.is_empty() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: line_no,
                message: "empty lemma".into(),
            });
        }
        let pos = PosTag::from_str(pos).map_err(|message| Error::Parse {
            path: path.to_path_buf(),
            line: line_no,
            message,
        })?;
        rows.push((surface.to_string(), lemma.to_string(), pos));
    }
    Ok(Lexicon::from_rows(rows))
}

/// How a token's analysis was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Resolution {
    /// Tagged automatically (unambiguous, or priority pick).
    Auto,
    /// Went through the review channel (pending or human-resolved).
    Review,
    /// Not in the lexicon: lemma = surface, pos = OTHER.
    Fallback,
}

/// A token with its lemma and word class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedToken {
    pub surface: String,
    pub lemma: String,
    pub pos: PosTag,
    pub resolution: Resolution,
}

/// Tagged tokens plus the fingerprint of the pipeline that produced them.
#[derive(Debug, Clone)]
pub struct TaggedStream {
    pub tokens: Vec<TaggedToken>,
    fingerprint: ConfigFingerprint,
}

impl TaggedStream {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn fingerprint(&self) -> &ConfigFingerprint {
        &self.fingerprint
    }
}

/// Policy for surfaces with more than one analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DisambiguationMode {
    /// Take the first (highest-priority) analysis and keep going.
    Priority,
    /// Leave ambiguous tokens unresolved (OTHER, lemma = surface) until a
    /// review file supplies the analysis.
    QueueOnly,
}

/// One ambiguous occurrence awaiting a decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueueRecord {
    /// Index of the token in the tagged stream.
    pub position: usize,
    pub surface: String,
    pub candidates: Vec<Analysis>,
}

/// Tag every token in the stream.
///
/// Surfaces with exactly one analysis are tagged `auto`. Ambiguous
/// surfaces take the priority analysis (`auto`) under `Priority` or stay
/// pending (`review`, black-box class) under `QueueOnly`; in both modes
/// each ambiguous occurrence is queued so the manual pass stays possible.
/// Unknown surfaces fall back to (surface, OTHER).
pub fn tag_tokens(
    stream: &TokenStream,
    lexicon: &Lexicon,
    mode: DisambiguationMode,
) -> (TaggedStream, Vec<QueueRecord>) {
    let mut tagged = Vec::with_capacity(stream.len());
    let mut queue = Vec::new();
    for (position, surface) in stream.iter().enumerate() {
        match lexicon.analyses(surface) {
            None => tagged.push(TaggedToken {
                surface: surface.clone(),
                lemma: surface.clone(),
                pos: PosTag::Other,
                resolution: Resolution::Fallback,
            }),
            Some([only]) => tagged.push(TaggedToken {
                surface: surface.clone(),
                lemma: only.lemma.clone(),
                pos: only.pos,
                resolution: Resolution::Auto,
            }),
            Some(candidates) => {
                queue.push(QueueRecord {
                    position,
                    surface: surface.clone(),
                    candidates: candidates.to_vec(),
                });
                match mode {
                    DisambiguationMode::Priority => tagged.push(TaggedToken {
                        surface: surface.clone(),
                        lemma: candidates[0].lemma.clone(),
                        pos: candidates[0].pos,
                        resolution: Resolution::Auto,
                    }),
                    DisambiguationMode::QueueOnly => tagged.push(TaggedToken {
                        surface: surface.clone(),
                        lemma: surface.clone(),
                        pos: PosTag::Other,
                        resolution: Resolution::Review,
                    }),
                }
            }
        }
    }
    let mode_label = match mode {
        DisambiguationMode::Priority => "priority",
        DisambiguationMode::QueueOnly => "queue-only",
    };
    let fingerprint = stream
        .fingerprint()
        .chain("tag", &format!("{}:{}", lexicon.content_hash(), mode_label));
    (
        TaggedStream {
            tokens: tagged,
            fingerprint,
        },
        queue,
    )
}

/// One human decision: (position, lemma, pos).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReviewRow {
    pub position: usize,
    pub lemma: String,
    pub pos: PosTag,
}

/// Load a review file: TSV (position, lemma, pos).
pub fn load_review_file(path: &Path) -> Result<Vec<ReviewRow>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: line_no,
                message: format!("expected 3 tab-separated columns, found {}", fields.len()),
            });
        }
        let position: usize = fields[0].trim().parse().map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            line: line_no,
            message: format!("bad position {:?}", fields[0]),
        })?;
        let pos = PosTag::from_str(fields[2].trim()).map_err(|message| Error::Parse {
            path: path.to_path_buf(),
            line: line_no,
            message,
        })?;
        rows.push(ReviewRow {
            position,
            lemma: fields[1].trim().to_lowercase(),
            pos,
        });
    }
    Ok(rows)
}

/// Write an ambiguity queue as TSV (position, surface, candidates
/// semicolon-separated as lemma/POS).
pub fn write_queue_tsv(path: &Path, queue: &[QueueRecord]) -> Result<()> {
    let mut out = String::new();
    for record in queue {
        let candidates = record
            .candidates
            .iter()
            .map(|a| format!("{}/{}", a.lemma, a.pos))
            .collect::<Vec<_>>()
            .join(";");
        out.push_str(&format!(
            "{}\t{}\t{}\n",
            record.position, record.surface, candidates
        ));
    }
    std::fs::write(path, out).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Outcome of applying a review file.
#[derive(Debug, Clone)]
pub struct ReviewReport {
    /// Rows applied to queued positions.
    pub applied: usize,
    /// Row indices (0-based) whose position matched no queue record;
    /// reported and skipped.
    pub unreferenced_rows: Vec<usize>,
    /// Queue positions not covered by any review row.
    pub unresolved_positions: Vec<usize>,
}

/// Apply human decisions to a tagged stream.
///
/// Rows must reference queue records; rows pointing at unqueued positions
/// are warnings, positions past the end of the stream are an error
/// listing every offending row. Updated tokens carry the given analysis
/// with resolution `review`.
pub fn apply_review_file(
    tagged: &TaggedStream,
    queue: &[QueueRecord],
    rows: &[ReviewRow],
) -> Result<(TaggedStream, ReviewReport)> {
    let len = tagged.len();
    let out_of_range: Vec<usize> = rows
        .iter()
        .filter(|r| r.position >= len)
        .map(|r| r.position)
        .collect();
    if !out_of_range.is_empty() {
        return Err(Error::PositionOutOfRange {
            len,
            positions: out_of_range,
        });
    }

    let queue_positions: std::collections::HashSet<usize> =
        queue.iter().map(|q| q.position).collect();
    let mut tokens = tagged.tokens.clone();
    let mut applied = 0;
    let mut unreferenced_rows = Vec::new();
    let mut covered = std::collections::HashSet::new();
    for (idx, row) in rows.iter().enumerate() {
        if !queue_positions.contains(&row.position) {
            unreferenced_rows.push(idx);
            continue;
        }
        let token = &mut tokens[row.position];
        token.lemma = row.lemma.clone();
        token.pos = row.pos;
        token.resolution = Resolution::Review;
        covered.insert(row.position);
        applied += 1;
    }
    let mut unresolved_positions: Vec<usize> = queue_positions
        .difference(&covered)
        .copied()
        .collect();
    unresolved_positions.sort_unstable();

    Ok((
        TaggedStream {
            tokens,
            fingerprint: tagged.fingerprint().clone(),
        },
        ReviewReport {
            applied,
            unreferenced_rows,
            unresolved_positions,
        },
    ))
}

/// Replace each token by its lemma, preserving order and length.
pub fn lemmatize(tagged: &TaggedStream) -> TokenStream {
    let lemmas: Vec<String> = tagged.tokens.iter().map(|t| t.lemma.clone()).collect();
    TokenStream::new(lemmas, tagged.fingerprint().chain("lemmatize", ""))
}
