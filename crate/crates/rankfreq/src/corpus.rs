//! Multi-text corpora: assembly from manifests, matched-size trimming,
//! and high-rank comparison of two distributions.
//!
//! Comparison normalizes both distributions to a common token count
//! first, so residual size differences cannot masquerade as decay
//! differences; the divergence rank is the first grid point after which
//! the log-frequency gap stays above the threshold at every later point.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::sha256_hex;
use crate::config::TokenizationRules;
use crate::error::{Error, Result};
use crate::fitting::{fit_power_law, FitWindow};
use crate::ingest::{
    apply_dictionary_filter, load_dictionary, tokenize, Dictionary, FilterPolicy, RawText,
};
use crate::ranking::{count_frequencies, merge_tables, FrequencyTable, RankedDistribution};

/// Whether a text was written in the corpus language or translated into it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Native,
    Translated,
}

/// One corpus member.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TextDescriptor {
    pub id: String,
    pub path: PathBuf,
    pub author: String,
    pub language: String,
    pub origin: Origin,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translator: Option<String>,
    /// Required (possibly "unknown") when origin is translated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_language: Option<String>,
    /// Download source for the fetch command.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub url: Option<String>,
    /// Expected SHA-256 of the file, verified when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
    /// Keep only this many tokens (set by truncate-last trimming).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub take_tokens: Option<u64>,
}

/// Declarative description of a multi-text corpus.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_size: Option<u64>,
    pub texts: Vec<TextDescriptor>,
}

impl CorpusManifest {
    pub fn validate(&self) -> Result<()> {
        if self.texts.is_empty() {
            return Err(Error::Config(format!(
                "manifest {:?} lists no texts",
                self.name
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for text in &self.texts {
            if text.id.is_empty() {
                return Err(Error::Config("text id must be non-empty".into()));
            }
            if !seen.insert(&text.id) {
                return Err(Error::Config(format!("duplicate text id {:?}", text.id)));
            }
            if text.origin == Origin::Translated && text.source_language.is_none() {
                return Err(Error::Config(format!(
                    "text {:?} is translated but has no source_language (use \"unknown\" if unknown)",
                    text.id
                )));
            }
        }
        Ok(())
    }
}

/// Load and validate a TOML manifest.
pub fn load_manifest(path: &Path) -> Result<CorpusManifest> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let manifest: CorpusManifest = toml::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: 0,
        message: e.to_string(),
    })?;
    manifest.validate()?;
    Ok(manifest)
}

/// Preprocessing applied uniformly to every text of a corpus.
#[derive(Debug, Clone, Default)]
pub struct PipelineConfig {
    pub rules: TokenizationRules,
    pub dictionary: Option<Dictionary>,
    pub policy: FilterPolicy,
}

impl PipelineConfig {
    /// Load the dictionary (if any) referenced by CLI options.
    pub fn from_options(
        rules: TokenizationRules,
        dictionary_path: Option<&Path>,
        policy: FilterPolicy,
    ) -> Result<Self> {
        let dictionary = dictionary_path.map(load_dictionary).transpose()?;
        Ok(PipelineConfig {
            rules,
            dictionary,
            policy,
        })
    }

    /// Run one text through tokenize + optional dictionary filter.
    pub fn ingest(&self, raw: &RawText) -> Result<crate::ingest::TokenStream> {
        let (stream, _rejects) = tokenize(raw, &self.rules);
        match &self.dictionary {
            Some(dict) => Ok(apply_dictionary_filter(&stream, dict, self.policy)?.stream),
            None => Ok(stream),
        }
    }
}

/// Per-text statistics from a corpus build.
#[derive(Debug, Clone, Serialize)]
pub struct TextStats {
    pub id: String,
    pub tokens: u64,
    pub distinct: usize,
}

/// Result of assembling a corpus.
#[derive(Debug, Clone)]
pub struct CorpusBuild {
    pub table: FrequencyTable,
    /// In manifest order.
    pub per_text: Vec<TextStats>,
}

/// Assemble a corpus: ingest every text under one pipeline configuration
/// (in parallel), then merge the per-text tables. Unreadable texts abort
/// the build with a report naming every failing file.
pub fn build_corpus(
    manifest: &CorpusManifest,
    config: &PipelineConfig,
    base: &Path,
) -> Result<CorpusBuild> {
    manifest.validate()?;
    let results: Vec<Result<(TextStats, FrequencyTable)>> = manifest
        .texts
        .par_iter()
        .map(|text| {
            let path = resolve(base, &text.path);
            let raw = RawText::from_file(text.id.clone(), text.language.clone(), &path)?;
            let mut stream = config.ingest(&raw)?;
            if let Some(limit) = text.take_tokens {
                stream.truncate(limit as usize);
            }
            let table = count_frequencies(&stream);
            Ok((
                TextStats {
                    id: text.id.clone(),
                    tokens: table.total(),
                    distinct: table.distinct(),
                },
                table,
            ))
        })
        .collect();

    let mut reports = Vec::new();
    let mut stats = Vec::new();
    let mut tables = Vec::new();
    for result in results {
        match result {
            Ok((stat, table)) => {
                stats.push(stat);
                tables.push(table);
            }
            Err(e) => reports.push(e.to_string()),
        }
    }
    if !reports.is_empty() {
        return Err(Error::CorpusRead { reports });
    }
    Ok(CorpusBuild {
        table: merge_tables(&tables)?,
        per_text: stats,
    })
}

fn resolve(base: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    }
}

/// Trimming policy for matched-size corpora.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrimPolicy {
    /// Keep whole texts while they fit; report the shortfall.
    WholeTexts,
    /// Additionally truncate one text's stream to hit the target exactly.
    TruncateLast,
}

/// What a trim produced.
#[derive(Debug, Clone, Serialize)]
pub struct TrimReport {
    pub total: u64,
    pub shortfall: u64,
    pub kept: usize,
}

/// Build a manifest whose total token count is close to (whole-texts) or
/// exactly (truncate-last) the target. `sizes` are per-text token counts
/// in manifest order, as produced by [`build_corpus`]. Texts are kept
/// greedily in manifest order; a text that does not fit is skipped
/// (whole-texts) or truncated to the remainder (truncate-last).
pub fn trim_to_size(
    manifest: &CorpusManifest,
    sizes: &[u64],
    target: u64,
    policy: TrimPolicy,
) -> Result<(CorpusManifest, TrimReport)> {
    assert_eq!(
        sizes.len(),
        manifest.texts.len(),
        "one size per manifest text"
    );
    let available: u64 = sizes.iter().sum();
    if target > available {
        return Err(Error::TargetExceedsTotal { target, available });
    }

    let mut kept = Vec::new();
    let mut total = 0u64;
    for (text, &size) in manifest.texts.iter().zip(sizes) {
        if total + size <= target {
            total += size;
            kept.push(text.clone());
        } else if policy == TrimPolicy::TruncateLast {
            let remainder = target - total;
            if remainder > 0 {
                let mut truncated = text.clone();
                truncated.take_tokens = Some(remainder);
                kept.push(truncated);
                total = target;
            }
            break;
        }
    }

    let trimmed = CorpusManifest {
        name: format!("{}-trimmed-{target}", manifest.name),
        target_size: Some(target),
        texts: kept,
    };
    let report = TrimReport {
        total,
        shortfall: target - total,
        kept: trimmed.texts.len(),
    };
    Ok((trimmed, report))
}

/// Log-spaced sampling grid for comparisons.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridSpec {
    pub points_per_decade: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            points_per_decade: 20,
        }
    }
}

/// Default comparison threshold: 0.05 log10 units (about a 12% gap).
pub const DEFAULT_COMPARE_THRESHOLD: f64 = 0.05;

/// Exponent pair over one decade.
#[derive(Debug, Clone, Serialize)]
pub struct DecadeAlphas {
    pub window: FitWindow,
    pub alpha_a: f64,
    pub alpha_b: f64,
}

/// How two distributions diverge at high ranks.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    /// Token count both inputs were normalized to before comparing.
    pub normalized_to: f64,
    pub threshold: f64,
    pub decade_alphas: Vec<DecadeAlphas>,
    /// (grid rank, log10 f_A - log10 f_B after normalization).
    pub delta: Vec<(usize, f64)>,
    /// First grid rank after which |delta| stays above the threshold.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divergence_rank: Option<usize>,
}

impl ComparisonReport {
    /// CSV view of the gap profile: `rank,delta`.
    pub fn write_csv<W: std::io::Write>(&self, mut writer: W) -> Result<()> {
        let to_err = |e: std::io::Error| Error::Write {
            path: "<csv>".into(),
            source: e,
        };
        writeln!(writer, "rank,delta").map_err(to_err)?;
        for (rank, delta) in &self.delta {
            writeln!(writer, "{rank},{delta}").map_err(to_err)?;
        }
        Ok(())
    }
}

/// Compare two distributions on a log-spaced rank grid after normalizing
/// both to the first input's token count.
pub fn compare(
    a: &RankedDistribution,
    b: &RankedDistribution,
    grid: &GridSpec,
    threshold: f64,
) -> Result<ComparisonReport> {
    if a.vocabulary_size() == 0 || b.vocabulary_size() == 0 {
        return Err(Error::EmptyInput(
            "cannot compare an empty distribution".into(),
        ));
    }
    if !(threshold > 0.0) {
        return Err(Error::Config(format!(
            "comparison threshold must be positive, got {threshold}"
        )));
    }
    if grid.points_per_decade == 0 {
        return Err(Error::Config("grid needs at least 1 point per decade".into()));
    }

    let max_rank = a.vocabulary_size().min(b.vocabulary_size());
    let mut ranks = Vec::new();
    let mut k = 0usize;
    loop {
        let r = 10f64
            .powf(k as f64 / grid.points_per_decade as f64)
            .round() as usize;
        if r > max_rank {
            break;
        }
        if ranks.last() != Some(&r) {
            ranks.push(r);
        }
        k += 1;
    }
    if ranks.is_empty() {
        return Err(Error::Config(
            "comparison grid is empty after intersecting rank ranges".into(),
        ));
    }

    // Scaling both to a common total shifts the gap by log10(Na/Nb).
    let size_shift = (a.total() / b.total()).log10();
    let delta: Vec<(usize, f64)> = ranks
        .iter()
        .map(|&r| {
            let fa = a.frequency_at(r).expect("r <= min vocabulary");
            let fb = b.frequency_at(r).expect("r <= min vocabulary");
            (r, fa.log10() - fb.log10() - size_shift)
        })
        .collect();

    // Persistence rule: |delta| must stay above the threshold from the
    // divergence rank to the end of the grid.
    let mut divergence_rank = None;
    for &(r, d) in delta.iter().rev() {
        if d.abs() > threshold {
            divergence_rank = Some(r);
        } else {
            break;
        }
    }

    let mut decade_alphas = Vec::new();
    let mut lo = 1usize;
    while lo * 10 <= max_rank {
        let window = FitWindow::new(lo, lo * 10)?;
        if let (Ok(fit_a), Ok(fit_b)) = (fit_power_law(a, window), fit_power_law(b, window)) {
            decade_alphas.push(DecadeAlphas {
                window,
                alpha_a: fit_a.alpha,
                alpha_b: fit_b.alpha,
            });
        }
        lo *= 10;
    }

    Ok(ComparisonReport {
        normalized_to: a.total(),
        threshold,
        decade_alphas,
        delta,
        divergence_rank,
    })
}

/// What happened to one manifest entry during a fetch run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FetchAction {
    Downloaded,
    AlreadyPresent,
    /// Present and matching its expected checksum.
    Verified,
    /// No file and no URL to get it from.
    Missing,
}

#[derive(Debug, Clone, Serialize)]
pub struct FetchOutcome {
    pub id: String,
    pub path: PathBuf,
    pub action: FetchAction,
}

/// Download the texts a manifest references, verifying checksums where
/// the manifest provides them. Existing files are left alone (but still
/// verified).
pub fn fetch_manifest_texts(
    manifest: &CorpusManifest,
    base: &Path,
) -> Result<Vec<FetchOutcome>> {
    manifest.validate()?;
    let mut outcomes = Vec::new();
    for text in &manifest.texts {
        let path = resolve(base, &text.path);
        if path.exists() {
            let action = match &text.sha256 {
                Some(expected) => {
                    verify_checksum(&path, expected)?;
                    FetchAction::Verified
                }
                None => FetchAction::AlreadyPresent,
            };
            outcomes.push(FetchOutcome {
                id: text.id.clone(),
                path,
                action,
            });
            continue;
        }
        let Some(url) = &text.url else {
            outcomes.push(FetchOutcome {
                id: text.id.clone(),
                path,
                action: FetchAction::Missing,
            });
            continue;
        };
        let bytes = download(url)?;
        if let Some(expected) = &text.sha256 {
            let actual = sha256_hex(&bytes);
            if &actual != expected {
                return Err(Error::ChecksumMismatch {
                    path,
                    expected: expected.clone(),
                    actual,
                });
            }
        }
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|source| Error::Write {
                path: parent.to_path_buf(),
                source,
            })?;
        }
        std::fs::write(&path, &bytes).map_err(|source| Error::Write {
            path: path.clone(),
            source,
        })?;
        outcomes.push(FetchOutcome {
            id: text.id.clone(),
            path,
            action: FetchAction::Downloaded,
        });
    }
    Ok(outcomes)
}

fn verify_checksum(path: &Path, expected: &str) -> Result<()> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let actual = sha256_hex(&bytes);
    if actual != expected {
        return Err(Error::ChecksumMismatch {
            path: path.to_path_buf(),
            expected: expected.to_string(),
            actual,
        });
    }
    Ok(())
}

fn download(url: &str) -> Result<Vec<u8>> {
    let mut response = ureq::get(url).call().map_err(|e| Error::Fetch {
        url: url.to_string(),
        message: e.to_string(),
    })?;
    response
        .body_mut()
        .with_config()
        .limit(256 * 1024 * 1024)
        .read_to_vec()
        .map_err(|e| Error::Fetch {
            url: url.to_string(),
            message: e.to_string(),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ConfigFingerprint;
    use crate::synth::exact_zipf_table;

    fn write_texts(dir: &Path, texts: &[(&str, &str)]) -> CorpusManifest {
        let descriptors = texts
            .iter()
            .map(|(id, body)| {
                let path = dir.join(format!("{id}.txt"));
                std::fs::write(&path, body).unwrap();
                TextDescriptor {
                    id: id.to_string(),
                    path: PathBuf::from(format!("{id}.txt")),
                    author: "test".into(),
                    language: "en".into(),
                    origin: Origin::Native,
                    translator: None,
                    source_language: None,
                    url: None,
                    sha256: None,
                    take_tokens: None,
                }
            })
            .collect();
        CorpusManifest {
            name: "test".into(),
            target_size: None,
            texts: descriptors,
        }
    }

    #[test]
    fn single_text_corpus_equals_single_table() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = write_texts(dir.path(), &[("a", "x y x")]);
        let build = build_corpus(&manifest, &PipelineConfig::default(), dir.path()).unwrap();
        assert_eq!(build.table.total(), 3);
        assert_eq!(build.table.count("x"), 2);
        assert_eq!(build.per_text.len(), 1);
    }

    #[test]
    fn corpus_total_is_sum_of_text_totals() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = write_texts(dir.path(), &[("a", "x y"), ("b", "x"), ("c", "z z z")]);
        let build = build_corpus(&manifest, &PipelineConfig::default(), dir.path()).unwrap();
        let sum: u64 = build.per_text.iter().map(|s| s.tokens).sum();
        assert_eq!(build.table.total(), sum);
        assert_eq!(build.table.total(), 6);
    }

    #[test]
    fn union_of_disjoint_manifests_equals_merge() {
        let dir = tempfile::tempdir().unwrap();
        let m1 = write_texts(dir.path(), &[("a", "x y"), ("b", "y z")]);
        let m2 = write_texts(dir.path(), &[("c", "z w w")]);
        let config = PipelineConfig::default();
        let b1 = build_corpus(&m1, &config, dir.path()).unwrap();
        let b2 = build_corpus(&m2, &config, dir.path()).unwrap();
        let mut union = m1.clone();
        union.texts.extend(m2.texts.clone());
        let bu = build_corpus(&union, &config, dir.path()).unwrap();
        let merged = merge_tables(&[b1.table, b2.table]).unwrap();
        assert_eq!(bu.table.total(), merged.total());
        for (word, count) in merged.iter() {
            assert_eq!(bu.table.count(word), count, "word {word:?}");
        }
    }

    #[test]
    fn build_order_does_not_change_merged_table() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = write_texts(dir.path(), &[("a", "x y"), ("b", "x z"), ("c", "w")]);
        let mut reversed = manifest.clone();
        reversed.texts.reverse();
        let config = PipelineConfig::default();
        let fwd = build_corpus(&manifest, &config, dir.path()).unwrap();
        let rev = build_corpus(&reversed, &config, dir.path()).unwrap();
        assert_eq!(fwd.table.total(), rev.table.total());
        for (word, count) in fwd.table.iter() {
            assert_eq!(rev.table.count(word), count);
        }
    }

    #[test]
    fn unreadable_text_aborts_with_per_file_report() {
        let dir = tempfile::tempdir().unwrap();
        let mut manifest = write_texts(dir.path(), &[("a", "x")]);
        manifest.texts.push(TextDescriptor {
            id: "ghost".into(),
            path: PathBuf::from("ghost.txt"),
            author: "".into(),
            language: "en".into(),
            origin: Origin::Native,
            translator: None,
            source_language: None,
            url: None,
            sha256: None,
            take_tokens: None,
        });
        let err = build_corpus(&manifest, &PipelineConfig::default(), dir.path()).unwrap_err();
        match err {
            Error::CorpusRead { reports } => {
                assert_eq!(reports.len(), 1);
                assert!(reports[0].contains("ghost.txt"), "{reports:?}");
            }
            other => panic!("expected CorpusRead, got {other:?}"),
        }
    }

    #[test]
    fn manifest_validation_catches_duplicates_and_missing_source_language() {
        let text = TextDescriptor {
            id: "a".into(),
            path: "a.txt".into(),
            author: "".into(),
            language: "pl".into(),
            origin: Origin::Native,
            translator: None,
            source_language: None,
            url: None,
            sha256: None,
            take_tokens: None,
        };
        let dup = CorpusManifest {
            name: "m".into(),
            target_size: None,
            texts: vec![text.clone(), text.clone()],
        };
        assert!(dup.validate().is_err());

        let translated = CorpusManifest {
            name: "m".into(),
            target_size: None,
            texts: vec![TextDescriptor {
                origin: Origin::Translated,
                ..text
            }],
        };
        assert!(translated.validate().is_err());
    }

    fn sized_manifest(sizes: &[u64]) -> CorpusManifest {
        CorpusManifest {
            name: "sized".into(),
            target_size: None,
            texts: sizes
                .iter()
                .enumerate()
                .map(|(i, _)| TextDescriptor {
                    id: format!("t{i}"),
                    path: PathBuf::from(format!("t{i}.txt")),
                    author: "".into(),
                    language: "en".into(),
                    origin: Origin::Native,
                    translator: None,
                    source_language: None,
                    url: None,
                    sha256: None,
                    take_tokens: None,
                })
                .collect(),
        }
    }

    #[test]
    fn whole_texts_trim_keeps_closest_not_exceeding() {
        let manifest = sized_manifest(&[500, 400, 300]);
        let (trimmed, report) =
            trim_to_size(&manifest, &[500, 400, 300], 950, TrimPolicy::WholeTexts).unwrap();
        assert_eq!(trimmed.texts.len(), 2);
        assert_eq!(report.total, 900);
        assert_eq!(report.shortfall, 50);
    }

    #[test]
    fn truncate_last_trim_hits_target_exactly() {
        let manifest = sized_manifest(&[500, 400, 300]);
        let (trimmed, report) =
            trim_to_size(&manifest, &[500, 400, 300], 950, TrimPolicy::TruncateLast).unwrap();
        assert_eq!(trimmed.texts.len(), 3);
        assert_eq!(trimmed.texts[2].take_tokens, Some(50));
        assert_eq!(report.total, 950);
        assert_eq!(report.shortfall, 0);
    }

    #[test]
    fn trim_to_full_total_changes_nothing() {
        let manifest = sized_manifest(&[500, 400, 300]);
        for policy in [TrimPolicy::WholeTexts, TrimPolicy::TruncateLast] {
            let (trimmed, report) =
                trim_to_size(&manifest, &[500, 400, 300], 1200, policy).unwrap();
            assert_eq!(trimmed.texts.len(), 3);
            assert!(trimmed.texts.iter().all(|t| t.take_tokens.is_none()));
            assert_eq!(report.total, 1200);
            assert_eq!(report.shortfall, 0);
        }
    }

    #[test]
    fn trim_target_above_total_is_an_error() {
        let manifest = sized_manifest(&[10, 20]);
        match trim_to_size(&manifest, &[10, 20], 100, TrimPolicy::WholeTexts).unwrap_err() {
            Error::TargetExceedsTotal { target, available } => {
                assert_eq!(target, 100);
                assert_eq!(available, 30);
            }
            other => panic!("expected TargetExceedsTotal, got {other:?}"),
        }
    }

    #[test]
    fn take_tokens_truncates_during_build() {
        let dir = tempfile::tempdir().unwrap();
        let mut manifest = write_texts(dir.path(), &[("a", "one two three four five")]);
        manifest.texts[0].take_tokens = Some(2);
        let build = build_corpus(&manifest, &PipelineConfig::default(), dir.path()).unwrap();
        assert_eq!(build.table.total(), 2);
        assert_eq!(build.table.count("one"), 1);
        assert_eq!(build.table.count("three"), 0);
    }

    #[test]
    fn compare_distribution_with_itself_is_flat() {
        let dist = exact_zipf_table(1.0, 5_000, 1e6).unwrap();
        let report = compare(&dist, &dist, &GridSpec::default(), 0.05).unwrap();
        assert!(report.delta.iter().all(|(_, d)| d.abs() < 1e-12));
        assert!(report.divergence_rank.is_none());
        for pair in &report.decade_alphas {
            assert!((pair.alpha_a - pair.alpha_b).abs() < 1e-12);
        }
    }

    #[test]
    fn compare_scaled_distribution_is_flat_after_normalization() {
        let dist = exact_zipf_table(1.0, 5_000, 1e6).unwrap();
        let scaled = RankedDistribution::from_real_frequencies(
            dist.entries()
                .iter()
                .map(|e| (e.word.clone(), e.frequency * 4.2)),
            dist.fingerprint().clone(),
        )
        .unwrap();
        let report = compare(&dist, &scaled, &GridSpec::default(), 0.05).unwrap();
        assert!(
            report.delta.iter().all(|(_, d)| d.abs() < 1e-12),
            "max |delta| = {}",
            report
                .delta
                .iter()
                .map(|(_, d)| d.abs())
                .fold(0.0f64, f64::max)
        );
        assert!(report.divergence_rank.is_none());
    }

    #[test]
    fn constructed_faster_tail_yields_divergence_near_its_onset() {
        // multiply frequencies by r^-0.1 beyond rank 5000
        let base = exact_zipf_table(1.0, 20_000, 1e7).unwrap();
        let deflected = RankedDistribution::from_real_frequencies(
            base.entries().iter().map(|e| {
                let f = if e.rank > 5_000 {
                    e.frequency * (e.rank as f64).powf(-0.1)
                } else {
                    e.frequency
                };
                (e.word.clone(), f)
            }),
            base.fingerprint().clone(),
        )
        .unwrap();
        let report = compare(&base, &deflected, &GridSpec::default(), 0.05).unwrap();
        let rank = report.divergence_rank.expect("tail must diverge");
        assert!(
            (2_500..=10_000).contains(&rank),
            "divergence_rank = {rank}"
        );
        // the gap is positive: A sits above the deflected B
        let last = report.delta.last().unwrap();
        assert!(last.1 > 0.0);
    }

    #[test]
    fn checksum_verification_detects_tampering() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("text.txt");
        std::fs::write(&path, b"hello words").unwrap();
        let good = sha256_hex(b"hello words");
        assert!(verify_checksum(&path, &good).is_ok());
        let bad = sha256_hex(b"tampered");
        assert!(matches!(
            verify_checksum(&path, &bad).unwrap_err(),
            Error::ChecksumMismatch { .. }
        ));
    }

    #[test]
    fn fetch_reports_present_and_missing_without_network() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("here.txt"), "content").unwrap();
        let manifest = CorpusManifest {
            name: "f".into(),
            target_size: None,
            texts: vec![
                TextDescriptor {
                    id: "here".into(),
                    path: "here.txt".into(),
                    author: "".into(),
                    language: "en".into(),
                    origin: Origin::Native,
                    translator: None,
                    source_language: None,
                    url: None,
                    sha256: Some(sha256_hex(b"content")),
                    take_tokens: None,
                },
                TextDescriptor {
                    id: "gone".into(),
                    path: "gone.txt".into(),
                    author: "".into(),
                    language: "en".into(),
                    origin: Origin::Native,
                    translator: None,
                    source_language: None,
                    url: None,
                    sha256: None,
                    take_tokens: None,
                },
            ],
        };
        let outcomes = fetch_manifest_texts(&manifest, dir.path()).unwrap();
        assert_eq!(outcomes[0].action, FetchAction::Verified);
        assert_eq!(outcomes[1].action, FetchAction::Missing);
    }

    #[test]
    fn manifest_toml_roundtrip() {
        let toml_text = r#"
name = "demo"
target_size = 1000

[[texts]]
id = "one"
path = "texts/one.txt"
author = "A. Writer"
language = "pl"
origin = "translated"
source_language = "en"
translator = "T. Ranslator"
"#;
        let manifest: CorpusManifest = toml::from_str(toml_text).unwrap();
        manifest.validate().unwrap();
        assert_eq!(manifest.texts[0].origin, Origin::Translated);
        assert_eq!(manifest.target_size, Some(1000));
        let _fp = ConfigFingerprint::synthetic("roundtrip", &toml::to_string(&manifest).unwrap());
    }
}
