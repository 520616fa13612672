//! Command-line surface: rank single texts, emit figure-style data
//! series, generate synthetic texts, and fetch manifest corpora.
//!
//! Every output artifact embeds the run configuration and the toolkit
//! version (CSV files as `#`-prefixed preamble lines, JSON files as a
//! `config` field, plain-text streams via a `.meta.json` sidecar), so a
//! run can be reproduced byte-for-byte from any of its outputs.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::TokenizationRules;
use crate::corpus::{
    build_corpus, compare, fetch_manifest_texts, load_manifest, trim_to_size, FetchAction,
    GridSpec, PipelineConfig, TrimPolicy, DEFAULT_COMPARE_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::fitting::{detect_crossover, fit_power_law, log_binned, FitWindow};
use crate::ingest::{
    apply_dictionary_filter, load_dictionary, tokenize, write_rejects_tsv, FilterPolicy, RawText,
    TokenStream,
};
use crate::lexicon::{load_lexicon, tag_tokens, lemmatize, DisambiguationMode, PosTag};
use crate::ranking::{class_sub_ranking, count_frequencies, rank, CountForm, RankedDistribution};
use crate::synth::{monkey_text, zipf_sample, MonkeyParams, ZipfParams};
use crate::VERSION;

/// Rank-frequency analysis toolkit.
#[derive(Debug, Parser, Serialize)]
#[command(name = "rankfreq", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Rank one text: CSV distribution, reject list, summary JSON.
    Rank(RankArgs),
    /// Emit the data series behind one of the standard figures.
    Fig(FigArgs),
    /// Generate synthetic text with a known rank-frequency law.
    Synth(SynthArgs),
    /// Download the texts a corpus manifest references.
    Fetch(FetchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyArg {
    DropMisses,
    KeepMisses,
    ReviewOnly,
}

impl From<PolicyArg> for FilterPolicy {
    fn from(value: PolicyArg) -> Self {
        match value {
            PolicyArg::DropMisses => FilterPolicy::DropMisses,
            PolicyArg::KeepMisses => FilterPolicy::KeepMisses,
            PolicyArg::ReviewOnly => FilterPolicy::ReviewOnly,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct RankArgs {
    /// Input text file (UTF-8).
    pub input: PathBuf,
    /// Identifier used in output file names (default: input stem).
    #[arg(long)]
    pub id: Option<String>,
    /// Language code recorded in the outputs.
    #[arg(long, default_value = "und")]
    pub language: String,
    /// Tokenization rules TOML (defaults apply when omitted).
    #[arg(long)]
    pub rules: Option<PathBuf>,
    /// Dictionary file, one word per line.
    #[arg(long)]
    pub dictionary: Option<PathBuf>,
    /// What to do with dictionary misses.
    #[arg(long, value_enum, default_value = "keep-misses")]
    pub policy: PolicyArg,
    /// Fit window LO:HI; a fit is reported only when given.
    #[arg(long)]
    pub window: Option<String>,
    /// Also run two-segment crossover detection over the fit window.
    #[arg(long)]
    pub crossover: bool,
    /// Also write a log-binned series (visual smoothing only).
    #[arg(long)]
    pub log_binning: bool,
    /// Output directory (default: $RANKFREQ_OUT or the current directory).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4a,
    Fig4b,
}

impl FigureId {
    fn label(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4a => "fig4a",
            FigureId::Fig4b => "fig4b",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormArg {
    Surface,
    Lemma,
}

#[derive(Debug, Args, Serialize)]
pub struct FigArgs {
    /// Which figure's data to emit.
    #[arg(value_enum)]
    pub figure: FigureId,
    /// Input text file(s); fig1 takes one or more, fig2/fig3 exactly one.
    pub inputs: Vec<PathBuf>,
    /// Lexicon TSV (surface, lemma, pos); required for fig2 and fig3.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Corpus manifest A (fig4: same-author or native corpus).
    #[arg(long)]
    pub corpus_a: Option<PathBuf>,
    /// Corpus manifest B (fig4: multi-author or translated corpus).
    #[arg(long)]
    pub corpus_b: Option<PathBuf>,
    /// Count surfaces or lemmas for class series (fig2).
    #[arg(long, value_enum, default_value = "surface")]
    pub form: FormArg,
    /// Fit window LO:HI (default 10:10000, capped at the vocabulary).
    #[arg(long, default_value = "10:10000")]
    pub window: String,
    /// Comparison grid points per decade (fig4).
    #[arg(long, default_value_t = 20)]
    pub grid: usize,
    /// Divergence threshold in log10 units (fig4).
    #[arg(long, default_value_t = DEFAULT_COMPARE_THRESHOLD)]
    pub threshold: f64,
    /// Tokenization rules TOML.
    #[arg(long)]
    pub rules: Option<PathBuf>,
    /// Output directory (default: $RANKFREQ_OUT or the current directory).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SynthArgs {
    #[command(subcommand)]
    pub model: SynthModel,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SynthModel {
    /// Random typing: i.i.d. letters with a space probability.
    Monkey {
        /// Alphabet size (2..=26).
        #[arg(long, default_value_t = 26)]
        letters: u32,
        /// Space probability in (0, 1).
        #[arg(long, default_value_t = 0.2)]
        space_prob: f64,
        /// Characters to generate.
        #[arg(long, default_value_t = 1_000_000)]
        chars: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output text file (space-separated tokens).
        #[arg(long)]
        out: PathBuf,
    },
    /// Seeded sampler for an exact discrete power law.
    Zipf {
        /// Target exponent (0 gives the uniform distribution).
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Vocabulary size; words are named w1..wV.
        #[arg(long, default_value_t = 10_000)]
        vocab: usize,
        /// Tokens to draw.
        #[arg(long, default_value_t = 1_000_000)]
        tokens: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output text file (space-separated tokens).
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct FetchArgs {
    /// Corpus manifest (TOML).
    pub manifest: PathBuf,
    /// Base directory for relative text paths (default: manifest's directory).
    #[arg(long)]
    pub base: Option<PathBuf>,
}

/// Run configuration embedded in every output artifact.
#[derive(Debug, Serialize)]
struct RunConfig<'a, T: Serialize> {
    version: &'a str,
    command: &'a str,
    args: &'a T,
}

fn run_config_json<T: Serialize>(command: &str, args: &T) -> String {
    serde_json::to_string(&RunConfig {
        version: VERSION,
        command,
        args,
    })
    .expect("run config serializes")
}

fn preamble(config_json: &str) -> Vec<String> {
    vec![format!("rankfreq {VERSION}"), format!("config {config_json}")]
}

fn out_dir(requested: &Option<PathBuf>) -> PathBuf {
    requested
        .clone()
        .or_else(|| std::env::var_os("RANKFREQ_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Write {
        path: dir.to_path_buf(),
        source,
    })
}

fn write_dist_csv(path: &Path, dist: &RankedDistribution, preamble: &[String]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })?;
    dist.write_csv(std::io::BufWriter::new(file), preamble)
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("json serializes");
    text.push('\n');
    std::fs::write(path, text).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn load_rules(path: &Option<PathBuf>) -> Result<TokenizationRules> {
    match path {
        Some(p) => TokenizationRules::from_file(p),
        None => Ok(TokenizationRules::default()),
    }
}

fn stem_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "text".to_string())
}

fn ingest_file(
    input: &Path,
    id: &str,
    language: &str,
    rules: &TokenizationRules,
) -> Result<(TokenStream, Vec<crate::ingest::RejectRecord>)> {
    let raw = RawText::from_file(id, language, input)?;
    let (stream, rejects) = tokenize(&raw, rules);
    if stream.is_empty() {
        return Err(Error::EmptyInput(format!(
            "{} produced no tokens",
            input.display()
        )));
    }
    Ok((stream, rejects))
}

/// `rank`: distribution CSV, reject TSV, summary JSON, optional fit.
pub fn cmd_rank(args: &RankArgs) -> Result<()> {
    let config_json = run_config_json("rank", args);
    let rules = load_rules(&args.rules)?;
    let id = args.id.clone().unwrap_or_else(|| stem_of(&args.input));
    let dir = out_dir(&args.out);
    ensure_dir(&dir)?;

    let (stream, mut rejects) = ingest_file(&args.input, &id, &args.language, &rules)?;
    let non_word_rejects = rejects.len();

    let (stream, dictionary_misses) = match &args.dictionary {
        Some(dict_path) => {
            let dict = load_dictionary(dict_path)?;
            if dict.duplicates > 0 {
                eprintln!(
                    "warning: dictionary {} had {} duplicate entries (deduplicated)",
                    dict_path.display(),
                    dict.duplicates
                );
            }
            let outcome = apply_dictionary_filter(&stream, &dict, args.policy.into())?;
            // misses go into the review file even when the policy keeps them
            rejects.extend(outcome.misses.clone());
            (outcome.stream, outcome.misses.len())
        }
        None => (stream, 0),
    };

    let dist = rank(&count_frequencies(&stream));

    let fit = match &args.window {
        Some(w) => Some(fit_power_law(&dist, FitWindow::parse(w)?)?),
        None => None,
    };
    let crossover = if args.crossover {
        let w = match &args.window {
            Some(w) => FitWindow::parse(w)?,
            None => FitWindow::new(10, 10_000)?,
        };
        Some(detect_crossover(&dist, w)?)
    } else {
        None
    };

    write_dist_csv(
        &dir.join(format!("{id}.rank.csv")),
        &dist,
        &preamble(&config_json),
    )?;
    write_rejects_tsv(&dir.join(format!("{id}.rejects.tsv")), &rejects)?;
    if args.log_binning {
        let bins = log_binned(&dist, 10);
        let mut text = preamble(&config_json)
            .iter()
            .map(|l| format!("# {l}\n"))
            .collect::<String>();
        text.push_str("rank_center,frequency_gmean,points\n");
        for (r, f, n) in bins {
            text.push_str(&format!("{r},{f},{n}\n"));
        }
        std::fs::write(dir.join(format!("{id}.binned.csv")), text).map_err(|source| {
            Error::Write {
                path: dir.join(format!("{id}.binned.csv")),
                source,
            }
        })?;
    }

    let summary = serde_json::json!({
        "version": VERSION,
        "config": serde_json::from_str::<serde_json::Value>(&config_json).unwrap(),
        "id": id,
        "tokens": dist.total(),
        "vocabulary": dist.vocabulary_size(),
        "rejects": {
            "non_word": non_word_rejects,
            "dictionary_miss": dictionary_misses,
        },
        "fingerprint": dist.fingerprint().as_str(),
        "fit": fit,
        "crossover": crossover,
    });
    write_json(&dir.join(format!("{id}.summary.json")), &summary)?;
    println!(
        "{id}: {} tokens, {} distinct words{}",
        dist.total(),
        dist.vocabulary_size(),
        match &summary["fit"] {
            serde_json::Value::Null => String::new(),
            fit => format!(", alpha = {:.4}", fit["alpha"].as_f64().unwrap_or(f64::NAN)),
        }
    );
    Ok(())
}

/// `fig`: emit one CSV series per curve of the requested figure plus a
/// JSON file with the fits.
pub fn cmd_fig(args: &FigArgs) -> Result<()> {
    let config_json = run_config_json("fig", args);
    let rules = load_rules(&args.rules)?;
    let dir = out_dir(&args.out);
    ensure_dir(&dir)?;
    let window = FitWindow::parse(&args.window)?;
    let label = args.figure.label();

    match args.figure {
        FigureId::Fig1 => {
            if args.inputs.is_empty() {
                return Err(Error::Config("fig1 needs at least one input text".into()));
            }
            let mut fits = serde_json::Map::new();
            for input in &args.inputs {
                let id = stem_of(input);
                let (stream, _) = ingest_file(input, &id, "und", &rules)?;
                let dist = rank(&count_frequencies(&stream));
                write_dist_csv(
                    &dir.join(format!("{label}.{id}.csv")),
                    &dist,
                    &preamble(&config_json),
                )?;
                let fit = fit_power_law(&dist, window)?;
                fits.insert(
                    id,
                    serde_json::json!({
                        "tokens": dist.total(),
                        "vocabulary": dist.vocabulary_size(),
                        "fit": fit,
                    }),
                );
            }
            let value = serde_json::json!({
                "version": VERSION,
                "config": serde_json::from_str::<serde_json::Value>(&config_json).unwrap(),
                "series": fits,
            });
            write_json(&dir.join(format!("{label}.json")), &value)?;
        }
        FigureId::Fig2 | FigureId::Fig3 => {
            let [input] = args.inputs.as_slice() else {
                return Err(Error::Config(format!(
                    "{label} needs exactly one input text"
                )));
            };
            let lexicon_path = args.lexicon.as_ref().ok_or_else(|| {
                Error::Config(format!("{label} requires --lexicon (surface, lemma, pos TSV)"))
            })?;
            let lexicon = load_lexicon(lexicon_path)?;
            let id = stem_of(input);
            let (stream, _) = ingest_file(input, &id, "und", &rules)?;
            let (tagged, queue) = tag_tokens(&stream, &lexicon, DisambiguationMode::Priority);
            crate::lexicon::write_queue_tsv(&dir.join(format!("{label}.{id}.queue.tsv")), &queue)?;

            if args.figure == FigureId::Fig2 {
                let form = match args.form {
                    FormArg::Surface => CountForm::Surface,
                    FormArg::Lemma => CountForm::Lemma,
                };
                let global = rank(&count_frequencies(&stream));
                let global_fit = fit_power_law(&global, window)?;
                let mut classes = serde_json::Map::new();
                for pos in PosTag::ALL {
                    let sub = class_sub_ranking(&tagged, pos, form);
                    if sub.vocabulary_size() == 0 {
                        classes.insert(pos.to_string(), serde_json::Value::Null);
                        continue;
                    }
                    write_dist_csv(
                        &dir.join(format!("{label}.{id}.{}.csv", pos.to_string().to_lowercase())),
                        &sub,
                        &preamble(&config_json),
                    )?;
                    let fit = fit_power_law(&sub, window).ok();
                    classes.insert(
                        pos.to_string(),
                        serde_json::json!({
                            "tokens": sub.total(),
                            "vocabulary": sub.vocabulary_size(),
                            "fit": fit,
                        }),
                    );
                }
                // reference slope with the complete-vocabulary alpha
                let reference = format!(
                    "# rankfreq {VERSION}\n# config {config_json}\nrank,frequency\n{},{}\n{},{}\n",
                    global_fit.window.lo(),
                    10f64.powf(
                        global_fit.intercept
                            - global_fit.alpha * (global_fit.window.lo() as f64).log10()
                    ),
                    global_fit.window.hi(),
                    10f64.powf(
                        global_fit.intercept
                            - global_fit.alpha * (global_fit.window.hi() as f64).log10()
                    ),
                );
                let ref_path = dir.join(format!("{label}.{id}.reference.csv"));
                std::fs::write(&ref_path, reference).map_err(|source| Error::Write {
                    path: ref_path.clone(),
                    source,
                })?;
                let value = serde_json::json!({
                    "version": VERSION,
                    "config": serde_json::from_str::<serde_json::Value>(&config_json).unwrap(),
                    "global_fit": global_fit,
                    "classes": classes,
                });
                write_json(&dir.join(format!("{label}.json")), &value)?;
            } else {
                // fig3: inflected vs lemmatized, with the lemma crossover
                let inflected = rank(&count_frequencies(&stream));
                let lemmas = lemmatize(&tagged);
                let lemma_dist = rank(&count_frequencies(&lemmas));
                write_dist_csv(
                    &dir.join(format!("{label}.{id}.inflected.csv")),
                    &inflected,
                    &preamble(&config_json),
                )?;
                write_dist_csv(
                    &dir.join(format!("{label}.{id}.lemma.csv")),
                    &lemma_dist,
                    &preamble(&config_json),
                )?;
                let inflected_fit = fit_power_law(&inflected, window).ok();
                let crossover = detect_crossover(&lemma_dist, window).ok();
                let value = serde_json::json!({
                    "version": VERSION,
                    "config": serde_json::from_str::<serde_json::Value>(&config_json).unwrap(),
                    "inflected": {
                        "tokens": inflected.total(),
                        "vocabulary": inflected.vocabulary_size(),
                        "fit": inflected_fit,
                    },
                    "lemma": {
                        "tokens": lemma_dist.total(),
                        "vocabulary": lemma_dist.vocabulary_size(),
                        "crossover": crossover,
                    },
                });
                write_json(&dir.join(format!("{label}.json")), &value)?;
            }
        }
        FigureId::Fig4a | FigureId::Fig4b => {
            let (Some(manifest_a), Some(manifest_b)) = (&args.corpus_a, &args.corpus_b) else {
                return Err(Error::Config(format!(
                    "{label} requires --corpus-a and --corpus-b manifests"
                )));
            };
            let config = PipelineConfig {
                rules: rules.clone(),
                dictionary: None,
                policy: FilterPolicy::KeepMisses,
            };
            let dist_a = corpus_distribution(manifest_a, &config)?;
            let dist_b = corpus_distribution(manifest_b, &config)?;
            write_dist_csv(
                &dir.join(format!("{label}.a.csv")),
                &dist_a,
                &preamble(&config_json),
            )?;
            write_dist_csv(
                &dir.join(format!("{label}.b.csv")),
                &dist_b,
                &preamble(&config_json),
            )?;
            let report = compare(
                &dist_a,
                &dist_b,
                &GridSpec {
                    points_per_decade: args.grid,
                },
                args.threshold,
            )?;
            let delta_path = dir.join(format!("{label}.delta.csv"));
            let mut delta_csv: Vec<u8> = preamble(&config_json)
                .iter()
                .flat_map(|l| format!("# {l}\n").into_bytes())
                .collect();
            report.write_csv(&mut delta_csv)?;
            std::fs::write(&delta_path, delta_csv).map_err(|source| Error::Write {
                path: delta_path.clone(),
                source,
            })?;
            let fit_a = fit_power_law(&dist_a, window).ok();
            let fit_b = fit_power_law(&dist_b, window).ok();
            let value = serde_json::json!({
                "version": VERSION,
                "config": serde_json::from_str::<serde_json::Value>(&config_json).unwrap(),
                "a": { "tokens": dist_a.total(), "vocabulary": dist_a.vocabulary_size(), "fit": fit_a },
                "b": { "tokens": dist_b.total(), "vocabulary": dist_b.vocabulary_size(), "fit": fit_b },
                "comparison": report,
            });
            write_json(&dir.join(format!("{label}.json")), &value)?;
        }
    }
    println!("{label}: series written to {}", dir.display());
    Ok(())
}

/// Build a corpus distribution from a manifest, honoring its target size
/// (truncate-last) when one is declared.
fn corpus_distribution(manifest_path: &Path, config: &PipelineConfig) -> Result<RankedDistribution> {
    let manifest = load_manifest(manifest_path)?;
    let base = manifest_path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    let build = build_corpus(&manifest, config, &base)?;
    let table = match manifest.target_size {
        Some(target) => {
            let sizes: Vec<u64> = build.per_text.iter().map(|s| s.tokens).collect();
            let (trimmed, report) =
                trim_to_size(&manifest, &sizes, target, TrimPolicy::TruncateLast)?;
            eprintln!(
                "{}: trimmed to {} tokens ({} texts)",
                manifest.name, report.total, report.kept
            );
            build_corpus(&trimmed, config, &base)?.table
        }
        None => build.table,
    };
    Ok(rank(&table))
}

/// `synth`: write a generated token stream as plain text plus a metadata
/// sidecar carrying the run configuration.
pub fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let config_json = run_config_json("synth", args);
    let (stream, out) = match &args.model {
        SynthModel::Monkey {
            letters,
            space_prob,
            chars,
            seed,
            out,
        } => {
            let params = MonkeyParams {
                letters: *letters,
                space_prob: *space_prob,
                chars: *chars,
                seed: *seed,
            };
            (monkey_text(&params)?, out.clone())
        }
        SynthModel::Zipf {
            alpha,
            vocab,
            tokens,
            seed,
            out,
        } => {
            let params = ZipfParams {
                alpha: *alpha,
                vocab: *vocab,
                tokens: *tokens,
                seed: *seed,
            };
            (zipf_sample(&params)?, out.clone())
        }
    };
    if let Some(parent) = out.parent() {
        if !parent.as_os_str().is_empty() {
            ensure_dir(parent)?;
        }
    }
    stream.write_plain_text(&out)?;
    let meta = serde_json::json!({
        "version": VERSION,
        "config": serde_json::from_str::<serde_json::Value>(&config_json).unwrap(),
        "tokens": stream.len(),
        "fingerprint": stream.fingerprint().as_str(),
    });
    write_json(&out.with_extension("meta.json"), &meta)?;
    println!("wrote {} tokens to {}", stream.len(), out.display());
    Ok(())
}

/// `fetch`: download manifest texts with checksum verification.
pub fn cmd_fetch(args: &FetchArgs) -> Result<()> {
    let manifest = load_manifest(&args.manifest)?;
    let base = args
        .base
        .clone()
        .or_else(|| args.manifest.parent().map(Path::to_path_buf))
        .unwrap_or_else(|| PathBuf::from("."));
    let outcomes = fetch_manifest_texts(&manifest, &base)?;
    let mut missing = 0;
    for outcome in &outcomes {
        let verb = match outcome.action {
            FetchAction::Downloaded => "downloaded",
            FetchAction::AlreadyPresent => "present",
            FetchAction::Verified => "verified",
            FetchAction::Missing => {
                missing += 1;
                "MISSING (no url)"
            }
        };
        println!("{}: {} ({})", outcome.id, verb, outcome.path.display());
    }
    if missing > 0 {
        eprintln!("warning: {missing} text(s) have no file and no url");
    }
    Ok(())
}

/// Dispatch a parsed command line.
pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Rank(args) => cmd_rank(args),
        Command::Fig(args) => cmd_fig(args),
        Command::Synth(args) => cmd_synth(args),
        Command::Fetch(args) => cmd_fetch(args),
    }
}
