//! Rank-frequency analysis toolkit.
//!
//! Turns raw text into clean token streams, builds deterministic
//! rank-frequency distributions (including part-of-speech and lemma
//! sub-rankings), estimates power-law exponents on log-log axes with
//! optional two-segment crossover detection, and compares matched-size
//! corpora. A synthetic-text module (random-typing model, seeded Zipf
//! sampler, exact power-law tables) provides ground-truth oracles for
//! the fitting code.

pub mod cli;
pub mod config;
pub mod corpus;
pub mod error;
pub mod fitting;
pub mod ingest;
pub mod lexicon;
pub mod ranking;
pub mod synth;

pub use config::{ConfigFingerprint, TokenizationRules};
pub use error::Error;
pub use ingest::{Dictionary, FilterPolicy, RawText, RejectReason, RejectRecord, TokenStream};
pub use lexicon::{DisambiguationMode, Lexicon, PosTag, TaggedStream, TaggedToken};
pub use ranking::{FrequencyTable, RankEntry, RankedDistribution};

/// Crate version, embedded in every output artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
