//! Synthetic texts with analytically known rank-frequency behavior.
//!
//! The random-typing model emits i.i.d. characters (space with
//! probability q, else one of M equiprobable letters); its rank-frequency
//! curve follows a power law with exponent 1 - ln(1-q)/ln M. The Zipf
//! sampler draws tokens from an exact discrete power law. Both are
//! deterministic given a seed: streams come from ChaCha8
//! (`ChaCha8Rng::seed_from_u64`), a portable counter-based generator
//! whose output is stable across platforms and pinned by the
//! `rand_chacha` version in Cargo.lock.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::ConfigFingerprint;
use crate::error::{Error, Result};
use crate::ingest::TokenStream;
use crate::ranking::RankedDistribution;

/// Parameters of the random-typing model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonkeyParams {
    /// Alphabet size M, between 2 and 26 (tokens use letters a..z).
    pub letters: u32,
    /// Space probability q, strictly between 0 and 1.
    pub space_prob: f64,
    /// Number of characters to emit.
    pub chars: u64,
    pub seed: u64,
}

impl MonkeyParams {
    fn validate(&self) -> Result<()> {
        if !(2..=26).contains(&self.letters) {
            return Err(Error::Config(format!(
                "alphabet size must be in [2, 26], got {}",
                self.letters
            )));
        }
        if !(self.space_prob > 0.0 && self.space_prob < 1.0) {
            return Err(Error::Config(format!(
                "space probability must be in (0, 1), got {}",
                self.space_prob
            )));
        }
        Ok(())
    }
}

/// Closed-form exponent of the random-typing model: 1 - ln(1-q)/ln M.
pub fn analytic_monkey_alpha(letters: u32, space_prob: f64) -> Result<f64> {
    if letters < 2 {
        return Err(Error::Config(format!(
            "alphabet size must be at least 2, got {letters}"
        )));
    }
    if !(space_prob > 0.0 && space_prob < 1.0) {
        return Err(Error::Config(format!(
            "space probability must be in (0, 1), got {space_prob}"
        )));
    }
    Ok(1.0 - (1.0 - space_prob).ln() / (letters as f64).ln())
}

/// Generate a token stream by random typing: each character is a space
/// with probability q, else a uniform letter; tokens are the maximal
/// letter runs (consecutive spaces emit nothing).
pub fn monkey_text(params: &MonkeyParams) -> Result<TokenStream> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut tokens = Vec::new();
    let mut word = String::new();
    for _ in 0..params.chars {
        if rng.random::<f64>() < params.space_prob {
            if !word.is_empty() {
                tokens.push(std::mem::take(&mut word));
            }
        } else {
            let letter = rng.random_range(0..params.letters) as u8;
            word.push((b'a' + letter) as char);
        }
    }
    if !word.is_empty() {
        tokens.push(word);
    }
    let fingerprint = ConfigFingerprint::synthetic(
        "synth-monkey",
        &serde_json::to_string(params).expect("params serialize"),
    );
    Ok(TokenStream::new(tokens, fingerprint))
}

/// Parameters of the exact Zipf sampler.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZipfParams {
    /// Target exponent; 0 gives the uniform distribution.
    pub alpha: f64,
    /// Vocabulary size V; words are named w1..wV.
    pub vocab: usize,
    /// Number of tokens to draw.
    pub tokens: u64,
    pub seed: u64,
}

impl ZipfParams {
    fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0) {
            return Err(Error::Config(format!(
                "alpha must be non-negative, got {}",
                self.alpha
            )));
        }
        if self.vocab == 0 {
            return Err(Error::Config("vocabulary size must be positive".into()));
        }
        Ok(())
    }
}

/// Letter-only name for the word at rank `n` (1-based): bijective
/// base-26, so streams survive a round trip through the tokenizer.
pub fn word_name(mut n: usize) -> String {
    debug_assert!(n > 0, "word ranks are 1-based");
    let mut buf = Vec::new();
    while n > 0 {
        n -= 1;
        buf.push(b'a' + (n % 26) as u8);
        n /= 26;
    }
    buf.reverse();
    String::from_utf8(buf).expect("ascii letters")
}

/// Draw N i.i.d. tokens from p(r) = r^(-alpha)/H over a synthetic
/// vocabulary of V letter-only words, where H is the normalizing sum.
/// Sampling is by inverse CDF with binary search, so the stream depends
/// only on the seed and the parameters.
pub fn zipf_sample(params: &ZipfParams) -> Result<TokenStream> {
    params.validate()?;
    let cdf: Vec<f64> = {
        let weights: Vec<f64> = (1..=params.vocab)
            .map(|r| (r as f64).powf(-params.alpha))
            .collect();
        let total: f64 = weights.iter().sum();
        let mut acc = 0.0;
        weights
            .iter()
            .map(|w| {
                acc += w / total;
                acc
            })
            .collect()
    };
    let words: Vec<String> = (1..=params.vocab).map(word_name).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut tokens = Vec::with_capacity(params.tokens as usize);
    for _ in 0..params.tokens {
        let u: f64 = rng.random();
        let idx = cdf.partition_point(|&c| c <= u).min(params.vocab - 1);
        tokens.push(words[idx].clone());
    }
    let fingerprint = ConfigFingerprint::synthetic(
        "synth-zipf",
        &serde_json::to_string(params).expect("params serialize"),
    );
    Ok(TokenStream::new(tokens, fingerprint))
}

/// Noise-free table f(r) = scale * r^(-alpha) for ranks 1..V, with exact
/// real-valued frequencies so fits can be checked to floating-point
/// tolerance.
pub fn exact_zipf_table(alpha: f64, vocab: usize, scale: f64) -> Result<RankedDistribution> {
    if !(scale > 0.0) {
        return Err(Error::Config(format!("scale must be positive, got {scale}")));
    }
    if !(alpha >= 0.0) {
        return Err(Error::Config(format!(
            "alpha must be non-negative, got {alpha}"
        )));
    }
    let fingerprint = ConfigFingerprint::synthetic(
        "synth-exact",
        &format!("alpha={alpha},vocab={vocab},scale={scale}"),
    );
    RankedDistribution::from_real_frequencies(
        (1..=vocab).map(|r| (word_name(r), scale * (r as f64).powf(-alpha))),
        fingerprint,
    )
}

/// Two power-law regimes joined continuously at `breakpoint`, with
/// Gaussian noise of standard deviation `sigma` in log10 f (seeded).
/// The noisy values are re-sorted so the result is a valid distribution.
pub fn two_regime_table(
    alpha_low: f64,
    alpha_high: f64,
    breakpoint: usize,
    vocab: usize,
    scale: f64,
    sigma: f64,
    seed: u64,
) -> Result<RankedDistribution> {
    if breakpoint == 0 || breakpoint >= vocab {
        return Err(Error::Config(format!(
            "breakpoint {breakpoint} must lie inside [1, {vocab})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // continuity at the breakpoint: scale_high * bp^-a2 = scale * bp^-a1
    let scale_high = scale * (breakpoint as f64).powf(alpha_high - alpha_low);
    let mut freqs: Vec<f64> = (1..=vocab)
        .map(|r| {
            let base = if r <= breakpoint {
                scale * (r as f64).powf(-alpha_low)
            } else {
                scale_high * (r as f64).powf(-alpha_high)
            };
            base * 10f64.powf(sigma * gaussian(&mut rng))
        })
        .collect();
    freqs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let fingerprint = ConfigFingerprint::synthetic(
        "synth-two-regime",
        &format!("a1={alpha_low},a2={alpha_high},bp={breakpoint},v={vocab},sigma={sigma},seed={seed}"),
    );
    RankedDistribution::from_real_frequencies(
        freqs
            .into_iter()
            .enumerate()
            .map(|(i, f)| (word_name(i + 1), f)),
        fingerprint,
    )
}

/// Standard normal deviate via Box-Muller.
fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = loop {
        let u = rng.random::<f64>();
        if u > 0.0 {
            break u;
        }
    };
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}
