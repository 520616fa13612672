//! Power-law exponent estimation on log-log axes.
//!
//! The estimator is ordinary least squares of log10 f(r) on log10 r,
//! unweighted, one point per integer rank in the window; the exponent is
//! the negated slope. Crossovers between two power-law regimes are found
//! by an exhaustive scan over a log-spaced breakpoint grid, fitting both
//! segments per candidate and keeping the split with the smallest
//! combined residual sum of squares.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ranking::RankedDistribution;

/// Minimum decades a window must span for a fit to be meaningful.
pub const MIN_FIT_DECADES: f64 = 0.5;
/// Minimum decades for a crossover scan (room for two half-decade segments).
pub const MIN_CROSSOVER_DECADES: f64 = 1.5;
/// Breakpoint candidates per decade in the crossover scan.
pub const BREAKPOINT_GRID_PER_DECADE: usize = 50;

/// Inclusive rank bounds for a fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitWindow {
    lo: usize,
    hi: usize,
}

impl FitWindow {
    pub fn new(lo: usize, hi: usize) -> Result<Self> {
        if lo < 1 || lo >= hi {
            return Err(Error::Config(format!(
                "invalid fit window [{lo}, {hi}]: need 1 <= lo < hi"
            )));
        }
        Ok(FitWindow { lo, hi })
    }

    /// Parse "lo:hi".
    pub fn parse(text: &str) -> Result<Self> {
        let (lo, hi) = text
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("window {text:?}: expected LO:HI")))?;
        let lo = lo
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("window {text:?}: bad lower bound")))?;
        let hi = hi
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("window {text:?}: bad upper bound")))?;
        FitWindow::new(lo, hi)
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    /// log10(hi/lo).
    pub fn span_decades(&self) -> f64 {
        (self.hi as f64 / self.lo as f64).log10()
    }

    /// Clip the window to a vocabulary of size `v`.
    fn capped(&self, v: usize) -> Result<FitWindow> {
        if self.lo > v {
            return Err(Error::FitRefused(format!(
                "window [{}, {}] starts past the vocabulary (V = {v})",
                self.lo, self.hi
            )));
        }
        let hi = self.hi.min(v);
        if hi <= self.lo {
            return Err(Error::FitRefused(format!(
                "window [{}, {}] capped at V = {v} leaves no span",
                self.lo, self.hi
            )));
        }
        Ok(FitWindow { lo: self.lo, hi })
    }
}

impl std::fmt::Display for FitWindow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// A single power-law fit f(r) ~ r^(-alpha) over a window.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PowerLawFit {
    /// Exponent, reported positive for decaying frequencies.
    pub alpha: f64,
    /// log10 f at log10 r = 0.
    pub intercept: f64,
    /// Coefficient of determination of the log-log regression.
    pub r_squared: f64,
    /// Standard error of the slope.
    pub alpha_stderr: f64,
    /// Residual sum of squares in log10 space.
    pub sse: f64,
    /// Window actually fitted (upper bound capped at V).
    pub window: FitWindow,
    pub n_points: usize,
}

fn log_points(dist: &RankedDistribution, window: FitWindow) -> Vec<(f64, f64)> {
    (window.lo..=window.hi)
        .map(|r| {
            let f = dist
                .frequency_at(r)
                .expect("window capped to vocabulary size");
            ((r as f64).log10(), f.log10())
        })
        .collect()
}

struct Ols {
    slope: f64,
    intercept: f64,
    r_squared: f64,
    slope_stderr: f64,
    sse: f64,
}

fn ols(points: &[(f64, f64)]) -> Ols {
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for &(x, y) in points {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse = (syy - slope * sxy).max(0.0);
    let r_squared = if syy > 0.0 {
        (1.0 - sse / syy).clamp(0.0, 1.0)
    } else {
        // all y equal: a horizontal line fits exactly
        1.0
    };
    let slope_stderr = if points.len() > 2 {
        (sse / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ols {
        slope,
        intercept,
        r_squared,
        slope_stderr,
        sse,
    }
}

/// Fit f(r) ~ r^(-alpha) over every integer rank in the window.
///
/// Refused when the window (after capping at V) spans less than
/// [`MIN_FIT_DECADES`] or holds fewer than 3 points.
pub fn fit_power_law(dist: &RankedDistribution, window: FitWindow) -> Result<PowerLawFit> {
    let window = window.capped(dist.vocabulary_size())?;
    if window.span_decades() < MIN_FIT_DECADES {
        return Err(Error::FitRefused(format!(
            "window {window} spans {:.3} decades; at least {MIN_FIT_DECADES} required for a meaningful fit",
            window.span_decades()
        )));
    }
    let points = log_points(dist, window);
    if points.len() < 3 {
        return Err(Error::FitRefused(format!(
            "window {window} holds {} points; at least 3 required",
            points.len()
        )));
    }
    let fit = ols(&points);
    Ok(PowerLawFit {
        alpha: -fit.slope,
        intercept: fit.intercept,
        r_squared: fit.r_squared,
        alpha_stderr: fit.slope_stderr,
        sse: fit.sse,
        window,
        n_points: points.len(),
    })
}

/// Two-segment fit around the breakpoint that minimizes combined residual
/// sum of squares.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegmentedFit {
    /// Rank where the regimes meet; shared by both segment windows.
    pub breakpoint: usize,
    pub low_fit: PowerLawFit,
    pub high_fit: PowerLawFit,
    /// Combined residual sum of squares in log space.
    pub total_sse: f64,
}

/// Scan a log-spaced breakpoint grid (at least
/// [`BREAKPOINT_GRID_PER_DECADE`] candidates per decade) inside `outer`,
/// fitting both segments per candidate; the candidate with the smallest
/// combined residual wins, ties going to the smallest breakpoint.
pub fn detect_crossover(dist: &RankedDistribution, outer: FitWindow) -> Result<SegmentedFit> {
    let outer = outer.capped(dist.vocabulary_size())?;
    if outer.span_decades() < MIN_CROSSOVER_DECADES {
        return Err(Error::FitRefused(format!(
            "crossover window {outer} spans {:.3} decades; at least {MIN_CROSSOVER_DECADES} required",
            outer.span_decades()
        )));
    }

    let lo_exp = (outer.lo as f64).log10();
    let hi_exp = (outer.hi as f64).log10();
    let steps = ((hi_exp - lo_exp) * BREAKPOINT_GRID_PER_DECADE as f64).ceil() as usize;
    let mut candidates: Vec<usize> = (0..=steps)
        .map(|k| {
            let exp = lo_exp + (hi_exp - lo_exp) * k as f64 / steps as f64;
            10f64.powf(exp).round() as usize
        })
        .filter(|&r| r > outer.lo && r < outer.hi)
        .collect();
    candidates.dedup();

    let mut best: Option<SegmentedFit> = None;
    for bp in candidates {
        let low_window = FitWindow { lo: outer.lo, hi: bp };
        let high_window = FitWindow { lo: bp, hi: outer.hi };
        if low_window.span_decades() < MIN_FIT_DECADES
            || high_window.span_decades() < MIN_FIT_DECADES
        {
            continue;
        }
        let (Ok(low_fit), Ok(high_fit)) = (
            fit_power_law(dist, low_window),
            fit_power_law(dist, high_window),
        ) else {
            continue;
        };
        let total_sse = low_fit.sse + high_fit.sse;
        // strict comparison keeps the smallest breakpoint on ties
        if best.as_ref().map_or(true, |b| total_sse < b.total_sse) {
            best = Some(SegmentedFit {
                breakpoint: bp,
                low_fit,
                high_fit,
                total_sse,
            });
        }
    }
    best.ok_or(Error::NoBreakpoint {
        lo: outer.lo,
        hi: outer.hi,
    })
}

/// Longest run of same-sign residuals; long runs flag systematic
/// curvature rather than noise.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignRun {
    pub start_rank: usize,
    pub length: usize,
    /// +1 above the fitted line, -1 below.
    pub sign: i8,
}

/// Residual diagnostics for a fit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GoodnessReport {
    /// (rank, log10-space residual) over the fit window.
    pub residuals: Vec<(usize, f64)>,
    pub max_abs_residual: f64,
    pub longest_sign_run: Option<SignRun>,
    /// Number of sign runs; few long runs mean structure, many short ones noise.
    pub sign_run_count: usize,
}

/// Per-point residuals of `fit` against `dist`, with sign-run statistics.
pub fn goodness_report(dist: &RankedDistribution, fit: &PowerLawFit) -> GoodnessReport {
    let mut residuals = Vec::with_capacity(fit.n_points);
    for r in fit.window.lo()..=fit.window.hi() {
        let Some(f) = dist.frequency_at(r) else { break };
        let predicted = fit.intercept - fit.alpha * (r as f64).log10();
        residuals.push((r, f.log10() - predicted));
    }
    let max_abs_residual = residuals
        .iter()
        .map(|(_, e)| e.abs())
        .fold(0.0f64, f64::max);

    let mut longest: Option<SignRun> = None;
    let mut run_count = 0usize;
    let mut current: Option<SignRun> = None;
    for &(rank, e) in &residuals {
        let sign: i8 = if e >= 0.0 { 1 } else { -1 };
        match current.as_mut() {
            Some(run) if run.sign == sign => run.length += 1,
            _ => {
                if let Some(done) = current.take() {
                    if longest.as_ref().map_or(true, |l| done.length > l.length) {
                        longest = Some(done);
                    }
                }
                run_count += 1;
                current = Some(SignRun {
                    start_rank: rank,
                    length: 1,
                    sign,
                });
            }
        }
    }
    if let Some(done) = current.take() {
        if longest.as_ref().map_or(true, |l| done.length > l.length) {
            longest = Some(done);
        }
    }

    GoodnessReport {
        residuals,
        max_abs_residual,
        longest_sign_run: longest,
        sign_run_count: run_count,
    }
}

/// Logarithmic binning for visual smoothing: geometric-mean rank and
/// frequency per log-spaced bin. Never used by the fitting path.
pub fn log_binned(dist: &RankedDistribution, bins_per_decade: usize) -> Vec<(f64, f64, usize)> {
    let v = dist.vocabulary_size();
    if v == 0 || bins_per_decade == 0 {
        return Vec::new();
    }
    let mut bins: Vec<(f64, f64, usize)> = Vec::new();
    let width = 1.0 / bins_per_decade as f64;
    let mut bin_index = 0usize;
    let mut sum_log_r = 0.0;
    let mut sum_log_f = 0.0;
    let mut count = 0usize;
    for entry in dist.entries() {
        let idx = ((entry.rank as f64).log10() / width).floor() as usize;
        if idx != bin_index && count > 0 {
            bins.push((
                10f64.powf(sum_log_r / count as f64),
                10f64.powf(sum_log_f / count as f64),
                count,
            ));
            sum_log_r = 0.0;
            sum_log_f = 0.0;
            count = 0;
        }
        bin_index = idx;
        sum_log_r += (entry.rank as f64).log10();
        sum_log_f += entry.frequency.log10();
        count += 1;
    }
    if count > 0 {
        bins.push((
            10f64.powf(sum_log_r / count as f64),
            10f64.powf(sum_log_f / count as f64),
            count,
        ));
    }
    bins
}
