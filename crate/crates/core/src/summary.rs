//! Posterior summaries: percentiles, split-R̂, effective sample size and the
//! Monte Carlo standard error of the median.
//!
//! Percentiles use the exclusive definition with linear interpolation
//! between order statistics (Hyndman–Fan type 6): for sorted draws
//! `x₁ ≤ … ≤ x_N` and probability `q`, let `h = (N + 1)q`; the percentile is
//! `x_⌊h⌋ + (h − ⌊h⌋)(x_⌊h⌋+1 − x_⌊h⌋)`, clamped to `[x₁, x_N]`.

use serde::Serialize;

use crate::bayes::{DrawField, PosteriorDraws};
use crate::error::{Error, Result};

/// Summaries need at least this many retained draws.
pub const MIN_DRAWS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PosteriorSummary {
    pub median: f64,
    /// 2.5th percentile.
    pub ci_lower: f64,
    /// 97.5th percentile.
    pub ci_upper: f64,
    pub mean: f64,
    pub mcse_median: f64,
    /// Split-chain potential scale reduction.
    pub rhat: f64,
    pub ess: f64,
    pub draws: usize,
}

/// Type-6 percentile of already sorted data.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    assert!(n > 0, "quantile of empty data");
    let h = (n as f64 + 1.0) * q;
    if h <= 1.0 {
        return sorted[0];
    }
    if h >= n as f64 {
        return sorted[n - 1];
    }
    let lo = h.floor();
    let i = lo as usize - 1;
    sorted[i] + (h - lo) * (sorted[i + 1] - sorted[i])
}

pub fn quantile(data: &[f64], q: f64) -> f64 {
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    quantile_sorted(&sorted, q)
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn sample_var(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() as f64 - 1.0)
}

fn is_constant(chains: &[&[f64]]) -> bool {
    let first = chains.iter().find_map(|c| c.first());
    first.is_none_or(|&v| chains.iter().all(|c| c.iter().all(|&x| x == v)))
}

/// Split every chain in half (dropping the middle draw of odd-length chains).
fn split_chains<'a>(chains: &[&'a [f64]]) -> Vec<&'a [f64]> {
    let mut halves = Vec::with_capacity(chains.len() * 2);
    for chain in chains {
        let half = chain.len() / 2;
        halves.push(&chain[..half]);
        halves.push(&chain[chain.len() - half..]);
    }
    halves
}

/// Between/within decomposition for equal-length chains: (W, var⁺).
fn variance_components(chains: &[&[f64]]) -> (f64, f64) {
    let m = chains.len() as f64;
    let n = chains[0].len() as f64;
    let means: Vec<f64> = chains.iter().map(|c| mean(c)).collect();
    let grand = mean(&means);
    let between = n / (m - 1.0) * means.iter().map(|v| (v - grand).powi(2)).sum::<f64>();
    let within = chains.iter().map(|c| sample_var(c)).sum::<f64>() / m;
    (within, (n - 1.0) / n * within + between / n)
}

/// Split-R̂ over chains of equal length.
pub fn split_rhat(chains: &[&[f64]]) -> f64 {
    let halves = split_chains(chains);
    if halves.len() < 2 || halves[0].len() < 2 {
        return f64::NAN;
    }
    if is_constant(chains) {
        return 1.0;
    }
    let (within, var_plus) = variance_components(&halves);
    if within == 0.0 {
        return if var_plus == 0.0 { 1.0 } else { f64::INFINITY };
    }
    (var_plus / within).sqrt()
}

fn autocovariance(x: &[f64], lag: usize) -> f64 {
    let m = mean(x);
    let n = x.len();
    (0..n - lag)
        .map(|i| (x[i] - m) * (x[i + lag] - m))
        .sum::<f64>()
        / n as f64
}

/// Multi-chain effective sample size with Geyer's initial monotone
/// sequence on the split chains.
pub fn effective_sample_size(chains: &[&[f64]]) -> f64 {
    let halves = split_chains(chains);
    let m = halves.len();
    let n = halves.first().map_or(0, |c| c.len());
    let total = (m * n) as f64;
    if m < 2 || n < 4 || is_constant(chains) {
        return total;
    }
    let (within, var_plus) = variance_components(&halves);
    if !(within > 0.0) || !(var_plus > 0.0) {
        return total;
    }
    let rho = |lag: usize| -> f64 {
        let acov = halves.iter().map(|c| autocovariance(c, lag)).sum::<f64>() / m as f64;
        1.0 - (within - acov) / var_plus
    };
    let mut sum_pairs = 0.0;
    let mut prev_pair = f64::INFINITY;
    let mut lag = 0;
    while lag + 1 < n {
        let pair = rho(lag) + rho(lag + 1);
        if pair <= 0.0 {
            break;
        }
        let pair = pair.min(prev_pair);
        sum_pairs += pair;
        prev_pair = pair;
        lag += 2;
    }
    let tau = -1.0 + 2.0 * sum_pairs;
    let tau = tau.max(1.0 / total.log10().max(1.0));
    total / tau
}

/// MCSE of the median from the ESS of the indicator `θ ≤ median`.
fn mcse_median(chains: &[&[f64]], sorted: &[f64], median: f64) -> f64 {
    let indicators: Vec<Vec<f64>> = chains
        .iter()
        .map(|c| {
            c.iter()
                .map(|&v| f64::from(u8::from(v <= median)))
                .collect()
        })
        .collect();
    let views: Vec<&[f64]> = indicators.iter().map(Vec::as_slice).collect();
    let ess = effective_sample_size(&views);
    let sd = (0.25 / ess).sqrt();
    let lo = quantile_sorted(sorted, (0.5 - sd).max(0.0));
    let hi = quantile_sorted(sorted, (0.5 + sd).min(1.0));
    0.5 * (hi - lo)
}

/// Summarize draws split into equal-length chains.
pub fn summarize_chains(chains: &[&[f64]]) -> Result<PosteriorSummary> {
    let total: usize = chains.iter().map(|c| c.len()).sum();
    if total < MIN_DRAWS {
        return Err(Error::TooFewDraws {
            found: total,
            min: MIN_DRAWS,
        });
    }
    if chains.iter().any(|c| c.len() != chains[0].len()) {
        return Err(Error::Config("chains must have equal length".into()));
    }
    let mut sorted: Vec<f64> = chains.iter().flat_map(|c| c.iter().copied()).collect();
    sorted.sort_by(f64::total_cmp);
    let median = quantile_sorted(&sorted, 0.5);
    Ok(PosteriorSummary {
        median,
        ci_lower: quantile_sorted(&sorted, 0.025),
        ci_upper: quantile_sorted(&sorted, 0.975),
        mean: mean(&sorted),
        mcse_median: mcse_median(chains, &sorted, median),
        rhat: split_rhat(chains),
        ess: effective_sample_size(chains),
        draws: total,
    })
}

pub fn summarize(draws: &PosteriorDraws, field: DrawField) -> Result<PosteriorSummary> {
    summarize_chains(&draws.chains(field))
}

pub fn posterior_rho(draws: &PosteriorDraws) -> Result<PosteriorSummary> {
    summarize(draws, DrawField::Rho1)
}
