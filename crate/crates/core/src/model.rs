//! Proxy pattern-mixture identities for a binary outcome.
//!
//! The respondent latent `U` has unit variance and `Y = 1` exactly when
//! `U > 0`. Given the respondent and nonrespondent proxy moments, the
//! sensitivity parameter φ fixes the nonrespondent latent mean and variance,
//! and the population proportion is the π-weighted mixture of the two
//! pattern-specific probabilities.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ingest::{PopulationAggregates, RespondentSample};
use crate::normal;
use crate::probit::{self, ProbitFit};

/// Lower bound applied to the nonrespondent latent variance.
pub const VARIANCE_FLOOR: f64 = 1e-8;

/// Respondent-side moments of the proxy and the latent outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RespondentMoments {
    pub mu_x1: f64,
    pub sigma_xx1: f64,
    pub mu_u1: f64,
    pub rho1: f64,
}

impl RespondentMoments {
    /// Latent moments implied by `U = X + ε`, ε ~ N(0, 1), after rescaling
    /// `U` to unit variance.
    pub fn from_proxy(mu_x1: f64, sigma_xx1: f64) -> Result<Self> {
        if !(sigma_xx1 > 0.0) || !sigma_xx1.is_finite() {
            return Err(Error::ZeroVarianceProxy);
        }
        let scale = (sigma_xx1 + 1.0).sqrt();
        Ok(RespondentMoments {
            mu_x1,
            sigma_xx1,
            mu_u1: mu_x1 / scale,
            rho1: (sigma_xx1 / (sigma_xx1 + 1.0)).sqrt(),
        })
    }
}

/// The seven identified quantities that determine the estimate at any φ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProxyMoments {
    pub mu_x1: f64,
    pub sigma_xx1: f64,
    pub mu_u1: f64,
    pub rho1: f64,
    pub mu_x0: f64,
    pub sigma_xx0: f64,
    pub pi: f64,
}

impl ProxyMoments {
    pub fn new(
        mu_x1: f64,
        sigma_xx1: f64,
        mu_u1: f64,
        rho1: f64,
        mu_x0: f64,
        sigma_xx0: f64,
        pi: f64,
    ) -> Result<Self> {
        let m = ProxyMoments {
            mu_x1,
            sigma_xx1,
            mu_u1,
            rho1,
            mu_x0,
            sigma_xx0,
            pi,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn from_parts(
        respondent: RespondentMoments,
        mu_x0: f64,
        sigma_xx0: f64,
        pi: f64,
    ) -> Result<Self> {
        Self::new(
            respondent.mu_x1,
            respondent.sigma_xx1,
            respondent.mu_u1,
            respondent.rho1,
            mu_x0,
            sigma_xx0,
            pi,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.mu_x1,
            self.sigma_xx1,
            self.mu_u1,
            self.rho1,
            self.mu_x0,
            self.sigma_xx0,
            self.pi,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Numerical("non-finite proxy moment".into()));
        }
        if !(self.sigma_xx1 > 0.0) {
            return Err(Error::ZeroVarianceProxy);
        }
        if !(self.sigma_xx0 > 0.0) {
            return Err(Error::InconsistentAggregates(self.sigma_xx0));
        }
        if !(self.rho1 > 0.0 && self.rho1 < 1.0) {
            return Err(Error::Config(format!(
                "rho1 = {} outside (0, 1)",
                self.rho1
            )));
        }
        if !(0.0..1.0).contains(&self.pi) {
            return Err(Error::Config(format!("pi = {} outside [0, 1)", self.pi)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PpmmEstimate {
    pub phi: f64,
    pub mu_y: f64,
    pub mu_u0: f64,
    pub sigma_uu0: f64,
    /// The variance floor was applied to `sigma_uu0`.
    pub clamped: bool,
}

/// Proxy mean, variance (n − 1 denominator) and implied latent moments.
pub fn respondent_moments(x: &[f64]) -> Result<RespondentMoments> {
    let n = x.len();
    if n < 2 {
        return Err(Error::Sample("need at least two respondents".into()));
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    // A constant proxy can leave rounding residue in the sum of squares.
    if var <= 1e-14 * (1.0 + mean * mean) {
        return Err(Error::ZeroVarianceProxy);
    }
    RespondentMoments::from_proxy(mean, var)
}

/// Population proxy moments `(β₀ + β₋₀·m, β₋₀ᵀ Σ β₋₀)` from aggregates.
pub fn population_proxy_moments(
    beta: &DVector<f64>,
    aggregates: &PopulationAggregates,
) -> Result<(f64, f64)> {
    let k = aggregates.dim();
    if beta.len() != k + 1 {
        return Err(Error::Dimension {
            what: "beta vs aggregates (intercept + dummies)",
            expected: k + 1,
            found: beta.len(),
        });
    }
    let slopes = beta.rows(1, k);
    let mean = beta[0] + slopes.dot(&aggregates.mean_z);
    let var = (aggregates.cov_z.clone() * slopes).dot(&slopes);
    Ok((mean, var))
}

/// Split population proxy moments into the nonrespondent component, given
/// the respondent component and the responding fraction.
pub fn decompose_mixture(
    pop_mean: f64,
    pop_var: f64,
    mu_x1: f64,
    sigma_xx1: f64,
    pi: f64,
) -> (f64, f64) {
    let mu_x0 = (pop_mean - pi * mu_x1) / (1.0 - pi);
    let gap = mu_x1 - mu_x0;
    let sigma_xx0 = (pop_var - pi * sigma_xx1 - pi * (1.0 - pi) * gap * gap) / (1.0 - pi);
    (mu_x0, sigma_xx0)
}

pub fn nonrespondent_proxy_moments(
    beta: &DVector<f64>,
    aggregates: &PopulationAggregates,
    mu_x1: f64,
    sigma_xx1: f64,
) -> Result<(f64, f64)> {
    let (pop_mean, pop_var) = population_proxy_moments(beta, aggregates)?;
    let (mu_x0, sigma_xx0) = decompose_mixture(pop_mean, pop_var, mu_x1, sigma_xx1, aggregates.pi);
    if !(sigma_xx0 > 0.0) {
        return Err(Error::InconsistentAggregates(sigma_xx0));
    }
    Ok((mu_x0, sigma_xx0))
}

/// `(φ + (1 − φ)ρ) / (φρ + (1 − φ))`.
#[inline]
pub fn sensitivity_factor(phi: f64, rho1: f64) -> f64 {
    (phi + (1.0 - phi) * rho1) / (phi * rho1 + (1.0 - phi))
}

pub fn ppmm_adjust(m: &ProxyMoments, phi: f64) -> Result<PpmmEstimate> {
    if !(0.0..=1.0).contains(&phi) {
        return Err(Error::Config(format!("phi = {phi} outside [0, 1]")));
    }
    Ok(adjust_unchecked(m, phi))
}

pub(crate) fn adjust_unchecked(m: &ProxyMoments, phi: f64) -> PpmmEstimate {
    let factor = sensitivity_factor(phi, m.rho1);
    let mu_u0 = m.mu_u1 + factor * (m.mu_x0 - m.mu_x1) / m.sigma_xx1.sqrt();
    let raw_var = 1.0 + factor * factor * (m.sigma_xx0 - m.sigma_xx1) / m.sigma_xx1;
    let clamped = raw_var < VARIANCE_FLOOR;
    let sigma_uu0 = if clamped { VARIANCE_FLOOR } else { raw_var };
    let mu_y = m.pi * normal::cdf(m.mu_u1) + (1.0 - m.pi) * normal::cdf(mu_u0 / sigma_uu0.sqrt());
    PpmmEstimate {
        phi,
        mu_y,
        mu_u0,
        sigma_uu0,
        clamped,
    }
}

/// Maximum-likelihood plug-in analysis: the probit fit, the moments it
/// implies, and the estimate at each grid value of φ.
#[derive(Debug, Clone)]
pub struct MlAnalysis {
    pub fit: ProbitFit,
    pub moments: ProxyMoments,
    pub estimates: Vec<PpmmEstimate>,
}

pub fn ppmm_mle_analysis(
    sample: &RespondentSample,
    aggregates: &PopulationAggregates,
    phi_grid: &[f64],
) -> Result<MlAnalysis> {
    if phi_grid.is_empty() {
        return Err(Error::Config("phi grid is empty".into()));
    }
    if let Some(phi) = phi_grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::Config(format!("phi = {phi} outside [0, 1]")));
    }
    let fit = probit::fit_probit_mle(sample)?;
    let x = probit::linear_predictor(sample.z(), &fit.beta)?;
    let resp = respondent_moments(x.as_slice())?;
    let (mu_x0, sigma_xx0) =
        nonrespondent_proxy_moments(&fit.beta, aggregates, resp.mu_x1, resp.sigma_xx1)?;
    let moments = ProxyMoments::from_parts(resp, mu_x0, sigma_xx0, aggregates.pi)?;
    let estimates = phi_grid
        .iter()
        .map(|&phi| adjust_unchecked(&moments, phi))
        .collect();
    Ok(MlAnalysis {
        fit,
        moments,
        estimates,
    })
}

pub fn ppmm_mle_grid(
    sample: &RespondentSample,
    aggregates: &PopulationAggregates,
    phi_grid: &[f64],
) -> Result<Vec<PpmmEstimate>> {
    Ok(ppmm_mle_analysis(sample, aggregates, phi_grid)?.estimates)
}

/// `n` evenly spaced points covering [0, 1].
pub fn phi_grid(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.5],
        _ => (0..points)
            .map(|i| i as f64 / (points - 1) as f64)
            .collect(),
    }
}
