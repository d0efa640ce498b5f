//! Gibbs sampler for the binary proxy pattern-mixture model.
//!
//! Each iteration redraws the probit latents and coefficients by data
//! augmentation, propagates respondent proxy-moment uncertainty through
//! conjugate draws under a Jeffreys prior, derives the nonrespondent proxy
//! moments from the (fixed) population aggregates, draws φ from its prior,
//! and records the implied population proportion. The likelihood carries no
//! information about φ, so its prior draw is exact.

use std::io::Write;
use std::thread;

use nalgebra::DVector;
use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{PopulationAggregates, RespondentSample};
use crate::model::{self, ProxyMoments, RespondentMoments, VARIANCE_FLOOR};
use crate::probit::{self, AugmentedState, ProbitDesign};

/// Fraction of clamped draws above which a warning is logged.
pub const CLAMP_WARN_FRACTION: f64 = 0.10;
/// Relative sd of the multiplicative jitter applied to starting values.
pub const INIT_JITTER: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiPrior {
    Uniform01,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McmcConfig {
    pub iterations: usize,
    pub burn_in: usize,
    pub chains: usize,
    pub seed: u64,
    pub phi_prior: PhiPrior,
    pub thin: usize,
    /// Worker threads for chains; 0 uses the available parallelism.
    #[serde(default)]
    pub threads: usize,
}

impl McmcConfig {
    pub fn new(seed: u64) -> Self {
        McmcConfig {
            iterations: 5000,
            burn_in: 500,
            chains: 4,
            seed,
            phi_prior: PhiPrior::Uniform01,
            thin: 1,
            threads: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations <= self.burn_in {
            return Err(Error::Config(format!(
                "iterations ({}) must exceed burn-in ({})",
                self.iterations, self.burn_in
            )));
        }
        if self.chains == 0 {
            return Err(Error::Config("at least one chain is required".into()));
        }
        if self.thin == 0 {
            return Err(Error::Config("thin must be at least 1".into()));
        }
        if self.retained_per_chain() == 0 {
            return Err(Error::Config(
                "no draws retained after burn-in and thinning".into(),
            ));
        }
        if let PhiPrior::Fixed(phi) = self.phi_prior {
            if !(0.0..=1.0).contains(&phi) {
                return Err(Error::Config(format!("fixed phi {phi} outside [0, 1]")));
            }
        }
        Ok(())
    }

    pub fn retained_per_chain(&self) -> usize {
        self.iterations.saturating_sub(self.burn_in) / self.thin.max(1)
    }

    fn worker_count(&self) -> usize {
        let available = thread::available_parallelism().map_or(1, |n| n.get());
        let cap = if self.threads == 0 {
            available
        } else {
            self.threads
        };
        cap.clamp(1, self.chains)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DrawField {
    MuY,
    Rho1,
    Phi,
    MuU0,
    SigmaUu0,
}

/// Retained draws, stored chain after chain with equal chain lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorDraws {
    pub mu_y: Vec<f64>,
    pub rho1: Vec<f64>,
    pub phi: Vec<f64>,
    pub mu_u0: Vec<f64>,
    pub sigma_uu0: Vec<f64>,
    pub clamped: Vec<bool>,
    /// Coefficient draws, `p` per retained draw.
    pub beta: Vec<f64>,
    pub p: usize,
    pub clamp_count: usize,
    pub chains: usize,
    pub per_chain: usize,
    /// Zero-based sampler iteration of each retained draw within its chain.
    pub iteration: Vec<usize>,
}

impl PosteriorDraws {
    pub fn len(&self) -> usize {
        self.mu_y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu_y.is_empty()
    }

    pub fn field(&self, field: DrawField) -> &[f64] {
        match field {
            DrawField::MuY => &self.mu_y,
            DrawField::Rho1 => &self.rho1,
            DrawField::Phi => &self.phi,
            DrawField::MuU0 => &self.mu_u0,
            DrawField::SigmaUu0 => &self.sigma_uu0,
        }
    }

    /// Per-chain views of one field.
    pub fn chains(&self, field: DrawField) -> Vec<&[f64]> {
        self.field(field).chunks(self.per_chain.max(1)).collect()
    }

    /// `[start, end)` index range of each chain.
    pub fn chain_bounds(&self) -> Vec<(usize, usize)> {
        (0..self.chains)
            .map(|c| (c * self.per_chain, (c + 1) * self.per_chain))
            .collect()
    }

    /// CSV with one row per retained draw.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let io = |e: csv::Error| Error::Numerical(format!("writing draws: {e}"));
        w.write_record([
            "chain",
            "iteration",
            "mu_y",
            "rho1",
            "phi",
            "mu_u0",
            "sigma_uu0",
            "clamped",
        ])
        .map_err(io)?;
        for i in 0..self.len() {
            w.write_record([
                (i / self.per_chain).to_string(),
                self.iteration[i].to_string(),
                self.mu_y[i].to_string(),
                self.rho1[i].to_string(),
                self.phi[i].to_string(),
                self.mu_u0[i].to_string(),
                self.sigma_uu0[i].to_string(),
                u8::from(self.clamped[i]).to_string(),
            ])
            .map_err(io)?;
        }
        w.flush()
            .map_err(|e| Error::Numerical(format!("writing draws: {e}")))?;
        Ok(())
    }
}

#[derive(Default)]
struct ChainDraws {
    mu_y: Vec<f64>,
    rho1: Vec<f64>,
    phi: Vec<f64>,
    mu_u0: Vec<f64>,
    sigma_uu0: Vec<f64>,
    clamped: Vec<bool>,
    beta: Vec<f64>,
    iteration: Vec<usize>,
}

/// Progress callback `(chain, completed_iterations)`, invoked from any chain.
pub type Progress<'a> = &'a (dyn Fn(usize, usize) + Sync);

pub fn run_gibbs(
    sample: &RespondentSample,
    aggregates: &PopulationAggregates,
    config: &McmcConfig,
) -> Result<PosteriorDraws> {
    run_gibbs_with_progress(sample, aggregates, config, None)
}

pub fn run_gibbs_with_progress(
    sample: &RespondentSample,
    aggregates: &PopulationAggregates,
    config: &McmcConfig,
    progress: Option<Progress<'_>>,
) -> Result<PosteriorDraws> {
    config.validate()?;
    if aggregates.dim() + 1 != sample.p() {
        return Err(Error::Dimension {
            what: "aggregates vs design",
            expected: sample.p() - 1,
            found: aggregates.dim(),
        });
    }
    let mle = probit::fit_probit_mle(sample)?;
    // Intercept-only and similar degenerate proxies are rejected up front.
    let x = probit::linear_predictor(sample.z(), &mle.beta)?;
    model::respondent_moments(x.as_slice())?;
    let design = ProbitDesign::new(sample)?;

    let workers = config.worker_count();
    let mut results: Vec<Option<Result<ChainDraws>>> = (0..config.chains).map(|_| None).collect();
    thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let design = &design;
                let mle_beta = &mle.beta;
                scope.spawn(move || {
                    (w..config.chains)
                        .step_by(workers)
                        .map(|c| {
                            (
                                c,
                                run_chain(design, aggregates, mle_beta, config, c, progress),
                            )
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for handle in handles {
            for (c, r) in handle.join().expect("chain worker panicked") {
                results[c] = Some(r);
            }
        }
    });

    let per_chain = config.retained_per_chain();
    let total = per_chain * config.chains;
    let mut draws = PosteriorDraws {
        mu_y: Vec::with_capacity(total),
        rho1: Vec::with_capacity(total),
        phi: Vec::with_capacity(total),
        mu_u0: Vec::with_capacity(total),
        sigma_uu0: Vec::with_capacity(total),
        clamped: Vec::with_capacity(total),
        beta: Vec::with_capacity(total * sample.p()),
        p: sample.p(),
        clamp_count: 0,
        chains: config.chains,
        per_chain,
        iteration: Vec::with_capacity(total),
    };
    for r in results {
        let c = r.expect("every chain ran")?;
        draws.mu_y.extend(c.mu_y);
        draws.rho1.extend(c.rho1);
        draws.phi.extend(c.phi);
        draws.mu_u0.extend(c.mu_u0);
        draws.sigma_uu0.extend(c.sigma_uu0);
        draws.clamped.extend(c.clamped);
        draws.beta.extend(c.beta);
        draws.iteration.extend(c.iteration);
    }
    draws.clamp_count = draws.clamped.iter().filter(|&&c| c).count();
    let fraction = draws.clamp_count as f64 / draws.len() as f64;
    if fraction > CLAMP_WARN_FRACTION {
        log::warn!(
            "{:.1}% of draws hit the nonrespondent variance floor; aggregates may be inconsistent with the respondent proxy",
            100.0 * fraction
        );
    }
    Ok(draws)
}

fn run_chain(
    design: &ProbitDesign,
    aggregates: &PopulationAggregates,
    mle_beta: &DVector<f64>,
    config: &McmcConfig,
    chain: usize,
    progress: Option<Progress<'_>>,
) -> Result<ChainDraws> {
    let mut rng = {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(chain as u64);
        rng
    };
    let start = mle_beta.map(|b| {
        let jitter: f64 = StandardNormal.sample(&mut rng);
        b * (1.0 + INIT_JITTER * jitter)
    });
    let mut state = AugmentedState::with_rng(design, start, rng)?;
    let n = design.n() as f64;
    let chi = ChiSquared::new(n - 1.0).map_err(|e| Error::Numerical(e.to_string()))?;
    let mut out = ChainDraws::default();

    for it in 0..config.iterations {
        if it > 0 {
            state.draw_latents(design)?;
        }
        state.draw_beta(design)?;

        let (xbar, s2) = design.proxy_mean_var(&state.beta)?;
        let rng = state.rng();
        let sigma_xx1 = (n - 1.0) * s2 / chi.sample(rng);
        let z: f64 = StandardNormal.sample(rng);
        let mu_x1 = xbar + z * (sigma_xx1 / n).sqrt();
        let phi = match config.phi_prior {
            PhiPrior::Uniform01 => rng.random::<f64>(),
            PhiPrior::Fixed(phi) => phi,
        };

        let resp = RespondentMoments::from_proxy(mu_x1, sigma_xx1)?;
        let (pop_mean, pop_var) = model::population_proxy_moments(&state.beta, aggregates)?;
        let (mu_x0, raw_sigma_xx0) =
            model::decompose_mixture(pop_mean, pop_var, resp.mu_x1, resp.sigma_xx1, aggregates.pi);
        let proxy_floor = !(raw_sigma_xx0 > 0.0);
        let sigma_xx0 = if proxy_floor {
            VARIANCE_FLOOR
        } else {
            raw_sigma_xx0
        };
        let moments = ProxyMoments {
            mu_x1: resp.mu_x1,
            sigma_xx1: resp.sigma_xx1,
            mu_u1: resp.mu_u1,
            rho1: resp.rho1,
            mu_x0,
            sigma_xx0,
            pi: aggregates.pi,
        };
        let est = model::adjust_unchecked(&moments, phi);

        if it >= config.burn_in && (it - config.burn_in + 1).is_multiple_of(config.thin) {
            out.mu_y.push(est.mu_y);
            out.rho1.push(resp.rho1);
            out.phi.push(phi);
            out.mu_u0.push(est.mu_u0);
            out.sigma_uu0.push(est.sigma_uu0);
            out.clamped.push(est.clamped || proxy_floor);
            out.beta.extend(state.beta.iter());
            out.iteration.push(it);
        }
        if let Some(report) = progress {
            report(chain, it + 1);
        }
    }
    Ok(out)
}
