//! Probit regression of the outcome on the covariate design.
//!
//! [`fit_probit_mle`] fits by Newton–Raphson with step halving.
//! [`ProbitDesign`] and [`AugmentedState`] provide the two Gibbs steps of
//! latent-variable data augmentation: truncated-normal latents given β, then
//! β given the latents under a flat prior with unit residual variance.

use std::collections::HashMap;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::ingest::RespondentSample;
use crate::normal;

pub const MAX_ITERATIONS: usize = 100;
pub const GRADIENT_TOL: f64 = 1e-8;
pub const RELATIVE_LL_TOL: f64 = 1e-12;
/// A linear predictor beyond this magnitude signals divergence toward a
/// separating direction.
pub const SEPARATION_BOUND: f64 = 15.0;
const MAX_HALVINGS: usize = 50;
const LL_ROUNDING: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct ProbitFit {
    pub beta: DVector<f64>,
    /// Inverse observed information at `beta`.
    pub cov_beta: DMatrix<f64>,
    pub log_likelihood: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl ProbitFit {
    pub fn fitted_probabilities(&self, z: &DMatrix<f64>) -> Result<Vec<f64>> {
        Ok(linear_predictor(z, &self.beta)?
            .iter()
            .map(|&eta| normal::cdf(eta))
            .collect())
    }
}

/// `X_i = Z_i · β`, accumulated left to right over columns.
pub fn linear_predictor(z: &DMatrix<f64>, beta: &DVector<f64>) -> Result<DVector<f64>> {
    if z.ncols() != beta.len() {
        return Err(Error::Dimension {
            what: "linear predictor",
            expected: z.ncols(),
            found: beta.len(),
        });
    }
    Ok(DVector::from_fn(z.nrows(), |i, _| {
        let mut acc = 0.0;
        for j in 0..z.ncols() {
            acc += z[(i, j)] * beta[j];
        }
        acc
    }))
}

fn row_log_lik(y: u8, eta: f64) -> f64 {
    if y == 1 {
        normal::cdf(eta).ln()
    } else {
        normal::cdf(-eta).ln()
    }
}

/// Score and observed-information weights: d ll/dη and −d² ll/dη².
fn row_derivatives(y: u8, eta: f64) -> (f64, f64) {
    if y == 1 {
        let m = normal::mills(eta);
        (m, m * (m + eta))
    } else {
        let m = normal::mills(-eta);
        (-m, m * (m - eta))
    }
}

fn log_likelihood(z: &DMatrix<f64>, y: &[u8], beta: &DVector<f64>) -> Result<(f64, DVector<f64>)> {
    let eta = linear_predictor(z, beta)?;
    let ll = compensated_sum(y.iter().zip(eta.iter()).map(|(&y, &e)| row_log_lik(y, e)));
    Ok((ll, eta))
}

/// Neumaier summation. Plain summation noise at n ≈ 10⁵ exceeds the
/// log-likelihood gain of the final Newton steps and would trigger spurious
/// step-halving.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

fn gradient_and_information(
    z: &DMatrix<f64>,
    y: &[u8],
    eta: &DVector<f64>,
) -> (DVector<f64>, DMatrix<f64>) {
    let p = z.ncols();
    let mut grad = DVector::zeros(p);
    let mut info = DMatrix::zeros(p, p);
    for (i, (&yi, &e)) in y.iter().zip(eta.iter()).enumerate() {
        let (g, w) = row_derivatives(yi, e);
        for a in 0..p {
            let za = z[(i, a)];
            if za == 0.0 {
                continue;
            }
            grad[a] += g * za;
            for b in 0..=a {
                info[(a, b)] += w * za * z[(i, b)];
            }
        }
    }
    for a in 0..p {
        for b in 0..a {
            info[(b, a)] = info[(a, b)];
        }
    }
    (grad, info)
}

/// Reject designs where a single dummy column splits off a group whose
/// outcomes are all identical: the likelihood then has no finite maximum.
fn check_dummy_separation(sample: &RespondentSample) -> Result<()> {
    let z = sample.z();
    let y = sample.y();
    for j in 1..sample.p() {
        for on in [true, false] {
            let mut classes = [false; 2];
            for (i, &yi) in y.iter().enumerate() {
                if (z[(i, j)] == 1.0) == on {
                    classes[yi as usize] = true;
                }
            }
            if classes[0] != classes[1] {
                let class = if classes[1] { 1 } else { 0 };
                let side = if on { "equal to 1" } else { "equal to 0" };
                return Err(Error::Separation(format!(
                    "every record with `{}` {side} has outcome {class}",
                    sample.column_names()[j]
                )));
            }
        }
    }
    Ok(())
}

fn check_bounded(eta: &DVector<f64>) -> Result<()> {
    let max = eta.amax();
    if max > SEPARATION_BOUND {
        return Err(Error::Separation(format!(
            "linear predictor reached {max:.2} (bound {SEPARATION_BOUND})"
        )));
    }
    Ok(())
}

/// Maximum-likelihood probit fit from β = 0.
pub fn fit_probit_mle(sample: &RespondentSample) -> Result<ProbitFit> {
    check_dummy_separation(sample)?;
    let z = sample.z();
    let y = sample.y();
    let p = sample.p();
    let mut beta = DVector::zeros(p);
    let (mut ll, mut eta) = log_likelihood(z, y, &beta)?;
    let (mut grad, mut info) = gradient_and_information(z, y, &eta);

    for iteration in 1..=MAX_ITERATIONS {
        let chol = Cholesky::new(info.clone()).ok_or_else(|| {
            Error::Numerical("observed information is not positive definite".into())
        })?;
        let step = chol.solve(&grad);
        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let candidate = &beta + &step * scale;
            let (cand_ll, cand_eta) = log_likelihood(z, y, &candidate)?;
            // Allow rounding-level decreases so steps near the optimum are
            // not rejected on summation noise.
            if cand_ll >= ll - LL_ROUNDING * ll.abs() {
                accepted = Some((candidate, cand_ll, cand_eta));
                break;
            }
            scale *= 0.5;
        }
        let Some((new_beta, new_ll, new_eta)) = accepted else {
            // No ascent along the Newton direction: stationary to rounding.
            if grad.amax() < 1e-6 {
                return finish(beta, info, ll, iteration, true);
            }
            return Err(Error::NonConvergence(iteration));
        };
        check_bounded(&new_eta)?;
        let rel_change = (new_ll - ll).abs() / ll.abs().max(f64::MIN_POSITIVE);
        beta = new_beta;
        ll = new_ll;
        eta = new_eta;
        (grad, info) = gradient_and_information(z, y, &eta);
        if grad.amax() < GRADIENT_TOL || rel_change < RELATIVE_LL_TOL {
            return finish(beta, info, ll, iteration, true);
        }
    }
    if grad.amax() < GRADIENT_TOL {
        return finish(beta, info, ll, MAX_ITERATIONS, true);
    }
    Err(Error::NonConvergence(MAX_ITERATIONS))
}

fn finish(
    beta: DVector<f64>,
    info: DMatrix<f64>,
    log_likelihood: f64,
    iterations: usize,
    converged: bool,
) -> Result<ProbitFit> {
    let cov = Cholesky::new(info)
        .ok_or_else(|| Error::Numerical("observed information is singular at the optimum".into()))?
        .inverse();
    let cov_beta = (&cov + cov.transpose()) * 0.5;
    Ok(ProbitFit {
        beta,
        cov_beta,
        log_likelihood,
        iterations,
        converged,
    })
}

/// Respondent design prepared for Gibbs sampling: rows are grouped by unique
/// covariate pattern, and the Cholesky factor of ZᵀZ is cached.
#[derive(Debug, Clone)]
pub struct ProbitDesign {
    y: Vec<u8>,
    cell_of: Vec<usize>,
    /// One row per unique covariate pattern.
    cells: DMatrix<f64>,
    cell_counts: Vec<usize>,
    gram_chol: Cholesky<f64, Dyn>,
}

impl ProbitDesign {
    pub fn new(sample: &RespondentSample) -> Result<Self> {
        let z = sample.z();
        let p = sample.p();
        let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut patterns: Vec<Vec<f64>> = Vec::new();
        let mut cell_counts = Vec::new();
        let mut cell_of = Vec::with_capacity(sample.n());
        for i in 0..sample.n() {
            let row: Vec<f64> = (0..p).map(|j| z[(i, j)]).collect();
            let key: Vec<u64> = row.iter().map(|v| v.to_bits()).collect();
            let c = *index.entry(key).or_insert_with(|| {
                patterns.push(row);
                cell_counts.push(0);
                patterns.len() - 1
            });
            cell_counts[c] += 1;
            cell_of.push(c);
        }
        let cells = DMatrix::from_fn(patterns.len(), p, |c, j| patterns[c][j]);
        let gram = z.tr_mul(z);
        let gram_chol = Cholesky::new(gram)
            .ok_or_else(|| Error::Numerical("Cholesky factorization of ZᵀZ failed".into()))?;
        Ok(ProbitDesign {
            y: sample.y().to_vec(),
            cell_of,
            cells,
            cell_counts,
            gram_chol,
        })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn p(&self) -> usize {
        self.cells.ncols()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.nrows()
    }

    /// Linear predictor per covariate cell.
    pub fn cell_predictor(&self, beta: &DVector<f64>) -> Result<DVector<f64>> {
        linear_predictor(&self.cells, beta)
    }

    /// Mean and (n − 1)-denominator variance of `Zβ` over respondents.
    pub fn proxy_mean_var(&self, beta: &DVector<f64>) -> Result<(f64, f64)> {
        let eta = self.cell_predictor(beta)?;
        let n = self.n() as f64;
        let mean = eta
            .iter()
            .zip(&self.cell_counts)
            .map(|(&e, &k)| e * k as f64)
            .sum::<f64>()
            / n;
        let ss = eta
            .iter()
            .zip(&self.cell_counts)
            .map(|(&e, &k)| (e - mean).powi(2) * k as f64)
            .sum::<f64>();
        Ok((mean, ss / (n - 1.0)))
    }
}

/// Mutable state of one data-augmentation chain.
#[derive(Debug, Clone)]
pub struct AugmentedState {
    pub u_latent: Vec<f64>,
    pub beta: DVector<f64>,
    rng: ChaCha8Rng,
    cell_sums: Vec<f64>,
}

impl AugmentedState {
    /// Start a chain at `beta` on RNG stream `stream` of `seed`; latents are
    /// drawn immediately so the sign invariant holds from the start.
    pub fn new(design: &ProbitDesign, beta: DVector<f64>, seed: u64, stream: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self::with_rng(design, beta, rng)
    }

    pub fn with_rng(design: &ProbitDesign, beta: DVector<f64>, rng: ChaCha8Rng) -> Result<Self> {
        if beta.len() != design.p() {
            return Err(Error::Dimension {
                what: "initial beta",
                expected: design.p(),
                found: beta.len(),
            });
        }
        let mut state = AugmentedState {
            u_latent: vec![0.0; design.n()],
            beta,
            rng,
            cell_sums: vec![0.0; design.cell_count()],
        };
        state.draw_latents(design)?;
        Ok(state)
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Redraw every latent from N(Z_iβ, 1) truncated to the side of zero
    /// given by its outcome.
    pub fn draw_latents(&mut self, design: &ProbitDesign) -> Result<()> {
        if self.beta.iter().any(|b| !b.is_finite()) {
            return Err(Error::Numerical("non-finite beta in latent step".into()));
        }
        let eta = design.cell_predictor(&self.beta)?;
        self.cell_sums.iter_mut().for_each(|s| *s = 0.0);
        for (i, u) in self.u_latent.iter_mut().enumerate() {
            let c = design.cell_of[i];
            let mean = eta[c];
            *u = if design.y[i] == 1 {
                normal::sample_positive(&mut self.rng, mean)
            } else {
                normal::sample_nonpositive(&mut self.rng, mean)
            };
            self.cell_sums[c] += *u;
        }
        Ok(())
    }

    /// Redraw β ~ N((ZᵀZ)⁻¹Zᵀu, (ZᵀZ)⁻¹).
    pub fn draw_beta(&mut self, design: &ProbitDesign) -> Result<()> {
        let p = design.p();
        let mut ztu = DVector::zeros(p);
        for (c, &s) in self.cell_sums.iter().enumerate() {
            for j in 0..p {
                ztu[j] += design.cells[(c, j)] * s;
            }
        }
        let mean = design.gram_chol.solve(&ztu);
        let xi = DVector::from_fn(p, |_, _| StandardNormal.sample(&mut self.rng));
        let noise = design
            .gram_chol
            .l()
            .tr_solve_lower_triangular(&xi)
            .ok_or_else(|| Error::Numerical("triangular solve in beta step failed".into()))?;
        self.beta = mean + noise;
        Ok(())
    }

    /// Sign invariant: `u_i > 0` exactly when `y_i = 1`.
    pub fn is_sign_consistent(&self, design: &ProbitDesign) -> bool {
        self.u_latent
            .iter()
            .zip(&design.y)
            .all(|(&u, &y)| (u > 0.0) == (y == 1))
    }
}
