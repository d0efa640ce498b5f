//! Synthetic finite populations with a known outcome model and a known
//! selection mechanism.
//!
//! Each unit gets categorical covariates, a latent `U = Zβ + ε` with
//! ε ~ N(0, 1) and `y = 1{U > 0}`. Selection mixes the standardized proxy
//! `X* ` and the standardized latent: `P(s = 1) = g(α + c[(1 − φ)X* + φU*])`,
//! with α solved so the realized response rate hits the target.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::thread;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::bayes::{self, DrawField, McmcConfig};
use crate::error::{Error, Result};
use crate::ingest::{
    Codebook, Covariate, OutcomeMissingPolicy, PopulationAggregates, RespondentSample,
};
use crate::normal;
use crate::summary;

/// Realized response rate must land within this distance of the target.
pub const RATE_TOLERANCE: f64 = 0.001;
pub const MIN_REPLICATIONS: usize = 50;
const ALPHA_BOUND: f64 = 40.0;
// Streams far above any chain index so a population and a Gibbs run may
// share a seed without sharing random numbers.
const POPULATION_STREAM: u64 = 1 << 40;
const PHI_TRUTH_STREAM: u64 = POPULATION_STREAM + 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionLink {
    Probit,
    Logit,
}

impl SelectionLink {
    fn apply(self, t: f64) -> f64 {
        match self {
            SelectionLink::Probit => normal::cdf(t),
            SelectionLink::Logit => 1.0 / (1.0 + (-t).exp()),
        }
    }
}

/// A categorical covariate; the first level is the reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoricalSpec {
    pub name: String,
    pub levels: Vec<String>,
    pub probabilities: Vec<f64>,
}

fn default_strength() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSpec {
    pub population_size: usize,
    /// Intercept first, then one slope per non-reference level in order.
    pub beta_true: Vec<f64>,
    pub phi_true: f64,
    pub target_response_rate: f64,
    pub selection_link: SelectionLink,
    /// Scale `c` on the mixed selection score.
    #[serde(default = "default_strength")]
    pub selection_strength: f64,
    pub seed: u64,
    /// Fraction of units whose recorded outcome is missing.
    #[serde(default)]
    pub outcome_missing_rate: f64,
    pub covariates: Vec<CategoricalSpec>,
}

impl SimulationSpec {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let spec: SimulationSpec =
            toml::from_str(text).map_err(|e| Error::Config(e.message().to_owned()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("simulation spec serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::Config("population_size must be at least 2".into()));
        }
        if !(self.target_response_rate > 0.0 && self.target_response_rate < 1.0) {
            return Err(Error::Config(format!(
                "target_response_rate {} outside (0, 1)",
                self.target_response_rate
            )));
        }
        if !(0.0..=1.0).contains(&self.phi_true) {
            return Err(Error::Config(format!(
                "phi_true {} outside [0, 1]",
                self.phi_true
            )));
        }
        if !(0.0..1.0).contains(&self.outcome_missing_rate) {
            return Err(Error::Config("outcome_missing_rate outside [0, 1)".into()));
        }
        if !self.selection_strength.is_finite() || self.selection_strength < 0.0 {
            return Err(Error::Config(
                "selection_strength must be finite and nonnegative".into(),
            ));
        }
        if self.covariates.is_empty() {
            return Err(Error::Config("at least one covariate is required".into()));
        }
        for c in &self.covariates {
            if c.levels.len() < 2 || c.levels.len() != c.probabilities.len() {
                return Err(Error::Config(format!(
                    "covariate `{}` needs ≥ 2 levels with one probability each",
                    c.name
                )));
            }
            let sum: f64 = c.probabilities.iter().sum();
            if (sum - 1.0).abs() > 1e-12 || c.probabilities.iter().any(|&p| p < 0.0) {
                return Err(Error::Config(format!(
                    "probabilities of `{}` must be nonnegative and sum to 1 (sum {sum})",
                    c.name
                )));
            }
        }
        let p = 1 + self
            .covariates
            .iter()
            .map(|c| c.levels.len() - 1)
            .sum::<usize>();
        if self.beta_true.len() != p {
            return Err(Error::Dimension {
                what: "beta_true",
                expected: p,
                found: self.beta_true.len(),
            });
        }
        self.codebook(OutcomeMissingPolicy::TreatAsZero)?;
        Ok(())
    }

    /// Codebook of the exported microdata: outcome `y`, reference level first.
    pub fn codebook(&self, policy: OutcomeMissingPolicy) -> Result<Codebook> {
        Codebook::new(
            crate::ingest::codebook_outcome("y", policy),
            self.covariates
                .iter()
                .map(|c| Covariate {
                    name: c.name.clone(),
                    levels: c.levels.clone(),
                    reference: c.levels[0].clone(),
                })
                .collect(),
            None,
        )
    }

    /// Per-covariate level effects (reference level 0).
    fn level_effects(&self) -> Vec<Vec<f64>> {
        let mut at = 1;
        self.covariates
            .iter()
            .map(|c| {
                let mut effects = vec![0.0];
                effects.extend_from_slice(&self.beta_true[at..at + c.levels.len() - 1]);
                at += c.levels.len() - 1;
                effects
            })
            .collect()
    }

    /// Expected mean and variance of `Zβ` under independent covariates.
    pub fn proxy_moments(&self) -> (f64, f64) {
        let mut mean = self.beta_true[0];
        let mut var = 0.0;
        for (c, effects) in self.covariates.iter().zip(self.level_effects()) {
            let m: f64 = c
                .probabilities
                .iter()
                .zip(&effects)
                .map(|(p, e)| p * e)
                .sum();
            let v: f64 = c
                .probabilities
                .iter()
                .zip(&effects)
                .map(|(p, e)| p * (e - m).powi(2))
                .sum();
            mean += m;
            var += v;
        }
        (mean, var)
    }

    /// Proxy strength implied by the expected proxy variance.
    pub fn proxy_strength(&self) -> f64 {
        let (_, v) = self.proxy_moments();
        (v / (v + 1.0)).sqrt()
    }

    /// Rescale the slopes so the proxy strength is `rho`, keeping the
    /// expected proxy mean fixed.
    pub fn with_proxy_strength(mut self, rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::Config(format!(
                "proxy strength {rho} outside (0, 1)"
            )));
        }
        let (mean, var) = self.proxy_moments();
        if var <= 0.0 {
            return Err(Error::Config("all slopes are zero; cannot rescale".into()));
        }
        let target = rho * rho / (1.0 - rho * rho);
        let k = (target / var).sqrt();
        for b in &mut self.beta_true[1..] {
            *b *= k;
        }
        let (new_mean, _) = self.proxy_moments();
        self.beta_true[0] += mean - new_mean;
        Ok(self)
    }
}

/// Five demographic covariates with 2, 4, 4, 2 and 6 levels (13 dummies).
pub fn demographic_template(seed: u64) -> SimulationSpec {
    let cat = |name: &str, levels: &[&str], probs: &[f64]| CategoricalSpec {
        name: name.to_owned(),
        levels: levels.iter().map(|s| s.to_string()).collect(),
        probabilities: probs.to_vec(),
    };
    SimulationSpec {
        population_size: 200_000,
        beta_true: vec![
            -0.35, // intercept
            0.10,  // sex
            -0.30, -0.15, 0.20, // education
            -0.25, 0.20, -0.10, // race
            -0.15, // hispanic
            0.10, 0.20, 0.35, 0.55, 0.80, // age
        ],
        phi_true: 0.5,
        target_response_rate: 0.07,
        selection_link: SelectionLink::Probit,
        selection_strength: 1.0,
        seed,
        outcome_missing_rate: 0.0,
        covariates: vec![
            cat("sex", &["Male", "Female"], &[0.48, 0.52]),
            cat(
                "education",
                &["HS", "<HS", "Some college", "BA+"],
                &[0.28, 0.11, 0.29, 0.32],
            ),
            cat(
                "race",
                &["White", "Black", "Asian", "Other"],
                &[0.70, 0.13, 0.06, 0.11],
            ),
            cat("hispanic", &["No", "Yes"], &[0.83, 0.17]),
            cat(
                "age",
                &["18-24", "25-34", "35-44", "45-54", "55-64", "65+"],
                &[0.12, 0.18, 0.17, 0.16, 0.17, 0.20],
            ),
        ],
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticPopulation {
    pub spec: SimulationSpec,
    /// Level index per covariate, one vector of length N per covariate.
    pub levels: Vec<Vec<u16>>,
    pub y: Vec<bool>,
    pub y_missing: Vec<bool>,
    pub s: Vec<bool>,
    pub true_mu_y: f64,
    pub realized_response_rate: f64,
    pub aggregates: PopulationAggregates,
    pub selection_intercept: f64,
    /// Selection-score coefficients on (X*, U*): (c(1 − φ), cφ).
    pub selection_weights: (f64, f64),
}

impl SyntheticPopulation {
    pub fn size(&self) -> usize {
        self.y.len()
    }

    pub fn respondent_count(&self) -> usize {
        self.s.iter().filter(|&&s| s).count()
    }

    pub fn codebook(&self, policy: OutcomeMissingPolicy) -> Codebook {
        self.spec.codebook(policy).expect("validated spec")
    }

    fn unit_levels(&self, i: usize) -> Vec<usize> {
        self.levels.iter().map(|col| col[i] as usize).collect()
    }

    fn write_rows<W: Write>(&self, writer: W, respondents_only: bool) -> Result<()> {
        let mut w = BufWriter::new(writer);
        let io = |e: std::io::Error| Error::Simulation(format!("writing population: {e}"));
        let mut header: Vec<&str> = self
            .spec
            .covariates
            .iter()
            .map(|c| c.name.as_str())
            .collect();
        header.push("y");
        if !respondents_only {
            header.push("s");
        }
        writeln!(w, "{}", header.join(",")).map_err(io)?;
        for i in 0..self.size() {
            if respondents_only && !self.s[i] {
                continue;
            }
            let mut cells: Vec<&str> = self
                .spec
                .covariates
                .iter()
                .zip(&self.levels)
                .map(|(c, col)| c.levels[col[i] as usize].as_str())
                .collect();
            cells.push(match (self.y_missing[i], self.y[i]) {
                (true, _) => "NA",
                (false, true) => "1",
                (false, false) => "0",
            });
            if !respondents_only {
                cells.push(if self.s[i] { "1" } else { "0" });
            }
            writeln!(w, "{}", cells.join(",")).map_err(io)?;
        }
        w.flush().map_err(io)
    }

    /// Every unit with columns covariates…, `y`, `s`.
    pub fn write_population_csv<W: Write>(&self, writer: W) -> Result<()> {
        self.write_rows(writer, false)
    }

    /// Responding units with columns covariates…, `y`.
    pub fn write_respondents_csv<W: Write>(&self, writer: W) -> Result<()> {
        self.write_rows(writer, true)
    }

    pub fn save_csv(&self, path: impl AsRef<Path>, respondents_only: bool) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_rows(file, respondents_only)
    }
}

fn mean_sd(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn generate(spec: &SimulationSpec) -> Result<SyntheticPopulation> {
    spec.validate()?;
    let n = spec.population_size;
    let effects = spec.level_effects();
    let cumulative: Vec<Vec<f64>> = spec
        .covariates
        .iter()
        .map(|c| {
            c.probabilities
                .iter()
                .scan(0.0, |acc, p| {
                    *acc += p;
                    Some(*acc)
                })
                .collect()
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(POPULATION_STREAM);
    let mut levels: Vec<Vec<u16>> = vec![Vec::with_capacity(n); spec.covariates.len()];
    let mut x = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    let mut y_missing = Vec::with_capacity(n);
    for _ in 0..n {
        let mut xi = spec.beta_true[0];
        for (k, cum) in cumulative.iter().enumerate() {
            let draw: f64 = rng.random();
            let level = cum.iter().position(|&c| draw < c).unwrap_or(cum.len() - 1);
            levels[k].push(level as u16);
            xi += effects[k][level];
        }
        let eps: f64 = StandardNormal.sample(&mut rng);
        x.push(xi);
        u.push(xi + eps);
        v.push(rng.random::<f64>());
        y_missing.push(
            spec.outcome_missing_rate > 0.0 && rng.random::<f64>() < spec.outcome_missing_rate,
        );
    }
    let y: Vec<bool> = u.iter().map(|&ui| ui > 0.0).collect();

    let (mx, sx) = mean_sd(&x);
    let (mu, su) = mean_sd(&u);
    if !(sx > 0.0) {
        return Err(Error::Simulation(
            "proxy is constant across the population".into(),
        ));
    }
    let c = spec.selection_strength;
    let weights = (c * (1.0 - spec.phi_true), c * spec.phi_true);
    let score: Vec<f64> = x
        .iter()
        .zip(&u)
        .map(|(&xi, &ui)| weights.0 * (xi - mx) / sx + weights.1 * (ui - mu) / su)
        .collect();

    let link = spec.selection_link;
    let rate_at = |alpha: f64| -> f64 {
        let hits = score
            .iter()
            .zip(&v)
            .filter(|(&sc, &vi)| vi < link.apply(alpha + sc))
            .count();
        hits as f64 / n as f64
    };
    let target = spec.target_response_rate;
    let (mut lo, mut hi) = (-ALPHA_BOUND, ALPHA_BOUND);
    if !(rate_at(lo) < target && rate_at(hi) > target) {
        return Err(Error::Simulation(
            "selection intercept bounds do not bracket the target rate".into(),
        ));
    }
    let mut alpha = 0.5 * (lo + hi);
    let mut rate = rate_at(alpha);
    for _ in 0..200 {
        if (rate - target).abs() <= 0.5 * RATE_TOLERANCE {
            break;
        }
        if rate < target {
            lo = alpha;
        } else {
            hi = alpha;
        }
        alpha = 0.5 * (lo + hi);
        rate = rate_at(alpha);
    }
    if (rate - target).abs() > RATE_TOLERANCE {
        return Err(Error::Simulation(format!(
            "response rate {rate} cannot reach {target} ± {RATE_TOLERANCE}"
        )));
    }
    let s: Vec<bool> = score
        .iter()
        .zip(&v)
        .map(|(&sc, &vi)| vi < link.apply(alpha + sc))
        .collect();
    let respondents = s.iter().filter(|&&b| b).count();
    let pi = respondents as f64 / n as f64;
    let true_mu_y = y.iter().filter(|&&b| b).count() as f64 / n as f64;

    let codebook = spec.codebook(OutcomeMissingPolicy::TreatAsZero)?;
    let rows: Vec<Vec<usize>> = (0..n)
        .map(|i| levels.iter().map(|col| col[i] as usize).collect())
        .collect();
    let (mean_z, cov_z) = crate::ingest::weighted_moments(&codebook, &rows, &vec![1.0; n]);
    let aggregates =
        PopulationAggregates::new(codebook.dummy_names(), mean_z, cov_z, pi, "synthetic")?;

    Ok(SyntheticPopulation {
        spec: spec.clone(),
        levels,
        y,
        y_missing,
        s,
        true_mu_y,
        realized_response_rate: pi,
        aggregates,
        selection_intercept: alpha,
        selection_weights: weights,
    })
}

pub fn extract_inputs(
    population: &SyntheticPopulation,
    missing_y_policy: OutcomeMissingPolicy,
) -> Result<(RespondentSample, PopulationAggregates)> {
    let codebook = population.codebook(missing_y_policy);
    let p = codebook.dummy_count() + 1;
    let mut y = Vec::new();
    let mut data = Vec::new();
    let mut dropped = 0;
    let mut coerced = 0;
    for i in 0..population.size() {
        if !population.s[i] {
            continue;
        }
        let value = if population.y_missing[i] {
            match missing_y_policy {
                OutcomeMissingPolicy::TreatAsZero => {
                    coerced += 1;
                    0
                }
                OutcomeMissingPolicy::DropRecord => {
                    dropped += 1;
                    continue;
                }
            }
        } else {
            u8::from(population.y[i])
        };
        y.push(value);
        data.push(1.0);
        data.extend(codebook.encode(&population.unit_levels(i)));
    }
    if y.is_empty() {
        return Err(Error::Simulation("no respondents".into()));
    }
    let z = DMatrix::from_row_slice(y.len(), p, &data);
    let mut sample = RespondentSample::new(y, z, codebook.design_names())?;
    sample.dropped_missing_y = dropped;
    sample.coerced_missing_y = coerced;
    Ok((sample, population.aggregates.clone()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiTruth {
    Uniform,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicationRecord {
    pub replication: usize,
    pub seed: u64,
    pub phi_true: f64,
    pub true_mu_y: f64,
    pub respondents: usize,
    pub naive: f64,
    pub median: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    pub covered: bool,
    pub width: f64,
    pub rho_median: f64,
    pub rhat: f64,
    /// The median moved from the naive estimate toward (or past) the truth.
    pub direction_detected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub replications: usize,
    pub coverage: f64,
    pub coverage_mcse: f64,
    pub mean_width: f64,
    pub mean_width_mcse: f64,
    pub naive_bias: f64,
    pub naive_bias_mcse: f64,
    pub median_bias: f64,
    pub median_bias_mcse: f64,
    /// Among replications with φ_true > 0.
    pub direction_rate: f64,
    pub direction_rate_mcse: f64,
    pub direction_eligible: usize,
    pub mean_rho: f64,
    pub records: Vec<ReplicationRecord>,
}

impl CoverageReport {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for r in &self.records {
            w.serialize(r)
                .map_err(|e| Error::Simulation(format!("writing report: {e}")))?;
        }
        w.flush()
            .map_err(|e| Error::Simulation(format!("writing report: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageOptions {
    pub phi_truth: PhiTruth,
    pub missing_y_policy: OutcomeMissingPolicy,
    /// Replications run concurrently; 0 uses the available parallelism.
    pub threads: usize,
}

impl Default for CoverageOptions {
    fn default() -> Self {
        CoverageOptions {
            phi_truth: PhiTruth::Uniform,
            missing_y_policy: OutcomeMissingPolicy::TreatAsZero,
            threads: 0,
        }
    }
}

fn mean_and_mcse(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let v: Vec<f64> = values.collect();
    let n = v.len() as f64;
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn run_replication(
    template: &SimulationSpec,
    index: usize,
    mcmc: &McmcConfig,
    options: &CoverageOptions,
) -> Result<ReplicationRecord> {
    let seed = template.seed.wrapping_add(index as u64);
    let phi_true = match options.phi_truth {
        PhiTruth::Fixed(phi) => phi,
        PhiTruth::Uniform => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(PHI_TRUTH_STREAM);
            rng.random::<f64>()
        }
    };
    let mut spec = template.clone();
    spec.seed = seed;
    spec.phi_true = phi_true;
    let population = generate(&spec)?;
    let (sample, aggregates) = extract_inputs(&population, options.missing_y_policy)?;
    let mut config = mcmc.clone();
    config.seed = mcmc.seed.wrapping_add(index as u64);
    config.threads = 1;
    let draws = bayes::run_gibbs(&sample, &aggregates, &config)?;
    let mu = summary::summarize(&draws, DrawField::MuY)?;
    let rho = summary::posterior_rho(&draws)?;
    let truth = population.true_mu_y;
    let naive = sample.mean_y();
    let covered = mu.ci_lower <= truth && truth <= mu.ci_upper;
    let direction_detected = (mu.median - naive).signum() == (truth - naive).signum();
    Ok(ReplicationRecord {
        replication: index,
        seed,
        phi_true,
        true_mu_y: truth,
        respondents: sample.n(),
        naive,
        median: mu.median,
        ci_lower: mu.ci_lower,
        ci_upper: mu.ci_upper,
        covered,
        width: mu.ci_upper - mu.ci_lower,
        rho_median: rho.median,
        rhat: mu.rhat,
        direction_detected,
    })
}

pub fn coverage_experiment(
    template: &SimulationSpec,
    replications: usize,
    mcmc: &McmcConfig,
    options: &CoverageOptions,
) -> Result<CoverageReport> {
    if replications < MIN_REPLICATIONS {
        return Err(Error::Config(format!(
            "coverage needs at least {MIN_REPLICATIONS} replications (got {replications})"
        )));
    }
    template.validate()?;
    mcmc.validate()?;
    let available = thread::available_parallelism().map_or(1, |n| n.get());
    let workers = if options.threads == 0 {
        available
    } else {
        options.threads
    }
    .clamp(1, replications);
    let mut slots: Vec<Option<Result<ReplicationRecord>>> =
        (0..replications).map(|_| None).collect();
    thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    (w..replications)
                        .step_by(workers)
                        .map(|r| (r, run_replication(template, r, mcmc, options)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (r, rec) in h.join().expect("replication worker panicked") {
                slots[r] = Some(rec);
            }
        }
    });
    let records = slots
        .into_iter()
        .map(|s| s.expect("every replication ran"))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble_report(records))
}

pub fn assemble_report(records: Vec<ReplicationRecord>) -> CoverageReport {
    let (coverage, coverage_mcse) =
        mean_and_mcse(records.iter().map(|r| f64::from(u8::from(r.covered))));
    let (mean_width, mean_width_mcse) = mean_and_mcse(records.iter().map(|r| r.width));
    let (naive_bias, naive_bias_mcse) =
        mean_and_mcse(records.iter().map(|r| r.naive - r.true_mu_y));
    let (median_bias, median_bias_mcse) =
        mean_and_mcse(records.iter().map(|r| r.median - r.true_mu_y));
    let eligible: Vec<&ReplicationRecord> = records.iter().filter(|r| r.phi_true > 0.0).collect();
    let (direction_rate, direction_rate_mcse) = mean_and_mcse(
        eligible
            .iter()
            .map(|r| f64::from(u8::from(r.direction_detected))),
    );
    let (mean_rho, _) = mean_and_mcse(records.iter().map(|r| r.rho_median));
    CoverageReport {
        replications: records.len(),
        coverage,
        coverage_mcse,
        mean_width,
        mean_width_mcse,
        naive_bias,
        naive_bias_mcse,
        median_bias,
        median_bias_mcse,
        direction_rate,
        direction_rate_mcse,
        direction_eligible: eligible.len(),
        mean_rho,
        records,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64, phi: f64) -> SimulationSpec {
        let mut spec = demographic_template(seed).with_proxy_strength(0.5).unwrap();
        spec.population_size = 40_000;
        spec.target_response_rate = 0.1;
        spec.phi_true = phi;
        spec
    }

    #[test]
    fn template_round_trips_through_toml() {
        let spec = demographic_template(3);
        let back = SimulationSpec::from_toml_str(&spec.to_toml_string()).unwrap();
        assert_eq!(back, spec);
        assert_eq!(
            spec.codebook(OutcomeMissingPolicy::DropRecord)
                .unwrap()
                .dummy_count(),
            13
        );
    }

    #[test]
    fn proxy_strength_rescaling() {
        for rho in [0.25, 0.5, 0.8] {
            let spec = demographic_template(1).with_proxy_strength(rho).unwrap();
            assert!((spec.proxy_strength() - rho).abs() < 1e-12);
        }
        let weak = demographic_template(1).with_proxy_strength(0.25).unwrap();
        let (_, v) = weak.proxy_moments();
        assert!((v - 1.0 / 15.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let mut spec = demographic_template(1);
        spec.covariates[0].probabilities = vec![0.5, 0.6];
        assert!(spec.validate().is_err());
        let mut spec = demographic_template(1);
        spec.target_response_rate = 1.0;
        assert!(spec.validate().is_err());
        let mut spec = demographic_template(1);
        spec.beta_true.pop();
        assert!(matches!(spec.validate(), Err(Error::Dimension { .. })));
    }

    #[test]
    fn ground_truth_identities_and_rate() {
        let pop = generate(&small(5, 0.5)).unwrap();
        let mean_y = pop.y.iter().filter(|&&b| b).count() as f64 / pop.size() as f64;
        assert_eq!(pop.true_mu_y, mean_y);
        assert_eq!(
            pop.aggregates.pi,
            pop.respondent_count() as f64 / pop.size() as f64
        );
        assert!((pop.realized_response_rate - 0.1).abs() <= RATE_TOLERANCE);
        let (wx, wu) = pop.selection_weights;
        assert_eq!(wx.abs(), wu.abs());
    }

    #[test]
    fn hps_scale_response_rate() {
        let mut spec = small(8, 0.3);
        spec.target_response_rate = 0.07;
        let pop = generate(&spec).unwrap();
        assert!((pop.realized_response_rate - 0.07).abs() <= RATE_TOLERANCE);
    }

    #[test]
    fn generation_is_reproducible() {
        let a = generate(&small(9, 0.7)).unwrap();
        let b = generate(&small(9, 0.7)).unwrap();
        assert_eq!(a.s, b.s);
        assert_eq!(a.y, b.y);
        assert_eq!(a.levels, b.levels);
        assert_eq!(a.selection_intercept, b.selection_intercept);
    }

    #[test]
    fn logit_link_also_hits_rate() {
        let mut spec = small(4, 0.5);
        spec.selection_link = SelectionLink::Logit;
        let pop = generate(&spec).unwrap();
        assert!((pop.realized_response_rate - 0.1).abs() <= RATE_TOLERANCE);
    }

    #[test]
    fn mar_selection_ignores_outcome_within_proxy_cells() {
        // With φ = 0 selection depends on the covariates only, so within a
        // covariate cell response is independent of y.
        let mut spec = small(12, 0.0);
        spec.population_size = 200_000;
        spec.target_response_rate = 0.3;
        let pop = generate(&spec).unwrap();
        let mut cells: std::collections::HashMap<Vec<usize>, [[usize; 2]; 2]> = Default::default();
        for i in 0..pop.size() {
            let e = cells.entry(pop.unit_levels(i)).or_default();
            e[usize::from(pop.y[i])][usize::from(pop.s[i])] += 1;
        }
        // Pool the standardized differences of large cells.
        let mut z2 = 0.0;
        let mut k = 0;
        for counts in cells.values() {
            let n1 = counts[1][0] + counts[1][1];
            let n0 = counts[0][0] + counts[0][1];
            if n1 < 200 || n0 < 200 {
                continue;
            }
            let p1 = counts[1][1] as f64 / n1 as f64;
            let p0 = counts[0][1] as f64 / n0 as f64;
            let pp = (counts[1][1] + counts[0][1]) as f64 / (n1 + n0) as f64;
            let se = (pp * (1.0 - pp) * (1.0 / n1 as f64 + 1.0 / n0 as f64)).sqrt();
            z2 += ((p1 - p0) / se).powi(2);
            k += 1;
        }
        assert!(k > 20);
        // Chi-square with k df: mean k, sd √(2k).
        assert!(
            z2 < k as f64 + 4.0 * (2.0 * k as f64).sqrt(),
            "{z2} on {k} cells"
        );
    }

    #[test]
    fn outcome_selection_inflates_respondent_rate() {
        let mut spec = small(13, 1.0);
        spec.selection_strength = 1.0;
        let pop = generate(&spec).unwrap();
        let (sample, _) = extract_inputs(&pop, OutcomeMissingPolicy::TreatAsZero).unwrap();
        assert!(sample.mean_y() > pop.true_mu_y + 0.05);
    }

    #[test]
    fn extract_matches_respondent_rows() {
        let pop = generate(&small(2, 0.5)).unwrap();
        let (sample, agg) = extract_inputs(&pop, OutcomeMissingPolicy::TreatAsZero).unwrap();
        assert_eq!(sample.n(), pop.respondent_count());
        let ones = (0..pop.size()).filter(|&i| pop.s[i] && pop.y[i]).count();
        assert_eq!(sample.mean_y(), ones as f64 / sample.n() as f64);
        assert_eq!(agg.pi, pop.realized_response_rate);
        let first = (0..pop.size()).find(|&i| pop.s[i]).unwrap();
        let encoded = pop
            .codebook(OutcomeMissingPolicy::TreatAsZero)
            .encode(&pop.unit_levels(first));
        assert_eq!(
            sample
                .z()
                .row(0)
                .iter()
                .skip(1)
                .copied()
                .collect::<Vec<_>>(),
            encoded
        );
    }

    #[test]
    fn missing_outcome_policies() {
        let mut spec = small(21, 0.5);
        spec.outcome_missing_rate = 0.05;
        let pop = generate(&spec).unwrap();
        let (keep, _) = extract_inputs(&pop, OutcomeMissingPolicy::TreatAsZero).unwrap();
        let (drop, _) = extract_inputs(&pop, OutcomeMissingPolicy::DropRecord).unwrap();
        assert_eq!(keep.n(), pop.respondent_count());
        assert_eq!(drop.n() + drop.dropped_missing_y, keep.n());
        assert_eq!(keep.coerced_missing_y, drop.dropped_missing_y);
        assert!(drop.dropped_missing_y > 0);
    }

    #[test]
    fn coverage_requires_fifty_replications() {
        let err = coverage_experiment(
            &small(1, 0.5),
            10,
            &McmcConfig::new(1),
            &CoverageOptions::default(),
        );
        assert!(matches!(err, Err(Error::Config(_))));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn truth_and_pi_are_exact_means(seed in 0u64..10_000, phi in 0.0f64..=1.0, rate in 0.05f64..0.6) {
                let mut spec = small(seed, phi);
                spec.population_size = 20_000;
                spec.target_response_rate = rate;
                let pop = generate(&spec).unwrap();
                let ones = pop.y.iter().filter(|&&y| y).count();
                prop_assert_eq!(pop.true_mu_y, ones as f64 / 20_000.0);
                let responding = pop.s.iter().filter(|&&s| s).count();
                prop_assert_eq!(pop.aggregates.pi, responding as f64 / 20_000.0);
                prop_assert_eq!(pop.realized_response_rate, pop.aggregates.pi);
            }
        }
    }
}
