//! On-disk output formats. Every JSON document carries `schema_version`;
//! bump the matching constant whenever a field changes meaning.

use serde::{Deserialize, Serialize};

use ppmm::model::{PpmmEstimate, ProxyMoments};
use ppmm::summary::PosteriorSummary;

pub const RESULTS_SCHEMA: &str = "ppmm.results/1";
pub const MANIFEST_SCHEMA: &str = "ppmm.manifest/1";
pub const TRUTH_SCHEMA: &str = "ppmm.truth/1";
pub const COVERAGE_SCHEMA: &str = "ppmm.coverage/1";
pub const ERROR_SCHEMA: &str = "ppmm.error/1";

/// Column order of the draws CSV.
pub const DRAWS_COLUMNS: [&str; 8] = [
    "chain",
    "iteration",
    "mu_y",
    "rho1",
    "phi",
    "mu_u0",
    "sigma_uu0",
    "clamped",
];
/// Column order of the tidy plot CSV.
pub const PLOT_COLUMNS: [&str; 9] = [
    "wave_label",
    "estimator",
    "median",
    "ci_lower",
    "ci_upper",
    "rho_median",
    "rho_lower",
    "rho_upper",
    "benchmark",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultsFile {
    pub schema_version: String,
    pub label: String,
    pub sample: SampleInfo,
    pub pi: f64,
    pub probit: ProbitInfo,
    pub proxy: ProxyInfo,
    pub ml: Vec<Estimate>,
    pub posterior: Option<Posterior>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleInfo {
    pub n: usize,
    pub mean_y: f64,
    pub dropped_missing_y: usize,
    pub dropped_missing_z: usize,
    pub coerced_missing_y: usize,
    pub columns: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coefficient {
    pub name: String,
    pub estimate: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbitInfo {
    pub coefficients: Vec<Coefficient>,
    pub log_likelihood: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProxyInfo {
    pub mu_x1: f64,
    pub sigma_xx1: f64,
    pub mu_u1: f64,
    pub rho1: f64,
    pub mu_x0: f64,
    pub sigma_xx0: f64,
}

impl From<&ProxyMoments> for ProxyInfo {
    fn from(m: &ProxyMoments) -> Self {
        ProxyInfo {
            mu_x1: m.mu_x1,
            sigma_xx1: m.sigma_xx1,
            mu_u1: m.mu_u1,
            rho1: m.rho1,
            mu_x0: m.mu_x0,
            sigma_xx0: m.sigma_xx0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Estimate {
    pub phi: f64,
    pub mu_y: f64,
    pub mu_u0: f64,
    pub sigma_uu0: f64,
    pub clamped: bool,
}

impl From<&PpmmEstimate> for Estimate {
    fn from(e: &PpmmEstimate) -> Self {
        Estimate {
            phi: e.phi,
            mu_y: e.mu_y,
            mu_u0: e.mu_u0,
            sigma_uu0: e.sigma_uu0,
            clamped: e.clamped,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summary {
    pub median: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    pub mean: f64,
    pub mcse_median: f64,
    pub rhat: f64,
    pub ess: f64,
    pub draws: usize,
}

impl From<&PosteriorSummary> for Summary {
    fn from(s: &PosteriorSummary) -> Self {
        Summary {
            median: s.median,
            ci_lower: s.ci_lower,
            ci_upper: s.ci_upper,
            mean: s.mean,
            mcse_median: s.mcse_median,
            rhat: s.rhat,
            ess: s.ess,
            draws: s.draws,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Posterior {
    /// `"uniform"` or the fixed value as a decimal string.
    pub phi_prior: String,
    pub iterations: usize,
    pub burn_in: usize,
    pub chains: usize,
    pub thin: usize,
    pub seed: u64,
    pub mu_y: Summary,
    pub rho1: Summary,
    pub clamped_draws: usize,
    pub draws_file: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Versions {
    pub ppmm: String,
    pub ppmm_cli: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timing {
    pub started_unix_ms: u128,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub schema_version: String,
    pub command: String,
    pub argv: Vec<String>,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub versions: Versions,
    pub exit_code: u8,
    pub timing: Timing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruthFile {
    pub schema_version: String,
    pub seed: u64,
    pub population_size: usize,
    pub respondents: usize,
    pub true_mu_y: f64,
    pub naive_mean: f64,
    pub realized_response_rate: f64,
    pub pi: f64,
    pub phi_true: f64,
    pub proxy_strength: f64,
    pub selection_intercept: f64,
    pub selection_weight_proxy: f64,
    pub selection_weight_latent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverageFile {
    pub schema_version: String,
    pub replications: usize,
    pub phi_truth: String,
    pub coverage: f64,
    pub coverage_mcse: f64,
    pub mean_width: f64,
    pub mean_width_mcse: f64,
    pub naive_bias: f64,
    pub naive_bias_mcse: f64,
    pub median_bias: f64,
    pub median_bias_mcse: f64,
    pub direction_rate: f64,
    pub direction_rate_mcse: f64,
    pub direction_eligible: usize,
    pub mean_rho: f64,
    pub records_file: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorReport {
    pub schema_version: String,
    pub kind: String,
    pub message: String,
}

/// One row of the tidy plot CSV; empty cells deserialize to `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotRow {
    pub wave_label: String,
    pub estimator: String,
    pub median: f64,
    pub ci_lower: Option<f64>,
    pub ci_upper: Option<f64>,
    pub rho_median: Option<f64>,
    pub rho_lower: Option<f64>,
    pub rho_upper: Option<f64>,
    pub benchmark: Option<f64>,
}
