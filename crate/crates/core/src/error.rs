use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot parse `{path}`: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("invalid codebook: {0}")]
    Codebook(String),

    /// A microdata cell that violates the codebook. `row` is the 1-based
    /// data row (the header is row 0).
    #[error("row {row}, column `{column}`: {message}")]
    Schema {
        row: usize,
        column: String,
        message: String,
    },

    #[error("invalid sample: {0}")]
    Sample(String),

    #[error("design matrix is rank deficient: {0}")]
    RankDeficient(String),

    #[error("invalid aggregates: {0}")]
    Aggregates(String),

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("probit fit did not converge within {0} iterations")]
    NonConvergence(usize),

    #[error("quasi-complete separation: {0}")]
    Separation(String),

    #[error("proxy carries no information: respondent proxy variance is zero")]
    ZeroVarianceProxy,

    #[error(
        "aggregates inconsistent with respondent moments: nonrespondent proxy variance {0} <= 0"
    )]
    InconsistentAggregates(f64),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("too few retained draws: {found} (need at least {min})")]
    TooFewDraws { found: usize, min: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("simulation failed: {0}")]
    Simulation(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.to_string(),
        }
    }

    /// Stable machine-readable tag for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::Parse { .. } => "parse",
            Error::Codebook(_) => "codebook",
            Error::Schema { .. } => "schema",
            Error::Sample(_) => "sample",
            Error::RankDeficient(_) => "rank_deficient",
            Error::Aggregates(_) => "aggregates",
            Error::Dimension { .. } => "dimension",
            Error::NonConvergence(_) => "non_convergence",
            Error::Separation(_) => "separation",
            Error::ZeroVarianceProxy => "zero_variance_proxy",
            Error::InconsistentAggregates(_) => "inconsistent_aggregates",
            Error::Numerical(_) => "numerical",
            Error::TooFewDraws { .. } => "too_few_draws",
            Error::Config(_) => "config",
            Error::Simulation(_) => "simulation",
        }
    }
}
