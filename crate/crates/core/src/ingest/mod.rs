//! Microdata, codebook and population-aggregate ingestion.
//!
//! Microdata are CSV files with a header row. An empty cell or the literal
//! `NA` is missing. Codebooks and aggregates are TOML documents.

mod aggregates;
mod codebook;
mod microdata;

pub(crate) use aggregates::weighted_moments;
pub use aggregates::{
    aggregates_from_marginals, load_population_aggregates, reduce_reference_marginals,
    reduce_reference_microdata, save_population_aggregates, PopulationAggregates,
};
pub use codebook::{
    load_codebook, Codebook, Covariate, CovariateMissingPolicy, Outcome, OutcomeMissingPolicy,
    INTERCEPT_NAME,
};
pub use microdata::{load_respondents, RespondentSample};

pub(crate) fn is_missing(cell: &str) -> bool {
    let cell = cell.trim();
    cell.is_empty() || cell == "NA"
}

/// Outcome schema with the default `1`/`0` coding.
pub fn codebook_outcome(name: &str, missing_policy: OutcomeMissingPolicy) -> Outcome {
    Outcome {
        name: name.to_owned(),
        missing_policy,
        positive: vec!["1".to_owned()],
        negative: vec!["0".to_owned()],
    }
}
