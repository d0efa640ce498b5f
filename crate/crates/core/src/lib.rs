//! Binary proxy pattern-mixture models (PPMM) for assessing non-ignorable
//! nonresponse bias in survey estimates of a proportion.
//!
//! The pipeline: load respondent microdata and population aggregates
//! ([`ingest`]), build a probit proxy ([`probit`]), evaluate the closed-form
//! pattern-mixture estimate over the sensitivity parameter φ ([`model`]), or
//! sample its posterior with φ averaged over a prior ([`bayes`]), and
//! summarize draws ([`summary`]). [`simulate`] generates populations with a
//! known selection mechanism for validation.

#![cfg_attr(test, allow(clippy::excessive_precision))]
// `!(x > 0.0)` is used deliberately so NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bayes;
pub mod error;
pub mod ingest;
pub mod model;
pub mod normal;
pub mod probit;
pub mod simulate;
pub mod summary;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
