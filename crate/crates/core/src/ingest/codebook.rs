use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const INTERCEPT_NAME: &str = "(intercept)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeMissingPolicy {
    /// A missing outcome is recorded as 0 and the record is kept.
    TreatAsZero,
    DropRecord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CovariateMissingPolicy {
    #[default]
    DropRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Covariate {
    pub name: String,
    pub levels: Vec<String>,
    pub reference: String,
}

impl Covariate {
    pub fn level_index(&self, value: &str) -> Option<usize> {
        self.levels.iter().position(|l| l == value)
    }

    /// Non-reference levels in codebook order.
    pub fn dummy_levels(&self) -> impl Iterator<Item = &str> {
        self.levels
            .iter()
            .map(String::as_str)
            .filter(move |l| *l != self.reference)
    }

    /// Position of `level` among the dummy columns, `None` for the reference.
    pub fn dummy_slot(&self, level: usize) -> Option<usize> {
        let reference = self.level_index(&self.reference)?;
        match level.cmp(&reference) {
            std::cmp::Ordering::Less => Some(level),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(level - 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub name: String,
    pub missing_policy: OutcomeMissingPolicy,
    /// Cell values coded as 1.
    #[serde(default = "default_positive")]
    pub positive: Vec<String>,
    /// Cell values coded as 0. Anything outside both lists is missing.
    #[serde(default = "default_negative")]
    pub negative: Vec<String>,
}

fn default_positive() -> Vec<String> {
    vec!["1".to_owned()]
}

fn default_negative() -> Vec<String> {
    vec!["0".to_owned()]
}

/// Column schema for survey microdata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Codebook {
    /// Survey weight column. Respondent weights are never used by the model;
    /// on reference microdata this column weights the aggregates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    #[serde(default)]
    pub covariate_missing_policy: CovariateMissingPolicy,
    pub outcome: Outcome,
    pub covariates: Vec<Covariate>,
}

impl Codebook {
    pub fn new(
        outcome: Outcome,
        covariates: Vec<Covariate>,
        weight: Option<String>,
    ) -> Result<Self> {
        let codebook = Codebook {
            weight,
            covariate_missing_policy: CovariateMissingPolicy::DropRecord,
            outcome,
            covariates,
        };
        codebook.validate()?;
        Ok(codebook)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let codebook: Codebook =
            toml::from_str(text).map_err(|e| Error::Codebook(e.message().to_owned()))?;
        codebook.validate()?;
        Ok(codebook)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("codebook serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        seen.insert(self.outcome.name.as_str());
        if let Some(w) = &self.weight {
            if w == &self.outcome.name {
                return Err(Error::Codebook(format!(
                    "weight column `{w}` is also the outcome"
                )));
            }
        }
        if self.covariates.is_empty() {
            return Err(Error::Codebook("no covariates declared".into()));
        }
        for cov in &self.covariates {
            if !seen.insert(cov.name.as_str()) {
                return Err(Error::Codebook(format!(
                    "duplicate column name `{}` (covariate names must be unique and differ from the outcome)",
                    cov.name
                )));
            }
            if self.weight.as_deref() == Some(cov.name.as_str()) {
                return Err(Error::Codebook(format!(
                    "`{}` is both weight and covariate",
                    cov.name
                )));
            }
            if cov.levels.len() < 2 {
                return Err(Error::Codebook(format!(
                    "covariate `{}` has {} level(s); at least 2 required",
                    cov.name,
                    cov.levels.len()
                )));
            }
            let mut levels = HashSet::new();
            for level in &cov.levels {
                if crate::ingest::is_missing(level) {
                    return Err(Error::Codebook(format!(
                        "covariate `{}` declares a missing-value token as a level",
                        cov.name
                    )));
                }
                if !levels.insert(level.as_str()) {
                    return Err(Error::Codebook(format!(
                        "covariate `{}` repeats level `{level}`",
                        cov.name
                    )));
                }
            }
            if cov.level_index(&cov.reference).is_none() {
                return Err(Error::Codebook(format!(
                    "reference level `{}` of covariate `{}` is not among its levels",
                    cov.reference, cov.name
                )));
            }
        }
        let overlap = self
            .outcome
            .positive
            .iter()
            .find(|v| self.outcome.negative.contains(v));
        if let Some(v) = overlap {
            return Err(Error::Codebook(format!(
                "outcome value `{v}` coded as both 1 and 0"
            )));
        }
        if self.outcome.positive.is_empty() || self.outcome.negative.is_empty() {
            return Err(Error::Codebook(
                "outcome needs at least one value for each class".into(),
            ));
        }
        Ok(())
    }

    /// Number of dummy columns, excluding the intercept.
    pub fn dummy_count(&self) -> usize {
        self.covariates.iter().map(|c| c.levels.len() - 1).sum()
    }

    /// Dummy column names `covariate=level`, excluding the intercept.
    pub fn dummy_names(&self) -> Vec<String> {
        self.covariates
            .iter()
            .flat_map(|c| c.dummy_levels().map(move |l| format!("{}={}", c.name, l)))
            .collect()
    }

    /// Design matrix column names, intercept first.
    pub fn design_names(&self) -> Vec<String> {
        let mut names = vec![INTERCEPT_NAME.to_owned()];
        names.extend(self.dummy_names());
        names
    }

    /// Column offset of each covariate's first dummy, excluding the intercept.
    pub(crate) fn dummy_offsets(&self) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.covariates.len());
        let mut at = 0;
        for cov in &self.covariates {
            offsets.push(at);
            at += cov.levels.len() - 1;
        }
        offsets
    }

    /// Dummy-coded row (excluding the intercept) for a complete record given
    /// as level indices, one per covariate.
    pub fn encode(&self, levels: &[usize]) -> Vec<f64> {
        let mut row = vec![0.0; self.dummy_count()];
        let offsets = self.dummy_offsets();
        for ((cov, &level), offset) in self.covariates.iter().zip(levels).zip(offsets) {
            if let Some(slot) = cov.dummy_slot(level) {
                row[offset + slot] = 1.0;
            }
        }
        row
    }

    /// Inverse of [`Codebook::encode`]. Returns `None` if the row is not a
    /// valid dummy coding.
    pub fn decode(&self, row: &[f64]) -> Option<Vec<usize>> {
        if row.len() != self.dummy_count() {
            return None;
        }
        let offsets = self.dummy_offsets();
        let mut levels = Vec::with_capacity(self.covariates.len());
        for (cov, offset) in self.covariates.iter().zip(offsets) {
            let width = cov.levels.len() - 1;
            let block = &row[offset..offset + width];
            let hot: Vec<usize> = (0..width).filter(|&i| block[i] == 1.0).collect();
            if block.iter().any(|&v| v != 0.0 && v != 1.0) || hot.len() > 1 {
                return None;
            }
            let reference = cov.level_index(&cov.reference)?;
            levels.push(match hot.first() {
                None => reference,
                Some(&slot) if slot < reference => slot,
                Some(&slot) => slot + 1,
            });
        }
        Some(levels)
    }

    /// Map an outcome cell to 1, 0 or missing (`None`).
    pub fn code_outcome(&self, cell: &str) -> Option<u8> {
        let cell = cell.trim();
        if self.outcome.positive.iter().any(|v| v == cell) {
            Some(1)
        } else if self.outcome.negative.iter().any(|v| v == cell) {
            Some(0)
        } else {
            None
        }
    }
}

pub fn load_codebook(path: impl AsRef<Path>) -> Result<Codebook> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let raw: Codebook = toml::from_str(&text).map_err(|e| Error::parse(path, e.message()))?;
    raw.validate()?;
    Ok(raw)
}
