use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::codebook::Codebook;
use super::microdata::{map_columns, open_csv, parse_levels};
use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-10;
const PSD_TOL: f64 = -1e-8;

/// Population mean and covariance of the dummy-coded covariates (intercept
/// excluded), plus the responding fraction of the population.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationAggregates {
    pub columns: Vec<String>,
    pub mean_z: DVector<f64>,
    pub cov_z: DMatrix<f64>,
    pub pi: f64,
    pub source_label: String,
}

#[derive(Serialize, Deserialize)]
struct AggregatesFile {
    source_label: String,
    #[serde(default)]
    pi: f64,
    columns: Vec<String>,
    mean: Vec<f64>,
    /// Row-major.
    cov: Vec<Vec<f64>>,
}

impl PopulationAggregates {
    pub fn new(
        columns: Vec<String>,
        mean_z: DVector<f64>,
        cov_z: DMatrix<f64>,
        pi: f64,
        source_label: impl Into<String>,
    ) -> Result<Self> {
        let agg = PopulationAggregates {
            columns,
            mean_z,
            cov_z,
            pi,
            source_label: source_label.into(),
        };
        agg.validate()?;
        Ok(agg)
    }

    pub fn dim(&self) -> usize {
        self.mean_z.len()
    }

    pub fn with_pi(mut self, pi: f64) -> Result<Self> {
        check_pi(pi)?;
        self.pi = pi;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.mean_z.len();
        if self.columns.len() != k {
            return Err(Error::Dimension {
                what: "aggregate column names",
                expected: k,
                found: self.columns.len(),
            });
        }
        if self.cov_z.nrows() != k || self.cov_z.ncols() != k {
            return Err(Error::Dimension {
                what: "aggregate covariance",
                expected: k,
                found: if self.cov_z.nrows() != k {
                    self.cov_z.nrows()
                } else {
                    self.cov_z.ncols()
                },
            });
        }
        check_pi(self.pi)?;
        for (name, &m) in self.columns.iter().zip(self.mean_z.iter()) {
            if !(0.0..=1.0).contains(&m) {
                return Err(Error::Aggregates(format!(
                    "mean of dummy `{name}` is {m}, outside [0, 1]"
                )));
            }
        }
        if self.cov_z.iter().any(|v| !v.is_finite()) {
            return Err(Error::Aggregates(
                "covariance has non-finite entries".into(),
            ));
        }
        for i in 0..k {
            for j in 0..i {
                let d = (self.cov_z[(i, j)] - self.cov_z[(j, i)]).abs();
                if d > SYMMETRY_TOL {
                    return Err(Error::Aggregates(format!(
                        "covariance not symmetric at ({i}, {j}): difference {d:.3e}"
                    )));
                }
            }
        }
        if k > 0 {
            let min = SymmetricEigen::new(self.cov_z.clone()).eigenvalues.min();
            if min < PSD_TOL {
                return Err(Error::Aggregates(format!(
                    "covariance has negative eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(())
    }

    /// Ratio of extreme covariance eigenvalues.
    pub fn condition_number(&self) -> f64 {
        let eig = SymmetricEigen::new(self.cov_z.clone()).eigenvalues;
        eig.max() / eig.min()
    }

    /// Check that the column layout matches the codebook's dummy layout.
    pub fn check_layout(&self, codebook: &Codebook) -> Result<()> {
        let expected = codebook.dummy_names();
        if expected.len() != self.columns.len() {
            return Err(Error::Dimension {
                what: "aggregate columns vs codebook dummies",
                expected: expected.len(),
                found: self.columns.len(),
            });
        }
        if let Some((want, got)) = expected.iter().zip(&self.columns).find(|(a, b)| a != b) {
            return Err(Error::Aggregates(format!(
                "column `{got}` where codebook expects `{want}`"
            )));
        }
        Ok(())
    }

    pub fn to_toml_string(&self) -> String {
        let k = self.dim();
        let file = AggregatesFile {
            source_label: self.source_label.clone(),
            pi: self.pi,
            columns: self.columns.clone(),
            mean: self.mean_z.iter().copied().collect(),
            cov: (0..k)
                .map(|i| (0..k).map(|j| self.cov_z[(i, j)]).collect())
                .collect(),
        };
        toml::to_string(&file).expect("aggregates serialize")
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: AggregatesFile =
            toml::from_str(text).map_err(|e| Error::Aggregates(e.message().to_owned()))?;
        from_file(file)
    }
}

fn check_pi(pi: f64) -> Result<()> {
    if !(0.0..1.0).contains(&pi) {
        return Err(Error::Aggregates(format!(
            "response fraction pi = {pi} outside [0, 1)"
        )));
    }
    Ok(())
}

fn from_file(file: AggregatesFile) -> Result<PopulationAggregates> {
    let k = file.columns.len();
    if file.mean.len() != k {
        return Err(Error::Dimension {
            what: "aggregate mean vector",
            expected: k,
            found: file.mean.len(),
        });
    }
    if file.cov.len() != k {
        return Err(Error::Dimension {
            what: "aggregate covariance rows",
            expected: k,
            found: file.cov.len(),
        });
    }
    if let Some(row) = file.cov.iter().find(|r| r.len() != k) {
        return Err(Error::Dimension {
            what: "aggregate covariance columns",
            expected: k,
            found: row.len(),
        });
    }
    let cov = DMatrix::from_fn(k, k, |i, j| file.cov[i][j]);
    PopulationAggregates::new(
        file.columns,
        DVector::from_vec(file.mean),
        cov,
        file.pi,
        file.source_label,
    )
}

pub fn save_population_aggregates(
    path: impl AsRef<Path>,
    agg: &PopulationAggregates,
) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, agg.to_toml_string()).map_err(|e| Error::io(path, e))
}

pub fn load_population_aggregates(
    path: impl AsRef<Path>,
    codebook: &Codebook,
) -> Result<PopulationAggregates> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let file: AggregatesFile =
        toml::from_str(&text).map_err(|e| Error::parse(path, e.message()))?;
    let agg = from_file(file)?;
    agg.check_layout(codebook)?;
    Ok(agg)
}

/// Read complete reference records as (dummy row, weight) pairs.
fn read_reference(
    path: &Path,
    codebook: &Codebook,
    weight_column: Option<&str>,
) -> Result<(Vec<Vec<usize>>, Vec<f64>)> {
    let mut reader = open_csv(path)?;
    let headers = reader.headers().map_err(|e| Error::parse(path, e))?.clone();
    let cols = map_columns(&headers, codebook, false, weight_column)?;
    let mut rows = Vec::new();
    let mut weights = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::parse(path, e))?;
        let Some(levels) = parse_levels(&record, row, codebook, &cols.covariates)? else {
            continue;
        };
        let w = match cols.weight {
            Some(c) => {
                let cell = record.get(c).unwrap_or("").trim();
                let w: f64 = cell.parse().map_err(|_| Error::Schema {
                    row,
                    column: weight_column.unwrap_or_default().to_owned(),
                    message: format!("weight `{cell}` is not a number"),
                })?;
                if !(w > 0.0 && w.is_finite()) {
                    return Err(Error::Schema {
                        row,
                        column: weight_column.unwrap_or_default().to_owned(),
                        message: format!("weight {w} must be positive"),
                    });
                }
                w
            }
            None => 1.0,
        };
        rows.push(levels);
        weights.push(w);
    }
    if rows.is_empty() {
        return Err(Error::Aggregates(format!(
            "`{}` has no complete records",
            path.display()
        )));
    }
    Ok((rows, weights))
}

/// Weighted mean and covariance (normalized by the weight total) of
/// dummy-coded rows.
pub(crate) fn weighted_moments(
    codebook: &Codebook,
    rows: &[Vec<usize>],
    weights: &[f64],
) -> (DVector<f64>, DMatrix<f64>) {
    let k = codebook.dummy_count();
    let total: f64 = weights.iter().sum();
    let mut mean = DVector::zeros(k);
    let encoded: Vec<Vec<f64>> = rows.iter().map(|r| codebook.encode(r)).collect();
    for (row, &w) in encoded.iter().zip(weights) {
        for (m, &v) in mean.iter_mut().zip(row) {
            *m += w * v;
        }
    }
    mean /= total;
    let mut cov = DMatrix::zeros(k, k);
    for (row, &w) in encoded.iter().zip(weights) {
        for i in 0..k {
            let di = row[i] - mean[i];
            for j in 0..=i {
                cov[(i, j)] += w * di * (row[j] - mean[j]);
            }
        }
    }
    for i in 0..k {
        for j in 0..=i {
            let v = cov[(i, j)] / total;
            cov[(i, j)] = v;
            cov[(j, i)] = v;
        }
    }
    (mean, cov)
}

/// Weighted moments of the dummy-coded covariates over reference
/// microdata. `pi` is left at 0 for the caller to supply.
pub fn reduce_reference_microdata(
    path: impl AsRef<Path>,
    codebook: &Codebook,
    weight_column: Option<&str>,
) -> Result<PopulationAggregates> {
    let path = path.as_ref();
    let (rows, weights) = read_reference(path, codebook, weight_column)?;
    let (mean, cov) = weighted_moments(codebook, &rows, &weights);
    PopulationAggregates::new(codebook.dummy_names(), mean, cov, 0.0, label_for(path))
}

/// Marginals-only reduction: per-covariate proportions with a
/// block-diagonal covariance. Cross-covariate covariances are set to zero.
pub fn reduce_reference_marginals(
    path: impl AsRef<Path>,
    codebook: &Codebook,
    weight_column: Option<&str>,
) -> Result<PopulationAggregates> {
    let path = path.as_ref();
    let (rows, weights) = read_reference(path, codebook, weight_column)?;
    let total: f64 = weights.iter().sum();
    let mut marginals = BTreeMap::new();
    for (k, cov) in codebook.covariates.iter().enumerate() {
        let mut props = vec![0.0; cov.levels.len()];
        for (row, &w) in rows.iter().zip(&weights) {
            props[row[k]] += w;
        }
        props.iter_mut().for_each(|p| *p /= total);
        marginals.insert(cov.name.clone(), props);
    }
    let mut agg = aggregates_from_marginals(codebook, &marginals)?;
    agg.source_label = label_for(path);
    Ok(agg)
}

/// Build aggregates from per-covariate level proportions (all levels, in
/// codebook order). The covariance is block diagonal: diag(p) − ppᵀ within
/// each covariate and zero across covariates.
pub fn aggregates_from_marginals(
    codebook: &Codebook,
    marginals: &BTreeMap<String, Vec<f64>>,
) -> Result<PopulationAggregates> {
    log::warn!(
        "marginals-only aggregates: cross-covariate covariances are assumed zero, \
         which misstates the population proxy variance when covariates are associated"
    );
    let k = codebook.dummy_count();
    let mut mean = DVector::zeros(k);
    let mut cov = DMatrix::zeros(k, k);
    let mut offset = 0;
    for c in &codebook.covariates {
        let props = marginals
            .get(&c.name)
            .ok_or_else(|| Error::Aggregates(format!("no marginal for covariate `{}`", c.name)))?;
        if props.len() != c.levels.len() {
            return Err(Error::Dimension {
                what: "marginal proportions",
                expected: c.levels.len(),
                found: props.len(),
            });
        }
        let sum: f64 = props.iter().sum();
        if (sum - 1.0).abs() > 1e-9 || props.iter().any(|&p| p < 0.0) {
            return Err(Error::Aggregates(format!(
                "proportions for `{}` must be nonnegative and sum to 1 (sum {sum})",
                c.name
            )));
        }
        let dummy: Vec<f64> = (0..c.levels.len())
            .filter(|&l| c.dummy_slot(l).is_some())
            .map(|l| props[l])
            .collect();
        for (a, &pa) in dummy.iter().enumerate() {
            mean[offset + a] = pa;
            for (b, &pb) in dummy.iter().enumerate() {
                let diag = if a == b { pa } else { 0.0 };
                cov[(offset + a, offset + b)] = diag - pa * pb;
            }
        }
        offset += dummy.len();
    }
    PopulationAggregates::new(codebook.dummy_names(), mean, cov, 0.0, "marginals")
}

fn label_for(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}
