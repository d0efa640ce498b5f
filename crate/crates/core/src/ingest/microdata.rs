use std::fs::File;
use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};

use super::codebook::{Codebook, OutcomeMissingPolicy};
use super::is_missing;
use crate::error::{Error, Result};

/// Outcomes and intercept-first dummy design for the responding units.
#[derive(Debug, Clone, PartialEq)]
pub struct RespondentSample {
    y: Vec<u8>,
    z: DMatrix<f64>,
    column_names: Vec<String>,
    /// Records removed because the outcome was missing under `DropRecord`.
    pub dropped_missing_y: usize,
    /// Records removed because a covariate was missing.
    pub dropped_missing_z: usize,
    /// Outcomes coerced to 0 under `TreatAsZero`.
    pub coerced_missing_y: usize,
}

impl RespondentSample {
    /// Validates: binary outcome with both classes present, intercept
    /// column of ones, 0/1 dummies, and full column rank.
    pub fn new(y: Vec<u8>, z: DMatrix<f64>, column_names: Vec<String>) -> Result<Self> {
        let n = y.len();
        if n == 0 {
            return Err(Error::Sample("no respondent records".into()));
        }
        if z.nrows() != n {
            return Err(Error::Dimension {
                what: "design rows",
                expected: n,
                found: z.nrows(),
            });
        }
        if z.ncols() != column_names.len() {
            return Err(Error::Dimension {
                what: "design column names",
                expected: z.ncols(),
                found: column_names.len(),
            });
        }
        if y.iter().any(|&v| v > 1) {
            return Err(Error::Sample("outcome must be 0/1".into()));
        }
        let positives = y.iter().filter(|&&v| v == 1).count();
        if positives == 0 || positives == n {
            return Err(Error::Sample(format!(
                "outcome has a single class ({positives} of {n} are 1); both classes are required"
            )));
        }
        if z.ncols() == 0 || z.column(0).iter().any(|&v| v != 1.0) {
            return Err(Error::Sample(
                "first design column must be an all-ones intercept".into(),
            ));
        }
        if z.columns(1, z.ncols() - 1)
            .iter()
            .any(|&v| v != 0.0 && v != 1.0)
        {
            return Err(Error::Sample("dummy entries must be 0 or 1".into()));
        }
        check_full_rank(&z, &column_names)?;
        Ok(RespondentSample {
            y,
            z,
            column_names,
            dropped_missing_y: 0,
            dropped_missing_z: 0,
            coerced_missing_y: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    /// Number of design columns including the intercept.
    pub fn p(&self) -> usize {
        self.z.ncols()
    }

    pub fn y(&self) -> &[u8] {
        &self.y
    }

    pub fn z(&self) -> &DMatrix<f64> {
        &self.z
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn mean_y(&self) -> f64 {
        self.y.iter().map(|&v| f64::from(v)).sum::<f64>() / self.n() as f64
    }
}

fn check_full_rank(z: &DMatrix<f64>, names: &[String]) -> Result<()> {
    for (j, name) in names.iter().enumerate().skip(1) {
        let col = z.column(j);
        if col.iter().all(|&v| v == 0.0) {
            return Err(Error::RankDeficient(format!(
                "column `{name}` is never observed"
            )));
        }
        if col.iter().all(|&v| v == 1.0) {
            return Err(Error::RankDeficient(format!(
                "column `{name}` is constant and collinear with the intercept"
            )));
        }
    }
    let gram = z.tr_mul(z);
    let eig = SymmetricEigen::new(gram);
    let max = eig.eigenvalues.max();
    let min = eig.eigenvalues.min();
    if !(min > 1e-10 * max) {
        return Err(Error::RankDeficient(format!(
            "ZᵀZ eigenvalue ratio {:.3e} (collinear dummy sets)",
            min / max
        )));
    }
    Ok(())
}

pub(crate) struct ColumnMap {
    pub outcome: Option<usize>,
    pub covariates: Vec<usize>,
    pub weight: Option<usize>,
}

pub(crate) fn map_columns(
    headers: &csv::StringRecord,
    codebook: &Codebook,
    need_outcome: bool,
    weight: Option<&str>,
) -> Result<ColumnMap> {
    let find = |name: &str| headers.iter().position(|h| h.trim() == name);
    let missing = |name: &str| Error::Schema {
        row: 0,
        column: name.to_owned(),
        message: "column not found in header".into(),
    };
    let outcome = if need_outcome {
        Some(find(&codebook.outcome.name).ok_or_else(|| missing(&codebook.outcome.name))?)
    } else {
        None
    };
    let covariates = codebook
        .covariates
        .iter()
        .map(|c| find(&c.name).ok_or_else(|| missing(&c.name)))
        .collect::<Result<Vec<_>>>()?;
    let weight = match weight {
        Some(w) => Some(find(w).ok_or_else(|| missing(w))?),
        None => None,
    };
    Ok(ColumnMap {
        outcome,
        covariates,
        weight,
    })
}

/// Level indices for one record, `Ok(None)` if any covariate is missing.
pub(crate) fn parse_levels(
    record: &csv::StringRecord,
    row: usize,
    codebook: &Codebook,
    columns: &[usize],
) -> Result<Option<Vec<usize>>> {
    let mut levels = Vec::with_capacity(columns.len());
    let mut any_missing = false;
    for (cov, &col) in codebook.covariates.iter().zip(columns) {
        let cell = record.get(col).unwrap_or("");
        if is_missing(cell) {
            any_missing = true;
            continue;
        }
        match cov.level_index(cell.trim()) {
            Some(level) => levels.push(level),
            None => {
                return Err(Error::Schema {
                    row,
                    column: cov.name.clone(),
                    message: format!("unknown level `{}`", cell.trim()),
                })
            }
        }
    }
    Ok(if any_missing { None } else { Some(levels) })
}

pub(crate) fn open_csv(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(file))
}

/// Load responding units, applying the outcome policy first and then
/// dropping records with any missing covariate.
pub fn load_respondents(path: impl AsRef<Path>, codebook: &Codebook) -> Result<RespondentSample> {
    let path = path.as_ref();
    let mut reader = open_csv(path)?;
    let headers = reader.headers().map_err(|e| Error::parse(path, e))?.clone();
    let cols = map_columns(&headers, codebook, true, None)?;
    let outcome_col = cols.outcome.expect("outcome requested");

    let p = codebook.dummy_count() + 1;
    let mut y = Vec::new();
    let mut data: Vec<f64> = Vec::new();
    let mut dropped_y = 0;
    let mut dropped_z = 0;
    let mut coerced = 0;
    let mut observed_outcomes = 0;

    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::parse(path, e))?;
        // Cell schema is checked on every record, including ones dropped below.
        let levels = parse_levels(&record, row, codebook, &cols.covariates)?;
        let outcome = codebook.code_outcome(record.get(outcome_col).unwrap_or(""));
        let value = match (outcome, codebook.outcome.missing_policy) {
            (Some(v), _) => {
                observed_outcomes += 1;
                v
            }
            (None, OutcomeMissingPolicy::TreatAsZero) => {
                coerced += 1;
                0
            }
            (None, OutcomeMissingPolicy::DropRecord) => {
                dropped_y += 1;
                continue;
            }
        };
        let Some(levels) = levels else {
            dropped_z += 1;
            continue;
        };
        y.push(value);
        data.push(1.0);
        data.extend(codebook.encode(&levels));
    }
    if observed_outcomes == 0 {
        return Err(Error::Sample(format!(
            "outcome `{}` is missing on every record",
            codebook.outcome.name
        )));
    }
    let n = y.len();
    let z = DMatrix::from_row_slice(n, p, &data);
    let mut sample = RespondentSample::new(y, z, codebook.design_names())?;
    sample.dropped_missing_y = dropped_y;
    sample.dropped_missing_z = dropped_z;
    sample.coerced_missing_y = coerced;
    Ok(sample)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::Codebook;
    use std::io::Write;

    fn codebook(policy: &str) -> Codebook {
        Codebook::from_toml_str(&format!(
            r#"
[outcome]
name = "y"
missing_policy = "{policy}"

[[covariates]]
name = "sex"
levels = ["M", "F"]
reference = "M"

[[covariates]]
name = "age"
levels = ["young", "mid", "old"]
reference = "young"
"#
        ))
        .unwrap()
    }

    fn write(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    const TEN_ROWS: &str = "id,age,sex,y\n\
        1,young,M,1\n2,mid,F,0\n3,old,M,NA\n4,young,F,1\n5,mid,M,0\n\
        6,old,F,\n7,young,M,0\n8,mid,F,1\n9,old,M,1\n10,old,F,0\n";

    #[test]
    fn treat_as_zero_keeps_every_row() {
        let f = write(TEN_ROWS);
        let s = load_respondents(f.path(), &codebook("treat_as_zero")).unwrap();
        assert_eq!(s.n(), 10);
        assert_eq!(s.dropped_missing_y, 0);
        assert_eq!(s.coerced_missing_y, 2);
        assert_eq!(s.y()[2], 0);
        assert_eq!(s.y()[5], 0);
    }

    #[test]
    fn drop_record_removes_missing_outcomes() {
        let f = write(TEN_ROWS);
        let s = load_respondents(f.path(), &codebook("drop_record")).unwrap();
        assert_eq!(s.n(), 8);
        assert_eq!(s.dropped_missing_y, 2);
        assert_eq!(s.p(), 4);
        assert_eq!(s.column_names()[0], "(intercept)");
        // Column order follows the codebook, not the file.
        assert_eq!(s.column_names()[1], "sex=F");
        // Row 2 of the file: mid, F.
        assert_eq!(
            s.z().row(1).iter().copied().collect::<Vec<_>>(),
            vec![1.0, 1.0, 1.0, 0.0]
        );
    }

    #[test]
    fn missing_covariate_is_dropped_after_outcome_policy() {
        let text = TEN_ROWS
            .replace("7,young,M,0", "7,,M,0")
            .replace("3,old,M,NA", "3,NA,M,NA");
        let f = write(&text);
        let s = load_respondents(f.path(), &codebook("drop_record")).unwrap();
        // Row 3 goes to the outcome drop; row 7 to the covariate drop.
        assert_eq!(s.dropped_missing_y, 2);
        assert_eq!(s.dropped_missing_z, 1);
        assert_eq!(s.n(), 7);
    }

    #[test]
    fn unknown_level_names_row_and_column() {
        let f = write(&TEN_ROWS.replace("4,young,F,1", "4,young,X,1"));
        match load_respondents(f.path(), &codebook("drop_record")) {
            Err(Error::Schema { row, column, .. }) => {
                assert_eq!(row, 4);
                assert_eq!(column, "sex");
            }
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn all_missing_outcome_is_an_error() {
        let f = write("sex,age,y\nM,young,NA\nF,old,\n");
        assert!(matches!(
            load_respondents(f.path(), &codebook("treat_as_zero")),
            Err(Error::Sample(_))
        ));
    }

    #[test]
    fn missing_header_column_is_schema_error() {
        let f = write("sex,y\nM,1\n");
        assert!(matches!(
            load_respondents(f.path(), &codebook("drop_record")),
            Err(Error::Schema { row: 0, .. })
        ));
    }

    #[test]
    fn unobserved_level_is_rank_deficient() {
        let f = write("sex,age,y\nM,young,1\nF,mid,0\nM,mid,1\nF,young,0\n");
        let err = load_respondents(f.path(), &codebook("drop_record")).unwrap_err();
        assert!(matches!(err, Error::RankDeficient(_)), "{err}");
        assert!(err.to_string().contains("age=old"));
    }

    #[test]
    fn collinear_dummies_are_rejected() {
        // sex=F and age=mid identical in every row.
        let f = write("sex,age,y\nM,young,1\nF,mid,0\nM,old,1\nF,mid,1\nM,young,0\nM,old,0\n");
        assert!(matches!(
            load_respondents(f.path(), &codebook("drop_record")),
            Err(Error::RankDeficient(_))
        ));
    }

    #[test]
    fn single_outcome_class_is_rejected() {
        let f = write("sex,age,y\nM,young,1\nF,mid,1\nM,old,1\nF,old,1\n");
        assert!(matches!(
            load_respondents(f.path(), &codebook("drop_record")),
            Err(Error::Sample(_))
        ));
    }
}
