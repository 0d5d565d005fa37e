//! Regression data files: a header row `y,x1,...,xp`, then one numeric row
//! per observation. No missing values.

use std::path::Path;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionData {
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
}

fn data_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Data {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

pub fn load_regression_csv(path: &Path) -> Result<RegressionData> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| data_err(path, e.to_string()))?;
    let headers = reader.headers().map_err(|e| data_err(path, e.to_string()))?.clone();
    let p = headers.len().saturating_sub(1);
    if p == 0 {
        return Err(data_err(path, "need a y column and at least one x column"));
    }
    let expected = std::iter::once("y".to_string()).chain((1..=p).map(|j| format!("x{j}")));
    for (found, want) in headers.iter().zip(expected) {
        if found != want {
            return Err(data_err(path, format!("expected header {want:?}, found {found:?}")));
        }
    }
    let mut ys = Vec::new();
    let mut xs = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| data_err(path, e.to_string()))?;
        if record.len() != p + 1 {
            return Err(data_err(path, format!("row {} has {} fields, expected {}", line + 1, record.len(), p + 1)));
        }
        for (j, field) in record.iter().enumerate() {
            let v: f64 = field
                .parse()
                .map_err(|_| data_err(path, format!("row {}: {field:?} is not a number", line + 1)))?;
            if !v.is_finite() {
                return Err(data_err(path, format!("row {}: non-finite value", line + 1)));
            }
            if j == 0 {
                ys.push(v);
            } else {
                xs.push(v);
            }
        }
    }
    if ys.is_empty() {
        return Err(data_err(path, "no observations"));
    }
    Ok(RegressionData {
        x: DMatrix::from_row_slice(ys.len(), p, &xs),
        y: DVector::from_vec(ys),
    })
}

/// A joint pmf written as a headerless numeric CSV, one row per U-state.
pub fn load_joint_csv(path: &Path) -> Result<DMatrix<f64>> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| data_err(path, e.to_string()))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| data_err(path, e.to_string()))?;
        let row = record
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| data_err(path, format!("{f:?} is not a number"))))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let n = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(data_err(path, "joint pmf must be a non-empty rectangular table"));
    }
    let flat: Vec<f64> = rows.concat();
    Ok(DMatrix::from_row_slice(rows.len(), n, &flat))
}

/// Numerical rank from singular values.
pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let tol = max * (m.nrows().max(m.ncols()) as f64) * f64::EPSILON;
    sv.iter().filter(|s| **s > tol).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn parses_well_formed_file() {
        let f = write("y,x1,x2\n1,1.0,0.5\n0,1.0,-0.25\n");
        let d = load_regression_csv(f.path()).unwrap();
        assert_eq!(d.x.shape(), (2, 2));
        assert_eq!(d.y.as_slice(), &[1.0, 0.0]);
        assert_eq!(d.x[(1, 1)], -0.25);
    }

    #[test]
    fn strict_parse_errors() {
        for bad in [
            "y,x2\n1,2\n",
            "y,x1\n1,\n",
            "y,x1\n1,abc\n",
            "y,x1\n1,2,3\n",
            "y,x1\n",
            "y\n1\n",
        ] {
            let f = write(bad);
            assert!(load_regression_csv(f.path()).is_err(), "{bad:?}");
        }
        assert!(matches!(
            load_regression_csv(Path::new("/nonexistent/lupus.csv")),
            Err(Error::MissingFile(_))
        ));
    }

    #[test]
    fn joint_table() {
        let f = write("0.4,0.1\n0.1,0.4\n");
        let j = load_joint_csv(f.path()).unwrap();
        assert_eq!(j[(0, 1)], 0.1);
        assert!(load_joint_csv(write("0.4,0.1\n0.5\n").path()).is_err());
    }

    #[test]
    fn rank() {
        let m = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 2.0, 4.0, 3.0, 6.0]);
        assert_eq!(numerical_rank(&m), 1);
        assert_eq!(numerical_rank(&DMatrix::identity(3, 3)), 3);
    }
}
