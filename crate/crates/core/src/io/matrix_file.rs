//! Matrix input files.
//!
//! ```json
//! {"n": 2, "A": {"re": [[0, 0], [0, 1]], "im": [[1, 0], [0, 0]]}, "comment": "diag(i, 1)"}
//! {"n": 1, "A1": {"re": [[2]], "im": [[0]]}, "A2": {"re": [[1]], "im": [[0]]}}
//! ```
//!
//! `im` may be omitted for real matrices.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::report::to_json_string;
use crate::error::{Error, Result};
use crate::linalg::{cartesian_decompose, CartesianPair, ComplexMatrix, HERMIT_TOL};

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawMatrix {
    re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    im: Option<Vec<Vec<f64>>>,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    n: usize,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    a: Option<RawMatrix>,
    #[serde(rename = "A1", default, skip_serializing_if = "Option::is_none")]
    a1: Option<RawMatrix>,
    #[serde(rename = "A2", default, skip_serializing_if = "Option::is_none")]
    a2: Option<RawMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    comment: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MatrixSource {
    /// A general matrix, split into its Hermitian and skew-Hermitian parts.
    Full(ComplexMatrix),
    /// The Hermitian pair `(A1, A2)` directly.
    Pair(ComplexMatrix, ComplexMatrix),
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixFile {
    pub source: MatrixSource,
    pub comment: Option<String>,
}

fn rows(field: &str, part: &str, rows: &[Vec<f64>], n: usize) -> Result<Vec<f64>> {
    if rows.len() != n {
        return Err(Error::Dimension(format!(
            "{field}.{part} has {} rows, expected n = {n}",
            rows.len()
        )));
    }
    let mut out = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Dimension(format!(
                "{field}.{part} row {i} has {} entries, expected n = {n}",
                row.len()
            )));
        }
        out.extend_from_slice(row);
    }
    Ok(out)
}

fn to_matrix(field: &str, raw: &RawMatrix, n: usize) -> Result<ComplexMatrix> {
    let re = rows(field, "re", &raw.re, n)?;
    let im = match &raw.im {
        Some(im) => rows(field, "im", im, n)?,
        None => vec![0.0; n * n],
    };
    ComplexMatrix::from_row_major(n, &re, &im)
}

fn to_raw(m: &ComplexMatrix) -> RawMatrix {
    RawMatrix {
        re: m.re_rows(),
        im: Some(m.im_rows()),
    }
}

impl MatrixFile {
    pub fn dim(&self) -> usize {
        match &self.source {
            MatrixSource::Full(a) => a.dim(),
            MatrixSource::Pair(a1, _) => a1.dim(),
        }
    }

    /// The Cartesian pair, validating Hermitian input within `hermit_tol`.
    pub fn to_pair(&self, hermit_tol: f64) -> Result<CartesianPair> {
        match &self.source {
            MatrixSource::Full(a) => Ok(cartesian_decompose(a)),
            MatrixSource::Pair(a1, a2) => CartesianPair::with_tolerance(a1.clone(), a2.clone(), hermit_tol),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let n = raw.n;
        if n == 0 {
            return Err(Error::Dimension("n must be at least 1".into()));
        }
        let source = match (&raw.a, &raw.a1, &raw.a2) {
            (Some(a), None, None) => MatrixSource::Full(to_matrix("A", a, n)?),
            (None, Some(a1), Some(a2)) => MatrixSource::Pair(to_matrix("A1", a1, n)?, to_matrix("A2", a2, n)?),
            (None, Some(_), None) => return Err(Error::Parse("field \"A2\" is missing (A1 given)".into())),
            (None, None, Some(_)) => return Err(Error::Parse("field \"A1\" is missing (A2 given)".into())),
            (None, None, None) => return Err(Error::Parse("expected field \"A\" or fields \"A1\" and \"A2\"".into())),
            _ => return Err(Error::Parse("give either \"A\" or \"A1\"/\"A2\", not both".into())),
        };
        Ok(Self {
            source,
            comment: raw.comment,
        })
    }

    /// JSON text with every number written to 17 significant digits.
    pub fn to_json(&self) -> String {
        let mut raw = RawFile {
            n: self.dim(),
            a: None,
            a1: None,
            a2: None,
            comment: self.comment.clone(),
        };
        match &self.source {
            MatrixSource::Full(a) => raw.a = Some(to_raw(a)),
            MatrixSource::Pair(a1, a2) => {
                raw.a1 = Some(to_raw(a1));
                raw.a2 = Some(to_raw(a2));
            }
        }
        to_json_string(&raw)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

pub fn read_matrix_file(path: &Path) -> Result<MatrixFile> {
    let text = std::fs::read_to_string(path)?;
    MatrixFile::parse(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_matrix_str(text: &str) -> Result<CartesianPair> {
    MatrixFile::parse(text)?.to_pair(HERMIT_TOL)
}

/// Reads a matrix file and returns its Cartesian pair.
pub fn parse_matrix_file(path: &Path) -> Result<CartesianPair> {
    read_matrix_file(path)?.to_pair(HERMIT_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_matrix_is_decomposed() {
        let pair = parse_matrix_str(r#"{"n":2, "A": {"re": [[0,0],[0,1]], "im": [[1,0],[0,0]]}}"#).unwrap();
        assert_eq!(pair.a1(), &ComplexMatrix::from_real_diagonal(&[0.0, 1.0]));
        assert_eq!(pair.a2(), &ComplexMatrix::from_real_diagonal(&[1.0, 0.0]));
    }

    #[test]
    fn pair_input_and_missing_im() {
        let pair = parse_matrix_str(r#"{"n":1, "A1": {"re":[[2]], "im":[[0]]}, "A2": {"re":[[1]]}}"#).unwrap();
        assert_eq!(pair.dim(), 1);
        assert_eq!(pair.a1().matrix()[(0, 0)].re, 2.0);
    }

    #[test]
    fn non_hermitian_a1_names_the_field() {
        let e = parse_matrix_str(r#"{"n":2, "A1": {"re":[[0,1],[0,0]]}, "A2": {"re":[[1,0],[0,1]]}}"#).unwrap_err();
        match e {
            Error::Validation(msg) => assert!(msg.starts_with("A1 "), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_input_reports_position() {
        match parse_matrix_str("{\"n\": 2,\n \"A\": {\"re\": [[0, 0], [0 1]]}}").unwrap_err() {
            Error::Parse(msg) => assert!(msg.contains("line 2"), "{msg}"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_matrix_str(r#"{"n":2, "B": 1}"#), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix_str(r#"{"n":2}"#), Err(Error::Parse(_))));
    }

    #[test]
    fn dimension_mismatch() {
        match parse_matrix_str(r#"{"n":2, "A": {"re": [[0,0],[0,1,2]]}}"#).unwrap_err() {
            Error::Dimension(msg) => assert!(msg.contains("A.re row 1"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn json_round_trip_is_exact() {
        let a = ComplexMatrix::from_row_major(2, &[0.1, 1.0 / 3.0, -2e-300, 7.0], &[1e300, 0.0, -0.0, 2.0f64.sqrt()])
            .unwrap();
        let file = MatrixFile {
            source: MatrixSource::Full(a),
            comment: Some("x".into()),
        };
        assert_eq!(MatrixFile::parse(&file.to_json()).unwrap(), file);
    }
}
