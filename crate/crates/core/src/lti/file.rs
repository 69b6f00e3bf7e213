//! JSON model documents.
//!
//! ```json
//! {"kind": "state_space", "a": [[-1.0]], "b": [[1.0]], "c": [[1.0]], "d": [[0.0]]}
//! {"kind": "rational", "entries": [[{"num": [1.0], "den": [1.0, 1.0]}]]}
//! {"kind": "samples", "samples": [{"omega": 0.0, "re": [[1.0]], "im": [[0.0]]}, ...]}
//! ```
//! Polynomials list coefficients in descending powers of `s`; `omega` is in rad/s.

use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::ComplexMatrix;
use super::model::{Rational, RationalMatrix, SampledResponse, StateSpace, TransferMatrixModel};
use super::poly::Poly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelDocument {
    StateSpace {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
        a: Vec<Vec<f64>>,
        b: Vec<Vec<f64>>,
        c: Vec<Vec<f64>>,
        d: Vec<Vec<f64>>,
    },
    Rational {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
        entries: Vec<Vec<RationalEntry>>,
    },
    Samples {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
        samples: Vec<SampleEntry>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalEntry {
    pub num: Vec<f64>,
    pub den: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleEntry {
    pub omega: f64,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

fn dense(rows: &[Vec<f64>], nrows: usize, ncols: usize, field: &str) -> Result<DMatrix<f64>> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Dimension(format!("field '{field}' must be {nrows}x{ncols}")));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

impl ModelDocument {
    pub fn label(&self) -> Option<&str> {
        match self {
            Self::StateSpace { label, .. } | Self::Rational { label, .. } | Self::Samples { label, .. } => {
                label.as_deref()
            }
        }
    }

    pub fn to_model(&self) -> Result<TransferMatrixModel> {
        match self {
            Self::StateSpace { a, b, c, d, .. } => {
                let n = d.len();
                let nx = a.len();
                let ss = StateSpace::new(
                    dense(a, nx, nx, "a")?,
                    dense(b, nx, n, "b")?,
                    dense(c, n, nx, "c")?,
                    dense(d, n, n, "d")?,
                )?;
                Ok(TransferMatrixModel::StateSpace(ss))
            }
            Self::Rational { entries, .. } => {
                let rows = entries
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|e| Rational::new(Poly::new(e.num.clone()), Poly::new(e.den.clone())))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(TransferMatrixModel::Rational(RationalMatrix::new(rows)?))
            }
            Self::Samples { samples, .. } => {
                let n = samples.first().map_or(0, |s| s.re.len());
                let values = samples
                    .iter()
                    .map(|s| {
                        let re = dense(&s.re, n, n, "re")?;
                        let im = dense(&s.im, n, n, "im")?;
                        ComplexMatrix::new(re.zip_map(&im, Complex64::new))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let omegas = samples.iter().map(|s| s.omega).collect();
                Ok(TransferMatrixModel::Sampled(SampledResponse::new(omegas, values)?))
            }
        }
    }

    pub fn from_model(model: &TransferMatrixModel, label: Option<String>) -> Self {
        match model {
            TransferMatrixModel::StateSpace(ss) => Self::StateSpace {
                label,
                a: rows_of(ss.a()),
                b: rows_of(ss.b()),
                c: rows_of(ss.c()),
                d: rows_of(ss.d()),
            },
            TransferMatrixModel::Rational(r) => Self::Rational {
                label,
                entries: r
                    .entries()
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|e| RationalEntry {
                                num: e.num.coeffs().to_vec(),
                                den: e.den.coeffs().to_vec(),
                            })
                            .collect()
                    })
                    .collect(),
            },
            TransferMatrixModel::Sampled(s) => Self::Samples {
                label,
                samples: s
                    .omegas()
                    .iter()
                    .zip(s.values())
                    .map(|(&omega, v)| SampleEntry {
                        omega,
                        re: rows_of(&v.inner().map(|z| z.re)),
                        im: rows_of(&v.inner().map(|z| z.im)),
                    })
                    .collect(),
            },
        }
    }
}

/// Parses a model document from JSON text; `origin` names the source in errors.
pub fn parse_model_json(text: &str, origin: &str) -> Result<(TransferMatrixModel, Option<String>)> {
    let doc: ModelDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: origin.to_string(),
        line: e.line(),
        message: e.to_string(),
    })?;
    let model = doc.to_model().map_err(|e| Error::Parse {
        path: origin.to_string(),
        line: 0,
        message: e.to_string(),
    })?;
    Ok((model, doc.label().map(str::to_string)))
}

/// Reads a model from a JSON document, or from a frequency-data CSV when the
/// extension is `.csv`.
pub fn load_model(path: &Path) -> Result<(TransferMatrixModel, Option<String>)> {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        let data = crate::grid::load_frequency_data(path)?;
        let label = data.label.clone();
        return Ok((data.to_model()?, Some(label)));
    }
    let text = std::fs::read_to_string(path)?;
    parse_model_json(&text, &path.display().to_string())
}
