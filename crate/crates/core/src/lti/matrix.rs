use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Condition number above which [`invert_at`] refuses to invert.
pub const MAX_CONDITION: f64 = 1e12;

/// A square complex matrix: the value of a transfer matrix at one frequency.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    /// Wraps a square matrix with finite entries.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() == 0 || m.nrows() != m.ncols() {
            return Err(Error::Dimension(format!(
                "expected a non-empty square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        Ok(Self(m))
    }

    /// Builds from row slices. Panics on ragged or empty input; intended for literals.
    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let n = rows.len();
        assert!(n > 0 && rows.iter().all(|r| r.len() == n), "rows must form a square matrix");
        Self(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// Builds from real row slices.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        assert!(n > 0 && rows.iter().all(|r| r.len() == n), "rows must form a square matrix");
        Self(DMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j], 0.0)))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn scalar(n: usize, c: Complex64) -> Self {
        Self(DMatrix::identity(n, n) * c)
    }

    pub fn diagonal(d: &[Complex64]) -> Self {
        let n = d.len();
        Self(DMatrix::from_fn(n, n, |i, j| if i == j { d[i] } else { Complex64::new(0.0, 0.0) }))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self(&self.0 * c)
    }

    /// Hermitian part `(G + Gᴴ)/2`.
    pub fn hermitian_part(&self) -> DMatrix<Complex64> {
        (&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0)
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.0.clone().singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// Spectral norm (largest singular value).
    pub fn norm2(&self) -> f64 {
        self.singular_values()[0]
    }

    /// Ratio of extreme singular values; infinite when singular.
    pub fn condition_number(&self) -> f64 {
        let s = self.singular_values();
        let (max, min) = (s[0], s[s.len() - 1]);
        if max == 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }

    /// Largest entrywise modulus difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn determinant(&self) -> Complex64 {
        self.0.clone().determinant()
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl std::ops::Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

impl From<ComplexMatrix> for DMatrix<Complex64> {
    fn from(m: ComplexMatrix) -> Self {
        m.0
    }
}

/// Inverts `g`, refusing near-singular input.
///
/// The result satisfies `‖G·G⁻¹ − I‖ ≤ 1e-8·max(1, ‖G‖)`.
pub fn invert_at(g: &ComplexMatrix) -> Result<ComplexMatrix> {
    let cond = g.condition_number();
    if !cond.is_finite() || cond > MAX_CONDITION {
        return Err(Error::NearSingular { cond, context: None });
    }
    let inv = g
        .0
        .clone()
        .try_inverse()
        .ok_or(Error::NearSingular { cond, context: None })?;
    let n = g.dim();
    let residual = (&g.0 * &inv - DMatrix::<Complex64>::identity(n, n))
        .clone()
        .singular_values()
        .max();
    if residual > 1e-8 * g.norm2().max(1.0) {
        return Err(Error::NearSingular { cond, context: None });
    }
    Ok(ComplexMatrix(inv))
}
