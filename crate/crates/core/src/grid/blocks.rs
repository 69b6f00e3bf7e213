use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lti::{
    ComplexMatrix, FrequencyResponse, Poly, Rational, RationalMatrix, StabilityCheck, TransferMatrixModel,
};
use crate::srg::Disk;

/// `J(θ) = [[cos θ, −sin θ], [sin θ, cos θ]]`.
pub fn rotation_matrix(theta: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    ComplexMatrix::from_real_rows(&[&[c, -s], &[s, c]])
}

/// Frame change `J(θ)·Y·J(−θ)` of a 2×2 admittance.
pub fn rotate_admittance(y: &ComplexMatrix, theta: f64) -> Result<ComplexMatrix> {
    if y.dim() != 2 {
        return Err(Error::Dimension(format!("rotation needs a 2x2 matrix, got {0}x{0}", y.dim())));
    }
    Ok(&(&rotation_matrix(theta) * y) * &rotation_matrix(-theta))
}

/// A 2×2 response seen through the frame rotation `J(θ)`.
#[derive(Clone, Debug)]
pub struct Rotated<M> {
    pub inner: M,
    pub theta: f64,
}

impl<M: FrequencyResponse> FrequencyResponse for Rotated<M> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn response(&self, omega: f64) -> Result<ComplexMatrix> {
        rotate_admittance(&self.inner.response(omega)?, self.theta)
    }
    fn stability(&self) -> StabilityCheck {
        self.inner.stability()
    }
}

/// Short-circuit ratio `‖Y_grid(jω0)‖₂ / ‖Y_c(jω0)‖₂`.
pub fn scr_value(y_grid: &ComplexMatrix, y_c: &ComplexMatrix) -> Result<f64> {
    let den = y_c.norm2();
    if den == 0.0 {
        return Err(Error::InvalidInput("converter admittance has zero norm".into()));
    }
    Ok(y_grid.norm2() / den)
}

/// Series RL line in the dq frame rotating at `omega0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RlGridParams {
    pub r: f64,
    pub l: f64,
    pub omega0: f64,
}

impl RlGridParams {
    pub fn new(r: f64, l: f64, omega0: f64) -> Result<Self> {
        if !(r >= 0.0 && l >= 0.0 && r.is_finite() && l.is_finite() && omega0.is_finite()) {
            return Err(Error::InvalidInput(format!("invalid RL parameters R = {r}, L = {l}")));
        }
        if r == 0.0 && l == 0.0 {
            return Err(Error::InvalidInput("R and L cannot both be zero".into()));
        }
        Ok(Self { r, l, omega0 })
    }

    /// Impedance `[[R + sL, −ω0L], [ω0L, R + sL]]` at `s`.
    pub fn impedance_at(&self, s: Complex64) -> ComplexMatrix {
        let d = s * self.l + self.r;
        let x = Complex64::new(self.omega0 * self.l, 0.0);
        ComplexMatrix::from_rows(&[&[d, -x], &[x, d]])
    }
}

/// Admittance of the RL line as rational entries:
/// `[[R + sL, ω0L], [−ω0L, R + sL]] / ((R + sL)² + (ω0L)²)`.
pub fn rl_grid_model(params: &RlGridParams) -> TransferMatrixModel {
    let RlGridParams { r, l, omega0 } = *params;
    let x = omega0 * l;
    let den = Poly::new(vec![l * l, 2.0 * r * l, r * r + x * x]);
    let entry = |num: Poly| Rational::new(num, den.clone()).expect("denominator is nonzero");
    let diag = Poly::new(vec![l, r]);
    let entries = vec![
        vec![entry(diag.clone()), entry(Poly::constant(x))],
        vec![entry(Poly::constant(-x)), entry(diag)],
    ];
    TransferMatrixModel::Rational(RationalMatrix::new(entries).expect("2x2 is square"))
}

/// Pointwise sum of LTI admittances plus disk terms that enter at SRG level.
pub struct AdmittanceSum {
    terms: Vec<Box<dyn FrequencyResponse>>,
    disks: Vec<Disk>,
}

impl AdmittanceSum {
    pub fn new(terms: Vec<Box<dyn FrequencyResponse>>, disks: Vec<Disk>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::Dimension("an admittance sum needs at least one LTI term".into()));
        };
        let n = first.dim();
        if let Some(bad) = terms.iter().find(|t| t.dim() != n) {
            return Err(Error::Dimension(format!(
                "admittance terms have dimensions {n} and {}",
                bad.dim()
            )));
        }
        Ok(Self { terms, disks })
    }

    pub fn disks(&self) -> &[Disk] {
        &self.disks
    }

    /// Sum of all disks: center sum, radius sum.
    pub fn combined_disk(&self) -> Option<Disk> {
        (!self.disks.is_empty()).then(|| {
            self.disks.iter().fold(Disk::new(Complex64::new(0.0, 0.0), 0.0), |acc, d| {
                Disk::new(acc.center + d.center, acc.radius + d.radius)
            })
        })
    }
}

impl FrequencyResponse for AdmittanceSum {
    fn dim(&self) -> usize {
        self.terms[0].dim()
    }
    fn response(&self, omega: f64) -> Result<ComplexMatrix> {
        let n = self.dim();
        let mut acc = DMatrix::<Complex64>::zeros(n, n);
        for t in &self.terms {
            acc += t.response(omega)?.inner();
        }
        ComplexMatrix::new(acc)
    }
    fn stability(&self) -> StabilityCheck {
        StabilityCheck::combine(self.terms.iter().map(|t| t.stability()))
    }
}

/// Convenience for [`AdmittanceSum::new`].
pub fn sum_admittances(terms: Vec<Box<dyn FrequencyResponse>>, disks: Vec<Disk>) -> Result<AdmittanceSum> {
    AdmittanceSum::new(terms, disks)
}
