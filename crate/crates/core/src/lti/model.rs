use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::matrix::ComplexMatrix;
use super::poly::Poly;
use crate::error::{Error, Result};

/// Real-part margin a pole must clear to count as strictly stable.
pub const TOL_STAB: f64 = 1e-9;

/// `ẋ = Ax + Bu, y = Cx + Du` with square transfer matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct StateSpace {
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    c: DMatrix<f64>,
    d: DMatrix<f64>,
}

impl StateSpace {
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>, c: DMatrix<f64>, d: DMatrix<f64>) -> Result<Self> {
        let nx = a.nrows();
        let n = d.nrows();
        let ok = a.ncols() == nx
            && b.nrows() == nx
            && b.ncols() == n
            && c.nrows() == n
            && c.ncols() == nx
            && d.ncols() == n
            && n > 0;
        if !ok {
            return Err(Error::Dimension(format!(
                "state-space shapes A {}x{}, B {}x{}, C {}x{}, D {}x{} are inconsistent",
                a.nrows(),
                a.ncols(),
                b.nrows(),
                b.ncols(),
                c.nrows(),
                c.ncols(),
                d.nrows(),
                d.ncols()
            )));
        }
        let finite = [&a, &b, &c, &d].iter().all(|m| m.iter().all(|x| x.is_finite()));
        if !finite {
            return Err(Error::InvalidModel("state-space matrices have non-finite entries".into()));
        }
        Ok(Self { a, b, c, d })
    }

    /// A static gain with no states.
    pub fn static_gain(d: DMatrix<f64>) -> Result<Self> {
        let n = d.nrows();
        Self::new(DMatrix::zeros(0, 0), DMatrix::zeros(0, n), DMatrix::zeros(n, 0), d)
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }
    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }
    pub fn c(&self) -> &DMatrix<f64> {
        &self.c
    }
    pub fn d(&self) -> &DMatrix<f64> {
        &self.d
    }

    fn eval(&self, s: Complex64) -> Option<DMatrix<Complex64>> {
        let cx = |m: &DMatrix<f64>| m.map(|x| Complex64::new(x, 0.0));
        let d = cx(&self.d);
        let nx = self.a.nrows();
        if nx == 0 {
            return Some(d);
        }
        let si_a = DMatrix::<Complex64>::identity(nx, nx) * s - cx(&self.a);
        let x = si_a.lu().solve(&cx(&self.b))?;
        Some(cx(&self.c) * x + d)
    }
}

/// One entry `num(s)/den(s)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Rational {
    pub num: Poly,
    pub den: Poly,
}

impl Rational {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidModel("denominator polynomial is zero".into()));
        }
        if !num.is_finite() || !den.is_finite() {
            return Err(Error::InvalidModel("polynomial has non-finite coefficients".into()));
        }
        Ok(Self { num, den })
    }

    pub fn constant(c: f64) -> Self {
        Self {
            num: Poly::constant(c),
            den: Poly::constant(1.0),
        }
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.num.eval(s) / self.den.eval(s)
    }

    pub fn is_proper(&self) -> bool {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => true,
            (Some(n), Some(d)) => n <= d,
            (Some(_), None) => false,
        }
    }
}

/// Square matrix of rational entries.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMatrix {
    entries: Vec<Vec<Rational>>,
}

impl RationalMatrix {
    pub fn new(entries: Vec<Vec<Rational>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 || entries.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("rational entries must form a non-empty square array".into()));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    fn eval(&self, s: Complex64) -> DMatrix<Complex64> {
        let n = self.entries.len();
        DMatrix::from_fn(n, n, |i, j| self.entries[i][j].eval(s))
    }
}

/// Frequency samples `(ω, G(jω))` with strictly increasing `ω ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledResponse {
    omegas: Vec<f64>,
    values: Vec<ComplexMatrix>,
}

impl SampledResponse {
    pub fn new(omegas: Vec<f64>, values: Vec<ComplexMatrix>) -> Result<Self> {
        if omegas.len() != values.len() {
            return Err(Error::Dimension("sample count differs from frequency count".into()));
        }
        if omegas.len() < 2 {
            return Err(Error::InvalidModel("sampled response needs at least two samples".into()));
        }
        if omegas.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidModel("sample frequencies must be finite and nonnegative".into()));
        }
        if omegas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidModel("sample frequencies must be strictly increasing".into()));
        }
        let n = values[0].dim();
        if values.iter().any(|v| v.dim() != n) {
            return Err(Error::Dimension("samples have differing dimensions".into()));
        }
        Ok(Self { omegas, values })
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn values(&self) -> &[ComplexMatrix] {
        &self.values
    }

    fn eval(&self, omega: f64) -> Result<DMatrix<Complex64>> {
        let (lo, hi) = (self.omegas[0], *self.omegas.last().unwrap());
        if !(lo..=hi).contains(&omega) {
            return Err(Error::OutOfRange { omega, min: lo, max: hi });
        }
        let k = self.omegas.partition_point(|&w| w <= omega);
        if k > 0 && self.omegas[k - 1] == omega {
            return Ok(self.values[k - 1].inner().clone());
        }
        let (w0, w1) = (self.omegas[k - 1], self.omegas[k]);
        let t = (omega - w0) / (w1 - w0);
        let (m0, m1) = (self.values[k - 1].inner(), self.values[k].inner());
        Ok(m0.zip_map(m1, |a, b| a + (b - a) * t))
    }
}

/// An n×n LTI model in one of three representations.
#[derive(Clone, Debug, PartialEq)]
pub enum TransferMatrixModel {
    StateSpace(StateSpace),
    Rational(RationalMatrix),
    Sampled(SampledResponse),
}

/// Outcome of the stable-proper membership test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Member,
    NotMember,
    Indeterminate,
}

/// Membership verdict with a human-readable reason.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityCheck {
    pub status: Membership,
    pub diagnostic: String,
}

impl StabilityCheck {
    pub fn member(diagnostic: impl Into<String>) -> Self {
        Self {
            status: Membership::Member,
            diagnostic: diagnostic.into(),
        }
    }
    pub fn not_member(diagnostic: impl Into<String>) -> Self {
        Self {
            status: Membership::NotMember,
            diagnostic: diagnostic.into(),
        }
    }
    pub fn indeterminate(diagnostic: impl Into<String>) -> Self {
        Self {
            status: Membership::Indeterminate,
            diagnostic: diagnostic.into(),
        }
    }

    /// Worst-case combination: any failure dominates, then any indeterminate.
    pub fn combine(checks: impl IntoIterator<Item = StabilityCheck>) -> Self {
        let checks: Vec<_> = checks.into_iter().collect();
        let pick = |s: Membership| checks.iter().find(|c| c.status == s).cloned();
        pick(Membership::NotMember)
            .or_else(|| pick(Membership::Indeterminate))
            .unwrap_or_else(|| StabilityCheck::member("all parts are stable and proper"))
    }
}

impl TransferMatrixModel {
    pub fn dim(&self) -> usize {
        match self {
            Self::StateSpace(ss) => ss.d.nrows(),
            Self::Rational(r) => r.entries.len(),
            Self::Sampled(s) => s.values[0].dim(),
        }
    }

    /// Constant model `G(s) = g` with real entries.
    pub fn constant(g: &DMatrix<f64>) -> Result<Self> {
        let n = g.nrows();
        if g.ncols() != n {
            return Err(Error::Dimension("constant gain must be square".into()));
        }
        let entries = (0..n)
            .map(|i| (0..n).map(|j| Rational::constant(g[(i, j)])).collect())
            .collect();
        Ok(Self::Rational(RationalMatrix::new(entries)?))
    }

    /// `G(jω)` for `ω ≥ 0`.
    pub fn evaluate(&self, omega: f64) -> Result<ComplexMatrix> {
        if !(omega >= 0.0) || !omega.is_finite() {
            return Err(Error::InvalidInput(format!(
                "frequency must be finite and nonnegative, got {omega}"
            )));
        }
        self.evaluate_s(Complex64::new(0.0, omega))
    }

    /// `G(s)` at an arbitrary complex point.
    ///
    /// Sampled models only support the imaginary axis; negative frequencies use
    /// conjugate symmetry.
    pub fn evaluate_s(&self, s: Complex64) -> Result<ComplexMatrix> {
        let m = match self {
            Self::StateSpace(ss) => ss.eval(s).ok_or_else(|| Error::Evaluation {
                omega: s.im,
                reason: "sI - A is singular".into(),
            })?,
            Self::Rational(r) => r.eval(s),
            Self::Sampled(sr) => {
                if s.re != 0.0 {
                    return Err(Error::InvalidInput(
                        "sampled models are only defined on the imaginary axis".into(),
                    ));
                }
                if s.im < 0.0 {
                    sr.eval(-s.im)?.map(|z| z.conj())
                } else {
                    sr.eval(s.im)?
                }
            }
        };
        ComplexMatrix::new(m).map_err(|_| Error::Evaluation {
            omega: s.im,
            reason: "response is not finite (pole on the evaluation point?)".into(),
        })
    }

    /// Tests membership in the stable proper rational class.
    ///
    /// No minimal realization is attempted: an unstable mode cancelled by a zero
    /// still counts as unstable.
    pub fn is_rh_infinity(&self) -> StabilityCheck {
        match self {
            Self::StateSpace(ss) => {
                if ss.a.nrows() == 0 {
                    return StabilityCheck::member("static gain");
                }
                let eig = ss.a.clone().complex_eigenvalues();
                worst_pole(eig.iter().copied(), "state matrix eigenvalue")
            }
            Self::Rational(r) => {
                for (i, row) in r.entries.iter().enumerate() {
                    for (j, e) in row.iter().enumerate() {
                        if !e.is_proper() {
                            return StabilityCheck::not_member(format!("entry ({i},{j}) is improper"));
                        }
                        let check = worst_pole(e.den.roots().into_iter(), "denominator root");
                        if check.status != Membership::Member {
                            return StabilityCheck {
                                diagnostic: format!("entry ({i},{j}): {}", check.diagnostic),
                                ..check
                            };
                        }
                    }
                }
                StabilityCheck::member("all denominator roots in the open left half-plane; proper")
            }
            Self::Sampled(_) => StabilityCheck::indeterminate("frequency samples cannot be checked for stability"),
        }
    }
}

fn worst_pole(poles: impl Iterator<Item = Complex64>, what: &str) -> StabilityCheck {
    let worst = poles.max_by(|a, b| a.re.total_cmp(&b.re));
    match worst {
        None => StabilityCheck::member("no poles"),
        Some(p) if p.re < -TOL_STAB => StabilityCheck::member(format!("rightmost {what} {p}")),
        Some(p) => StabilityCheck::not_member(format!("{what} {p} is not in the open left half-plane")),
    }
}
