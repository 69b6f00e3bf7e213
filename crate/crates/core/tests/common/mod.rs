//! Random model generators and independent reference computations shared by
//! the integration suites.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use srgcert::lti::{ComplexMatrix, Poly, Rational, RationalMatrix, StateSpace, TransferMatrixModel};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn normal<R: Rng>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Entries `N(0,1) + jN(0,1)`.
pub fn complex_matrix<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let m = DMatrix::from_fn(n, n, |_, _| c(normal(rng), normal(rng)));
    ComplexMatrix::new(m).unwrap()
}

/// `num/den` with coefficients in descending powers, as a 1×1 model.
pub fn siso(num: &[f64], den: &[f64]) -> TransferMatrixModel {
    let r = Rational::new(Poly::new(num.to_vec()), Poly::new(den.to_vec())).unwrap();
    TransferMatrixModel::Rational(RationalMatrix::new(vec![vec![r]]).unwrap())
}

/// Horner evaluation, kept separate from the library's polynomial code.
pub fn horner(coeffs: &[f64], s: Complex64) -> Complex64 {
    coeffs.iter().fold(c(0.0, 0.0), |acc, &a| acc * s + a)
}

/// A stable first- or second-order SISO transfer function `(num, den)`.
pub fn stable_siso<R: Rng>(rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    if rng.random_bool(0.5) {
        let a = rng.random_range(0.05..20.0);
        (vec![rng.random_range(-5.0..5.0), rng.random_range(-20.0..20.0)], vec![1.0, a])
    } else {
        let wn: f64 = rng.random_range(0.1..30.0);
        let zeta = rng.random_range(0.05..2.0);
        (
            vec![rng.random_range(-5.0..5.0), rng.random_range(-20.0..20.0) * wn],
            vec![1.0, 2.0 * zeta * wn, wn * wn],
        )
    }
}

/// Random Hurwitz matrix: `M − (α(M) + margin)·I`.
pub fn hurwitz<R: Rng>(rng: &mut R, n: usize, margin: f64) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| normal(rng));
    let alpha = m
        .clone()
        .complex_eigenvalues()
        .iter()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max);
    m - DMatrix::identity(n, n) * (alpha + margin)
}

pub fn max_real_eigenvalue(a: &DMatrix<f64>) -> f64 {
    a.clone()
        .complex_eigenvalues()
        .iter()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Stable 2×2 state-space model with `D = N + shift·I`.
pub fn stable_mimo<R: Rng>(rng: &mut R, states: usize, shift: f64, gain: f64) -> StateSpace {
    let margin = rng.random_range(0.1..2.0);
    let a = hurwitz(rng, states, margin);
    let b = DMatrix::from_fn(states, 2, |_, _| gain * normal(rng));
    let cm = DMatrix::from_fn(2, states, |_, _| gain * normal(rng));
    let d = DMatrix::from_fn(2, 2, |_, _| normal(rng)) + DMatrix::identity(2, 2) * shift;
    StateSpace::new(a, b, cm, d).unwrap()
}

/// State-space inverse `(A − BD⁻¹C, BD⁻¹, −D⁻¹C, D⁻¹)`; `None` when `D` is
/// badly conditioned or the inverse is not stable.
pub fn stable_inverse(ss: &StateSpace) -> Option<StateSpace> {
    let d = ss.d();
    let svd = d.clone().svd(false, false);
    let s = &svd.singular_values;
    if s.min() < 0.05 * s.max() {
        return None;
    }
    let di = d.clone().try_inverse()?;
    let a = ss.a() - ss.b() * &di * ss.c();
    if max_real_eigenvalue(&a) > -0.05 {
        return None;
    }
    StateSpace::new(a, ss.b() * &di, -(&di * ss.c()), di).ok()
}

/// `C(jωI − A)⁻¹B + D` by a dense solve.
pub fn eval_state_space(ss: &StateSpace, omega: f64) -> DMatrix<Complex64> {
    let n = ss.a().nrows();
    let cplx = |m: &DMatrix<f64>| m.map(|x| c(x, 0.0));
    let lhs = DMatrix::<Complex64>::identity(n, n) * c(0.0, omega) - cplx(ss.a());
    let x = lhs.lu().solve(&cplx(ss.b())).unwrap();
    cplx(ss.c()) * x + cplx(ss.d())
}

pub fn log_omegas(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64))
        .collect()
}
