//! Boundary of the numerical range `{uᴴTu : ‖u‖ = 1}` by support-angle sweep.
//!
//! For each angle `φ` the top eigenvector of the Hermitian part of `e^{-jφ}T`
//! gives a boundary point and a supporting line. Angles are bisected until the
//! gap between the inner polygon (support points) and the outer polygon
//! (support-line corners) is below tolerance.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Sweep parameters. `tol` is relative to the matrix scale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RangeOptions {
    pub n_support: usize,
    pub tol: f64,
    pub max_depth: u32,
}

impl Default for RangeOptions {
    fn default() -> Self {
        Self {
            n_support: 256,
            tol: 1e-8,
            max_depth: 48,
        }
    }
}

/// A boundary point together with its supporting line `Re(e^{-jφ} z) = value`.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportPoint {
    pub phi: f64,
    pub value: f64,
    pub point: Complex64,
    /// Unit vector `u` with `uᴴTu = point`.
    pub vector: DVector<Complex64>,
}

/// Geometric type of the range.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RangeShape {
    Point(Complex64),
    Segment(Complex64, Complex64),
    /// A convex set with non-empty interior.
    Region,
}

#[derive(Clone, Debug)]
pub struct NumericalRange {
    /// Support points ordered by increasing angle.
    pub support: Vec<SupportPoint>,
    /// Counter-clockwise polygon containing the range, vertices alternating
    /// between support points and support-line corners.
    pub outer: Vec<Complex64>,
    pub shape: RangeShape,
    /// Frobenius norm of the input, used for relative tolerances.
    pub scale: f64,
}

impl NumericalRange {
    /// Smallest support value; `≤ 0` iff a line through the origin bounds the range.
    pub fn min_support_value(&self) -> (f64, f64) {
        self.support
            .iter()
            .map(|s| (s.value, s.phi))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .unwrap_or((0.0, 0.0))
    }
}

struct Sweep {
    h: DMatrix<Complex64>,
    k: DMatrix<Complex64>,
    t: DMatrix<Complex64>,
}

impl Sweep {
    fn support(&self, phi: f64) -> Result<SupportPoint> {
        let (s, c) = phi.sin_cos();
        let hp = &self.h * Complex64::new(c, 0.0) + &self.k * Complex64::new(s, 0.0);
        let u = top_eigenvector(&hp).ok_or(Error::EigenFailure { phi })?;
        let mut u = DVector::from_vec(u);
        u.unscale_mut(u.norm());
        let point = u.dotc(&(&self.t * &u));
        let value = (Complex64::from_polar(1.0, -phi) * point).re;
        Ok(SupportPoint {
            phi,
            value,
            point,
            vector: u,
        })
    }
}

fn top_eigenvector(h: &DMatrix<Complex64>) -> Option<Vec<Complex64>> {
    let n = h.nrows();
    if n == 1 {
        return Some(vec![Complex64::new(1.0, 0.0)]);
    }
    if n == 2 {
        let (a, d, b) = (h[(0, 0)].re, h[(1, 1)].re, h[(0, 1)]);
        let half = 0.5 * (a - d);
        let lam = 0.5 * (a + d) + half.hypot(b.norm());
        let v1 = [b, Complex64::new(lam - a, 0.0)];
        let v2 = [Complex64::new(lam - d, 0.0), b.conj()];
        let n1 = v1[0].norm_sqr() + v1[1].norm_sqr();
        let n2 = v2[0].norm_sqr() + v2[1].norm_sqr();
        let v = if n1 >= n2 { v1 } else { v2 };
        if n1.max(n2) == 0.0 {
            return Some(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        }
        return Some(v.to_vec());
    }
    let eig = h.clone().try_symmetric_eigen(f64::EPSILON, 10_000)?;
    let (imax, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))?;
    Some(eig.eigenvectors.column(imax).iter().copied().collect())
}

/// Intersection of the supporting lines of two consecutive support points.
pub fn support_corner(a: &SupportPoint, b: &SupportPoint) -> Complex64 {
    let d = b.point - a.point;
    let det = (b.phi - a.phi).sin();
    if d.norm() == 0.0 {
        return a.point;
    }
    if det.abs() < 1e-14 {
        return 0.5 * (a.point + b.point);
    }
    let (s1, c1) = a.phi.sin_cos();
    let (s2, c2) = b.phi.sin_cos();
    let x = (a.value * s2 - b.value * s1) / det;
    let y = (c1 * b.value - c2 * a.value) / det;
    Complex64::new(x, y)
}

fn gap(a: &SupportPoint, b: &SupportPoint, c: Complex64) -> f64 {
    let d = b.point - a.point;
    let len = d.norm();
    if len == 0.0 {
        return (c - a.point).norm();
    }
    let e = c - a.point;
    (d.re * e.im - d.im * e.re).abs() / len
}

/// Computes the numerical range boundary of a square complex matrix.
pub fn numerical_range(t: &DMatrix<Complex64>, opts: &RangeOptions) -> Result<NumericalRange> {
    numerical_range_with(t, opts, &[])
}

/// [`numerical_range`] with support directions `extra` (angles in radians)
/// sampled in addition to the uniform ones.
pub fn numerical_range_with(t: &DMatrix<Complex64>, opts: &RangeOptions, extra: &[f64]) -> Result<NumericalRange> {
    let n = t.nrows();
    if n == 0 || t.ncols() != n {
        return Err(Error::Dimension("numerical range needs a non-empty square matrix".into()));
    }
    if opts.n_support < 8 {
        return Err(Error::InvalidInput("n_support must be at least 8".into()));
    }
    let scale = t.norm();
    if scale == 0.0 || n == 1 {
        let z = t[(0, 0)] * if n == 1 { 1.0 } else { 0.0 };
        return Ok(single_point(z, scale, n));
    }
    let tn = t / Complex64::new(scale, 0.0);
    let half = Complex64::new(0.5, 0.0);
    let sweep = Sweep {
        h: (&tn + tn.adjoint()) * half,
        k: (&tn - tn.adjoint()) * Complex64::new(0.0, -0.5),
        t: tn,
    };

    let mut angles: Vec<f64> = (0..opts.n_support)
        .map(|i| TAU * i as f64 / opts.n_support as f64)
        .chain(extra.iter().map(|phi| phi.rem_euclid(TAU)))
        .collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup();
    let base: Vec<SupportPoint> = angles.into_iter().map(|phi| sweep.support(phi)).collect::<Result<_>>()?;

    let mut support = Vec::with_capacity(base.len() * 4);
    for i in 0..base.len() {
        let a = &base[i];
        let mut b = base[(i + 1) % base.len()].clone();
        if i + 1 == base.len() {
            b.phi += TAU;
        }
        support.push(a.clone());
        refine(&sweep, a, &b, opts, 0, &mut support)?;
    }

    let shape = classify(&support);
    let mut outer = Vec::with_capacity(2 * support.len());
    for i in 0..support.len() {
        let a = &support[i];
        let b = &support[(i + 1) % support.len()];
        push_distinct(&mut outer, a.point);
        push_distinct(&mut outer, support_corner(a, b));
    }
    while outer.len() > 1 && outer[0] == outer[outer.len() - 1] {
        outer.pop();
    }

    let rescale = |z: Complex64| z * scale;
    for s in &mut support {
        s.point = rescale(s.point);
        s.value *= scale;
        s.phi = s.phi.rem_euclid(TAU);
    }
    outer.iter_mut().for_each(|z| *z = rescale(*z));
    let shape = match shape {
        RangeShape::Point(z) => RangeShape::Point(rescale(z)),
        RangeShape::Segment(a, b) => RangeShape::Segment(rescale(a), rescale(b)),
        RangeShape::Region => RangeShape::Region,
    };
    Ok(NumericalRange {
        support,
        outer,
        shape,
        scale,
    })
}

fn single_point(z: Complex64, scale: f64, n: usize) -> NumericalRange {
    let support = (0..8)
        .map(|i| {
            let phi = TAU * i as f64 / 8.0;
            SupportPoint {
                phi,
                value: (Complex64::from_polar(1.0, -phi) * z).re,
                point: z,
                vector: DVector::from_fn(n, |i, _| Complex64::new(if i == 0 { 1.0 } else { 0.0 }, 0.0)),
            }
        })
        .collect();
    NumericalRange {
        support,
        outer: vec![z],
        shape: RangeShape::Point(z),
        scale,
    }
}

fn push_distinct(v: &mut Vec<Complex64>, z: Complex64) {
    if v.last() != Some(&z) {
        v.push(z);
    }
}

fn refine(
    sweep: &Sweep,
    a: &SupportPoint,
    b: &SupportPoint,
    opts: &RangeOptions,
    depth: u32,
    out: &mut Vec<SupportPoint>,
) -> Result<()> {
    if depth >= opts.max_depth || gap(a, b, support_corner(a, b)) <= opts.tol {
        return Ok(());
    }
    let m = sweep.support(0.5 * (a.phi + b.phi))?;
    refine(sweep, a, &m, opts, depth + 1, out)?;
    out.push(m.clone());
    refine(sweep, &m, b, opts, depth + 1, out)
}

/// Point / segment / region classification on normalized support points.
fn classify(support: &[SupportPoint]) -> RangeShape {
    let p0 = support[0].point;
    let far = |from: Complex64| {
        support
            .iter()
            .map(|s| s.point)
            .max_by(|x, y| (x - from).norm().total_cmp(&(y - from).norm()))
            .unwrap()
    };
    let e1 = far(p0);
    if (e1 - p0).norm() <= 1e-13 {
        let mean = support.iter().map(|s| s.point).sum::<Complex64>() / support.len() as f64;
        return RangeShape::Point(mean);
    }
    let e2 = far(e1);
    let d = e2 - e1;
    let len = d.norm();
    let off_line = support
        .iter()
        .map(|s| {
            let e = s.point - e1;
            (d.re * e.im - d.im * e.re).abs() / len
        })
        .fold(0.0, f64::max);
    if off_line <= 1e-12 {
        RangeShape::Segment(e1, e2)
    } else {
        RangeShape::Region
    }
}
