use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::region::SrgRegion;
use crate::error::Result;
use crate::lti::ComplexMatrix;
use crate::numrange::{numerical_range_with, support_corner, RangeOptions, RangeShape};

/// Resolution controls for [`srg_of_matrix_with`]. Tolerances are relative to `‖A‖_F`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SrgOptions {
    pub range: RangeOptions,
    /// Maximum deviation of a mapped edge from its chord.
    pub tol_z: f64,
    /// Maximum distance between consecutive boundary points.
    pub max_chord: f64,
}

impl Default for SrgOptions {
    fn default() -> Self {
        Self {
            range: RangeOptions {
                tol: 1e-6,
                ..RangeOptions::default()
            },
            tol_z: 1e-7,
            max_chord: 1e-2,
        }
    }
}

impl SrgOptions {
    pub fn with_support(n_support: usize) -> Self {
        Self {
            range: RangeOptions {
                n_support,
                ..Self::default().range
            },
            ..Self::default()
        }
    }
}

/// A point of the joint range stored as `(a, g)` with `g = b − a²`, so the
/// lift `a + j√g` does not cancel near the parabola `b = a²`.
#[derive(Clone, Copy, Debug)]
struct Pt {
    a: f64,
    g: f64,
}

impl Pt {
    fn naive(w: Complex64) -> Self {
        Self {
            a: w.re,
            g: w.im - w.re * w.re,
        }
    }

    /// Exact gap of `u` for the unit vector `u`: `b − a² = (Im uᴴAu)² + ‖Au − (uᴴAu)u‖²`.
    fn of_vector(an: &DMatrix<Complex64>, u: &DVector<Complex64>) -> Self {
        let au = an * u;
        let q = u.dotc(&au);
        let residual = (au - u * q).norm_squared();
        Self {
            a: q.re,
            g: q.im * q.im + residual,
        }
    }

    fn lift(self) -> Complex64 {
        Complex64::new(self.a, self.g.max(0.0).sqrt())
    }

    /// Point at `t` on the chord to `q`; `g` is quadratic along a line in `(a, b)`.
    fn lerp(self, q: Self, t: f64) -> Self {
        let da = self.a - q.a;
        Self {
            a: self.a + t * (q.a - self.a),
            g: (1.0 - t) * self.g + t * q.g + t * (1.0 - t) * da * da,
        }
    }

    /// Quadratic Bézier in `(a, b)` evaluated without cancellation:
    /// `g(t) = Σ Bᵢgᵢ + Σ_{i<j} BᵢBⱼ(aᵢ − aⱼ)²`.
    fn bezier(p: [Self; 3], t: f64) -> Self {
        let s = 1.0 - t;
        let w = [s * s, 2.0 * s * t, t * t];
        let a = w[0] * p[0].a + w[1] * p[1].a + w[2] * p[2].a;
        let mut g = w[0] * p[0].g + w[1] * p[1].g + w[2] * p[2].g;
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let d = p[i].a - p[j].a;
            g += w[i] * w[j] * d * d;
        }
        Self { a, g }
    }
}

const MAX_EDGE_DEPTH: u32 = 60;

/// Appends the image of the segment `[p, q]` (excluding `q`) with adaptive subdivision.
fn map_edge(p: Pt, q: Pt, opts: &SrgOptions, out: &mut Vec<Complex64>) {
    map_curve(&|t| p.lerp(q, t), opts, out);
}

/// Appends the image of the quadratic Bézier arc `p → q` with control point `c`
/// (excluding `q`). With `c` at the corner of the supporting lines, the arc
/// leaves and enters tangentially to the range boundary.
fn map_arc(p: Pt, c: Pt, q: Pt, opts: &SrgOptions, out: &mut Vec<Complex64>) {
    map_curve(&|t| Pt::bezier([p, c, q], t), opts, out);
}

fn map_curve(f: &dyn Fn(f64) -> Pt, opts: &SrgOptions, out: &mut Vec<Complex64>) {
    let (z0, z1) = (f(0.0).lift(), f(1.0).lift());
    out.push(z0);
    subdivide(f, 0.0, 1.0, z0, z1, opts, 0, out);
}

#[allow(clippy::too_many_arguments)]
fn subdivide(
    f: &dyn Fn(f64) -> Pt,
    t0: f64,
    t1: f64,
    z0: Complex64,
    z1: Complex64,
    opts: &SrgOptions,
    depth: u32,
    out: &mut Vec<Complex64>,
) {
    if depth >= MAX_EDGE_DEPTH {
        return;
    }
    let tm = 0.5 * (t0 + t1);
    let zm = f(tm).lift();
    let bow = (zm - 0.5 * (z0 + z1)).norm();
    if bow <= opts.tol_z && (z1 - z0).norm() <= opts.max_chord {
        return;
    }
    subdivide(f, t0, tm, z0, zm, opts, depth + 1, out);
    out.push(zm);
    subdivide(f, tm, t1, zm, z1, opts, depth + 1, out);
}

/// SRG of a square matrix with `n_support` initial support angles (at least 8).
pub fn srg_of_matrix(a: &ComplexMatrix, n_support: usize) -> Result<SrgRegion> {
    srg_of_matrix_with(a, &SrgOptions::with_support(n_support))
}

/// SRG of a square matrix.
///
/// With `H = (A + Aᴴ)/2` and `K = AᴴA`, every unit `u` yields the pair
/// `(uᴴHu, uᴴKu)`; the set of pairs is the numerical range of `H + jK`, and the
/// SRG is its image under `(a, b) ↦ a ± j√(b − a²)`.
pub fn srg_of_matrix_with(a: &ComplexMatrix, opts: &SrgOptions) -> Result<SrgRegion> {
    let n = a.dim();
    if n == 1 {
        return Ok(SrgRegion::point(a.get(0, 0)));
    }
    let scale = a.inner().norm();
    if scale == 0.0 {
        return Ok(SrgRegion::empty());
    }
    let an = a.inner() / Complex64::new(scale, 0.0);
    let h = (&an + an.adjoint()) * Complex64::new(0.5, 0.0);
    let k = an.adjoint() * &an;
    let t: DMatrix<Complex64> = h + k * Complex64::new(0.0, 1.0);
    // A real eigenvalue λ puts the point (λ, λ²) on the parabola b = a², where
    // the range touches it tangentially; sampling that support direction makes
    // the SRG meet the real axis exactly instead of to within the sweep tolerance.
    let touch: Vec<f64> = an
        .eigenvalues()
        .map(|ev| {
            ev.iter()
                .filter(|l| l.im.abs() <= 1e-6)
                .map(|l| (-1.0f64).atan2(2.0 * l.re))
                .collect()
        })
        .unwrap_or_default();
    let range = numerical_range_with(&t, &opts.range, &touch)?;
    let exact: Vec<Pt> = range.support.iter().map(|s| Pt::of_vector(&an, &s.vector)).collect();
    let nearest = |w: Complex64| {
        let (i, _) = range
            .support
            .iter()
            .enumerate()
            .min_by(|x, y| (x.1.point - w).norm().total_cmp(&(y.1.point - w).norm()))
            .expect("support is non-empty");
        exact[i]
    };

    let region = match range.shape {
        RangeShape::Point(_) => {
            let m = exact.len() as f64;
            let a = exact.iter().map(|p| p.a).sum::<f64>() / m;
            let g = exact.iter().map(|p| p.g).sum::<f64>() / m;
            SrgRegion::point(Pt { a, g }.lift())
        }
        RangeShape::Segment(e1, e2) => {
            let (e1, e2) = if e1.re <= e2.re { (e1, e2) } else { (e2, e1) };
            let (p1, p2) = (nearest(e1), nearest(e2));
            // A single arc is cheap; refine it well past `tol_z` because
            // downstream maps resample along its chords.
            let fine = SrgOptions { tol_z: 1e-2 * opts.tol_z, ..*opts };
            let mut pts = Vec::new();
            map_edge(p1, p2, &fine, &mut pts);
            pts.push(p2.lift());
            SrgRegion::curve(pts)
        }
        RangeShape::Region => {
            // Tangent Bézier arcs between consecutive support points.
            let sp = &range.support;
            let mut pts = Vec::with_capacity(8 * sp.len());
            for i in 0..sp.len() {
                let j = (i + 1) % sp.len();
                let c = support_corner(&sp[i], &sp[j]);
                if c == sp[i].point || c == sp[j].point {
                    map_edge(exact[i], exact[j], opts, &mut pts);
                } else {
                    map_arc(exact[i], Pt::naive(c), exact[j], opts, &mut pts);
                }
            }
            SrgRegion::polygon(pts)
        }
    };
    Ok(region.scaled(scale))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn real_eigenvalue_touches_the_axis() {
        // Non-normal with eigenvalues −1 and 2: the SRG reaches both exactly.
        let a = ComplexMatrix::from_real_rows(&[&[-1.0, 3.0], &[0.0, 2.0]]);
        let r = srg_of_matrix(&a, 256).unwrap();
        for target in [-1.0, 2.0] {
            let d = r.boundary_upper().iter().map(|z| (z - c(target, 0.0)).norm()).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-12, "{target}: {d:e}");
        }
    }

    #[test]
    fn identity_is_a_single_point() {
        let r = srg_of_matrix(&ComplexMatrix::identity(2), 256).unwrap();
        assert_eq!(r.boundary_upper().len(), 1);
        assert!((r.boundary_upper()[0] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn diagonal_gives_circle_between_eigenvalues() {
        let a = ComplexMatrix::diagonal(&[c(2.0, 0.0), c(3.0, 0.0)]);
        let r = srg_of_matrix(&a, 256).unwrap();
        assert!(!r.is_filled());
        for z in r.boundary_upper() {
            let dev = ((z.re - 2.5).powi(2) + z.im * z.im).sqrt() - 0.5;
            assert!(dev.abs() < 1e-12, "{z}");
        }
        let pts = r.boundary_upper();
        let max_chord = pts.windows(2).map(|w| (w[1] - w[0]).norm()).fold(0.0, f64::max);
        assert!(max_chord <= 1e-3 * a.inner().norm() + 1e-15);
        assert!((pts[0] - c(2.0, 0.0)).norm() < 1e-12 && (pts[pts.len() - 1] - c(3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn scalar_input() {
        let a = ComplexMatrix::scalar(1, c(0.5, -0.5));
        let r = srg_of_matrix(&a, 8).unwrap();
        assert_eq!(r.boundary_upper(), &[c(0.5, 0.5)]);
    }

    #[test]
    fn zero_matrix_is_empty() {
        assert!(srg_of_matrix(&ComplexMatrix::zeros(3), 16).unwrap().is_empty());
    }

    #[test]
    fn nilpotent_block_region() {
        // A = [[0, 1], [0, 0]]: for unit u = (x, y), Au = (y, 0), so the gain ranges
        // over [0, 1] and the region is filled.
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let r = srg_of_matrix(&a, 64).unwrap();
        assert!(r.is_filled());
        assert!(r.max_modulus() <= 1.0 + 1e-6);
    }
}
