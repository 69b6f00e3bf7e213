//! Generalized Nyquist, small gain, small phase and passivity tests on a grid.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::report::{CriterionResult, Outcome, PointStatus, Precheck};
use crate::error::{Error, Result};
use crate::lti::{invert_at, ComplexMatrix, FrequencyGrid, FrequencyResponse, Membership};
use crate::numrange::{numerical_range, RangeOptions};

/// `|det(I + L)|` below this counts as a zero on the contour.
pub const DET_FLOOR: f64 = 1e-9;
/// Bisection continues while adjacent phase steps reach this size.
pub const PHASE_STEP: f64 = PI / 4.0;
/// A step this large after the bisection budget is spent is an error.
pub const PHASE_STEP_MAX: f64 = PI / 2.0;
const MAX_BISECTIONS: u32 = 40;

/// Principal value in `(−π, π]`.
fn wrap(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(TAU) - PI;
    if y == -PI {
        PI
    } else {
        y
    }
}

fn check_dims(a: &dyn FrequencyResponse, b: &dyn FrequencyResponse) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!("{0}x{0} and {1}x{1} responses", a.dim(), b.dim())));
    }
    Ok(())
}

fn eval_pair(
    yc: &dyn FrequencyResponse,
    zgrid: &dyn FrequencyResponse,
    grid: &FrequencyGrid,
) -> Result<Vec<(ComplexMatrix, ComplexMatrix)>> {
    check_dims(yc, zgrid)?;
    grid.omegas()
        .par_iter()
        .map(|&w| {
            let a = yc.response(w).map_err(|e| e.at_omega(w))?;
            let b = zgrid.response(w).map_err(|e| e.at_omega(w))?;
            Ok((a, b))
        })
        .collect()
}

fn prechecks(yc: &dyn FrequencyResponse, zgrid: &dyn FrequencyResponse) -> Vec<Precheck> {
    vec![
        Precheck {
            subject: "converter".into(),
            check: yc.stability(),
        },
        Precheck {
            subject: "grid impedance".into(),
            check: zgrid.stability(),
        },
    ]
}

/// Generalized Nyquist test of `det(I + Y_c·Z_grid)` over the mirrored grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GncResult {
    /// Grid points plus bisection points, increasing.
    pub omegas: Vec<f64>,
    pub det: Vec<Complex64>,
    /// Counter-clockwise encirclements of the origin over `ω ∈ (−∞, ∞)`;
    /// with stable open loops, `−winding` closed-loop poles lie in the right half-plane.
    pub winding: i64,
    pub min_abs_det: f64,
    pub stable: bool,
    pub prechecks: Vec<Precheck>,
    pub result: CriterionResult,
}

fn det_at(yc: &dyn FrequencyResponse, zgrid: &dyn FrequencyResponse, w: f64) -> Result<Complex64> {
    let a = yc.response(w).map_err(|e| e.at_omega(w))?;
    let b = zgrid.response(w).map_err(|e| e.at_omega(w))?;
    Ok((&ComplexMatrix::identity(a.dim()) + &(&a * &b)).determinant())
}

#[allow(clippy::too_many_arguments)]
fn bisect(
    f: &dyn Fn(f64) -> Result<Complex64>,
    w0: f64,
    d0: Complex64,
    w1: f64,
    d1: Complex64,
    depth: u32,
    out: &mut Vec<(f64, Complex64)>,
) -> Result<()> {
    if d0.norm() < DET_FLOOR || d1.norm() < DET_FLOOR {
        return Ok(());
    }
    let step = wrap(d1.arg() - d0.arg());
    if step.abs() < PHASE_STEP {
        return Ok(());
    }
    let wm = if w0 > 0.0 { (w0 * w1).sqrt() } else { 0.5 * (w0 + w1) };
    if depth >= MAX_BISECTIONS || wm <= w0 || wm >= w1 {
        if step.abs() > PHASE_STEP_MAX {
            return Err(Error::GridTooCoarse {
                omega_lo: w0,
                omega_hi: w1,
                step: step.abs(),
            });
        }
        return Ok(());
    }
    let dm = f(wm)?;
    bisect(f, w0, d0, wm, dm, depth + 1, out)?;
    out.push((wm, dm));
    bisect(f, wm, dm, w1, d1, depth + 1, out)
}

/// Rounded log-log slope of `|det|` over the last decade of the sampled band
/// (or the whole band when it is shorter).
fn growth_order(pts: &[(f64, Complex64)]) -> i32 {
    let (w1, d1) = pts[pts.len() - 1];
    let Some(&(w0, d0)) = pts.iter().rev().find(|p| p.0 > 0.0 && p.0 <= 0.1 * w1).or(pts.iter().find(|p| p.0 > 0.0))
    else {
        return 0;
    };
    if w0 >= w1 || d0.norm() == 0.0 || d1.norm() == 0.0 {
        return 0;
    }
    ((d1.norm() / d0.norm()).ln() / (w1 / w0).ln()).round() as i32
}

/// Winding number of `det(I + Y_c(jω)Z_grid(jω))` about 0, refined until phase
/// steps stay below π/4. Stable iff no determinant is below [`DET_FLOOR`] and
/// the winding number vanishes.
pub fn gnc_check(yc: &dyn FrequencyResponse, zgrid: &dyn FrequencyResponse, grid: &FrequencyGrid) -> Result<GncResult> {
    check_dims(yc, zgrid)?;
    let omegas = grid.omegas();
    let coarse: Vec<Complex64> = omegas.par_iter().map(|&w| det_at(yc, zgrid, w)).collect::<Result<_>>()?;
    let f = |w: f64| det_at(yc, zgrid, w);
    let pieces: Vec<Vec<(f64, Complex64)>> = (0..omegas.len().saturating_sub(1))
        .into_par_iter()
        .map(|k| {
            let mut out = Vec::new();
            bisect(&f, omegas[k], coarse[k], omegas[k + 1], coarse[k + 1], 0, &mut out)?;
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut pts = Vec::with_capacity(omegas.len());
    for k in 0..omegas.len() {
        pts.push((omegas[k], coarse[k]));
        if let Some(p) = pieces.get(k) {
            pts.extend_from_slice(p);
        }
    }
    let det: Vec<Complex64> = pts.iter().map(|p| p.1).collect();
    let min_abs_det = det.iter().map(|d| d.norm()).fold(f64::INFINITY, f64::min);

    let sweep: f64 = det.windows(2).map(|w| wrap(w[1].arg() - w[0].arg())).sum();
    let (first, last) = (det[0], det[det.len() - 1]);
    // Closing at ω → ∞: det ~ c·(jω)^m with c real, and the large arc of the
    // contour adds −mπ. Proper loops have m = 0.
    let m = growth_order(&pts);
    let lead = last / Complex64::new(0.0, pts[pts.len() - 1].0).powi(m);
    let target = if lead.re < 0.0 { PI } else { 0.0 } + f64::from(m) * FRAC_PI_2;
    let total = 2.0 * sweep + wrap(2.0 * first.arg()) + 2.0 * wrap(target - last.arg()) - f64::from(m) * PI;
    let winding = (total / TAU).round() as i64;
    let stable = min_abs_det >= DET_FLOOR && winding == 0;

    let checks = prechecks(yc, zgrid);
    let status: Vec<PointStatus> = coarse
        .iter()
        .map(|d| if d.norm() >= DET_FLOOR { PointStatus::Pass } else { PointStatus::Fail })
        .collect();
    let open_loop_unstable = checks.iter().any(|p| p.check.status == Membership::NotMember);
    let outcome = if open_loop_unstable {
        Outcome::Inapplicable
    } else if stable {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    let summary = format!(
        "winding {winding}, min |det| {min_abs_det:.6e}, {} evaluations{}",
        det.len(),
        if open_loop_unstable { "; open loop not stable" } else { "" }
    );
    let result = CriterionResult::with_outcome("gnc", grid, outcome, status, summary);
    Ok(GncResult {
        omegas: pts.iter().map(|p| p.0).collect(),
        det,
        winding,
        min_abs_det,
        stable,
        prechecks: checks,
        result,
    })
}

/// `σ_max(Y_c)·σ_max(Z_grid) < 1` at each frequency.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmallGainResult {
    pub gain_product: Vec<f64>,
    pub result: CriterionResult,
}

pub fn small_gain_check(
    yc: &dyn FrequencyResponse,
    zgrid: &dyn FrequencyResponse,
    grid: &FrequencyGrid,
) -> Result<SmallGainResult> {
    let pairs = eval_pair(yc, zgrid, grid)?;
    let gain_product: Vec<f64> = pairs.iter().map(|(a, b)| a.norm2() * b.norm2()).collect();
    let status = gain_product
        .iter()
        .map(|&g| if g < 1.0 { PointStatus::Pass } else { PointStatus::Fail })
        .collect();
    let worst = gain_product.iter().copied().fold(0.0, f64::max);
    let result = CriterionResult::new("small_gain", grid, status, format!("max gain product {worst:.6e}"));
    Ok(SmallGainResult { gain_product, result })
}

/// Phase spread of one matrix's numerical range.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseSpan {
    /// 0 is not an interior point of the numerical range.
    pub semi_sectorial: bool,
    /// Direction the phases are measured around, in `(−π, π]`.
    pub center: Option<f64>,
    pub alpha_max: Option<f64>,
    pub alpha_min: Option<f64>,
}

/// Phases of a matrix from the vertices of its numerical-range polygon.
///
/// Phases are measured within `(δ − π, δ + π]` around the direction `δ` opposite
/// the supporting line through the origin with the smallest support value; the
/// zero matrix has phases 0.
pub fn matrix_phases(a: &ComplexMatrix) -> Result<PhaseSpan> {
    let range = numerical_range(a.inner(), &RangeOptions::default())?;
    let scale = range.scale;
    let (h_min, phi) = range.min_support_value();
    if scale == 0.0 {
        return Ok(PhaseSpan {
            semi_sectorial: true,
            center: None,
            alpha_max: Some(0.0),
            alpha_min: Some(0.0),
        });
    }
    if h_min > 1e-10 * scale {
        return Ok(PhaseSpan {
            semi_sectorial: false,
            center: None,
            alpha_max: None,
            alpha_min: None,
        });
    }
    let delta = wrap(phi + PI);
    let angles: Vec<f64> = range
        .outer
        .iter()
        .filter(|z| z.norm() > 1e-12 * scale)
        .map(|z| delta + wrap(z.arg() - delta))
        .collect();
    let max = angles.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = angles.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(PhaseSpan {
        semi_sectorial: true,
        center: Some(delta),
        alpha_max: Some(max),
        alpha_min: Some(min),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmallPhaseResult {
    pub converter: Vec<PhaseSpan>,
    pub grid: Vec<PhaseSpan>,
    pub result: CriterionResult,
}

/// `α_max(Y_c) + α_max(Z_grid) < π` and `α_min(Y_c) + α_min(Z_grid) > −π`;
/// frequencies where either matrix is not semi-sectorial are inapplicable.
pub fn small_phase_check(
    yc: &dyn FrequencyResponse,
    zgrid: &dyn FrequencyResponse,
    grid: &FrequencyGrid,
) -> Result<SmallPhaseResult> {
    let pairs = eval_pair(yc, zgrid, grid)?;
    let spans: Vec<(PhaseSpan, PhaseSpan)> = pairs
        .par_iter()
        .map(|(a, b)| Ok((matrix_phases(a)?, matrix_phases(b)?)))
        .collect::<Result<_>>()?;
    let status: Vec<PointStatus> = spans
        .iter()
        .map(|(a, b)| match (a.alpha_max, a.alpha_min, b.alpha_max, b.alpha_min) {
            (Some(amax), Some(amin), Some(bmax), Some(bmin)) => {
                if amax + bmax < PI && amin + bmin > -PI {
                    PointStatus::Pass
                } else {
                    PointStatus::Fail
                }
            }
            _ => PointStatus::Inapplicable,
        })
        .collect();
    let n_inapp = status.iter().filter(|s| **s == PointStatus::Inapplicable).count();
    let result = CriterionResult::new(
        "small_phase",
        grid,
        status,
        format!("{n_inapp} of {} points not semi-sectorial", grid.len()),
    );
    let (converter, grid) = spans.into_iter().unzip();
    Ok(SmallPhaseResult { converter, grid, result })
}

/// `½·λ_min(G + Gᴴ)`.
pub fn ifp(g: &ComplexMatrix) -> f64 {
    let h: DMatrix<Complex64> = g.hermitian_part();
    h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// `½·λ_min(G⁻¹ + G⁻ᴴ)`, `None` when `G` is numerically singular.
pub fn ofp(g: &ComplexMatrix) -> Option<f64> {
    invert_at(g).ok().map(|inv| ifp(&inv))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PassivityResult {
    pub ifp_converter: Vec<f64>,
    pub ofp_converter: Vec<Option<f64>>,
    pub ifp_grid: Vec<f64>,
    pub ofp_grid: Vec<Option<f64>>,
    /// Largest available disjunct, `IFP(Y_c) + OFP(Z)` or `OFP(Y_c) + IFP(Z)`.
    pub margin: Vec<Option<f64>>,
    pub result: CriterionResult,
}

/// Passes at a frequency when `IFP(Y_c) + OFP(Z_grid) > 0` or `OFP(Y_c) + IFP(Z_grid) > 0`.
pub fn passivity_check(
    yc: &dyn FrequencyResponse,
    zgrid: &dyn FrequencyResponse,
    grid: &FrequencyGrid,
) -> Result<PassivityResult> {
    let pairs = eval_pair(yc, zgrid, grid)?;
    let ifp_converter: Vec<f64> = pairs.iter().map(|(a, _)| ifp(a)).collect();
    let ofp_converter: Vec<Option<f64>> = pairs.iter().map(|(a, _)| ofp(a)).collect();
    let ifp_grid: Vec<f64> = pairs.iter().map(|(_, b)| ifp(b)).collect();
    let ofp_grid: Vec<Option<f64>> = pairs.iter().map(|(_, b)| ofp(b)).collect();
    let mut margin = Vec::with_capacity(pairs.len());
    let mut status = Vec::with_capacity(pairs.len());
    for k in 0..pairs.len() {
        let first = ofp_grid[k].map(|o| ifp_converter[k] + o);
        let second = ofp_converter[k].map(|o| o + ifp_grid[k]);
        let best = match (first, second) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, y) => x.or(y),
        };
        margin.push(best);
        status.push(match best {
            Some(m) if m > 0.0 => PointStatus::Pass,
            _ if first.is_none() || second.is_none() => PointStatus::Inapplicable,
            _ => PointStatus::Fail,
        });
    }
    let worst = margin.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let result = CriterionResult::new("passivity", grid, status, format!("min passivity margin {worst:.6e}"));
    Ok(PassivityResult {
        ifp_converter,
        ofp_converter,
        ifp_grid,
        ofp_grid,
        margin,
        result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lti::{Constant, Poly, Rational, RationalMatrix, TransferMatrixModel};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn siso(num: Vec<f64>, den: Vec<f64>) -> TransferMatrixModel {
        let r = Rational::new(Poly::new(num), Poly::new(den)).unwrap();
        TransferMatrixModel::Rational(RationalMatrix::new(vec![vec![r]]).unwrap())
    }

    fn one() -> Constant {
        Constant(ComplexMatrix::identity(1))
    }

    fn log_grid() -> FrequencyGrid {
        FrequencyGrid::from_hz(1e-4, 1e3, 200, crate::lti::Spacing::Log).unwrap()
    }

    #[test]
    fn gnc_examples() {
        let zero = Constant(ComplexMatrix::zeros(2));
        let r = gnc_check(&Constant(ComplexMatrix::identity(2)), &zero, &log_grid()).unwrap();
        assert!(r.stable && r.winding == 0 && (r.min_abs_det - 1.0).abs() < 1e-15);

        let r = gnc_check(&siso(vec![-2.0], vec![1.0, 1.0]), &one(), &log_grid()).unwrap();
        assert_eq!(r.winding, -1);
        assert!(!r.stable);
        assert_eq!(r.result.outcome, Outcome::Fail);

        let r = gnc_check(&siso(vec![0.5], vec![1.0, 1.0]), &one(), &log_grid()).unwrap();
        assert_eq!(r.winding, 0);
        assert!(r.stable);
    }

    #[test]
    fn gnc_refines_fast_phase() {
        // A lightly damped resonance rotates the phase quickly between two points.
        let l = siso(vec![1.0], vec![1.0, 0.01, 1.0]);
        let grid = FrequencyGrid::from_omegas(vec![0.0, 0.9, 1.1, 100.0]).unwrap();
        let r = gnc_check(&l, &one(), &grid).unwrap();
        assert!(r.omegas.len() > 4);
        for w in r.det.windows(2) {
            assert!(wrap(w[1].arg() - w[0].arg()).abs() < PHASE_STEP_MAX);
        }
        // 1 + 1/(s² + 0.01s + 1) has roots with negative real part.
        assert!(r.stable);
    }

    #[test]
    fn gnc_improper_loop() {
        // 1 + (s + a) has its zero at −(1 + a); the loop grows like s.
        for (a, stable) in [(2.0, true), (-3.0, false)] {
            let r = gnc_check(&one(), &siso(vec![1.0, a], vec![1.0]), &log_grid()).unwrap();
            assert_eq!(r.stable, stable, "a = {a}, winding {}", r.winding);
        }
        // Second order: (s + 1)² + 4 has zeros at −1 ± 2j.
        let r = gnc_check(&one(), &siso(vec![1.0, 2.0, 4.0], vec![1.0]), &log_grid()).unwrap();
        assert!(r.stable, "winding {}", r.winding);
    }

    #[test]
    fn small_gain_examples() {
        let g = FrequencyGrid::from_omegas(vec![1.0]).unwrap();
        let half = Constant(ComplexMatrix::scalar(2, c(0.5, 0.0)));
        assert_eq!(small_gain_check(&half, &half, &g).unwrap().gain_product, vec![0.25]);
        let two = Constant(ComplexMatrix::scalar(2, c(2.0, 0.0)));
        let r = small_gain_check(&two, &Constant(ComplexMatrix::identity(2)), &g).unwrap();
        assert_eq!(r.result.outcome, Outcome::Fail);
    }

    #[test]
    fn phase_examples() {
        let p = matrix_phases(&ComplexMatrix::scalar(2, Complex64::from_polar(1.0, PI / 4.0))).unwrap();
        assert!((p.alpha_max.unwrap() - PI / 4.0).abs() < 1e-12);
        assert!((p.alpha_min.unwrap() - PI / 4.0).abs() < 1e-12);
        let p = matrix_phases(&ComplexMatrix::identity(2)).unwrap();
        assert!(p.alpha_max.unwrap().abs() < 1e-12);
        // diag(1, −1) + small coupling: 0 lies inside the numerical range.
        let m = ComplexMatrix::from_rows(&[&[c(1.0, 0.0), c(0.1, 0.2)], &[c(0.0, 0.1), c(-1.0, 0.0)]]);
        assert!(!matrix_phases(&m).unwrap().semi_sectorial);
        // Phases of −I sit at π rather than −π.
        let p = matrix_phases(&ComplexMatrix::scalar(2, c(-1.0, 0.0))).unwrap();
        assert!((p.alpha_max.unwrap() - PI).abs() < 1e-12);
    }

    #[test]
    fn small_phase_status() {
        let g = FrequencyGrid::from_omegas(vec![1.0]).unwrap();
        let i = Constant(ComplexMatrix::identity(2));
        assert_eq!(small_phase_check(&i, &i, &g).unwrap().result.outcome, Outcome::Pass);
        let m = Constant(ComplexMatrix::from_rows(&[&[c(1.0, 0.0), c(0.1, 0.2)], &[c(0.0, 0.1), c(-1.0, 0.0)]]));
        let r = small_phase_check(&m, &i, &g).unwrap();
        assert_eq!(r.result.outcome, Outcome::Inapplicable);
        assert_eq!(r.result.inapplicable_bands.len(), 1);
    }

    #[test]
    fn passivity_indices() {
        let i = ComplexMatrix::identity(2);
        assert!((ifp(&i) - 1.0).abs() < 1e-15 && (ofp(&i).unwrap() - 1.0).abs() < 1e-15);
        let d = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 3.0]]);
        assert!((ifp(&d) - 1.0).abs() < 1e-15);
        assert!((ofp(&d).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let j = ComplexMatrix::scalar(2, c(0.0, 1.0));
        assert!(ifp(&j).abs() < 1e-15);
        assert!(ofp(&ComplexMatrix::zeros(2)).is_none());

        let g = FrequencyGrid::from_omegas(vec![1.0]).unwrap();
        let r = passivity_check(&Constant(j), &Constant(ComplexMatrix::scalar(2, c(0.5, 0.0))), &g).unwrap();
        assert_eq!(r.result.outcome, Outcome::Pass);
        // First disjunct 0 + 2, second 0 + 0.5.
        assert!((r.margin[0].unwrap() - 2.0).abs() < 1e-15);
    }
}
