//! Constant power load `i = M·v/‖v‖²`, `M = [[p, q], [−q, p]]`, and its SRG bounds.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::srg::Disk;

pub type Vec2 = [f64; 2];

fn norm(v: Vec2) -> f64 {
    v[0].hypot(v[1])
}

/// Load powers and the minimum admissible voltage norm (per unit).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CplParams {
    pub p_c: f64,
    pub q_c: f64,
    pub v_min: f64,
}

impl CplParams {
    pub fn new(p_c: f64, q_c: f64, v_min: f64) -> Result<Self> {
        if !(p_c >= 0.0 && q_c >= 0.0 && p_c.is_finite() && q_c.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "load powers must be finite and nonnegative (p = {p_c}, q = {q_c})"
            )));
        }
        if !(v_min > 0.0 && v_min.is_finite()) {
            return Err(Error::InvalidInput(format!("v_min must be positive, got {v_min}")));
        }
        Ok(Self { p_c, q_c, v_min })
    }

    /// Largest singular value of `M`, `√(p² + q²)`.
    pub fn sigma_max(&self) -> f64 {
        self.p_c.hypot(self.q_c)
    }

    fn apply_m(&self, v: Vec2) -> Vec2 {
        [self.p_c * v[0] + self.q_c * v[1], -self.q_c * v[0] + self.p_c * v[1]]
    }
}

/// Load current at voltage `v`.
pub fn cpl_current(params: &CplParams, v: Vec2) -> Result<Vec2> {
    let n = norm(v);
    if !(n >= params.v_min) {
        return Err(Error::Domain(format!(
            "voltage norm {n} is below v_min = {}",
            params.v_min
        )));
    }
    let mv = params.apply_m(v);
    let n2 = n * n;
    Ok([mv[0] / n2, mv[1] / n2])
}

/// Disk about the origin containing the load's SRG: radius `σ_max(M)/v_min²`.
pub fn cpl_disk(params: &CplParams) -> Disk {
    Disk::new(Complex64::new(0.0, 0.0), params.sigma_max() / (params.v_min * params.v_min))
}

/// Frequency-preservation error bound at ripple ratio `rho`.
///
/// Valid for `0 ≤ ρ` with `2ρ + ρ² < 1`.
pub fn epsilon_rho(params: &CplParams, rho: f64) -> Result<f64> {
    let s = 2.0 * rho + rho * rho;
    if !(rho >= 0.0) || !(s < 1.0) {
        return Err(Error::Domain(format!(
            "ripple ratio {rho} violates 2ρ + ρ² < 1 (bound diverges)"
        )));
    }
    let r = params.sigma_max() / (params.v_min * params.v_min);
    Ok(r * (rho + 1.0) * (rho + 2.0) / (1.0 - s))
}

/// Incremental SRG point for the pair `(v1, v2)`, or `None` when the output
/// increment vanishes. Points are returned in the upper half-plane.
pub fn cpl_incremental_point(params: &CplParams, v1: Vec2, v2: Vec2) -> Result<Option<Complex64>> {
    let (i1, i2) = (cpl_current(params, v1)?, cpl_current(params, v2)?);
    let du = [v2[0] - v1[0], v2[1] - v1[1]];
    let dy = [i2[0] - i1[0], i2[1] - i1[1]];
    let (nu, ny) = (norm(du), norm(dy));
    if nu == 0.0 || ny == 0.0 {
        return Ok(None);
    }
    let cos = ((du[0] * dy[0] + du[1] * dy[1]) / (nu * ny)).clamp(-1.0, 1.0);
    Ok(Some(Complex64::from_polar(ny / nu, cos.acos())))
}

/// Sampled incremental SRG points of the load over constant voltage pairs with
/// norms uniform in `[v_min, 3·v_min]` and uniform angles. Emits both conjugates.
pub fn cpl_srg_sample(params: &CplParams, n_pairs: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> Vec2 {
        let r = rng.random_range(params.v_min..=3.0 * params.v_min);
        let a = rng.random_range(0.0..TAU);
        [r * a.cos(), r * a.sin()]
    };
    let mut out = Vec::with_capacity(2 * n_pairs);
    for _ in 0..n_pairs {
        let (v1, v2) = (draw(&mut rng), draw(&mut rng));
        // Norms are at least v_min by construction, so evaluation cannot fail
        // beyond rounding at the lower edge; such draws are skipped.
        if let Ok(Some(z)) = cpl_incremental_point(params, v1, v2) {
            out.push(z);
            out.push(z.conj());
        }
    }
    out
}

/// Sinusoidal ripple component `amplitude·cos(omega·t + phase)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tone {
    pub amplitude: Vec2,
    pub omega: f64,
    pub phase: f64,
}

/// Base voltage plus ripple tones.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RippleSpec {
    pub v0: Vec2,
    pub tones: Vec<Tone>,
}

impl RippleSpec {
    /// Validates `‖v0‖ ≥ v_min` and `rho < 0.1`.
    pub fn new(v0: Vec2, tones: Vec<Tone>, v_min: f64) -> Result<Self> {
        let spec = Self { v0, tones };
        if norm(v0) < v_min {
            return Err(Error::InvalidInput(format!(
                "base voltage norm {} is below v_min = {v_min}",
                norm(v0)
            )));
        }
        if spec.rho() >= 0.1 {
            return Err(Error::InvalidInput(format!("ripple ratio {} must be below 0.1", spec.rho())));
        }
        Ok(spec)
    }

    pub fn base_norm(&self) -> f64 {
        norm(self.v0)
    }

    /// `Σ‖a_k‖ / ‖v0‖`, an upper bound on `sup_t ‖v_δ(t)‖ / ‖v0‖` (exact for one tone).
    pub fn rho(&self) -> f64 {
        self.tones.iter().map(|t| norm(t.amplitude)).sum::<f64>() / self.base_norm()
    }

    pub fn ripple_at(&self, t: f64) -> Vec2 {
        self.tones.iter().fold([0.0, 0.0], |acc, tone| {
            let c = (tone.omega * t + tone.phase).cos();
            [acc[0] + tone.amplitude[0] * c, acc[1] + tone.amplitude[1] * c]
        })
    }
}

/// Time series from [`cpl_harmonic_split`].
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicSplit {
    pub t: Vec<f64>,
    pub i_lin: Vec<Vec2>,
    pub i_har: Vec<Vec2>,
    /// Discrete L2 norms `√(Σ‖x_k‖²·dt)`.
    pub ripple_norm: f64,
    pub i_lin_norm: f64,
    pub i_har_norm: f64,
}

fn l2(xs: &[Vec2], dt: f64) -> f64 {
    (xs.iter().map(|x| x[0] * x[0] + x[1] * x[1]).sum::<f64>() * dt).sqrt()
}

/// Splits the load current under ripple into the part linear in `v` about the
/// base operating point, `M·v/V0²`, and the remainder.
pub fn cpl_harmonic_split(params: &CplParams, spec: &RippleSpec, horizon: f64, dt: f64) -> Result<HarmonicSplit> {
    if !(dt > 0.0 && horizon > 0.0) {
        return Err(Error::InvalidInput("horizon and dt must be positive".into()));
    }
    if let Some(w) = spec.tones.iter().map(|t| t.omega.abs()).max_by(f64::total_cmp) {
        if w > 0.0 && TAU / w < 16.0 * dt {
            return Err(Error::InvalidInput(format!(
                "dt = {dt} gives fewer than 16 samples per period of the {w} rad/s tone"
            )));
        }
    }
    let v0n2 = spec.base_norm().powi(2);
    let steps = (horizon / dt).floor() as usize;
    let mut out = HarmonicSplit {
        t: Vec::with_capacity(steps),
        i_lin: Vec::with_capacity(steps),
        i_har: Vec::with_capacity(steps),
        ripple_norm: 0.0,
        i_lin_norm: 0.0,
        i_har_norm: 0.0,
    };
    let mut ripple = Vec::with_capacity(steps);
    for k in 0..steps {
        let t = k as f64 * dt;
        let vd = spec.ripple_at(t);
        let v = [spec.v0[0] + vd[0], spec.v0[1] + vd[1]];
        let i = cpl_current(params, v).map_err(|_| {
            Error::Domain(format!(
                "voltage norm {} drops below v_min = {} at t = {t}",
                norm(v),
                params.v_min
            ))
        })?;
        let mv = params.apply_m(v);
        let lin = [mv[0] / v0n2, mv[1] / v0n2];
        out.t.push(t);
        out.i_lin.push(lin);
        out.i_har.push([i[0] - lin[0], i[1] - lin[1]]);
        ripple.push(vd);
    }
    out.ripple_norm = l2(&ripple, dt);
    out.i_lin_norm = l2(&out.i_lin, dt);
    out.i_har_norm = l2(&out.i_har, dt);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(pc: f64, qc: f64, v: f64) -> CplParams {
        CplParams::new(pc, qc, v).unwrap()
    }

    #[test]
    fn current_values() {
        assert_eq!(cpl_current(&p(1.0, 0.0, 0.5), [1.0, 0.0]).unwrap(), [1.0, 0.0]);
        assert_eq!(cpl_current(&p(1.0, 0.0, 0.5), [2.0, 0.0]).unwrap(), [0.5, 0.0]);
        assert_eq!(cpl_current(&p(0.0, 0.0, 0.5), [0.3, 0.7]).unwrap(), [0.0, 0.0]);
        assert!(matches!(cpl_current(&p(1.0, 0.0, 1.0), [0.5, 0.0]), Err(Error::Domain(_))));
    }

    #[test]
    fn disk_radius() {
        let r = cpl_disk(&p(0.4, 0.7, 0.9)).radius;
        assert!((r - 0.65f64.sqrt() / 0.81).abs() < 1e-15);
        assert!((r - 0.9953404627529073).abs() < 1e-12);
        assert_eq!(cpl_disk(&p(0.0, 0.0, 1.0)).radius, 0.0);
        assert!((cpl_disk(&p(0.1, 0.1, 1.0)).radius - 0.1414213562373095).abs() < 1e-15);
    }

    #[test]
    fn epsilon_values() {
        let params = p(0.4, 0.7, 0.9);
        let r = cpl_disk(&params).radius;
        assert!((epsilon_rho(&params, 0.0).unwrap() - 2.0 * r).abs() < 1e-15);
        let e = epsilon_rho(&params, 0.05).unwrap();
        assert!((e - r * 1.05 * 2.05 / 0.8975).abs() < 1e-14);
        assert!((e - 2.3871535889).abs() < 1e-9);
        let edge = 2f64.sqrt() - 1.0;
        assert!(epsilon_rho(&params, edge + 1e-12).is_err());
        assert!(epsilon_rho(&params, -0.1).is_err());
    }

    #[test]
    fn incremental_point_on_axis() {
        let z = cpl_incremental_point(&p(1.0, 0.0, 1.0), [1.0, 0.0], [1.1, 0.0]).unwrap().unwrap();
        // Δi = 1/1.1 − 1 over Δv = 0.1: gain 1/1.1, phase π.
        assert!((z - Complex64::new(-1.0 / 1.1, 0.0)).norm() < 1e-12);
        assert!(cpl_srg_sample(&p(0.0, 0.0, 1.0), 100, 1).is_empty());
    }

    #[test]
    fn split_without_ripple_is_linear() {
        let params = p(0.4, 0.7, 0.9);
        let spec = RippleSpec::new([1.0, 0.0], vec![], 0.9).unwrap();
        let s = cpl_harmonic_split(&params, &spec, 1.0, 1e-3).unwrap();
        assert_eq!(s.i_har_norm, 0.0);
        assert_eq!(s.ripple_norm, 0.0);
    }

    #[test]
    fn split_rejects_coarse_steps_and_dips() {
        let params = p(0.4, 0.7, 0.9);
        let tone = Tone { amplitude: [0.05, 0.0], omega: 100.0, phase: 0.0 };
        let spec = RippleSpec::new([1.0, 0.0], vec![tone], 0.9).unwrap();
        assert!(cpl_harmonic_split(&params, &spec, 1.0, 0.01).is_err());
        let tight = p(0.4, 0.7, 0.99);
        let err = cpl_harmonic_split(&tight, &spec, 1.0, 1e-3).unwrap_err();
        assert!(err.to_string().contains("at t ="), "{err}");
    }
}
