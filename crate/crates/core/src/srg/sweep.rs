//! Unions of scaled copies `⋃_{τ∈(0,1]} ±τ·S`.
//!
//! The union of `τ·M` over `τ ∈ (0, 1]` is the star of `M` about the origin: every
//! ray from 0 is covered up to the farthest point of `M` on it. It is computed
//! exactly as a radial envelope of the boundary segments; the origin is included
//! as the closure point.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::region::{region_separation, SrgRegion};
use crate::error::{Error, Result};

/// Family `{±τ·base : τ ∈ tau_grid}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TauSweep {
    pub base: SrgRegion,
    pub tau_grid: Vec<f64>,
    pub negate: bool,
}

/// `count` log-spaced values in `[1e-4, 1]`.
pub fn default_tau_grid(count: usize) -> Vec<f64> {
    let count = count.max(2);
    let (l0, l1) = (1e-4f64.ln(), 0.0);
    let mut v: Vec<f64> = (0..count)
        .map(|k| (l0 + (l1 - l0) * k as f64 / (count - 1) as f64).exp())
        .collect();
    *v.last_mut().unwrap() = 1.0;
    v
}

/// Checks that the grid is sorted, within `(0, 1]` and contains 1.
pub fn validate_tau_grid(tau_grid: &[f64]) -> Result<()> {
    if tau_grid.is_empty() || tau_grid.iter().any(|&t| !(t > 0.0 && t <= 1.0)) {
        return Err(Error::InvalidInput("tau values must lie in (0, 1]".into()));
    }
    if tau_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("tau grid must be strictly increasing".into()));
    }
    if *tau_grid.last().unwrap() != 1.0 {
        return Err(Error::InvalidInput("tau grid must contain 1".into()));
    }
    Ok(())
}

impl TauSweep {
    pub fn new(base: SrgRegion, tau_grid: Vec<f64>, negate: bool) -> Result<Self> {
        validate_tau_grid(&tau_grid)?;
        Ok(Self { base, tau_grid, negate })
    }

    /// `−τ` sweep on the default 64-point grid.
    pub fn negated(base: SrgRegion) -> Self {
        Self {
            base,
            tau_grid: default_tau_grid(64),
            negate: true,
        }
    }

    fn oriented_base(&self) -> SrgRegion {
        if self.negate {
            self.base.negated()
        } else {
            self.base.clone()
        }
    }

    /// The copy at a single `τ`.
    pub fn copy_at(&self, tau: f64) -> SrgRegion {
        self.oriented_base().scaled(tau)
    }
}

/// Argument in `[0, π]` for an upper-half-plane point.
fn angle(z: Complex64) -> f64 {
    if z.im <= 0.0 {
        if z.re >= 0.0 {
            0.0
        } else {
            PI
        }
    } else {
        z.im.atan2(z.re)
    }
}

struct Seg {
    p: Complex64,
    q: Complex64,
    lo: f64,
    hi: f64,
}

impl Seg {
    /// Distance from the origin along the ray at angle `theta`, if the ray meets the segment.
    fn radius(&self, theta: f64) -> Option<f64> {
        if theta < self.lo || theta > self.hi {
            return None;
        }
        let u = Complex64::from_polar(1.0, theta);
        let d = self.q - self.p;
        let den = u.re * d.im - u.im * d.re;
        if den.abs() <= 1e-300 {
            // Radial segment: the far end bounds the ray.
            return Some(self.p.norm().max(self.q.norm()));
        }
        let t = -(u.re * self.p.im - u.im * self.p.re) / den;
        let z = self.p + d * t.clamp(0.0, 1.0);
        Some((z * u.conj()).re.max(0.0))
    }
}

fn envelope_at(segs: &[&Seg], theta: f64) -> (f64, Option<usize>) {
    let mut best = (0.0, None);
    for (k, s) in segs.iter().enumerate() {
        if let Some(r) = s.radius(theta) {
            if best.1.is_none() || r > best.0 {
                best = (r, Some(k));
            }
        }
    }
    best
}

/// Line through `a.p, a.q` meets line through `b.p, b.q` at this angle, if anywhere in the upper half.
fn crossing_angle(a: &Seg, b: &Seg) -> Option<f64> {
    let (d1, d2) = (a.q - a.p, b.q - b.p);
    let den = d1.re * d2.im - d1.im * d2.re;
    if den.abs() <= 1e-300 {
        return None;
    }
    let w = b.p - a.p;
    let t = (w.re * d2.im - w.im * d2.re) / den;
    let x = a.p + d1 * t;
    (x.im >= 0.0 && x.norm() > 0.0).then(|| angle(x))
}

#[allow(clippy::too_many_arguments)]
fn fill_between(segs: &[&Seg], t0: f64, t1: f64, k0: usize, k1: usize, depth: u32, out: &mut Vec<(f64, f64)>) {
    if k0 == k1 || depth > 30 {
        return;
    }
    let Some(tc) = crossing_angle(segs[k0], segs[k1]) else {
        return;
    };
    if !(tc > t0 && tc < t1) {
        return;
    }
    let (rc, kc) = envelope_at(segs, tc);
    let Some(kc) = kc else { return };
    let on_pair = |k: usize| segs[k].radius(tc).is_some_and(|r| r >= rc * (1.0 - 1e-12));
    if kc == k0 || kc == k1 || on_pair(k0) || on_pair(k1) {
        out.push((tc, rc));
    } else {
        fill_between(segs, t0, tc, k0, kc, depth + 1, out);
        out.push((tc, rc));
        fill_between(segs, tc, t1, kc, k1, depth + 1, out);
    }
}

/// Exact star of a region about the origin: `⋃_{τ∈(0,1]} τ·M` plus the origin.
fn star(m: &SrgRegion) -> SrgRegion {
    let pts = m.boundary_upper();
    let zero = Complex64::new(0.0, 0.0);
    if pts.is_empty() {
        return SrgRegion::empty();
    }
    let scale = m.max_modulus();
    if scale == 0.0 {
        return SrgRegion::point(zero);
    }
    let origin_tol = 1e-15 * scale;
    if pts.len() == 1 {
        return SrgRegion::curve(vec![zero, pts[0]]);
    }
    let closed = m.is_filled();
    let n_edges = if closed { pts.len() } else { pts.len() - 1 };
    let covers_origin = m.distance_to_point(zero) <= origin_tol;

    let mut segs = Vec::with_capacity(n_edges);
    let mut events = Vec::with_capacity(pts.len() + 2);
    for i in 0..n_edges {
        let (p, q) = (pts[i], pts[(i + 1) % pts.len()]);
        let (pn, qn) = (p.norm() > origin_tol, q.norm() > origin_tol);
        let seg = match (pn, qn) {
            (false, false) => continue,
            (true, false) => Seg { p, q: p, lo: angle(p), hi: angle(p) },
            (false, true) => Seg { p: q, q, lo: angle(q), hi: angle(q) },
            (true, true) => {
                let (ap, aq) = (angle(p), angle(q));
                if aq - ap >= PI - 1e-15 || ap - aq >= PI - 1e-15 {
                    // Passes through the origin along the real axis.
                    segs.push(Seg { p, q: p, lo: ap, hi: ap });
                    Seg { p: q, q, lo: aq, hi: aq }
                } else {
                    Seg { p, q, lo: ap.min(aq), hi: ap.max(aq) }
                }
            }
        };
        segs.push(seg);
    }
    for s in &segs {
        events.push(s.lo);
        events.push(s.hi);
    }
    if covers_origin {
        events.push(0.0);
        events.push(PI);
    }
    events.sort_by(f64::total_cmp);
    events.dedup();

    let (theta_min, theta_max) = (events[0], *events.last().unwrap());
    if theta_max - theta_min <= 1e-12 && !covers_origin {
        let far = pts.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
        return SrgRegion::curve(vec![zero, far]);
    }

    // Sweep events in angle order with an active list.
    let mut order: Vec<usize> = (0..segs.len()).collect();
    order.sort_by(|&a, &b| segs[a].lo.total_cmp(&segs[b].lo));
    let mut next = 0;
    let mut active: Vec<usize> = Vec::new();
    let mut envelope: Vec<(f64, f64)> = Vec::with_capacity(events.len() * 2);
    for (e, &theta) in events.iter().enumerate() {
        while next < order.len() && segs[order[next]].lo <= theta {
            active.push(order[next]);
            next += 1;
        }
        active.retain(|&k| segs[k].hi >= theta);

        // Left limit, point value and right limit at this angle.
        let at: Vec<&Seg> = active.iter().map(|&k| &segs[k]).collect();
        let (r_here, _) = envelope_at(&at, theta);
        let left: Vec<&Seg> = at.iter().copied().filter(|s| s.lo < theta).collect();
        let right: Vec<&Seg> = at.iter().copied().filter(|s| s.hi > theta).collect();
        let r_left = envelope_at(&left, theta).0;
        let (r_right, k_right) = envelope_at(&right, theta);
        if e > 0 && !left.is_empty() {
            envelope.push((theta, r_left));
        }
        envelope.push((theta, r_here));
        if !right.is_empty() {
            envelope.push((theta, r_right));
        }

        // Breakpoints of the envelope strictly between this event and the next.
        if let (Some(k0), Some(&theta1)) = (k_right, events.get(e + 1)) {
            let (_, k1) = envelope_at(&right, theta1);
            if let Some(k1) = k1 {
                fill_between(&right, theta, theta1, k0, k1, 0, &mut envelope);
            }
        }
    }

    let mut poly = Vec::with_capacity(envelope.len() + 1);
    poly.push(zero);
    poly.extend(envelope.into_iter().map(|(t, r)| Complex64::from_polar(r, t)));
    SrgRegion::polygon(poly)
}

/// Union over `τ` of the scaled (and, when `negate`, negated) base region.
///
/// The union is taken over all of `(0, 1]`, which contains every grid value;
/// the grid itself is only validated.
pub fn tau_swept_region(base: &SrgRegion, tau_grid: &[f64], negate: bool) -> Result<SrgRegion> {
    validate_tau_grid(tau_grid)?;
    let m = if negate { base.negated() } else { base.clone() };
    Ok(star(&m))
}

/// Result of [`min_distance_over_tau`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauDistance {
    pub distance: f64,
    /// Scaling at which the closest approach occurs; `None` when it is approached
    /// only as `τ → 0`.
    pub tau: Option<f64>,
    pub witness_fixed: Complex64,
    pub witness_swept: Complex64,
}

/// `inf_τ dist(fixed, ±τ·base)` via the exact swept union.
pub fn min_distance_over_tau(fixed: &SrgRegion, sweep: &TauSweep) -> Result<TauDistance> {
    let swept = tau_swept_region(&sweep.base, &sweep.tau_grid, sweep.negate)?;
    let Some(sep) = region_separation(fixed, &swept) else {
        return Ok(TauDistance {
            distance: f64::INFINITY,
            tau: None,
            witness_fixed: Complex64::new(0.0, 0.0),
            witness_swept: Complex64::new(0.0, 0.0),
        });
    };
    let m = sweep.oriented_base();
    let y = sep.on_second;
    let tau = if y.norm() <= 1e-14 * m.max_modulus().max(f64::MIN_POSITIVE) {
        None
    } else {
        radial_extent(&m, angle(y)).map(|r| (y.norm() / r).min(1.0))
    };
    Ok(TauDistance {
        distance: sep.distance,
        tau,
        witness_fixed: sep.on_first,
        witness_swept: y,
    })
}

/// Farthest distance from the origin along the ray at `theta` within the region.
fn radial_extent(m: &SrgRegion, theta: f64) -> Option<f64> {
    let pts = m.boundary_upper();
    if pts.len() == 1 {
        return Some(pts[0].norm());
    }
    let n_edges = if m.is_filled() { pts.len() } else { pts.len() - 1 };
    (0..n_edges)
        .filter_map(|i| {
            let (p, q) = (pts[i], pts[(i + 1) % pts.len()]);
            let (ap, aq) = (angle(p), angle(q));
            Seg { p, q, lo: ap.min(aq), hi: ap.max(aq) }.radius(theta)
        })
        .max_by(f64::total_cmp)
        .filter(|r| *r > 0.0)
}

/// Distance to individual copies on the grid, refined by golden-section search
/// around the best grid value. Includes the `τ → 0` limit (distance to the origin).
///
/// Always at least the exact union distance; used to cross-check it.
pub fn min_distance_on_tau_grid(fixed: &SrgRegion, sweep: &TauSweep) -> Result<(f64, f64)> {
    validate_tau_grid(&sweep.tau_grid)?;
    let dist_at = |tau: f64| super::region::region_distance(fixed, &sweep.copy_at(tau));
    let values: Vec<f64> = sweep.tau_grid.iter().map(|&t| dist_at(t)).collect();
    let (kbest, &dbest) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    let (mut best, mut tau_best) = (dbest, sweep.tau_grid[kbest]);
    let spread = values.iter().copied().fold(f64::NEG_INFINITY, f64::max) - dbest;
    if spread > 1e-6 && sweep.tau_grid.len() > 1 {
        let lo = if kbest > 0 { sweep.tau_grid[kbest - 1] } else { sweep.tau_grid[0] * 0.5 };
        let hi = sweep.tau_grid.get(kbest + 1).copied().unwrap_or(1.0);
        let (t, d) = golden_min(&dist_at, lo, hi, 80);
        if d < best {
            best = d;
            tau_best = t;
        }
    }
    let at_zero = fixed.distance_to_point(Complex64::new(0.0, 0.0));
    if at_zero < best {
        best = at_zero;
        tau_best = 0.0;
    }
    Ok((best, tau_best))
}

fn golden_min(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::srg::region::region_distance;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn point_sweeps_to_radial_segment() {
        let grid = default_tau_grid(64);
        let s = tau_swept_region(&SrgRegion::point(c(1.0, 0.0)), &grid, true).unwrap();
        assert!(!s.is_filled());
        assert_eq!(s.boundary_upper(), &[c(0.0, 0.0), c(-1.0, 0.0)]);
        let s = tau_swept_region(&SrgRegion::point(c(0.0, 1.0)), &grid, true).unwrap();
        assert!((s.boundary_upper()[1] - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn grid_validation() {
        assert!(tau_swept_region(&SrgRegion::point(c(1.0, 0.0)), &[0.5], true).is_err());
        assert!(tau_swept_region(&SrgRegion::point(c(1.0, 0.0)), &[0.0, 1.0], true).is_err());
        assert!(TauSweep::new(SrgRegion::empty(), vec![0.5, 0.25, 1.0], true).is_err());
        let g = default_tau_grid(64);
        assert_eq!(g.len(), 64);
        assert!((g[0] - 1e-4).abs() < 1e-18 && g[63] == 1.0);
    }

    #[test]
    fn one_dimensional_distances() {
        let sweep = TauSweep::negated(SrgRegion::point(c(1.0, 0.0)));
        let d = min_distance_over_tau(&SrgRegion::point(c(3.0, 0.0)), &sweep).unwrap();
        assert!((d.distance - 3.0).abs() < 1e-15);
        assert_eq!(d.tau, None);
        let d = min_distance_over_tau(&SrgRegion::point(c(-0.5, 0.0)), &sweep).unwrap();
        assert_eq!(d.distance, 0.0);
        assert!((d.tau.unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn disk_against_positive_sweep() {
        let fixed = SrgRegion::disk(5.0, 1.0, 1024);
        let sweep = TauSweep::new(SrgRegion::circle(1.0, 0.5, 1024), default_tau_grid(64), false).unwrap();
        let d = min_distance_over_tau(&fixed, &sweep).unwrap();
        assert!((d.distance - 2.5).abs() < 1e-9, "{}", d.distance);
        assert!((d.tau.unwrap() - 1.0).abs() < 1e-9);
        let (grid_d, _) = min_distance_on_tau_grid(&fixed, &sweep).unwrap();
        assert!((grid_d - 2.5).abs() < 1e-9);
    }

    #[test]
    fn disk_sweep_envelope_matches_dense_sampling() {
        let base = SrgRegion::circle(2.0, 0.5, 2048);
        let swept = tau_swept_region(&base, &default_tau_grid(64), true).unwrap();
        assert!(swept.is_filled());
        // Tangent lines from 0 to the circle |z + 2| = 0.5 make angle asin(1/4) with the axis.
        let half_angle = (0.25f64).asin();
        let inside = c(-1.0, 0.0) + Complex64::from_polar(0.2, PI - 0.1);
        assert!(swept.contains(inside, 0.0));
        let outside = Complex64::from_polar(1.0, PI - half_angle - 0.01);
        assert!(!swept.contains(outside, 0.0));
        // Dense τ sampling of boundary points stays inside.
        for k in 1..=200 {
            let tau = k as f64 / 200.0;
            for z in base.negated().scaled(tau).boundary_upper().iter().step_by(37) {
                assert!(swept.contains(*z, 1e-9), "{z} at tau {tau}");
            }
        }
        // Farthest reach equals the far side of the negated circle.
        assert!((swept.max_modulus() - 2.5).abs() < 1e-9);
        let probe = SrgRegion::point(c(-3.0, 0.0));
        assert!((region_distance(&swept, &probe) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn region_around_origin_sweeps_to_its_star() {
        let base = SrgRegion::disk(0.5, 1.0, 512);
        let swept = tau_swept_region(&base, &default_tau_grid(8), true).unwrap();
        assert!(swept.contains(c(0.4, 0.1), 0.0));
        assert!(swept.contains(c(-1.4, 0.05), 0.0));
        assert!(!swept.contains(c(-1.6, 0.0), 0.0));
    }
}
