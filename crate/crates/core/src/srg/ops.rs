use std::f64::consts::PI;

use num_complex::Complex64;

use super::region::{Disk, SrgRegion};
use crate::error::{Error, Result};
use crate::geom::{cross, Path};

/// Minimum admissible distance between a region and the origin for inversion.
pub const INVERSION_GUARD: f64 = 1e-12;

/// Relative outward deviation allowed for polygonal arcs in offsets.
const ARC_DEVIATION: f64 = 1e-7;

#[inline]
fn invert(z: Complex64) -> Complex64 {
    z / z.norm_sqr()
}

/// Image of the region under `z ↦ conj(1/z)`.
pub fn mobius_invert(region: &SrgRegion) -> Result<SrgRegion> {
    if region.is_empty() {
        return Ok(SrgRegion::empty());
    }
    let origin = Complex64::new(0.0, 0.0);
    let dist = region.distance_to_point(origin);
    if dist <= INVERSION_GUARD {
        return Err(Error::InversionSingularity { distance: dist });
    }
    let pts = region.boundary_upper();
    if pts.len() == 1 {
        return Ok(SrgRegion::point(invert(pts[0])));
    }
    let img_scale = 1.0 / dist;
    let (tol, chord) = (1e-9 * img_scale, 1e-3 * img_scale);
    let closed = region.is_filled();
    let n_edges = if closed { pts.len() } else { pts.len() - 1 };
    let mut out = Vec::with_capacity(pts.len() * 2);
    for i in 0..n_edges {
        let (p, q) = (pts[i], pts[(i + 1) % pts.len()]);
        out.push(invert(p));
        refine_inverted(p, q, invert(p), invert(q), tol, chord, 0, &mut out);
    }
    if !closed {
        out.push(invert(pts[pts.len() - 1]));
        return Ok(SrgRegion::curve(out));
    }
    // The map reverses orientation; `polygon` restores counter-clockwise order.
    Ok(SrgRegion::polygon(out))
}

#[allow(clippy::too_many_arguments)]
fn refine_inverted(
    p: Complex64,
    q: Complex64,
    zp: Complex64,
    zq: Complex64,
    tol: f64,
    chord: f64,
    depth: u32,
    out: &mut Vec<Complex64>,
) {
    if depth >= 40 {
        return;
    }
    let m = 0.5 * (p + q);
    let zm = invert(m);
    if (zm - 0.5 * (zp + zq)).norm() <= tol && (zq - zp).norm() <= chord {
        return;
    }
    refine_inverted(p, m, zp, zm, tol, chord, depth + 1, out);
    out.push(zm);
    refine_inverted(m, q, zm, zq, tol, chord, depth + 1, out);
}

/// Largest arc step whose circumscribed polygon stays within `ARC_DEVIATION·r` of the arc.
fn arc_step() -> f64 {
    2.0 * (1.0 / (1.0 + ARC_DEVIATION)).acos()
}

/// Circumscribed polygonal arc around `center` from direction `a0` turning by `sweep > 0`,
/// excluding the start point and including the end point.
fn push_arc(center: Complex64, r: f64, a0: f64, sweep: f64, out: &mut Vec<Complex64>) {
    let steps = (sweep / arc_step()).ceil().max(1.0) as usize;
    let h = sweep / steps as f64;
    let rc = r / (0.5 * h).cos();
    for m in 0..steps {
        out.push(center + Complex64::from_polar(rc, a0 + (m as f64 + 0.5) * h));
    }
    out.push(center + Complex64::from_polar(r, a0 + sweep));
}

/// Raw outward offset of a counter-clockwise ring (before trimming).
fn raw_offset(ring: &[Complex64], r: f64) -> Vec<Complex64> {
    let n = ring.len();
    let normal = |i: usize| {
        let d = ring[(i + 1) % n] - ring[i];
        Complex64::new(d.im, -d.re) / d.norm()
    };
    let mut out = Vec::with_capacity(4 * n);
    for i in 0..n {
        let ni = normal(i);
        let next = (i + 1) % n;
        out.push(ring[i] + ni * r);
        out.push(ring[next] + ni * r);
        let e_in = ring[next] - ring[i];
        let e_out = ring[(next + 1) % n] - ring[next];
        let dot = (e_in * e_out.conj()).re;
        let cr = cross(e_in, e_out);
        let turn = if cr == 0.0 && dot < 0.0 { PI } else { cr.atan2(dot) };
        if turn > 0.0 {
            push_arc(ring[next], r, ni.arg(), turn, &mut out);
            out.pop();
        }
    }
    out
}

/// Points of `raw` that lie on the outer boundary of the `r`-neighborhood of `base`.
fn trim(raw: &[Complex64], base: &Path, r: f64) -> Vec<Complex64> {
    let threshold = r * (1.0 - 1e-9);
    let keep = |z: Complex64| base.distance_to_point(z).0 >= threshold;
    let flags: Vec<bool> = raw.iter().map(|&z| keep(z)).collect();
    let Some(start) = flags.iter().position(|&k| k) else {
        return raw.to_vec();
    };
    let n = raw.len();
    let crossing = |inside: Complex64, outside: Complex64| {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if keep(inside + (outside - inside) * mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        inside + (outside - inside) * lo
    };
    let mut out = Vec::with_capacity(n);
    for s in 0..n {
        let i = (start + s) % n;
        let j = (i + 1) % n;
        let (a, b) = (raw[i], raw[j]);
        if flags[i] {
            out.push(a);
        }
        match (flags[i], flags[j]) {
            (true, false) => out.push(crossing(a, b)),
            (false, true) => out.push(crossing(b, a)),
            (true, true) => {
                // The chord can dip inside between two kept ends.
                let mid = 0.5 * (a + b);
                if !keep(mid) {
                    out.push(crossing(a, mid));
                    out.push(crossing(b, mid));
                }
            }
            (false, false) => {}
        }
    }
    out
}

/// Clips a closed polygon to `Im z ≥ 0`.
fn clip_upper(poly: &[Complex64]) -> Vec<Complex64> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 2);
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let (ina, inb) = (a.im >= 0.0, b.im >= 0.0);
        if ina {
            out.push(a);
        }
        if ina != inb {
            let t = a.im / (a.im - b.im);
            out.push(Complex64::new(a.re + t * (b.re - a.re), 0.0));
        }
    }
    out
}

/// Minkowski sum of a region with a disk, as a filled region.
///
/// Disks off the real axis are replaced by the symmetric disk of radius
/// `radius + |Im center|` about `Re center`, which contains both the disk and its
/// mirror image.
pub fn minkowski_sum_disk(region: &SrgRegion, d: &Disk) -> SrgRegion {
    if region.is_empty() {
        return SrgRegion::empty();
    }
    let shift = d.center.re;
    let r = d.radius + d.center.im.abs();
    if r == 0.0 {
        return region.shifted(shift);
    }
    let pts = region.boundary_upper();
    let raw = if pts.len() == 1 {
        let mut v = vec![pts[0] + r];
        push_arc(pts[0], r, 0.0, 2.0 * PI, &mut v);
        v.pop();
        v
    } else {
        let ring: Vec<Complex64> = if region.is_filled() {
            pts.to_vec()
        } else {
            pts.iter().chain(pts[1..pts.len() - 1].iter().rev()).copied().collect()
        };
        let raw = raw_offset(&ring, r);
        trim(&raw, &region.path(), r)
    };
    SrgRegion::polygon(clip_upper(&raw)).shifted(shift)
}
