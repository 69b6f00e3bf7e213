use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geom::{signed_area, Path};

/// Closed disk `{z : |z − center| ≤ radius}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Complex64, radius: f64) -> Self {
        assert!(radius >= 0.0, "disk radius must be nonnegative");
        Self { center, radius }
    }
}

/// A planar set symmetric about the real axis, stored by its upper half.
///
/// * `filled == false`: the set is the polyline itself (a point, arc or open
///   curve) together with its mirror image.
/// * `filled == true`: `boundary_upper` is a counter-clockwise closed polygon in
///   `Im z ≥ 0`; the set is the enclosed area plus its mirror image.
#[derive(Clone, Debug, PartialEq)]
pub struct SrgRegion {
    boundary_upper: Vec<Complex64>,
    conjugate_symmetric: bool,
    filled: bool,
}

/// Closest approach between two regions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Separation {
    pub distance: f64,
    /// Witness in the first region (upper half-plane representative).
    pub on_first: Complex64,
    /// Witness in the second region.
    pub on_second: Complex64,
}

fn upper(z: Complex64) -> Complex64 {
    Complex64::new(z.re, z.im.abs())
}

fn dedup(pts: impl IntoIterator<Item = Complex64>) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    for z in pts {
        if out.last() != Some(&z) {
            out.push(z);
        }
    }
    out
}

impl SrgRegion {
    pub fn empty() -> Self {
        Self {
            boundary_upper: Vec::new(),
            conjugate_symmetric: true,
            filled: false,
        }
    }

    /// The pair `{z, z̄}`.
    pub fn point(z: Complex64) -> Self {
        Self {
            boundary_upper: vec![upper(z)],
            conjugate_symmetric: true,
            filled: false,
        }
    }

    /// An open curve given by upper-half-plane vertices (lower ones are mirrored).
    pub fn curve(pts: impl IntoIterator<Item = Complex64>) -> Self {
        Self {
            boundary_upper: dedup(pts.into_iter().map(upper)),
            conjugate_symmetric: true,
            filled: false,
        }
    }

    /// A filled polygon; orientation is normalized to counter-clockwise.
    pub fn polygon(pts: impl IntoIterator<Item = Complex64>) -> Self {
        let mut v = dedup(pts.into_iter().map(upper));
        while v.len() > 1 && v[0] == v[v.len() - 1] {
            v.pop();
        }
        if signed_area(&v) < 0.0 {
            v.reverse();
        }
        let filled = v.len() >= 3;
        Self {
            boundary_upper: v,
            conjugate_symmetric: true,
            filled,
        }
    }

    /// Filled disk with real center, inscribed with `segments` arcs on the upper half.
    pub fn disk(center: f64, radius: f64, segments: usize) -> Self {
        if radius == 0.0 {
            return Self::point(Complex64::new(center, 0.0));
        }
        Self::polygon((0..=segments).map(|k| {
            Complex64::new(center, 0.0) + Complex64::from_polar(radius, PI * k as f64 / segments as f64)
        }))
    }

    /// Circle with real center as a curve (upper semicircle).
    pub fn circle(center: f64, radius: f64, segments: usize) -> Self {
        if radius == 0.0 {
            return Self::point(Complex64::new(center, 0.0));
        }
        Self::curve((0..=segments).map(|k| {
            Complex64::new(center, 0.0) + Complex64::from_polar(radius, PI * k as f64 / segments as f64)
        }))
    }

    pub fn boundary_upper(&self) -> &[Complex64] {
        &self.boundary_upper
    }

    pub fn is_filled(&self) -> bool {
        self.filled
    }

    pub fn is_conjugate_symmetric(&self) -> bool {
        self.conjugate_symmetric
    }

    pub fn is_empty(&self) -> bool {
        self.boundary_upper.is_empty()
    }

    pub fn path(&self) -> Path {
        Path::new(self.boundary_upper.clone(), self.filled)
    }

    /// Largest modulus over the region.
    pub fn max_modulus(&self) -> f64 {
        self.boundary_upper.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Area of the full (conjugate-completed) set.
    pub fn area(&self) -> f64 {
        if self.filled {
            2.0 * signed_area(&self.boundary_upper)
        } else {
            0.0
        }
    }

    /// Image under `z ↦ c·z` for real `c > 0`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            boundary_upper: self.boundary_upper.iter().map(|z| z * c).collect(),
            ..self.clone()
        }
    }

    /// Image under `z ↦ −z̄` (reflection across the imaginary axis), i.e. the
    /// upper half of the negated set.
    pub fn negated(&self) -> Self {
        let mut pts: Vec<Complex64> = self.boundary_upper.iter().map(|z| Complex64::new(-z.re, z.im)).collect();
        if self.filled {
            pts.reverse();
        }
        Self {
            boundary_upper: pts,
            ..self.clone()
        }
    }

    /// Translation along the real axis.
    pub fn shifted(&self, dx: f64) -> Self {
        Self {
            boundary_upper: self.boundary_upper.iter().map(|z| z + dx).collect(),
            ..self.clone()
        }
    }

    /// Membership of `z` (either half-plane), with boundary tolerance `tol`.
    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        self.locator().contains(z, tol)
    }

    /// Distance from `z` to the region (zero inside a filled region).
    pub fn distance_to_point(&self, z: Complex64) -> f64 {
        self.locator().distance(z)
    }

    /// Indexed view for many point queries against the same region.
    pub fn locator(&self) -> PointLocator {
        PointLocator {
            path: (!self.is_empty()).then(|| self.path()),
            filled: self.filled,
        }
    }
}

/// Point queries against a region, reusing one spatial index.
#[derive(Clone, Debug)]
pub struct PointLocator {
    path: Option<Path>,
    filled: bool,
}

impl PointLocator {
    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        self.path.as_ref().is_some_and(|p| p.contains(upper(z), tol))
    }

    pub fn distance(&self, z: Complex64) -> f64 {
        let Some(path) = &self.path else {
            return f64::INFINITY;
        };
        let z = upper(z);
        if self.filled && path.winding_number(z) != 0 {
            return 0.0;
        }
        path.distance_to_point(z).0
    }
}

/// Closest approach of two regions; `None` when either is empty.
///
/// Both sets are symmetric about the real axis, so distances and intersections
/// are decided on their upper halves alone.
pub fn region_separation(a: &SrgRegion, b: &SrgRegion) -> Option<Separation> {
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let (pa, pb) = (a.path(), b.path());
    let b0 = b.boundary_upper[0];
    if a.filled && pa.winding_number(b0) != 0 {
        return Some(Separation {
            distance: 0.0,
            on_first: b0,
            on_second: b0,
        });
    }
    let a0 = a.boundary_upper[0];
    if b.filled && pb.winding_number(a0) != 0 {
        return Some(Separation {
            distance: 0.0,
            on_first: a0,
            on_second: a0,
        });
    }
    let (distance, on_first, on_second) = pa.distance_to(&pb);
    Some(Separation {
        distance,
        on_first,
        on_second,
    })
}

/// Euclidean distance between two regions; `+∞` if either is empty.
pub fn region_distance(a: &SrgRegion, b: &SrgRegion) -> f64 {
    region_separation(a, b).map_or(f64::INFINITY, |s| s.distance)
}

/// Largest distance from any of `points` to `region`.
pub fn directed_hausdorff(points: &[Complex64], region: &SrgRegion) -> f64 {
    let locator = region.locator();
    points.iter().map(|&z| locator.distance(z)).fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between the stored boundaries, measured at vertices.
pub fn boundary_hausdorff(a: &SrgRegion, b: &SrgRegion) -> f64 {
    if a.is_empty() || b.is_empty() {
        return if a.is_empty() && b.is_empty() { 0.0 } else { f64::INFINITY };
    }
    let one_way = |x: &SrgRegion, y: &SrgRegion| {
        let p = y.path();
        x.boundary_upper
            .iter()
            .map(|&z| p.distance_to_point(z).0)
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}
