//! Planar polyline geometry with a bounding-volume hierarchy for distance and
//! containment queries.

use num_complex::Complex64;

const LEAF: usize = 8;

#[inline]
pub fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Closest point on segment `[a, b]` to `p`.
pub fn closest_on_segment(p: Complex64, a: Complex64, b: Complex64) -> Complex64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return a;
    }
    let t = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    a + d * t
}

/// Distance between segments `[a, b]` and `[c, d]` with a witness pair.
pub fn segment_distance(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (f64, Complex64, Complex64) {
    let d1 = cross(b - a, c - a);
    let d2 = cross(b - a, d - a);
    let d3 = cross(d - c, a - c);
    let d4 = cross(d - c, b - c);
    let opposite = |x: f64, y: f64| (x > 0.0 && y < 0.0) || (x < 0.0 && y > 0.0);
    if opposite(d1, d2) && opposite(d3, d4) {
        let p = a + (b - a) * (d3 / (d3 - d4));
        return (0.0, p, p);
    }
    let candidates = [
        (a, closest_on_segment(a, c, d)),
        (b, closest_on_segment(b, c, d)),
        (closest_on_segment(c, a, b), c),
        (closest_on_segment(d, a, b), d),
    ];
    let (x, y) = candidates
        .into_iter()
        .min_by(|p, q| (p.0 - p.1).norm().total_cmp(&(q.0 - q.1).norm()))
        .unwrap();
    ((x - y).norm(), x, y)
}

/// Signed area (positive for counter-clockwise vertex order).
pub fn signed_area(pts: &[Complex64]) -> f64 {
    if pts.len() < 3 {
        return 0.0;
    }
    (0..pts.len())
        .map(|i| cross(pts[i], pts[(i + 1) % pts.len()]))
        .sum::<f64>()
        * 0.5
}

#[derive(Clone, Copy, Debug)]
struct Aabb {
    lo: Complex64,
    hi: Complex64,
}

impl Aabb {
    fn of_segment(a: Complex64, b: Complex64) -> Self {
        Self {
            lo: Complex64::new(a.re.min(b.re), a.im.min(b.im)),
            hi: Complex64::new(a.re.max(b.re), a.im.max(b.im)),
        }
    }

    fn union(&self, o: &Aabb) -> Self {
        Self {
            lo: Complex64::new(self.lo.re.min(o.lo.re), self.lo.im.min(o.lo.im)),
            hi: Complex64::new(self.hi.re.max(o.hi.re), self.hi.im.max(o.hi.im)),
        }
    }

    fn dist_point(&self, p: Complex64) -> f64 {
        let dx = (self.lo.re - p.re).max(p.re - self.hi.re).max(0.0);
        let dy = (self.lo.im - p.im).max(p.im - self.hi.im).max(0.0);
        dx.hypot(dy)
    }

    fn dist(&self, o: &Aabb) -> f64 {
        let dx = (self.lo.re - o.hi.re).max(o.lo.re - self.hi.re).max(0.0);
        let dy = (self.lo.im - o.hi.im).max(o.lo.im - self.hi.im).max(0.0);
        dx.hypot(dy)
    }
}

#[derive(Clone, Debug)]
struct Node {
    bbox: Aabb,
    lo: usize,
    hi: usize,
    children: Option<(usize, usize)>,
}

/// A polyline (open or closed) indexed for nearest-distance queries.
#[derive(Clone, Debug)]
pub struct Path {
    pts: Vec<Complex64>,
    closed: bool,
    nodes: Vec<Node>,
}

impl Path {
    /// Builds the index. A single vertex is a degenerate segment.
    pub fn new(pts: Vec<Complex64>, closed: bool) -> Self {
        let mut path = Self {
            pts,
            closed,
            nodes: Vec::new(),
        };
        let n = path.segment_count();
        if n > 0 {
            path.build(0, n);
        }
        path
    }

    pub fn points(&self) -> &[Complex64] {
        &self.pts
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn segment_count(&self) -> usize {
        match self.pts.len() {
            0 => 0,
            1 => 1,
            n if self.closed => n,
            n => n - 1,
        }
    }

    pub fn segment(&self, i: usize) -> (Complex64, Complex64) {
        let n = self.pts.len();
        (self.pts[i % n], self.pts[(i + 1) % n])
    }

    fn build(&mut self, lo: usize, hi: usize) -> usize {
        let idx = self.nodes.len();
        self.nodes.push(Node {
            bbox: Aabb::of_segment(self.pts[lo % self.pts.len()], self.pts[lo % self.pts.len()]),
            lo,
            hi,
            children: None,
        });
        if hi - lo <= LEAF {
            let mut bb = {
                let (a, b) = self.segment(lo);
                Aabb::of_segment(a, b)
            };
            for i in lo + 1..hi {
                let (a, b) = self.segment(i);
                bb = bb.union(&Aabb::of_segment(a, b));
            }
            self.nodes[idx].bbox = bb;
        } else {
            let mid = (lo + hi) / 2;
            let l = self.build(lo, mid);
            let r = self.build(mid, hi);
            self.nodes[idx].bbox = self.nodes[l].bbox.union(&self.nodes[r].bbox);
            self.nodes[idx].children = Some((l, r));
        }
        idx
    }

    /// Distance from `p` to the polyline and the closest point on it.
    pub fn distance_to_point(&self, p: Complex64) -> (f64, Complex64) {
        let mut best = (f64::INFINITY, p);
        if !self.nodes.is_empty() {
            self.point_query(0, p, &mut best);
        }
        best
    }

    fn point_query(&self, node: usize, p: Complex64, best: &mut (f64, Complex64)) {
        let nd = &self.nodes[node];
        if nd.bbox.dist_point(p) >= best.0 {
            return;
        }
        match nd.children {
            None => {
                for i in nd.lo..nd.hi {
                    let (a, b) = self.segment(i);
                    let q = closest_on_segment(p, a, b);
                    let d = (q - p).norm();
                    if d < best.0 {
                        *best = (d, q);
                    }
                }
            }
            Some((l, r)) => {
                let (dl, dr) = (self.nodes[l].bbox.dist_point(p), self.nodes[r].bbox.dist_point(p));
                let (first, second) = if dl <= dr { (l, r) } else { (r, l) };
                self.point_query(first, p, best);
                self.point_query(second, p, best);
            }
        }
    }

    /// Minimum distance between two polylines with witnesses on `self` and `other`.
    /// Zero when they cross or touch.
    pub fn distance_to(&self, other: &Path) -> (f64, Complex64, Complex64) {
        let mut best = (f64::INFINITY, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        if !self.nodes.is_empty() && !other.nodes.is_empty() {
            self.pair_query(0, other, 0, &mut best);
        }
        best
    }

    fn pair_query(&self, a: usize, other: &Path, b: usize, best: &mut (f64, Complex64, Complex64)) {
        let (na, nb) = (&self.nodes[a], &other.nodes[b]);
        if best.0 == 0.0 || na.bbox.dist(&nb.bbox) >= best.0 {
            return;
        }
        match (na.children, nb.children) {
            (None, None) => {
                for i in na.lo..na.hi {
                    let (p, q) = self.segment(i);
                    for j in nb.lo..nb.hi {
                        let (r, s) = other.segment(j);
                        let (d, x, y) = segment_distance(p, q, r, s);
                        if d < best.0 {
                            *best = (d, x, y);
                        }
                    }
                }
            }
            (Some((l, r)), None) => {
                self.pair_query(l, other, b, best);
                self.pair_query(r, other, b, best);
            }
            (None, Some((l, r))) => {
                self.pair_query(a, other, l, best);
                self.pair_query(a, other, r, best);
            }
            (Some((al, ar)), Some((bl, br))) => {
                let mut pairs = [(al, bl), (al, br), (ar, bl), (ar, br)];
                pairs.sort_by(|x, y| {
                    let dx = self.nodes[x.0].bbox.dist(&other.nodes[x.1].bbox);
                    let dy = self.nodes[y.0].bbox.dist(&other.nodes[y.1].bbox);
                    dx.total_cmp(&dy)
                });
                for (x, y) in pairs {
                    self.pair_query(x, other, y, best);
                }
            }
        }
    }

    /// Winding number of a closed path around `p` (0 for open paths).
    pub fn winding_number(&self, p: Complex64) -> i64 {
        if !self.closed || self.pts.len() < 3 {
            return 0;
        }
        let mut w = 0;
        self.winding_query(0, p, &mut w);
        w
    }

    fn winding_query(&self, node: usize, p: Complex64, w: &mut i64) {
        let nd = &self.nodes[node];
        if nd.bbox.hi.re < p.re || nd.bbox.lo.im > p.im || nd.bbox.hi.im < p.im {
            return;
        }
        match nd.children {
            None => {
                for i in nd.lo..nd.hi {
                    let (a, b) = self.segment(i);
                    if a.im <= p.im {
                        if b.im > p.im && cross(b - a, p - a) > 0.0 {
                            *w += 1;
                        }
                    } else if b.im <= p.im && cross(b - a, p - a) < 0.0 {
                        *w -= 1;
                    }
                }
            }
            Some((l, r)) => {
                self.winding_query(l, p, w);
                self.winding_query(r, p, w);
            }
        }
    }

    /// True when `p` is enclosed by a closed path or within `tol` of the path.
    pub fn contains(&self, p: Complex64, tol: f64) -> bool {
        self.winding_number(p) != 0 || self.distance_to_point(p).0 <= tol
    }
}
