//! Low-level planar geometry: polygons, hulls, clipping, distances.
//!
//! Conventions: polygons are `Vec<Pt2>` without a repeated closing vertex,
//! counter-clockwise for positive area. Tolerances are absolute and assume
//! desk-scale coordinates of order one.

use nalgebra::{Matrix2, Point2, Vector2};

pub type Pt2 = Point2<f64>;
pub type Vc2 = Vector2<f64>;
pub type Mat2 = Matrix2<f64>;

pub const GEOM_EPS: f64 = 1e-12;

#[inline]
pub fn pt(x: f64, y: f64) -> Pt2 {
    Point2::new(x, y)
}

/// Cross product of (b - a) and (c - a); positive when a,b,c turn left.
#[inline]
pub fn orient2d(a: Pt2, b: Pt2, c: Pt2) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Signed area of a polygon (positive for counter-clockwise).
pub fn polygon_area(poly: &[Pt2]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        s += p.x * q.y - q.x * p.y;
    }
    0.5 * s
}

/// Axis-aligned bounding box (min, max).
pub fn bbox(poly: &[Pt2]) -> (Pt2, Pt2) {
    let mut lo = pt(f64::INFINITY, f64::INFINITY);
    let mut hi = pt(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in poly {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    (lo, hi)
}

fn segments_properly_intersect(a: Pt2, b: Pt2, c: Pt2, d: Pt2) -> bool {
    let d1 = orient2d(c, d, a);
    let d2 = orient2d(c, d, b);
    let d3 = orient2d(a, b, c);
    let d4 = orient2d(a, b, d);
    ((d1 > GEOM_EPS && d2 < -GEOM_EPS) || (d1 < -GEOM_EPS && d2 > GEOM_EPS))
        && ((d3 > GEOM_EPS && d4 < -GEOM_EPS) || (d3 < -GEOM_EPS && d4 > GEOM_EPS))
}

/// Checks that a closed polyline has no self-intersections between
/// non-adjacent edges. Quadratic scan; adequate for desk-scale inputs.
pub fn polygon_is_simple(poly: &[Pt2]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if (b - a).norm() < GEOM_EPS {
            return false;
        }
        for j in (i + 1)..n {
            // skip adjacent edges (shared vertex)
            if j == i || (j + 1) % n == i || (i + 1) % n == j {
                continue;
            }
            let (c, d) = (poly[j], poly[(j + 1) % n]);
            if segments_properly_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

/// All vertices in convex position (weak: collinear runs allowed).
pub fn polygon_is_convex(poly: &[Pt2]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    let scale = {
        let (lo, hi) = bbox(poly);
        ((hi.x - lo.x).abs() + (hi.y - lo.y).abs()).max(1.0)
    };
    let tol = 1e-12 * scale * scale;
    for i in 0..n {
        if orient2d(poly[i], poly[(i + 1) % n], poly[(i + 2) % n]) < -tol {
            return false;
        }
    }
    true
}

/// Point-in-polygon by crossing number; points within `tol` of the boundary
/// count as inside (the boundary-distance pass is skipped when `tol <= 0`).
pub fn point_in_polygon(p: Pt2, poly: &[Pt2], tol: f64) -> bool {
    if tol > 0.0 && dist_point_polygon_boundary(p, poly) <= tol {
        return true;
    }
    let n = poly.len();
    let mut inside = false;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if (a.y > p.y) != (b.y > p.y) {
            let xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < xint {
                inside = !inside;
            }
        }
    }
    inside
}

/// Distance from a point to a segment.
pub fn dist_point_segment(p: Pt2, a: Pt2, b: Pt2) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 <= GEOM_EPS * GEOM_EPS {
        return (p - a).norm();
    }
    let t = ((p - a).dot(&ab) / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Distance from a point to the boundary of a closed polygon.
pub fn dist_point_polygon_boundary(p: Pt2, poly: &[Pt2]) -> f64 {
    let n = poly.len();
    let mut d = f64::INFINITY;
    for i in 0..n {
        d = d.min(dist_point_segment(p, poly[i], poly[(i + 1) % n]));
    }
    d
}

/// Convex hull by Andrew's monotone chain. Returns CCW hull without
/// repeated endpoint; collinear points on the hull are dropped.
pub fn convex_hull(points: &[Pt2]) -> Vec<Pt2> {
    let mut pts: Vec<Pt2> = points.to_vec();
    pts.sort_by(|a, b| (a.x, a.y).partial_cmp(&(b.x, b.y)).unwrap());
    pts.dedup_by(|a, b| (*a - *b).norm() < GEOM_EPS);
    let n = pts.len();
    if n < 3 {
        return pts;
    }
    let mut hull: Vec<Pt2> = Vec::with_capacity(2 * n);
    for &p in &pts {
        while hull.len() >= 2
            && orient2d(hull[hull.len() - 2], hull[hull.len() - 1], p) <= GEOM_EPS
        {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev() {
        while hull.len() >= lower_len
            && orient2d(hull[hull.len() - 2], hull[hull.len() - 1], p) <= GEOM_EPS
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Clips a polygon against the closed half-plane left of the directed line
/// a -> b (Sutherland-Hodgman step).
pub fn clip_halfplane(subject: &[Pt2], a: Pt2, b: Pt2) -> Vec<Pt2> {
    let n = subject.len();
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(n + 2);
    for i in 0..n {
        let s = subject[i];
        let e = subject[(i + 1) % n];
        let sc = orient2d(a, b, s);
        let ec = orient2d(a, b, e);
        let s_in = sc >= -GEOM_EPS;
        let e_in = ec >= -GEOM_EPS;
        if s_in {
            out.push(s);
            if !e_in {
                let t = sc / (sc - ec);
                out.push(s + (e - s) * t);
            }
        } else if e_in {
            let t = sc / (sc - ec);
            out.push(s + (e - s) * t);
        }
    }
    out
}

/// Intersection of a polygon with a convex CCW clip polygon.
pub fn clip_polygon_convex(subject: &[Pt2], clip: &[Pt2]) -> Vec<Pt2> {
    let mut cur = subject.to_vec();
    let m = clip.len();
    for i in 0..m {
        if cur.is_empty() {
            break;
        }
        cur = clip_halfplane(&cur, clip[i], clip[(i + 1) % m]);
    }
    cur
}

/// Clips segment [p, q] to a convex CCW polygon; returns the retained
/// parameter interval endpoints, if nonempty.
pub fn clip_segment_convex(p: Pt2, q: Pt2, clip: &[Pt2]) -> Option<(Pt2, Pt2)> {
    let d = q - p;
    let (mut t0, mut t1) = (0.0_f64, 1.0_f64);
    let m = clip.len();
    for i in 0..m {
        let a = clip[i];
        let b = clip[(i + 1) % m];
        let nrm = Vc2::new(-(b.y - a.y), b.x - a.x); // inward normal for CCW
        let denom = nrm.dot(&d);
        let num = nrm.dot(&(a - p));
        if denom.abs() < GEOM_EPS {
            if num > GEOM_EPS {
                return None; // parallel and outside
            }
            continue;
        }
        let t = num / denom;
        if denom > 0.0 {
            t0 = t0.max(t);
        } else {
            t1 = t1.min(t);
        }
        if t0 > t1 {
            return None;
        }
    }
    Some((p + d * t0, p + d * t1))
}

/// Inscribed regular polygon of a circle, CCW, first vertex at angle
/// `phase`. Used to polygonalize curved regions at a fixed chord tolerance.
pub fn circle_polygon(center: Pt2, r: f64, sides: usize, phase: f64) -> Vec<Pt2> {
    (0..sides)
        .map(|i| {
            let th = phase + 2.0 * std::f64::consts::PI * (i as f64) / (sides as f64);
            pt(center.x + r * th.cos(), center.y + r * th.sin())
        })
        .collect()
}

/// Crossing-number point-in-polygon tester with edges bucketed by y-range;
/// queries cost O(edges per bucket) instead of O(n).
#[derive(Debug, Clone)]
pub struct PolygonTester {
    poly: Vec<Pt2>,
    y_lo: f64,
    dy: f64,
    buckets: Vec<Vec<u32>>,
}

impl PolygonTester {
    pub fn new(poly: &[Pt2]) -> PolygonTester {
        let n = poly.len();
        let (lo, hi) = bbox(poly);
        let nb = (2 * n).clamp(16, 1 << 16);
        let dy = ((hi.y - lo.y) / nb as f64).max(1e-12);
        let mut buckets = vec![Vec::new(); nb];
        for i in 0..n {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            let (ylo, yhi) = (a.y.min(b.y), a.y.max(b.y));
            let b0 = (((ylo - lo.y) / dy).floor() as isize).clamp(0, nb as isize - 1) as usize;
            let b1 = (((yhi - lo.y) / dy).floor() as isize).clamp(0, nb as isize - 1) as usize;
            for k in b0..=b1 {
                buckets[k].push(i as u32);
            }
        }
        PolygonTester {
            poly: poly.to_vec(),
            y_lo: lo.y,
            dy,
            buckets,
        }
    }

    pub fn contains(&self, p: Pt2) -> bool {
        let nb = self.buckets.len();
        let k = ((p.y - self.y_lo) / self.dy).floor() as isize;
        if k < 0 || k >= nb as isize {
            return false;
        }
        let n = self.poly.len();
        let mut inside = false;
        for &i in &self.buckets[k as usize] {
            let a = self.poly[i as usize];
            let b = self.poly[(i as usize + 1) % n];
            if (a.y > p.y) != (b.y > p.y) {
                let xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < xint {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

/// Rotation frame mapping local graph coordinates (tangent, normal) to world
/// coordinates: `world = anchor + tangent*x' + normal*x_d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame2 {
    pub tangent: Vc2,
    pub normal: Vc2,
}

impl Frame2 {
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Frame2 {
            tangent: Vc2::new(c, s),
            normal: Vc2::new(-s, c),
        }
    }

    pub fn angle(&self) -> f64 {
        self.tangent.y.atan2(self.tangent.x)
    }

    pub fn to_world(&self, anchor: Pt2, local: Vc2) -> Pt2 {
        anchor + self.tangent * local.x + self.normal * local.y
    }

    pub fn to_local(&self, anchor: Pt2, world: Pt2) -> Vc2 {
        let d = world - anchor;
        Vc2::new(d.dot(&self.tangent), d.dot(&self.normal))
    }
}

impl Default for Frame2 {
    fn default() -> Self {
        Frame2 {
            tangent: Vc2::new(1.0, 0.0),
            normal: Vc2::new(0.0, 1.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<Pt2> {
        vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)]
    }

    #[test]
    fn area_and_orientation() {
        assert!((polygon_area(&square()) - 1.0).abs() < 1e-15);
        let mut rev = square();
        rev.reverse();
        assert!((polygon_area(&rev) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn simplicity() {
        assert!(polygon_is_simple(&square()));
        let bow = vec![pt(0.0, 0.0), pt(1.0, 1.0), pt(1.0, 0.0), pt(0.0, 1.0)];
        assert!(!polygon_is_simple(&bow));
    }

    #[test]
    fn point_tests() {
        let sq = square();
        assert!(point_in_polygon(pt(0.5, 0.5), &sq, 0.0));
        assert!(!point_in_polygon(pt(1.5, 0.5), &sq, 0.0));
        assert!(point_in_polygon(pt(1.0 + 1e-13, 0.5), &sq, 1e-9));
    }

    #[test]
    fn hull_of_noisy_square() {
        let mut pts = square();
        pts.push(pt(0.5, 0.5));
        pts.push(pt(0.25, 0.5));
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 4);
        assert!((polygon_area(&hull) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn clip_triangle_against_square() {
        let tri = vec![pt(-0.5, 0.25), pt(0.5, 0.25), pt(0.5, 0.75)];
        let clipped = clip_polygon_convex(&tri, &square());
        // trapezoid x in [0, 0.5], between y = 0.25 and the hypotenuse
        let a = polygon_area(&clipped);
        assert!(a > 0.0 && a < 0.25);
        for p in &clipped {
            assert!(p.x >= -1e-12 && p.x <= 0.5 + 1e-12);
        }
    }

    #[test]
    fn segment_clip() {
        let sq = square();
        let (a, b) = clip_segment_convex(pt(-1.0, 0.5), pt(2.0, 0.5), &sq).unwrap();
        assert!((a.x - 0.0).abs() < 1e-12 && (b.x - 1.0).abs() < 1e-12);
        assert!(clip_segment_convex(pt(-1.0, 2.5), pt(2.0, 2.5), &sq).is_none());
    }

    #[test]
    fn frame_roundtrip() {
        let f = Frame2::from_angle(0.7);
        let anchor = pt(0.3, -0.2);
        let local = Vc2::new(0.11, -0.45);
        let w = f.to_world(anchor, local);
        let back = f.to_local(anchor, w);
        assert!((back - local).norm() < 1e-14);
    }
}
