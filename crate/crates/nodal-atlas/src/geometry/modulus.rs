//! Quasiconvexity modulus estimation.
//!
//! For each boundary point `x0` and radius `r`, the modulus value is the
//! smallest `w` such that `Omega ∩ B_r(x0) ⊂ {y : (y - x0)·n <= r w}` for
//! some unit direction `n`. The estimator maximizes over sampled boundary
//! centers, minimizes over a uniform direction fan (always including the
//! outward normal of the nearest polyline edge, which certifies exact zeros
//! on convex inputs), and finishes with an isotonic pass so the returned
//! values are nondecreasing in `r`.

use super::domain::{GraphPatch, PlanarDomain, QuasiconvexityModulus};
use super::primitives::*;
use crate::error::{Error, Result};

/// Direction fan size from the design defaults.
pub const DEFAULT_DIRECTION_SAMPLES: usize = 720;

struct ModulusSampler<'a> {
    polygon: &'a [Pt2],
    boundary_samples: &'a [Pt2],
    arc_samples: usize,
}

impl ModulusSampler<'_> {
    /// Candidate extreme points of `Omega ∩ B_r(x0)`: boundary samples inside
    /// the ball plus circle points inside the polygon, reduced to their
    /// convex hull (the maximum of a linear functional is attained there).
    fn candidates(&self, x0: Pt2, r: f64) -> Vec<Pt2> {
        let r2 = r * r;
        let mut pts: Vec<Pt2> = self
            .boundary_samples
            .iter()
            .copied()
            .filter(|p| (p - x0).norm_squared() <= r2)
            .collect();
        for i in 0..self.arc_samples {
            let th = 2.0 * std::f64::consts::PI * i as f64 / self.arc_samples as f64;
            let p = pt(x0.x + r * th.cos(), x0.y + r * th.sin());
            if point_in_polygon(p, self.polygon, 0.0) {
                pts.push(p);
            }
        }
        if pts.len() > 16 {
            convex_hull(&pts)
        } else {
            pts
        }
    }

    /// Smallest half-plane excess at `x0`: coarse minimization over the
    /// direction fan followed by a local ternary refinement around the best
    /// fan angle. The edge normal certifies exact zeros on convex inputs.
    fn excess(&self, x0: Pt2, r: f64, fan: usize, edge_normal: Vc2) -> f64 {
        let cands = self.candidates(x0, r);
        if cands.is_empty() {
            return 0.0;
        }
        let sup_along = |n: Vc2| -> f64 {
            cands
                .iter()
                .map(|y| (y - x0).dot(&n))
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let sup_angle = |th: f64| sup_along(Vc2::new(th.cos(), th.sin()));
        let mut best = sup_along(edge_normal);
        let mut best_angle = edge_normal.y.atan2(edge_normal.x);
        let step = 2.0 * std::f64::consts::PI / fan as f64;
        for i in 0..fan {
            let th = step * i as f64;
            let v = sup_angle(th);
            if v < best {
                best = v;
                best_angle = th;
            }
        }
        // ternary refinement inside the bracketing fan cell
        let (mut lo, mut hi) = (best_angle - step, best_angle + step);
        for _ in 0..48 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if sup_angle(m1) <= sup_angle(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        best.min(sup_angle(0.5 * (lo + hi)))
    }
}

fn estimate_over_centers(
    polygon: &[Pt2],
    centers: &[(Pt2, Vc2)],
    radii: &[f64],
    direction_samples: usize,
) -> Result<QuasiconvexityModulus> {
    if centers.is_empty() {
        return Err(Error::invalid("empty boundary sampling"));
    }
    let min_r = radii[0];
    let boundary_samples: Vec<Pt2> = {
        let n = polygon.len();
        let spacing = min_r / 32.0;
        let mut out = Vec::new();
        for i in 0..n {
            let a = polygon[i];
            let b = polygon[(i + 1) % n];
            let len = (b - a).norm();
            let m = (len / spacing).ceil().max(1.0) as usize;
            for k in 0..m {
                out.push(a + (b - a) * (k as f64 / m as f64));
            }
        }
        out
    };
    let sampler = ModulusSampler {
        polygon,
        boundary_samples: &boundary_samples,
        arc_samples: 192,
    };
    let mut values = Vec::with_capacity(radii.len());
    for &r in radii {
        let zero_tol = 1e-8 * r;
        let mut worst = 0.0_f64;
        for &(x0, edge_normal) in centers {
            let excess = sampler.excess(x0, r, direction_samples, edge_normal);
            // exact zero when the best supporting half-plane contains the cap
            let w = if excess <= zero_tol { 0.0 } else { excess / r };
            worst = worst.max(w);
        }
        values.push(worst);
    }
    // isotonic pass: omega must be nondecreasing
    for i in 1..values.len() {
        if values[i] < values[i - 1] {
            values[i] = values[i - 1];
        }
    }
    Ok(QuasiconvexityModulus {
        radii: radii.to_vec(),
        values,
    })
}

fn validate_radii(radii: &[f64], r_max: f64, diameter: f64) -> Result<()> {
    if radii.is_empty() {
        return Err(Error::invalid("empty radius grid"));
    }
    if !radii.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::invalid("radius grid must be strictly increasing"));
    }
    if radii[0] <= 0.0 {
        return Err(Error::invalid("radii must be positive"));
    }
    let top = radii[radii.len() - 1];
    if top > r_max + 1e-12 {
        return Err(Error::invalid(format!(
            "radius {top} exceeds the domain scale r0 = {r_max}"
        )));
    }
    if top > diameter {
        return Err(Error::invalid("radius exceeds the domain diameter"));
    }
    Ok(())
}

/// Estimates the quasiconvexity modulus of a domain on a radius grid.
pub fn estimate_modulus(
    domain: &PlanarDomain,
    radii: &[f64],
    direction_samples: usize,
) -> Result<QuasiconvexityModulus> {
    validate_radii(radii, domain.r0, domain.diameter())?;
    if direction_samples < 8 {
        return Err(Error::invalid("need at least 8 direction samples"));
    }
    let min_r = radii[0];
    let spacing = (min_r / 4.0).max(domain.diameter() / 4096.0);
    let centers: Vec<(Pt2, Vc2)> = domain
        .sample_boundary(spacing)
        .into_iter()
        .map(|p| (p, domain.outward_normal_near(p)))
        .collect();
    estimate_over_centers(&domain.boundary, &centers, radii, direction_samples)
}

/// Estimates the modulus of a single graph patch. The patch graph is closed
/// with a cap well above it; only graph points act as centers, so the cap
/// never contributes.
pub fn estimate_modulus_patch(
    patch: &GraphPatch,
    radii: &[f64],
    direction_samples: usize,
) -> Result<QuasiconvexityModulus> {
    let (lo, hi) = patch.interval;
    validate_radii(radii, (hi - lo) / 2.0, hi - lo)?;
    let min_r = radii[0];
    let m = (((hi - lo) / (min_r / 64.0)).ceil() as usize).clamp(64, 400_000);
    let mut graph_local: Vec<(f64, f64)> = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let x = lo + (hi - lo) * i as f64 / m as f64;
        graph_local.push((x, patch.eval(x)));
    }
    let max_y = graph_local.iter().map(|p| p.1).fold(0.0_f64, f64::max);
    let cap = max_y + (hi - lo);
    // polygon in local coordinates: graph left-to-right, then the cap
    let mut polygon: Vec<Pt2> = graph_local.iter().map(|&(x, y)| pt(x, y)).collect();
    polygon.push(pt(hi, cap));
    polygon.push(pt(lo, cap));
    // centers on the graph only, with the local downward normal of the graph
    let r_top = radii[radii.len() - 1];
    let center_step = (min_r / 4.0).max((hi - lo) / 2048.0);
    let mut centers = Vec::new();
    let mut x = lo + r_top;
    while x <= hi - r_top {
        let y = patch.eval(x);
        let d = (patch.eval(x + 1e-6) - patch.eval(x - 1e-6)) / 2e-6;
        let t = Vc2::new(1.0, d).normalize();
        centers.push((pt(x, y), Vc2::new(t.y, -t.x)));
        x += center_step;
    }
    estimate_over_centers(&polygon, &centers, radii, direction_samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::domain::preset_domain;

    #[test]
    fn convex_domains_have_zero_modulus() {
        for name in ["unit-square", "unit-disk", "ngon-6", "half-disk"] {
            let d = preset_domain(name, 0.02).unwrap();
            let m = estimate_modulus(&d, &[0.1, 0.2], 48).unwrap();
            assert_eq!(m.values, vec![0.0, 0.0], "{name}");
        }
    }

    #[test]
    fn half_box_flat_boundary_zero() {
        let d = preset_domain("half-box", 0.0).unwrap();
        let m = estimate_modulus(&d, &[0.1, 0.2], 48).unwrap();
        assert!(m.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn parabola_modulus_is_linear() {
        // brute-force oracle on the exact parabola: for r = 0.1 the deepest
        // excess below the tangent half-plane is t where t + t^2 = r^2,
        // i.e. omega(r) = t / r = r - r^3 + O(r^5).
        let d = preset_domain("parabola", 0.02).unwrap();
        let r = 0.1;
        let m = estimate_modulus(&d, &[r], 360).unwrap();
        let t = (-1.0 + (1.0 + 4.0 * r * r).sqrt()) / 2.0;
        let oracle = t / r;
        assert!(
            (m.values[0] - oracle).abs() < 5e-3,
            "estimated {} vs oracle {}",
            m.values[0],
            oracle
        );
        assert!((m.values[0] - r).abs() < 5e-3);
    }

    #[test]
    fn rigid_motion_invariance() {
        let d = preset_domain("parabola", 0.02).unwrap();
        let rot = Frame2::from_angle(0.37);
        let shift = Vc2::new(1.3, -0.7);
        let boundary: Vec<Pt2> = d
            .boundary
            .iter()
            .map(|p| rot.to_world(pt(0.0, 0.0), p.coords) + shift)
            .collect();
        let moved = PlanarDomain::new(
            boundary,
            vec![],
            d.lipschitz_l,
            d.r0,
            crate::geometry::domain::DomainKind::Quasiconvex,
        )
        .unwrap();
        let m0 = estimate_modulus(&d, &[0.1], 180).unwrap();
        let m1 = estimate_modulus(&moved, &[0.1], 180).unwrap();
        assert!((m0.values[0] - m1.values[0]).abs() < 2e-3);
    }

    #[test]
    fn radius_validation() {
        let d = preset_domain("unit-square", 0.0).unwrap();
        assert!(estimate_modulus(&d, &[0.5], 90).is_err()); // exceeds r0
        assert!(estimate_modulus(&d, &[], 90).is_err());
        assert!(estimate_modulus(&d, &[0.2, 0.1], 90).is_err());
    }

    #[test]
    fn values_nondecreasing() {
        let d = preset_domain("parabola", 0.02).unwrap();
        let m = estimate_modulus(&d, &[0.05, 0.1, 0.2], 90).unwrap();
        assert!(m.is_nondecreasing());
    }
}
