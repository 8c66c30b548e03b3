//! Convex-hull approximation gap of local boundary caps.
//!
//! For a boundary point `x` and radius `r`, let `B_{r,+}(x) = B_r(x) ∩ Omega`
//! and `V_r(x)` its convex hull. The gap is the largest distance from the
//! sampled boundary of `B_{r,+}` to the hull boundary; for quasiconvex
//! domains it is bounded by `2 r omega(2r)`.

use super::domain::PlanarDomain;
use super::primitives::*;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct HullGap {
    pub gap: f64,
    /// Convex hull polygon of the sampled cap.
    pub hull: Vec<Pt2>,
    /// Sample count on the cap boundary.
    pub samples: usize,
}

/// Measures the convex-hull gap of `B_r(x) ∩ Omega`.
///
/// Sampling resolution follows the design default: arc spacing `r/200` on
/// both the domain boundary and the circle.
pub fn convex_hull_gap(domain: &PlanarDomain, x: Pt2, r: f64) -> Result<HullGap> {
    if !(r > 0.0) || r >= domain.r0 / 2.0 + 1e-15 {
        return Err(Error::invalid(format!(
            "hull-gap radius r = {r} must lie in (0, r0/2) with r0 = {}",
            domain.r0
        )));
    }
    let spacing = r / 200.0;

    // boundary-of-domain samples inside the ball, tracked in polyline order
    // to check that the cap meets the boundary in a single run
    let boundary_samples = domain.sample_boundary(spacing);
    let nb = boundary_samples.len();
    let inside_ball: Vec<bool> = boundary_samples
        .iter()
        .map(|p| (p - x).norm() <= r)
        .collect();
    let boundary_runs = cyclic_runs(&inside_ball);
    if boundary_runs == 0 {
        return Err(Error::geometry("B_r(x) does not meet the domain boundary"));
    }
    if boundary_runs > 1 {
        return Err(Error::geometry(
            "B_r(x) ∩ ∂Omega is disconnected; outside the local setting",
        ));
    }

    // circle samples inside the domain
    let n_arc = ((2.0 * std::f64::consts::PI * r / spacing).ceil() as usize).max(16);
    let mut arc_inside = Vec::with_capacity(n_arc);
    let mut arc_pts = Vec::new();
    for i in 0..n_arc {
        let th = 2.0 * std::f64::consts::PI * i as f64 / n_arc as f64;
        let p = pt(x.x + r * th.cos(), x.y + r * th.sin());
        let inside = domain.contains(p, 0.0);
        arc_inside.push(inside);
        if inside {
            arc_pts.push(p);
        }
    }
    if cyclic_runs(&arc_inside) > 1 {
        return Err(Error::geometry(
            "∂B_r(x) ∩ Omega is disconnected; outside the local setting",
        ));
    }

    let mut cap: Vec<Pt2> = boundary_samples
        .into_iter()
        .zip(inside_ball)
        .filter_map(|(p, ok)| ok.then_some(p))
        .collect();
    cap.extend(arc_pts);
    if cap.is_empty() {
        return Err(Error::geometry("B_r(x) ∩ Omega is empty"));
    }
    let _ = nb;

    let hull = convex_hull(&cap);
    if hull.len() < 3 {
        return Ok(HullGap {
            gap: 0.0,
            hull,
            samples: cap.len(),
        });
    }
    let gap = cap
        .iter()
        .map(|p| dist_point_polygon_boundary(*p, &hull))
        .fold(0.0_f64, f64::max);
    Ok(HullGap {
        gap,
        hull,
        samples: cap.len(),
    })
}

/// Number of maximal `true` runs in a cyclic boolean sequence.
fn cyclic_runs(flags: &[bool]) -> usize {
    let n = flags.len();
    if n == 0 {
        return 0;
    }
    let mut runs = 0;
    for i in 0..n {
        if flags[i] && !flags[(i + n - 1) % n] {
            runs += 1;
        }
    }
    if runs == 0 && flags[0] {
        // all true
        return 1;
    }
    runs
}
