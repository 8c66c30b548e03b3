//! Almost flat spots of convex boundary graphs.
//!
//! The search follows the averaging device behind the existence proof:
//! among candidate bases `y`, minimize the discrete analogue of
//! `int_{-r}^{r} phi''(y + t) dt`, namely `phi'(y+r) - phi'(y-r)` formed
//! with one-sided difference quotients, then take the subgradient plane at
//! the minimizer. For a convex profile the returned plane is a support
//! plane and the measured defect is `sup_{|x-y|<r} (phi - P)`.

use super::domain::{GraphPatch, SupportPlane};
use crate::error::{Error, Result};

/// Result of a flat-spot search.
#[derive(Debug, Clone, Copy)]
pub struct FlatSpot {
    pub base: f64,
    pub plane: SupportPlane,
    /// Measured `sup (phi - P)` over the window of radius `r`.
    pub defect: f64,
}

/// Verifies convexity through second differences on a uniform grid.
pub fn verify_convex(patch: &GraphPatch, samples: usize, tol: f64) -> Result<()> {
    let (lo, hi) = patch.interval;
    let dx = (hi - lo) / samples as f64;
    for i in 1..samples {
        let x = lo + dx * i as f64;
        let second = patch.eval(x - dx) - 2.0 * patch.eval(x) + patch.eval(x + dx);
        if second < -tol {
            return Err(Error::NonConvex {
                location: x,
                value: second,
            });
        }
    }
    Ok(())
}

/// Finds an almost flat spot of a convex graph patch at scale `r`.
///
/// Candidate bases live on a grid of spacing `r/16` inside the middle half
/// of the patch interval; difference quotients use step `r/64`. Ties in the
/// averaged second difference resolve to the smallest base.
pub fn find_flat_spot(patch: &GraphPatch, r: f64) -> Result<FlatSpot> {
    let (lo, hi) = patch.interval;
    let half_width = 0.5 * (hi - lo).min(-2.0 * lo).min(2.0 * hi);
    if !(r > 0.0) || r >= half_width / 2.0 + 1e-15 {
        return Err(Error::invalid(format!(
            "flat-spot radius r = {r} too large for patch interval [{lo}, {hi}]"
        )));
    }
    verify_convex(patch, 1024, 1e-10)?;

    let delta = r / 64.0;
    // base grid: middle half of the interval, clipped so the probing stencil
    // x0 +- (r + delta) stays inside the patch
    let base_lo = (lo / 2.0).max(lo + r + delta);
    let base_hi = (hi / 2.0).min(hi - r - delta);
    if base_lo > base_hi {
        return Err(Error::invalid("no admissible flat-spot bases at this r"));
    }
    let step = r / 16.0;
    let n_bases = ((base_hi - base_lo) / step).floor() as usize;

    let mut best_base = base_lo;
    let mut best_score = f64::INFINITY;
    for i in 0..=n_bases {
        let y = base_lo + step * i as f64;
        let forward = (patch.eval(y + r + delta) - patch.eval(y + r)) / delta;
        let backward = (patch.eval(y - r) - patch.eval(y - r - delta)) / delta;
        let score = forward - backward;
        if score < best_score {
            best_score = score;
            best_base = y;
        }
    }

    let x0 = best_base;
    // subgradient slope between the nearest-sample secants; valid support
    // slope for any convex profile
    let g_left = (patch.eval(x0) - patch.eval(x0 - delta)) / delta;
    let g_right = (patch.eval(x0 + delta) - patch.eval(x0)) / delta;
    let plane = SupportPlane {
        base: x0,
        value_at_base: patch.eval(x0),
        slope: 0.5 * (g_left + g_right),
    };

    // defect over the closed window [x0 - r, x0 + r], sampled in steps of
    // r/64 so the endpoints are hit exactly
    let mut defect = 0.0_f64;
    for k in -64..=64 {
        let x = x0 + r * (k as f64) / 64.0;
        defect = defect.max(patch.eval(x) - plane.eval(x));
    }
    Ok(FlatSpot {
        base: x0,
        plane,
        defect,
    })
}

/// Support-plane validity margin: `min (phi - P)` over a uniform patch grid.
pub fn support_margin(patch: &GraphPatch, plane: &SupportPlane, samples: usize) -> f64 {
    patch
        .sample_grid(samples)
        .into_iter()
        .map(|x| patch.eval(x) - plane.eval(x))
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::domain::preset_patch;

    #[test]
    fn affine_has_zero_defect() {
        let patch = preset_patch("affine").unwrap();
        let fs = find_flat_spot(&patch, 0.05).unwrap();
        assert!(fs.defect.abs() < 1e-14);
        assert!(support_margin(&patch, &fs.plane, 512) > -1e-12);
    }

    #[test]
    fn quadratic_defect_is_r_squared() {
        let patch = preset_patch("quadratic").unwrap();
        for r in [0.1, 0.05, 0.01] {
            let fs = find_flat_spot(&patch, r).unwrap();
            assert!(
                (fs.defect / (r * r) - 1.0).abs() < 1e-6,
                "r = {r}: defect {}",
                fs.defect
            );
            assert!(support_margin(&patch, &fs.plane, 512) > -1e-12);
        }
    }

    #[test]
    fn absval_flat_spot_avoids_kink() {
        let patch = preset_patch("absval").unwrap();
        let fs = find_flat_spot(&patch, 0.1).unwrap();
        assert!(fs.base.abs() >= 0.1, "base {} too close to kink", fs.base);
        assert!(fs.defect.abs() < 1e-13);
        assert!(support_margin(&patch, &fs.plane, 512) > -1e-12);
    }

    #[test]
    fn nonconvex_rejected_with_location() {
        let patch = preset_patch("neg-quadratic").unwrap();
        match find_flat_spot(&patch, 0.05) {
            Err(Error::NonConvex { value, .. }) => assert!(value < 0.0),
            other => panic!("expected NonConvex, got {other:?}"),
        }
    }

    #[test]
    fn oversized_radius_rejected() {
        let patch = preset_patch("quadratic").unwrap();
        assert!(find_flat_spot(&patch, 0.3).is_err());
    }

    #[test]
    fn uniform_defect_bound_across_scales() {
        // quantitative flat-spot property: defect(r)/r^2 bounded by one
        // constant per profile across dyadic scales
        for (name, bound) in [
            ("quadratic", 1.0 + 1e-6),
            ("absval", 1e-6),
            ("hinge", 1e-6),
            ("cosh", 0.6),
            ("quartic", 0.02),
        ] {
            let patch = preset_patch(name).unwrap();
            for j in 3..=10 {
                let r = (0.5_f64).powi(j);
                let fs = find_flat_spot(&patch, r).unwrap();
                assert!(
                    fs.defect / (r * r) <= bound,
                    "{name} at r = 2^-{j}: ratio {}",
                    fs.defect / (r * r)
                );
            }
        }
    }
}
