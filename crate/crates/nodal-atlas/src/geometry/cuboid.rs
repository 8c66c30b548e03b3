//! Standard boundary cuboids and their dyadic decompositions.
//!
//! A standard cuboid with side `s` and graph Lipschitz constant `L` spans
//! `[-s/2, s/2)` tangentially and `2(1+L)s` normally in its patch frame, so
//! a boundary cuboid centered on the graph always contains the graph over
//! its tangential footprint.

use serde::{Deserialize, Serialize};

use super::domain::PlanarDomain;
use super::primitives::*;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CuboidKind {
    Boundary,
    Interior,
}

/// Rectangle aligned with a boundary patch frame.
#[derive(Debug, Clone, Copy)]
pub struct Cuboid {
    pub center: Pt2,
    pub side: f64,
    pub frame: Frame2,
    pub kind: CuboidKind,
    /// Lipschitz constant of the underlying graph; fixes the aspect ratio.
    pub lipschitz: f64,
}

impl Cuboid {
    /// Normal extent: `2 (1 + L) s`.
    pub fn height(&self) -> f64 {
        2.0 * (1.0 + self.lipschitz) * self.side
    }

    /// Diagonal `l(Q) = s sqrt(1 + 4 (1+L)^2)`.
    pub fn diag(&self) -> f64 {
        let a = 1.0 + self.lipschitz;
        self.side * (1.0 + 4.0 * a * a).sqrt()
    }

    /// Corner polygon, counter-clockwise in world coordinates.
    pub fn polygon(&self) -> Vec<Pt2> {
        let hw = self.side / 2.0;
        let hh = self.height() / 2.0;
        [(-hw, -hh), (hw, -hh), (hw, hh), (-hw, hh)]
            .iter()
            .map(|&(x, y)| self.frame.to_world(self.center, Vc2::new(x, y)))
            .collect()
    }

    pub fn contains(&self, p: Pt2, tol: f64) -> bool {
        let local = self.frame.to_local(self.center, p);
        local.x.abs() <= self.side / 2.0 + tol && local.y.abs() <= self.height() / 2.0 + tol
    }

    /// Distance from a point to this rectangle (0 inside).
    pub fn dist(&self, p: Pt2) -> f64 {
        let local = self.frame.to_local(self.center, p);
        let dx = (local.x.abs() - self.side / 2.0).max(0.0);
        let dy = (local.y.abs() - self.height() / 2.0).max(0.0);
        (dx * dx + dy * dy).sqrt()
    }
}

/// Builds a boundary cuboid of side `s` centered at the boundary point `x0`,
/// using the graph patch that contains `x0`.
pub fn boundary_cuboid_at(domain: &PlanarDomain, x0: Pt2, side: f64) -> Result<Cuboid> {
    let patch = domain
        .patch_containing(x0)
        .ok_or_else(|| Error::geometry("point is not on a graph patch of the domain"))?;
    Ok(Cuboid {
        center: x0,
        side,
        frame: patch.frame,
        kind: CuboidKind::Boundary,
        lipschitz: patch.lipschitz,
    })
}

/// Dyadic decomposition of a boundary cuboid at level `k`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub parent: Cuboid,
    pub level: usize,
    pub boundary_cuboids: Vec<Cuboid>,
    pub interior_cuboids: Vec<Cuboid>,
    /// Total stacked cells per column (boundary + interior + exterior).
    pub column_counts: Vec<usize>,
}

/// Partitions a boundary cuboid into `2^k` columns, stacks standard cells in
/// each column with one centered on the boundary graph, and classifies cells
/// as boundary or interior. Cells entirely below the graph are outside the
/// domain and only counted for coverage.
pub fn decompose_cuboid(domain: &PlanarDomain, q: &Cuboid, k: usize) -> Result<Decomposition> {
    if k < 3 {
        return Err(Error::invalid("decomposition level k must be >= 3"));
    }
    if k > 12 {
        return Err(Error::invalid("decomposition level k > 12 is unreasonable"));
    }
    let patch = domain
        .patch_containing(q.center)
        .ok_or_else(|| Error::geometry("cuboid center is not on a graph patch"))?;
    let c_local = patch.frame.to_local(patch.anchor, q.center);
    if (c_local.y - patch.eval(c_local.x)).abs() > 1e-9 {
        return Err(Error::geometry("cuboid is not centered on the boundary"));
    }
    let half = q.side / 2.0;
    if !patch.contains_local_x(c_local.x - half) || !patch.contains_local_x(c_local.x + half) {
        return Err(Error::geometry(
            "cuboid footprint straddles the patch boundary; use a single patch",
        ));
    }

    let n_cols = 1usize << k;
    let s_q = q.side / n_cols as f64;
    let cell_h = 2.0 * (1.0 + q.lipschitz) * s_q;
    let q_top = c_local.y + q.height() / 2.0;
    let q_bottom = c_local.y - q.height() / 2.0;

    let mut boundary_cuboids = Vec::with_capacity(n_cols);
    let mut interior_cuboids = Vec::new();
    let mut column_counts = Vec::with_capacity(n_cols);

    for i in 0..n_cols {
        let x_mid = c_local.x - half + s_q * (i as f64 + 0.5);
        let y_mid = patch.eval(x_mid);
        let make = |y: f64, kind: CuboidKind| Cuboid {
            center: patch.frame.to_world(patch.anchor, Vc2::new(x_mid, y)),
            side: s_q,
            frame: patch.frame,
            kind,
            lipschitz: q.lipschitz,
        };
        boundary_cuboids.push(make(y_mid, CuboidKind::Boundary));

        let qb_top = y_mid + cell_h / 2.0;
        let qb_bottom = y_mid - cell_h / 2.0;
        // cells above the boundary cell intersect Omega ∩ Q
        let above = (((q_top - qb_top) / cell_h).ceil() as isize).max(0) as usize;
        for j in 1..=above {
            interior_cuboids.push(make(y_mid + cell_h * j as f64, CuboidKind::Interior));
        }
        // cells below: outside the domain, counted only for coverage
        let below = (((qb_bottom - q_bottom) / cell_h).ceil() as isize).max(0) as usize;
        let count = 1 + above + below;
        if count > n_cols + 1 {
            return Err(Error::geometry(format!(
                "column {i} needs {count} cells, exceeding 2^k + 1"
            )));
        }
        column_counts.push(count);
    }

    Ok(Decomposition {
        parent: *q,
        level: k,
        boundary_cuboids,
        interior_cuboids,
        column_counts,
    })
}

impl Decomposition {
    /// Minimum distance from interior cells to the graph inside the parent,
    /// sampled along the parent's tangential footprint.
    pub fn min_interior_graph_distance(&self, domain: &PlanarDomain) -> f64 {
        let patch = match domain.patch_containing(self.parent.center) {
            Some(p) => p,
            None => return f64::NAN,
        };
        let c_local = patch.frame.to_local(patch.anchor, self.parent.center);
        let half = self.parent.side / 2.0;
        let n = 64 * (1 << self.level);
        let graph: Vec<Pt2> = (0..=n)
            .map(|i| {
                let x = c_local.x - half + self.parent.side * i as f64 / n as f64;
                patch
                    .frame
                    .to_world(patch.anchor, Vc2::new(x, patch.eval(x)))
            })
            .collect();
        let mut dmin = f64::INFINITY;
        for q in &self.interior_cuboids {
            for g in &graph {
                dmin = dmin.min(q.dist(*g));
            }
        }
        dmin
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::domain::preset_domain;

    fn square_bottom_cuboid(side: f64) -> (PlanarDomain, Cuboid) {
        let d = preset_domain("unit-square", 0.0).unwrap();
        let q = boundary_cuboid_at(&d, pt(0.5, 0.0), side).unwrap();
        (d, q)
    }

    #[test]
    fn diag_formula() {
        let (_, q) = square_bottom_cuboid(0.2);
        // patch on the square bottom has L = 0
        assert!((q.diag() - 0.2 * (5.0_f64).sqrt()).abs() < 1e-15);
        assert!((q.height() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn boundary_count_is_2_to_k() {
        let (d, q) = square_bottom_cuboid(0.2);
        for k in [3usize, 4, 5] {
            let dec = decompose_cuboid(&d, &q, k).unwrap();
            assert_eq!(dec.boundary_cuboids.len(), 1 << k);
            assert!(dec.column_counts.iter().all(|&c| c <= (1 << k) + 1));
        }
    }

    #[test]
    fn interior_cells_keep_distance() {
        let (d, q) = square_bottom_cuboid(0.2);
        let dec = decompose_cuboid(&d, &q, 3).unwrap();
        let s_q = q.side / 8.0;
        let dmin = dec.min_interior_graph_distance(&d);
        assert!(
            dmin >= 0.5 * s_q - 1e-12,
            "min interior distance {dmin} < s(q)/2 = {}",
            0.5 * s_q
        );
    }

    #[test]
    fn decomposition_covers_parent_cap() {
        // every point of Omega ∩ Q lies in some cell
        let (d, q) = square_bottom_cuboid(0.2);
        let dec = decompose_cuboid(&d, &q, 3).unwrap();
        let mut all = dec.boundary_cuboids.clone();
        all.extend(dec.interior_cuboids.iter().copied());
        let poly = q.polygon();
        let (lo, hi) = bbox(&poly);
        let mut rng_x = lo.x;
        while rng_x <= hi.x {
            let mut rng_y = lo.y;
            while rng_y <= hi.y {
                let p = pt(rng_x, rng_y);
                if q.contains(p, -1e-9) && d.contains(p, 0.0) {
                    assert!(
                        all.iter().any(|c| c.contains(p, 1e-9)),
                        "uncovered point {p:?}"
                    );
                }
                rng_y += 0.013;
            }
            rng_x += 0.013;
        }
    }

    #[test]
    fn parabola_patch_decomposition() {
        let d = preset_domain("parabola", 0.01).unwrap();
        let q = boundary_cuboid_at(&d, pt(0.0, 0.0), 0.3).unwrap();
        let dec = decompose_cuboid(&d, &q, 4).unwrap();
        assert_eq!(dec.boundary_cuboids.len(), 16);
        // boundary cells contain the graph over their footprint
        let patch = d.patch_containing(pt(0.0, 0.0)).unwrap();
        for c in &dec.boundary_cuboids {
            let cl = patch.frame.to_local(patch.anchor, c.center);
            for t in [-0.5, -0.25, 0.0, 0.25, 0.5] {
                let x = cl.x + t * c.side * 0.999;
                let g = patch
                    .frame
                    .to_world(patch.anchor, Vc2::new(x, patch.eval(x)));
                assert!(c.contains(g, 1e-9));
            }
        }
        let dmin = dec.min_interior_graph_distance(&d);
        assert!(dmin >= 0.5 * q.side / 16.0 - 1e-12);
    }

    #[test]
    fn level_below_three_rejected() {
        let (d, q) = square_bottom_cuboid(0.2);
        assert!(decompose_cuboid(&d, &q, 2).is_err());
    }

    #[test]
    fn straddling_patch_rejected() {
        let d = preset_domain("unit-square", 0.0).unwrap();
        // patch interval is [-0.4, 0.4] around (0.5, 0); a cuboid at the
        // patch edge sticks out
        let q = boundary_cuboid_at(&d, pt(0.85, 0.0), 0.2).unwrap();
        assert!(decompose_cuboid(&d, &q, 3).is_err());
    }
}
