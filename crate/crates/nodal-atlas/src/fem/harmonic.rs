//! Discrete A-harmonic extensions (Dirichlet boundary-value solves).

use std::collections::BTreeMap;
use std::sync::Arc;

use super::assemble::assemble;
use super::coefficient::CoefficientField;
use super::field::ScalarField;
use super::mesh::Mesh;
use super::sparse::DirectSolver;
use crate::error::{Error, Result};
use crate::geometry::primitives::Pt2;

/// Solves `-div(A grad u) = 0` with the given Dirichlet values on all
/// boundary vertices. `g` is indexed by vertex; entries at interior vertices
/// are ignored.
pub fn solve_aharmonic(
    mesh: &Arc<Mesh>,
    coeff: &CoefficientField,
    g: &[f64],
) -> Result<ScalarField> {
    let fixed: BTreeMap<usize, f64> = mesh
        .boundary_vertices()
        .into_iter()
        .map(|v| (v, g[v]))
        .collect();
    solve_aharmonic_constrained(mesh, coeff, &fixed)
}

/// Convenience wrapper evaluating boundary data from a closed form.
pub fn solve_aharmonic_fn(
    mesh: &Arc<Mesh>,
    coeff: &CoefficientField,
    g: impl Fn(Pt2) -> f64,
) -> Result<ScalarField> {
    let values: Vec<f64> = mesh.vertices.iter().map(|&p| g(p)).collect();
    solve_aharmonic(mesh, coeff, &values)
}

/// General constrained solve: every vertex in `fixed` is pinned to its
/// value (boundary vertices or interior strips alike); the remaining
/// equations are solved exactly.
pub fn solve_aharmonic_constrained(
    mesh: &Arc<Mesh>,
    coeff: &CoefficientField,
    fixed: &BTreeMap<usize, f64>,
) -> Result<ScalarField> {
    for (&v, &val) in fixed {
        if v >= mesh.vertices.len() || !val.is_finite() {
            return Err(Error::invalid("non-finite or out-of-range boundary data"));
        }
    }
    for v in mesh.boundary_vertices() {
        if !fixed.contains_key(&v) {
            return Err(Error::invalid(format!(
                "boundary vertex {v} has no Dirichlet value"
            )));
        }
    }
    let (k, _) = assemble(mesh, coeff)?;
    let n = mesh.vertices.len();
    let free: Vec<usize> = (0..n).filter(|v| !fixed.contains_key(v)).collect();
    if free.is_empty() {
        return Err(Error::Solver("no free vertices to solve for".into()));
    }
    let k_ff = k.restrict(&free);
    // rhs = -K_fc g_c
    let mut full = vec![0.0_f64; n];
    for (&v, &val) in fixed {
        full[v] = val;
    }
    let mut kg = vec![0.0_f64; n];
    k.matvec(&full, &mut kg);
    let rhs: Vec<f64> = free.iter().map(|&v| -kg[v]).collect();
    let solver = DirectSolver::new(&k_ff)
        .map_err(|e| Error::Solver(format!("singular interior system: {e}")))?;
    let x = solver.solve(&rhs);
    for (idx, &v) in free.iter().enumerate() {
        full[v] = x[idx];
    }
    // interior residual check (relative to the matrix scale)
    let mut r = vec![0.0_f64; n];
    k.matvec(&full, &mut r);
    let scale = full.iter().fold(1e-300, |m: f64, v| m.max(v.abs()))
        * k.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let res = free
        .iter()
        .map(|&v| r[v].abs())
        .fold(0.0_f64, f64::max);
    if res > 1e-10 * scale.max(1e-30) {
        return Err(Error::Solver(format!(
            "interior residual {res:.3e} exceeds tolerance"
        )));
    }
    Ok(ScalarField::new(mesh.clone(), full, "aharmonic"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::mesh::mesh_domain;
    use crate::geometry::domain::preset_domain;

    fn square_mesh(h: f64) -> Arc<Mesh> {
        let d = preset_domain("unit-square", h).unwrap();
        Arc::new(mesh_domain(&d, h).unwrap())
    }

    #[test]
    fn zero_data_gives_zero() {
        let mesh = square_mesh(0.1);
        let u = solve_aharmonic_fn(&mesh, &CoefficientField::identity(), |_| 0.0).unwrap();
        assert!(u.scale() < 1e-14);
    }

    #[test]
    fn reproduces_harmonic_polynomials() {
        let mesh = square_mesh(0.05);
        let id = CoefficientField::identity();
        for (f, name): (fn(Pt2) -> f64, &str) in [
            ((|p: Pt2| p.x * p.x - p.y * p.y) as fn(Pt2) -> f64, "x2-y2"),
            ((|p: Pt2| 2.0 * p.x * p.y) as fn(Pt2) -> f64, "2xy"),
        ] {
            let u = solve_aharmonic_fn(&mesh, &id, f).unwrap();
            let mut err = 0.0_f64;
            for (v, &p) in mesh.vertices.iter().enumerate() {
                err = err.max((u.values[v] - f(p)).abs());
            }
            // O(h^2) for smooth harmonic data
            assert!(err < 4.0 * 0.05 * 0.05, "{name}: max error {err}");
        }
    }

    #[test]
    fn discrete_maximum_principle() {
        let mesh = square_mesh(0.1);
        let u = solve_aharmonic_fn(&mesh, &CoefficientField::identity(), |p| {
            (3.0 * p.x).sin() + p.y
        })
        .unwrap();
        let g_min = mesh
            .boundary_vertices()
            .iter()
            .map(|&v| u.values[v])
            .fold(f64::INFINITY, f64::min);
        let g_max = mesh
            .boundary_vertices()
            .iter()
            .map(|&v| u.values[v])
            .fold(f64::NEG_INFINITY, f64::max);
        for &v in &u.values {
            assert!(v >= g_min - 1e-12 && v <= g_max + 1e-12);
        }
    }

    #[test]
    fn missing_boundary_value_rejected() {
        let mesh = square_mesh(0.25);
        let fixed = BTreeMap::new();
        assert!(solve_aharmonic_constrained(&mesh, &CoefficientField::identity(), &fixed).is_err());
    }
}
