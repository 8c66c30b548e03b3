//! Dirichlet eigensolves of `-div(A grad u) = lambda u`.
//!
//! Small systems go through a dense transformation to a standard symmetric
//! problem. Larger ones use block subspace iteration with Rayleigh-Ritz
//! projection on the shifted-inverted operator `K^{-1} M`, backed by the
//! profile Cholesky solver; the block is seeded from a fixed stream so
//! results are deterministic. Rayleigh-Ritz handles eigenvalue clusters and
//! multiplicities without special cases.

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::assemble::assemble;
use super::coefficient::CoefficientField;
use super::field::ScalarField;
use super::mesh::Mesh;
use super::sparse::{Csr, DirectSolver};
use crate::error::{Error, Result};

const DENSE_LIMIT: usize = 420;
const MAX_ITERS: usize = 600;
const RITZ_TOL: f64 = 1e-11;
const RESIDUAL_TOL: f64 = 1e-7;

/// Sorted Dirichlet eigenpairs with `int phi^2 = 1` normalization and the
/// sign convention that the first nonzero interior nodal value is positive.
#[derive(Debug, Clone)]
pub struct EigenSolution {
    pub mesh: Arc<Mesh>,
    pub lambdas: Vec<f64>,
    pub fields: Vec<ScalarField>,
    /// Relative residuals `|K x - lambda M x| / lambda |M x|` per pair.
    pub residuals: Vec<f64>,
}

impl EigenSolution {
    pub fn count(&self) -> usize {
        self.lambdas.len()
    }
}

/// Computes the lowest `count` Dirichlet eigenpairs on a mesh.
pub fn solve_eigs(
    mesh: &Arc<Mesh>,
    coeff: &CoefficientField,
    count: usize,
) -> Result<EigenSolution> {
    let interior = mesh.interior_vertices();
    if count == 0 || count > interior.len() {
        return Err(Error::invalid(format!(
            "requested {count} modes with {} interior degrees of freedom",
            interior.len()
        )));
    }
    let (k, m) = assemble(mesh, coeff)?;
    let k_ii = k.restrict(&interior);
    let m_ii = m.restrict(&interior);
    let n = interior.len();

    let (lambdas, vectors) = if n <= DENSE_LIMIT {
        dense_path(&k_ii, &m_ii, count)?
    } else {
        subspace_iteration(&k_ii, &m_ii, count)?
    };

    let mut out_lambdas = Vec::with_capacity(count);
    let mut fields = Vec::with_capacity(count);
    let mut residuals = Vec::with_capacity(count);
    let mut kx = vec![0.0; n];
    let mut mx = vec![0.0; n];
    for j in 0..count {
        let lam = lambdas[j];
        let x = &vectors[j];
        k_ii.matvec(x, &mut kx);
        m_ii.matvec(x, &mut mx);
        let num: f64 = kx
            .iter()
            .zip(&mx)
            .map(|(a, b)| (a - lam * b) * (a - lam * b))
            .sum::<f64>()
            .sqrt();
        let den: f64 = lam * mx.iter().map(|v| v * v).sum::<f64>().sqrt();
        let rel = num / den.max(1e-300);
        if rel > RESIDUAL_TOL {
            return Err(Error::EigenConvergence(format!(
                "mode {j}: relative residual {rel:.3e}"
            )));
        }
        residuals.push(rel);
        // normalize int phi^2 = x^T M x = 1
        let mass = x.iter().zip(&mx).map(|(a, b)| a * b).sum::<f64>();
        let mut scale = 1.0 / mass.sqrt();
        // sign: first nonzero interior nodal value positive (vertex order)
        let cap = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if let Some(first) = x.iter().find(|v| v.abs() > 1e-9 * cap) {
            if *first < 0.0 {
                scale = -scale;
            }
        }
        let mut full = vec![0.0_f64; mesh.vertices.len()];
        for (idx, &v) in interior.iter().enumerate() {
            full[v] = scale * x[idx];
        }
        out_lambdas.push(lam);
        fields.push(ScalarField::new(
            mesh.clone(),
            full,
            format!("mode-{j} lambda={lam:.6}"),
        ));
    }
    Ok(EigenSolution {
        mesh: mesh.clone(),
        lambdas: out_lambdas,
        fields,
        residuals,
    })
}

fn dense_path(k: &Csr, m: &Csr, count: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = k.n;
    let to_dense = |a: &Csr| {
        let mut d = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for idx in a.indptr[i]..a.indptr[i + 1] {
                d[(i, a.indices[idx])] = a.data[idx];
            }
        }
        d
    };
    let kd = to_dense(k);
    let md = to_dense(m);
    let chol = nalgebra::Cholesky::new(kd)
        .ok_or_else(|| Error::Solver("stiffness matrix not SPD".into()))?;
    // C = L^-1 M L^-T; eigenvalues are 1/lambda
    let l = chol.l();
    let linv_m = l.clone().solve_lower_triangular(&md).expect("L invertible");
    let c = l
        .solve_lower_triangular(&linv_m.transpose())
        .expect("L invertible");
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let mut lambdas = Vec::with_capacity(count);
    let mut vectors = Vec::with_capacity(count);
    for &idx in order.iter().take(count) {
        let theta = eig.eigenvalues[idx];
        if theta <= 0.0 {
            return Err(Error::EigenConvergence("non-positive Ritz value".into()));
        }
        lambdas.push(1.0 / theta);
        let y = eig.eigenvectors.column(idx).into_owned();
        let x = chol.l().transpose().solve_upper_triangular(&y).expect("L^T invertible");
        vectors.push(x.iter().copied().collect());
    }
    Ok((lambdas, vectors))
}

fn subspace_iteration(k: &Csr, m: &Csr, count: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = k.n;
    let block = (count + (count / 2).max(8)).min(n);
    let solver = DirectSolver::new(k)
        .map_err(|e| Error::Solver(format!("stiffness factorization failed: {e}")))?;

    let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9_7f4a_7c15 ^ n as u64);
    let mut x: Vec<Vec<f64>> = (0..block)
        .map(|_| (0..n).map(|_| rng.random::<f64>() - 0.5).collect())
        .collect();

    let mut prev: Vec<f64> = vec![f64::INFINITY; count];
    let mut scratch = vec![0.0_f64; n];
    for iter in 0..MAX_ITERS {
        // Y = K^{-1} M X, with MX retained for the projection
        let mx: Vec<Vec<f64>> = x
            .iter()
            .map(|col| {
                m.matvec(col, &mut scratch);
                scratch.clone()
            })
            .collect();
        let y: Vec<Vec<f64>> = mx.iter().map(|col| solver.solve(col)).collect();
        // Rayleigh-Ritz on span(Y): K Y = M X, so Y^T K Y = Y^T M X
        let mut ar = DMatrix::<f64>::zeros(block, block);
        let mut br = DMatrix::<f64>::zeros(block, block);
        let my: Vec<Vec<f64>> = y
            .iter()
            .map(|col| {
                m.matvec(col, &mut scratch);
                scratch.clone()
            })
            .collect();
        for i in 0..block {
            for j in 0..block {
                ar[(i, j)] = dot(&y[i], &mx[j]);
                br[(i, j)] = dot(&y[i], &my[j]);
            }
        }
        let ar = (&ar + ar.transpose()) * 0.5;
        let br = (&br + br.transpose()) * 0.5;
        let chol = nalgebra::Cholesky::new(br).ok_or_else(|| {
            Error::EigenConvergence(format!("Ritz basis became degenerate at iteration {iter}"))
        })?;
        let l = chol.l();
        let linv_a = l.clone().solve_lower_triangular(&ar).expect("L invertible");
        let c = l
            .solve_lower_triangular(&linv_a.transpose())
            .expect("L invertible");
        let c = (&c + c.transpose()) * 0.5;
        let eig = SymmetricEigen::new(c);
        let mut order: Vec<usize> = (0..block).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
        // Ritz values approximate lambda directly
        let lambdas: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        // s = L^-T z gives a Br-orthonormal small basis
        let mut new_x: Vec<Vec<f64>> = Vec::with_capacity(block);
        for &idx in &order {
            let z = eig.eigenvectors.column(idx).into_owned();
            let s = chol.l().transpose().solve_upper_triangular(&z).expect("L^T");
            let mut col = vec![0.0_f64; n];
            for (j, yj) in y.iter().enumerate() {
                let w = s[j];
                if w != 0.0 {
                    for (c, v) in col.iter_mut().zip(yj) {
                        *c += w * v;
                    }
                }
            }
            new_x.push(col);
        }
        x = new_x;
        let worst = (0..count)
            .map(|j| ((lambdas[j] - prev[j]) / lambdas[j].max(1e-300)).abs())
            .fold(0.0_f64, f64::max);
        prev = lambdas[..count].to_vec();
        if worst < RITZ_TOL && iter >= 3 {
            return Ok((prev, x.into_iter().take(count).collect()));
        }
    }
    Err(Error::EigenConvergence(format!(
        "subspace iteration did not settle in {MAX_ITERS} iterations; last Ritz values {:?}",
        &prev[..count.min(4)]
    )))
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::mesh::mesh_domain;
    use crate::geometry::domain::preset_domain;
    use nalgebra::Matrix2;

    #[test]
    fn square_spectrum_dense_path() {
        let d = preset_domain("unit-square", 0.0).unwrap();
        // 19x19 interior -> 361 dofs: dense path
        let mesh = Arc::new(mesh_domain(&d, 0.05).unwrap());
        let sol = solve_eigs(&mesh, &CoefficientField::identity(), 4).unwrap();
        let pi2 = std::f64::consts::PI.powi(2);
        let exact = [2.0 * pi2, 5.0 * pi2, 5.0 * pi2, 8.0 * pi2];
        for (l, e) in sol.lambdas.iter().zip(exact) {
            assert!((l - e).abs() / e < 0.01, "lambda {l} vs {e}");
        }
    }

    #[test]
    fn square_spectrum_subspace_path() {
        let d = preset_domain("unit-square", 0.0).unwrap();
        // 39x39 interior -> 1521 dofs: subspace path
        let mesh = Arc::new(mesh_domain(&d, 0.025).unwrap());
        let sol = solve_eigs(&mesh, &CoefficientField::identity(), 6).unwrap();
        let pi2 = std::f64::consts::PI.powi(2);
        let exact = [2.0, 5.0, 5.0, 8.0, 10.0, 10.0].map(|v| v * pi2);
        for (l, e) in sol.lambdas.iter().zip(exact) {
            assert!((l - e).abs() / e < 0.005, "lambda {l} vs {e}");
        }
        // Rayleigh-quotient consistency comes with the residual check
        for r in &sol.residuals {
            assert!(*r < RESIDUAL_TOL);
        }
    }

    #[test]
    fn coefficient_scaling_doubles_eigenvalues() {
        let d = preset_domain("unit-square", 0.0).unwrap();
        let mesh = Arc::new(mesh_domain(&d, 0.1).unwrap());
        let id = CoefficientField::identity();
        let two = CoefficientField::constant(Matrix2::new(2.0, 0.0, 0.0, 2.0)).unwrap();
        let s1 = solve_eigs(&mesh, &id, 3).unwrap();
        let s2 = solve_eigs(&mesh, &two, 3).unwrap();
        for (a, b) in s1.lambdas.iter().zip(&s2.lambdas) {
            assert!((2.0 * a - b).abs() / b < 1e-10);
        }
    }

    #[test]
    fn normalization_and_sign() {
        let d = preset_domain("unit-square", 0.0).unwrap();
        let mesh = Arc::new(mesh_domain(&d, 0.1).unwrap());
        let sol = solve_eigs(&mesh, &CoefficientField::identity(), 2).unwrap();
        let (_, m) = assemble(&mesh, &CoefficientField::identity()).unwrap();
        for f in &sol.fields {
            let mass = m.quadratic_form(&f.values);
            assert!((mass - 1.0).abs() < 1e-9);
            let first = f
                .values
                .iter()
                .find(|v| v.abs() > 1e-9 * f.scale())
                .unwrap();
            assert!(*first > 0.0);
        }
    }

    #[test]
    fn too_many_modes_rejected() {
        let d = preset_domain("unit-square", 0.0).unwrap();
        let mesh = Arc::new(mesh_domain(&d, 0.25).unwrap());
        assert!(solve_eigs(&mesh, &CoefficientField::identity(), 1000).is_err());
    }
}
