//! Sparse symmetric matrices and a profile (skyline) Cholesky solver.
//!
//! Meshes at desk scale produce systems up to a few hundred thousand
//! unknowns; reverse Cuthill-McKee ordering keeps the envelope narrow enough
//! that a profile factorization is fast and fully deterministic.

use crate::error::{Error, Result};

/// Symmetric sparse matrix in CSR form (full pattern stored).
#[derive(Debug, Clone)]
pub struct Csr {
    pub n: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<usize>,
    pub data: Vec<f64>,
}

impl Csr {
    /// Builds from unsorted triplets, summing duplicates.
    pub fn from_triplets(n: usize, triplets: &mut Vec<(usize, usize, f64)>) -> Csr {
        triplets.sort_unstable_by_key(|t| (t.0, t.1));
        let mut indptr = vec![0usize; n + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut data: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for &(i, j, v) in triplets.iter() {
            if last == Some((i, j)) {
                *data.last_mut().expect("duplicate follows an entry") += v;
            } else {
                indices.push(j);
                data.push(v);
                indptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n {
            indptr[i + 1] += indptr[i];
        }
        Csr {
            n,
            indptr,
            indices,
            data,
        }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let mut acc = 0.0;
            for k in self.indptr[i]..self.indptr[i + 1] {
                acc += self.data[k] * x[self.indices[k]];
            }
            y[i] = acc;
        }
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            let mut row = 0.0;
            for k in self.indptr[i]..self.indptr[i + 1] {
                row += self.data[k] * x[self.indices[k]];
            }
            acc += x[i] * row;
        }
        acc
    }

    /// Extracts the principal submatrix on `keep` (sorted index list).
    pub fn restrict(&self, keep: &[usize]) -> Csr {
        let mut pos = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            pos[old] = new;
        }
        let mut triplets = Vec::new();
        for (new_i, &old_i) in keep.iter().enumerate() {
            for k in self.indptr[old_i]..self.indptr[old_i + 1] {
                let j = pos[self.indices[k]];
                if j != usize::MAX {
                    triplets.push((new_i, j, self.data[k]));
                }
            }
        }
        Csr::from_triplets(keep.len(), &mut triplets)
    }
}

/// Reverse Cuthill-McKee ordering: returns `perm` with `perm[new] = old`.
pub fn reverse_cuthill_mckee(a: &Csr) -> Vec<usize> {
    let n = a.n;
    let degree = |i: usize| a.indptr[i + 1] - a.indptr[i];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    // deterministic: start components from the unvisited vertex of smallest
    // degree (ties by index)
    let mut seeds: Vec<usize> = (0..n).collect();
    seeds.sort_by_key(|&i| (degree(i), i));
    for &seed in &seeds {
        if visited[seed] {
            continue;
        }
        visited[seed] = true;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(seed);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            let mut nbrs: Vec<usize> = (a.indptr[u]..a.indptr[u + 1])
                .map(|k| a.indices[k])
                .filter(|&v| !visited[v])
                .collect();
            nbrs.sort_by_key(|&v| (degree(v), v));
            for v in nbrs {
                visited[v] = true;
                queue.push_back(v);
            }
        }
    }
    order.reverse();
    order
}

/// Profile (skyline) Cholesky factorization `A = L L^T` of an SPD matrix.
pub struct SkylineChol {
    n: usize,
    /// Column of the first stored entry per row.
    first: Vec<usize>,
    /// Row start offsets into `vals`; row i occupies first[i]..=i.
    offsets: Vec<usize>,
    vals: Vec<f64>,
}

impl SkylineChol {
    /// Factors the matrix given by CSR `a` under permutation `perm`
    /// (`perm[new] = old`). Fails on non-positive pivots.
    pub fn factor(a: &Csr, perm: &[usize]) -> Result<SkylineChol> {
        let n = a.n;
        let mut inv = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        // envelope: first[i] = min over permuted row entries
        let mut first = vec![0usize; n];
        for new_i in 0..n {
            let old_i = perm[new_i];
            let mut lo = new_i;
            for k in a.indptr[old_i]..a.indptr[old_i + 1] {
                lo = lo.min(inv[a.indices[k]]);
            }
            first[new_i] = lo;
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + (i - first[i] + 1);
        }
        let mut vals = vec![0.0_f64; offsets[n]];
        // scatter permuted lower triangle into the profile
        for new_i in 0..n {
            let old_i = perm[new_i];
            for k in a.indptr[old_i]..a.indptr[old_i + 1] {
                let new_j = inv[a.indices[k]];
                if new_j <= new_i {
                    vals[offsets[new_i] + (new_j - first[new_i])] = a.data[k];
                }
            }
        }
        // in-place profile Cholesky
        for i in 0..n {
            let fi = first[i];
            for j in fi..i {
                let fj = first[j];
                let lo = fi.max(fj);
                let mut s = vals[offsets[i] + (j - fi)];
                // dot of row i and row j over columns [lo, j)
                let mut ik = offsets[i] + (lo - fi);
                let mut jk = offsets[j] + (lo - fj);
                for _ in lo..j {
                    s -= vals[ik] * vals[jk];
                    ik += 1;
                    jk += 1;
                }
                let djj = vals[offsets[j] + (j - fj)];
                vals[offsets[i] + (j - fi)] = s / djj;
            }
            let mut d = vals[offsets[i] + (i - fi)];
            for j in fi..i {
                let lij = vals[offsets[i] + (j - fi)];
                d -= lij * lij;
            }
            if d <= 0.0 || !d.is_finite() {
                return Err(Error::Solver(format!(
                    "non-positive pivot {d:.3e} at row {i}; matrix not SPD"
                )));
            }
            vals[offsets[i] + (i - fi)] = d.sqrt();
        }
        Ok(SkylineChol {
            n,
            first,
            offsets,
            vals,
        })
    }

    /// Solves `L L^T x = b` in permuted coordinates.
    pub fn solve_permuted(&self, b: &mut [f64]) {
        let n = self.n;
        // forward: L y = b
        for i in 0..n {
            let fi = self.first[i];
            let mut s = b[i];
            let base = self.offsets[i];
            for j in fi..i {
                s -= self.vals[base + (j - fi)] * b[j];
            }
            b[i] = s / self.vals[base + (i - fi)];
        }
        // backward: L^T x = y
        for i in (0..n).rev() {
            let fi = self.first[i];
            let base = self.offsets[i];
            let xi = b[i] / self.vals[base + (i - fi)];
            b[i] = xi;
            for j in fi..i {
                b[j] -= self.vals[base + (j - fi)] * xi;
            }
        }
    }
}

/// Direct SPD solver bundling the RCM permutation with the factorization.
pub struct DirectSolver {
    perm: Vec<usize>,
    inv: Vec<usize>,
    chol: SkylineChol,
}

impl DirectSolver {
    pub fn new(a: &Csr) -> Result<DirectSolver> {
        let perm = reverse_cuthill_mckee(a);
        let mut inv = vec![0usize; a.n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let chol = SkylineChol::factor(a, &perm)?;
        Ok(DirectSolver { perm, inv, chol })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut pb: Vec<f64> = (0..n).map(|i| b[self.perm[i]]).collect();
        self.chol.solve_permuted(&mut pb);
        (0..n).map(|i| pb[self.inv[i]]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> Csr {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
            }
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
            }
        }
        Csr::from_triplets(n, &mut t)
    }

    #[test]
    fn csr_dedups_triplets() {
        let mut t = vec![(0, 0, 1.0), (0, 0, 2.0), (1, 1, 1.0), (0, 1, 0.5)];
        let a = Csr::from_triplets(2, &mut t);
        assert_eq!(a.indices.len(), 3);
        let mut y = vec![0.0; 2];
        a.matvec(&[1.0, 1.0], &mut y);
        assert_eq!(y, vec![3.5, 1.0]);
    }

    #[test]
    fn solves_tridiagonal_system() {
        let n = 50;
        let a = laplacian_1d(n);
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.1).sin()).collect();
        let mut b = vec![0.0; n];
        a.matvec(&x_true, &mut b);
        let solver = DirectSolver::new(&a).unwrap();
        let x = solver.solve(&b);
        let err = x
            .iter()
            .zip(&x_true)
            .map(|(u, v)| (u - v).abs())
            .fold(0.0_f64, f64::max);
        assert!(err < 1e-11, "max error {err}");
    }

    #[test]
    fn rcm_reduces_envelope_on_random_graph() {
        // a 2D grid graph ordered randomly has a wide envelope; RCM narrows it
        let nx = 20;
        let n = nx * nx;
        let shuffle: Vec<usize> = {
            // deterministic pseudo-shuffle
            let mut v: Vec<usize> = (0..n).collect();
            for i in 0..n {
                let j = (i * 2654435761usize) % n;
                v.swap(i, j);
            }
            v
        };
        let mut t = Vec::new();
        let id = |i: usize, j: usize| shuffle[i * nx + j];
        for i in 0..nx {
            for j in 0..nx {
                let u = id(i, j);
                t.push((u, u, 4.0));
                if i + 1 < nx {
                    t.push((u, id(i + 1, j), -1.0));
                    t.push((id(i + 1, j), u, -1.0));
                }
                if j + 1 < nx {
                    t.push((u, id(i, j + 1), -1.0));
                    t.push((id(i, j + 1), u, -1.0));
                }
            }
        }
        let a = Csr::from_triplets(n, &mut t);
        let solver = DirectSolver::new(&a).unwrap();
        let b = vec![1.0; n];
        let x = solver.solve(&b);
        let mut r = vec![0.0; n];
        a.matvec(&x, &mut r);
        let res = r
            .iter()
            .zip(&b)
            .map(|(u, v)| (u - v).abs())
            .fold(0.0_f64, f64::max);
        assert!(res < 1e-10);
    }

    #[test]
    fn non_spd_rejected() {
        let mut t = vec![(0, 0, 1.0), (1, 1, -1.0)];
        let a = Csr::from_triplets(2, &mut t);
        assert!(DirectSolver::new(&a).is_err());
    }
}
