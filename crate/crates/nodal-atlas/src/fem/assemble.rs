//! P1 assembly of stiffness and mass operators for `-div(A grad u)`.

use super::coefficient::{sym_eigenvalues, CoefficientField};
use super::mesh::Mesh;
use super::sparse::Csr;
use crate::error::{Error, Result};

/// Assembles the stiffness matrix `K` (with `A` evaluated at triangle
/// centroids, one-point rule) and the consistent mass matrix `M`.
pub fn assemble(mesh: &Mesh, coeff: &CoefficientField) -> Result<(Csr, Csr)> {
    let nv = mesh.vertices.len();
    let nt = mesh.triangles.len();
    let mut kt = Vec::with_capacity(9 * nt);
    let mut mt = Vec::with_capacity(9 * nt);
    for t in 0..nt {
        let tri = mesh.triangles[t];
        let geom = mesh.tri_geom(t);
        let c = mesh.centroid(t);
        let a = coeff.eval(c);
        if (a.m12 - a.m21).abs() > 1e-12 || sym_eigenvalues(&a).0 <= 0.0 {
            return Err(Error::NonSpdCoefficient { x: c.x, y: c.y });
        }
        for i in 0..3 {
            for j in 0..3 {
                let kij = geom.area * (a * geom.grads[j]).dot(&geom.grads[i]);
                kt.push((tri[i], tri[j], kij));
                let mij = geom.area / 12.0 * if i == j { 2.0 } else { 1.0 };
                mt.push((tri[i], tri[j], mij));
            }
        }
    }
    Ok((Csr::from_triplets(nv, &mut kt), Csr::from_triplets(nv, &mut mt)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::mesh::{structured_rect, Mesh};
    use crate::geometry::primitives::pt;
    use nalgebra::Matrix2;

    fn reference_triangle() -> Mesh {
        Mesh::new(
            vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(0.0, 1.0)],
            vec![[0, 1, 2]],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn reference_stiffness_matches_hand_computation() {
        let mesh = reference_triangle();
        let (k, _) = assemble(&mesh, &CoefficientField::identity()).unwrap();
        // classical P1 element stiffness for the unit right triangle:
        // [[1, -1/2, -1/2], [-1/2, 1/2, 0], [-1/2, 0, 1/2]]
        let expect = [
            [1.0, -0.5, -0.5],
            [-0.5, 0.5, 0.0],
            [-0.5, 0.0, 0.5],
        ];
        for i in 0..3 {
            for j in 0..3 {
                let mut v = 0.0;
                for idx in k.indptr[i]..k.indptr[i + 1] {
                    if k.indices[idx] == j {
                        v = k.data[idx];
                    }
                }
                assert!((v - expect[i][j]).abs() < 1e-14, "K[{i}][{j}] = {v}");
            }
        }
    }

    #[test]
    fn stiffness_linear_in_coefficient() {
        let mesh = reference_triangle();
        let (k1, _) = assemble(&mesh, &CoefficientField::identity()).unwrap();
        let two = CoefficientField::constant(Matrix2::new(2.0, 0.0, 0.0, 2.0)).unwrap();
        let (k2, _) = assemble(&mesh, &two).unwrap();
        for (a, b) in k1.data.iter().zip(&k2.data) {
            assert!((2.0 * a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn constants_in_kernel_and_mass_positive() {
        let mesh = structured_rect(pt(0.0, 0.0), pt(1.0, 1.0), 7, 5).unwrap();
        let (k, m) = assemble(&mesh, &CoefficientField::scalar_bump(0.1).unwrap()).unwrap();
        let ones = vec![1.0; mesh.vertices.len()];
        assert!(k.quadratic_form(&ones).abs() < 1e-12);
        // v^T M v > 0 and total mass equals the area
        assert!((m.quadratic_form(&ones) - 1.0).abs() < 1e-12);
        let v: Vec<f64> = (0..mesh.vertices.len())
            .map(|i| ((i * 37 % 11) as f64 - 5.0) / 5.0)
            .collect();
        assert!(k.quadratic_form(&v) >= -1e-12);
        assert!(m.quadratic_form(&v) > 0.0);
    }

    #[test]
    fn spd_violation_reported_with_point() {
        let mesh = reference_triangle();
        // rotor with negative c is rejected at construction; force a raw
        // indefinite constant through the struct to hit the assembly check
        let bad = CoefficientField {
            kind: crate::fem::coefficient::CoeffKind::ConstantSpd(Matrix2::new(
                1.0, 2.0, 2.0, 1.0,
            )),
            lambda: 3.0,
            gamma: 0.0,
        };
        match assemble(&mesh, &bad) {
            Err(Error::NonSpdCoefficient { .. }) => {}
            other => panic!("expected NonSpdCoefficient, got {other:?}"),
        }
    }
}
