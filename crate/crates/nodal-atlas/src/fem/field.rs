//! Piecewise-linear scalar fields on a mesh.

use std::sync::Arc;

use super::mesh::Mesh;
use crate::geometry::primitives::{Pt2, Vc2};

/// P1 nodal field; evaluation is the linear interpolant, gradients are
/// piecewise constant per triangle.
#[derive(Debug, Clone)]
pub struct ScalarField {
    pub mesh: Arc<Mesh>,
    pub values: Vec<f64>,
    pub label: String,
}

impl ScalarField {
    pub fn new(mesh: Arc<Mesh>, values: Vec<f64>, label: impl Into<String>) -> ScalarField {
        assert_eq!(values.len(), mesh.vertices.len(), "one value per vertex");
        ScalarField {
            mesh,
            values,
            label: label.into(),
        }
    }

    /// Nodal interpolant of a closed-form function.
    pub fn from_fn(mesh: &Arc<Mesh>, f: impl Fn(Pt2) -> f64, label: &str) -> ScalarField {
        let values = mesh.vertices.iter().map(|&p| f(p)).collect();
        ScalarField::new(mesh.clone(), values, label)
    }

    /// Value inside triangle `t` at point `p` (barycentric interpolation).
    #[inline]
    pub fn eval_in_tri(&self, t: usize, p: Pt2) -> f64 {
        let l = self.mesh.barycentric(t, p);
        let [a, b, c] = self.mesh.triangles[t];
        l[0] * self.values[a] + l[1] * self.values[b] + l[2] * self.values[c]
    }

    /// Point evaluation; `None` outside the mesh.
    pub fn eval(&self, p: Pt2) -> Option<f64> {
        self.mesh.locate(p).map(|t| self.eval_in_tri(t, p))
    }

    /// Constant gradient on triangle `t`.
    pub fn gradient(&self, t: usize) -> Vc2 {
        let [a, b, c] = self.mesh.triangles[t];
        let g = self.mesh.tri_geom(t).grads;
        g[0] * self.values[a] + g[1] * self.values[b] + g[2] * self.values[c]
    }

    /// Max absolute nodal value.
    pub fn scale(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, c: f64) -> ScalarField {
        ScalarField {
            mesh: self.mesh.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
            label: self.label.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::mesh::structured_rect;
    use crate::geometry::primitives::pt;

    #[test]
    fn interpolates_linear_functions_exactly() {
        let mesh = Arc::new(structured_rect(pt(0.0, 0.0), pt(1.0, 1.0), 4, 4).unwrap());
        let f = ScalarField::from_fn(&mesh, |p| 2.0 * p.x - 3.0 * p.y + 0.5, "lin");
        for &p in &[pt(0.3, 0.7), pt(0.111, 0.222), pt(0.95, 0.05)] {
            let v = f.eval(p).unwrap();
            assert!((v - (2.0 * p.x - 3.0 * p.y + 0.5)).abs() < 1e-13);
        }
        let t = mesh.locate(pt(0.4, 0.4)).unwrap();
        let g = f.gradient(t);
        assert!((g - Vc2::new(2.0, -3.0)).norm() < 1e-12);
    }
}
