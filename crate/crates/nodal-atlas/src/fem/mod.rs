//! P1 finite elements: meshing, assembly, eigensolves, quadrature.

pub mod assemble;
pub mod coefficient;
pub mod delaunay;
pub mod eigen;
pub mod field;
pub mod harmonic;
pub mod mesh;
pub mod sparse;

pub use assemble::assemble;
pub use coefficient::{sym_eigenvalues, CoeffKind, CoefficientField};
pub use eigen::{solve_eigs, EigenSolution};
pub use field::ScalarField;
pub use harmonic::{solve_aharmonic, solve_aharmonic_constrained, solve_aharmonic_fn};
pub use mesh::{mesh_domain, structured_rect, BoundaryEdge, Mesh};
