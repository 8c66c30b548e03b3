//! Numerical workbench for Dirichlet eigenfunctions on planar Lipschitz domains.
//!
//! The crate is organized around four analysis layers plus an experiment
//! harness:
//!
//! - [`geometry`]: planar domains, quasiconvexity moduli, flat spots of convex
//!   graphs, convex-hull gaps, the nowhere-convex Lipschitz curve, and dyadic
//!   cuboid decompositions near the boundary.
//! - [`fem`]: P1 triangular meshing, assembly of `-div(A grad u)`, Dirichlet
//!   eigensolves, discrete A-harmonic extensions, and clipped-region
//!   quadrature over disks, ellipses and cuboids.
//! - [`doubling`]: Almgren-type frequency functions, ellipsoid-weighted
//!   doubling indices, matrix square roots, starshape center shifts,
//!   monotonicity and three-ball audits, and cylinder-extension doubling.
//! - [`nodal`]: zero-set extraction on P1 fields, length measurement,
//!   zero-free audits, and power-law scaling fits of length against the
//!   eigenvalue.
//! - [`experiments`]: named, reproducible experiment drivers with CSV/JSON/SVG
//!   outputs, used by the `nodal-atlas` command-line binary.
//!
//! Every public operation is a pure function of its inputs; all types are
//! immutable after construction and safe to share across threads.

// pub mod doubling;
pub mod error;
// pub mod experiments;
pub mod fem;
pub mod geometry;
// pub mod io;
// pub mod nodal;

pub use error::{Error, Result};

/// Library version string.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
