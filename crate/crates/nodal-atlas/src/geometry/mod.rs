//! Planar domain geometry: quasiconvexity, flat spots, hulls, cuboids.

pub mod cuboid;
pub mod domain;
pub mod flatspot;
pub mod hull_gap;
pub mod modulus;
pub mod pathological;
pub mod primitives;

pub use cuboid::{boundary_cuboid_at, decompose_cuboid, Cuboid, CuboidKind, Decomposition};
pub use domain::{
    parse_phi_preset, preset_domain, preset_patch, DomainKind, GraphPatch, ModulusSpec, PhiKind,
    PlanarDomain, QuasiconvexityModulus, SupportPlane,
};
pub use flatspot::{find_flat_spot, support_margin, verify_convex, FlatSpot};
pub use hull_gap::{convex_hull_gap, HullGap};
pub use modulus::{estimate_modulus, estimate_modulus_patch, DEFAULT_DIRECTION_SAMPLES};
pub use pathological::{
    enumerate_rationals, pathological_curve, pathological_domain, second_derivative_measure,
    PathologicalCurve, RationalEnumeration, SecondDerivativeReport,
};
pub use primitives::{Frame2, Mat2, Pt2, Vc2};
