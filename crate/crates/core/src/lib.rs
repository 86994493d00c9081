//! Lattice polygons in the plane, mixed volumes, and three ways of realizing
//! a volume triple `(A, B, C)` with `B² ≥ AC`: as a pair of lattice polygons,
//! as a pair of tropical curves, and as divisors on a toric surface.

pub mod construct;
pub mod geom2d;
pub mod quadform;
pub mod render;
pub mod sweep;
pub mod toric;
pub mod tropical;

pub use construct::{realize, realize_real, verify, CaseTag, RealizationResult};
pub use geom2d::{convex_hull, mixed_volume_polarization, LatticePolygon, LatticeVector, VolumeTriple};
pub use quadform::{reduce, QuadForm};
