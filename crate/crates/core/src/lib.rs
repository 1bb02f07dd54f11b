//! Biot–Savart velocity evaluation for vorticity fields stored on
//! tetrahedral meshes.
//!
//! The vorticity is piecewise linear over the cells of a tetrahedral mesh.
//! The induced velocity at a point is computed by recasting the Biot–Savart
//! volume integral in spherical coordinates centred on the evaluation
//! point: a precomputed Gauss–Legendre fan of ray directions is swept over
//! the sphere, each ray is intersected with the mesh, and the radial
//! integral along each chord is evaluated in closed form (the integrand is
//! linear along the ray within a cell, so the midpoint rule is exact).
//! The distance-squared kernel singularity cancels against the spherical
//! volume element, so no desingularization is needed — including at mesh
//! nodes, where velocities are usually wanted.
//!
//! Modules:
//! - [`vec3`]: small 3-vector type.
//! - [`scalar`]: the restricted arithmetic trait enforcing the per-ray
//!   operation budget (no square roots or trigonometry in the hot path).
//! - [`geometry`]: ray/triangle/tetrahedron intersection and the
//!   conservative cell skip test.
//! - [`quadrature`]: Gauss–Legendre rules and the spherical ray fan.
//! - [`mesh`]: tetrahedral meshes, file I/O, and generators.
//! - [`solver`]: the velocity evaluator (serial and multi-worker) and a
//!   direct volume-quadrature oracle.
//! - [`reference`]: analytic/tabulated reference flows and error metrics.

pub mod error;
pub mod geometry;
pub mod mesh;
pub mod quadrature;
pub mod reference;
pub mod scalar;
pub mod solver;
pub mod vec3;

pub use error::{MeshError, OracleError, QuadratureError, ReferenceError};
pub use vec3::Vec3;
