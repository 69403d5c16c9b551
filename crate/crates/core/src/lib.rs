//! Numerical laboratory for first Dirac eigenvalues on deformed 2-spheres and
//! the extrinsic geometry of surfaces in 3-manifolds.
//!
//! The crate is organised around five subsystems:
//!
//! - [`spectral`]: Dirac spectra of conformally round metrics on the
//!   2-sphere, via a Galerkin method in the round eigenbasis realised with
//!   spin-weight 1/2 harmonics.
//! - [`surface`]: axisymmetric surfaces embedded in Euclidean or hyperbolic
//!   3-space — induced metrics, principal curvatures, total mean curvature,
//!   and conformal uniformization over the round sphere.
//! - [`ambient`]: explicit 3-manifold charts behind a common trait, geodesic
//!   spheres by geodesic/Jacobi shooting, coordinate spheres and pointwise
//!   curvature invariants.
//! - [`flow`]: the scalar-flat quasi-spherical construction on the exterior
//!   of a convex surface and its monotone mass functional.
//! - [`harness`]: quantitative inequality and asymptotic-expansion checks
//!   wired to the other subsystems, producing structured verdicts.

pub mod ambient;
pub mod error;
pub mod flow;
pub mod harness;
pub mod io;
pub mod numerics;
pub mod spectral;
pub mod surface;
pub mod wigner;

pub use error::{Error, Result};
