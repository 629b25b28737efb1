//! Spectral laboratory for Strichartz estimates of Schrödinger flows on
//! model compact manifolds (flat tori, the round three-sphere, and products).
//!
//! Solutions are propagated exactly in spectral space, mixed space-time
//! Lebesgue norms are measured by quadrature, and loss-of-derivative
//! exponents are extracted with log-log fits and compared against the
//! predicted rates.
//!
//! Module map:
//!
//! * [`geometry`]: unit quaternions, manifold descriptions, quadrature grids.
//! * [`spectral`]: eigenbases, transforms, Sobolev norms, Littlewood–Paley
//!   projectors.
//! * [`operators`]: generators, exact and Galerkin propagators, hypothesis
//!   checks.
//! * [`norms`]: spatial and mixed norms, Strichartz quotients, the
//!   `S³ × S³` zonal reductions.
//! * [`experiments`]: extremizer families, scaling experiments, fits.
//! * [`cli`]: configuration, orchestration and result files.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod norms;
pub mod operators;
pub mod par;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Volume of the unit three-sphere, `2π²`.
pub const VOL_S3: f64 = 2.0 * std::f64::consts::PI * std::f64::consts::PI;
