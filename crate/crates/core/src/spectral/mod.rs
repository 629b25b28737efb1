//! Orthonormal eigenbases of the reference Laplacian, forward and inverse
//! transforms, Sobolev norms, and Littlewood–Paley projectors built on a
//! 4-adic partition of unity.

mod fft;
mod field;
mod partition;
mod torus;
mod zonal;

pub use fft::{dst1, fft_nd};
pub use field::{eigenvalue, factor_eigenvalues, sobolev_norm, FactorMode, ModeId, SpectralField, SphereBasis};
pub use partition::{lp_low, lp_project, make_partition_bump, max_block, PartitionBump};
pub use torus::{analyze_torus, synthesize_torus, TorusSynthesis};
pub use zonal::{analyze_zonal_s3, cheb_u, eval_zonal, synthesize_zonal, zonal_basis_value};
