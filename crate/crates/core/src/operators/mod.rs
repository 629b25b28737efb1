//! Generators `P`, the propagators `e^{-itP}`, and numerical checks of the
//! structural hypotheses on `P`.

mod degeneracy;
mod energy;
mod exact;
mod galerkin;
mod spec;

pub use degeneracy::{degeneracy_check, DegeneracyReport, DET_THRESHOLD};
pub use energy::{energy_drift, EnergyDrift};
pub use exact::{propagate_exact, symbol_eigenvalue, Evolution, ExactEvolution, Propagator};
pub use galerkin::{assemble_galerkin, assemble_galerkin_with_grid, propagate_galerkin, GalerkinSystem, MAX_BASIS};
pub use spec::{OperatorSpec, TrigPoly, TrigTerm};
