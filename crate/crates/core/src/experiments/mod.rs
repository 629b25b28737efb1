//! Extremizer families, scaling experiments and exponent fits.

mod bump;
pub mod checks;
mod dispersion;
mod fit;
mod sharpness;
mod sweep;

pub use bump::{
    bump_family, bump_h2_direct, stationary_family, zonal_grid_for, BumpProfile, StationaryDatum,
    MIN_NODES_PER_LAMBDA, MIN_SUPPORT_NODES,
};
pub use dispersion::{dispersion_experiment, DispersionOutcome, DispersionSpec};
pub use fit::{fit_loglog, FitResult, Verdict};
pub use sharpness::{bump_scaling, sharpness_experiment, SharpnessOutcome, SharpnessSpec};
pub use sweep::{random_data_sweep, block_field, SweepOutcome, SweepSpec};

use crate::error::{invalid, Result};

/// Measured `(parameter, value)` pairs for one observable of a family.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingExperiment {
    pub family: String,
    /// Name of the scaling parameter (`lambda`, `t`, `2^j`).
    pub parameter: String,
    pub observable: String,
    pub predicted: Option<f64>,
    pub points: Vec<(f64, f64)>,
}

impl ScalingExperiment {
    pub fn new(
        family: impl Into<String>,
        parameter: impl Into<String>,
        observable: impl Into<String>,
        predicted: Option<f64>,
        points: Vec<(f64, f64)>,
    ) -> Result<Self> {
        let out = Self {
            family: family.into(),
            parameter: parameter.into(),
            observable: observable.into(),
            predicted,
            points,
        };
        out.validate()?;
        Ok(out)
    }

    /// At least 4 points spanning at least two octaves.
    pub fn validate(&self) -> Result<()> {
        if self.points.len() < 4 {
            return Err(invalid(format!(
                "{}: a scaling experiment needs at least 4 parameter points, got {}",
                self.family,
                self.points.len()
            )));
        }
        let (lo, hi) = self
            .points
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), (x, _)| (lo.min(*x), hi.max(*x)));
        if !(lo > 0.0 && hi / lo >= 4.0 * (1.0 - 1e-12)) {
            return Err(invalid(format!(
                "{}: parameters [{lo}, {hi}] span less than two octaves",
                self.family
            )));
        }
        Ok(())
    }

    pub fn fit(&self) -> Result<FitResult> {
        fit_loglog(&self.points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_and_count_enforced() {
        let pts = |xs: &[f64]| xs.iter().map(|x| (*x, 1.0)).collect::<Vec<_>>();
        assert!(ScalingExperiment::new("f", "x", "o", None, pts(&[1.0, 2.0, 3.0])).is_err());
        assert!(ScalingExperiment::new("f", "x", "o", None, pts(&[1.0, 1.5, 2.0, 3.0])).is_err());
        assert!(ScalingExperiment::new("f", "x", "o", None, pts(&[1.0, 2.0, 3.0, 4.0])).is_ok());
    }
}
