use num_complex::Complex64;

use super::fit::{FitResult, Verdict};
use super::ScalingExperiment;
use crate::error::{invalid, Error, Result};
use crate::geometry::torus_grid;
use crate::operators::{degeneracy_check, Evolution, ExactEvolution, OperatorSpec};
use crate::spectral::{PartitionBump, SpectralField, TorusSynthesis};

/// Time window `[h/64, αh]` sampled geometrically.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionSpec {
    pub h: f64,
    pub alpha: f64,
    pub time_points: usize,
    /// Slope tolerance against `-m/2`.
    pub tolerance: f64,
    /// Largest allowed change of the slope when `α` is halved.
    pub stability: f64,
}

impl DispersionSpec {
    pub fn new(h: f64) -> Self {
        Self {
            h,
            alpha: 0.5,
            time_points: 21,
            tolerance: 0.15,
            stability: 0.05,
        }
    }

    fn validate(&self) -> Result<()> {
        let j = -self.h.log2();
        if !(j >= 4.0 && (j - j.round()).abs() < 1e-12) {
            return Err(invalid(format!("h = {} must be 2^-j with j >= 4", self.h)));
        }
        if !(self.alpha > 0.0) || self.time_points < 4 {
            return Err(invalid("dispersion window needs alpha > 0 and at least 4 times"));
        }
        // |μ| < 4/h² on the annulus: earlier times see no phase change
        if self.h / 64.0 < self.h * self.h / 4.0 {
            return Err(Error::Resolution(format!(
                "window start h/64 lies below the fastest period h^2/4 = {:e}",
                self.h * self.h / 4.0
            )));
        }
        // group velocity 2|k| < 4/h: the packet wraps around after t = πh/4
        if 4.0 * self.alpha >= std::f64::consts::PI {
            return Err(Error::Resolution(format!(
                "alpha = {} lets the packet wrap around the torus",
                self.alpha
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct DispersionOutcome {
    pub experiment: ScalingExperiment,
    pub fit: FitResult,
    /// Same fit with `α/2`.
    pub half_window_fit: FitResult,
    /// Degeneracy rank `m` that sets the prediction `-m/2`.
    pub rank: usize,
    /// `‖u(0)‖_∞ = (2π)^{-d/2} Σ_k φ(h²|k|²)`.
    pub sup_at_zero: f64,
    pub verdict: Verdict,
}

/// Sup norms of `e^{-itP} φ(-h²Δ) δ`, where the point mass is replaced by
/// the Dirichlet kernel with unit coefficients.
pub fn dispersion_experiment(op: &OperatorSpec, spec: &DispersionSpec, bump: &PartitionBump) -> Result<DispersionOutcome> {
    spec.validate()?;
    let OperatorSpec::Signature { manifold, .. } = op else {
        return Err(invalid("dispersion runs on signature operators"));
    };
    if !manifold.is_flat_torus() {
        return Err(invalid("dispersion runs on flat tori"));
    }
    let d = manifold.dim();
    let kmax = (2.0 / spec.h).ceil() as i64;
    let n = (4 * kmax as usize).next_power_of_two();
    let grid = torus_grid(d, n)?;

    let mut modes = Vec::new();
    let mut coeffs = Vec::new();
    let side = 2 * kmax + 1;
    for i in 0..side.pow(d as u32) {
        let mut rest = i;
        let mut k = vec![0i64; d];
        for kj in k.iter_mut().rev() {
            *kj = rest % side - kmax;
            rest /= side;
        }
        let id = crate::spectral::ModeId::split_torus(manifold, &k)?;
        let lambda = crate::spectral::eigenvalue(manifold, &id)?;
        let c = bump.eval(spec.h * spec.h * lambda);
        if c > 0.0 {
            modes.push(id);
            coeffs.push(Complex64::new(c, 0.0));
        }
    }
    let sup_at_zero = coeffs.iter().map(|c| c.re).sum::<f64>() * (2.0 * std::f64::consts::PI).powf(-(d as f64) / 2.0);
    let field = SpectralField::new(manifold.clone(), modes, coeffs)?;
    let evo = ExactEvolution::new(op, &field)?;
    let synth = TorusSynthesis::new(&field, grid)?;

    let measure = |alpha: f64| -> Result<Vec<(f64, f64)>> {
        let (t0, t1) = (spec.h / 64.0, alpha * spec.h);
        let m = spec.time_points;
        Ok((0..m)
            .map(|i| {
                let t = t0 * (t1 / t0).powf(i as f64 / (m - 1) as f64);
                let v = synth.synthesize(&evo.coeffs_at(t));
                (t, v.iter().map(|z| z.norm()).fold(0.0, f64::max))
            })
            .collect())
    };
    let rank = degeneracy_check(op, 1)?.m;
    let predicted = -(rank as f64) / 2.0;
    let experiment = ScalingExperiment::new("dispersion", "t", "sup norm", Some(predicted), measure(spec.alpha)?)?;
    let half = ScalingExperiment::new("dispersion", "t", "sup norm", Some(predicted), measure(spec.alpha / 2.0)?)?;
    let fit = experiment.fit()?.judged(predicted, spec.tolerance);
    let half_window_fit = half.fit()?.judged(predicted, spec.tolerance);
    let stable = (fit.slope - half_window_fit.slope).abs() <= spec.stability;
    let verdict = Verdict::from_bool(fit.verdict == Verdict::Pass && stable);
    Ok(DispersionOutcome {
        experiment,
        fit,
        half_window_fit,
        rank,
        sup_at_zero,
        verdict,
    })
}
