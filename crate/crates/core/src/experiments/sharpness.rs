use super::bump::{stationary_family, zonal_grid_for, BumpProfile};
use super::fit::{FitResult, Verdict};
use super::ScalingExperiment;
use crate::error::{invalid, Result};
use crate::norms::MixedNormSpec;
use crate::par;
use crate::spectral::sobolev_norm;

/// Parameters of the stationary-family quotient `Q(λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessSpec {
    pub p: f64,
    pub q: f64,
    pub s: f64,
    pub lambdas: Vec<f64>,
    pub profile: BumpProfile,
    pub nodes_per_lambda: usize,
    /// Slope tolerance for the quotient and both sub-slopes.
    pub tolerance: f64,
}

impl SharpnessSpec {
    pub fn new(p: f64, q: f64, s: f64, lambdas: Vec<f64>) -> Self {
        Self {
            p,
            q,
            s,
            lambdas,
            profile: BumpProfile::default(),
            nodes_per_lambda: 1024,
            tolerance: 0.05,
        }
    }

    /// Predicted slope `1/p - s` of the quotient.
    pub fn predicted(&self) -> f64 {
        1.0 / self.p - self.s
    }

    /// Whether `(p, q)` is admissible on the six-dimensional product.
    pub fn admissible(&self) -> bool {
        MixedNormSpec::new(self.p, self.q).classic_admissible(6)
    }
}

#[derive(Debug, Clone)]
pub struct SharpnessOutcome {
    pub quotient: ScalingExperiment,
    pub quotient_fit: FitResult,
    /// `‖u0‖_{L^q(S³×S³)}` against `λ`; predicted `-3/q`.
    pub lq: ScalingExperiment,
    pub lq_fit: FitResult,
    /// `‖u0‖_{H^s(S³×S³)}` against `λ`; predicted `s - 3/2`.
    pub hs: ScalingExperiment,
    pub hs_fit: FitResult,
    pub admissible: bool,
    pub verdict: Verdict,
}

/// `Q(λ) = T^{1/p}‖u0‖_{L^q} / ‖u0‖_{H^s}` for `u0 = φ_λ(x·y)`. The flow is
/// stationary, so the time factor is `1` on `[0, 1]`. The verdict requires
/// the quotient slope and both sub-slopes to match; for inadmissible
/// `(p, q)` the run is exploratory.
pub fn sharpness_experiment(spec: &SharpnessSpec) -> Result<SharpnessOutcome> {
    if !(spec.p >= 2.0 && spec.q >= 2.0) {
        return Err(invalid(format!("need p, q >= 2, got ({}, {})", spec.p, spec.q)));
    }
    if !(0.0..=2.0).contains(&spec.s) {
        return Err(invalid(format!("s = {} outside [0, 2]", spec.s)));
    }
    let rows = par::map_slice(&spec.lambdas, |&lambda| -> Result<(f64, f64, f64)> {
        let grid = zonal_grid_for(lambda, spec.nodes_per_lambda)?;
        let datum = stationary_family(lambda, &spec.profile, &grid)?;
        Ok((lambda, datum.lq(spec.q)?, datum.hs(spec.s)?))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let admissible = spec.admissible();
    let tol = spec.tolerance;
    let family = "stationary bump";
    let lq = ScalingExperiment::new(family, "lambda", format!("L^{} norm", spec.q), Some(-3.0 / spec.q), rows.iter().map(|r| (r.0, r.1)).collect())?;
    let hs = ScalingExperiment::new(family, "lambda", format!("H^{} norm", spec.s), Some(spec.s - 1.5), rows.iter().map(|r| (r.0, r.2)).collect())?;
    let quotient = ScalingExperiment::new(
        family,
        "lambda",
        format!("quotient p={} q={} s={}", spec.p, spec.q, spec.s),
        Some(spec.predicted()),
        rows.iter().map(|r| (r.0, r.1 / r.2)).collect(),
    )?;
    let lq_fit = lq.fit()?.judged(-3.0 / spec.q, tol);
    let hs_fit = hs.fit()?.judged(spec.s - 1.5, tol);
    let quotient_fit = quotient.fit()?.judged(spec.predicted(), tol);
    let verdict = if !admissible {
        Verdict::Exploratory
    } else {
        Verdict::from_bool(
            [&lq_fit, &hs_fit, &quotient_fit]
                .iter()
                .all(|f| f.verdict == Verdict::Pass),
        )
    };
    Ok(SharpnessOutcome {
        quotient,
        quotient_fit,
        lq,
        lq_fit,
        hs,
        hs_fit,
        admissible,
        verdict,
    })
}

/// `‖φ_λ‖_{L^q(S³)}` and `‖φ_λ‖_{H²(S³)}` against `λ`.
pub fn bump_scaling(
    q: f64,
    lambdas: &[f64],
    profile: &BumpProfile,
    nodes_per_lambda: usize,
) -> Result<(ScalingExperiment, ScalingExperiment)> {
    let rows = par::map_slice(lambdas, |&lambda| -> Result<(f64, f64, f64)> {
        let grid = zonal_grid_for(lambda, nodes_per_lambda)?;
        let datum = stationary_family(lambda, profile, &grid)?;
        Ok((lambda, datum.profile_lq(q)?, sobolev_norm(&datum.zonal, 2.0)))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let lq = ScalingExperiment::new("bump", "lambda", format!("L^{q} norm on S3"), Some(-3.0 / q), rows.iter().map(|r| (r.0, r.1)).collect())?;
    let h2 = ScalingExperiment::new("bump", "lambda", "H^2 norm on S3", Some(0.5), rows.iter().map(|r| (r.0, r.2)).collect())?;
    Ok((lq, h2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::bump::bump_family;
    use crate::norms::lq_norm;
    use crate::VOL_S3;

    fn lambdas() -> Vec<f64> {
        vec![8.0, 16.0, 32.0, 64.0]
    }

    #[test]
    fn predicted_slopes() {
        let s = SharpnessSpec::new(2.0, 3.0, 0.25, lambdas());
        assert!((s.predicted() - 0.25).abs() < 1e-15);
        assert!(s.admissible());
        assert!(!SharpnessSpec::new(2.0, 4.0, 0.25, lambdas()).admissible());
    }

    /// Two-point slope by direct quadrature of `|φ_λ|^3` and the spectral
    /// `L²` norm (`s = 0`).
    #[test]
    fn two_point_check_at_s_zero() {
        let p = BumpProfile::default();
        let q = |lambda: f64| {
            let g = zonal_grid_for(lambda, 1024).unwrap();
            let f = bump_family(lambda, &p, &g).unwrap();
            let l3 = VOL_S3.powf(1.0 / 3.0) * lq_norm(&f, 3.0).unwrap();
            let l2 = VOL_S3.sqrt() * lq_norm(&f, 2.0).unwrap();
            l3 / l2
        };
        let slope = (q(64.0) / q(32.0)).ln() / 2f64.ln();
        assert!((slope - 0.5).abs() < 0.01, "{slope}");
    }

    #[test]
    fn quotient_slope_is_difference_of_sub_slopes() {
        let out = sharpness_experiment(&SharpnessSpec::new(2.0, 3.0, 0.25, lambdas())).unwrap();
        let diff = out.lq_fit.slope - out.hs_fit.slope;
        assert!((out.quotient_fit.slope - diff).abs() < 1e-12);
        assert_eq!(out.verdict, Verdict::Pass, "{:?}", out.quotient_fit);
    }

    #[test]
    fn inadmissible_pair_is_exploratory() {
        let out = sharpness_experiment(&SharpnessSpec::new(2.0, 4.0, 0.0, lambdas())).unwrap();
        assert_eq!(out.verdict, Verdict::Exploratory);
    }
}
