use num_complex::Complex64;

use super::grid_field::lq_of_values;
use crate::error::{invalid, Error, Result};
use crate::geometry::{TorusGrid, ZonalGrid};
use crate::operators::{Evolution, Propagator};
use crate::par;
use crate::spectral::{sobolev_norm, synthesize_zonal, SpectralField, TorusSynthesis};

/// Exponents and time discretization of an `L^p([0,T]; L^q)` norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedNormSpec {
    pub p: f64,
    pub q: f64,
    pub t_max: f64,
    /// Initial number of midpoint samples; doubled until certified.
    pub time_samples: usize,
    pub max_time_samples: usize,
    /// Relative change allowed between successive doublings.
    pub rel_tol: f64,
}

impl MixedNormSpec {
    pub fn new(p: f64, q: f64) -> Self {
        Self {
            p,
            q,
            t_max: 1.0,
            time_samples: 32,
            max_time_samples: 1 << 13,
            rel_tol: 1e-3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if !(self.p >= 2.0) {
            errs.push(format!("p = {} must be >= 2", self.p));
        }
        if !(self.q >= 2.0) {
            errs.push(format!("q = {} must be >= 2", self.q));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            errs.push(format!("time horizon {} must be positive", self.t_max));
        }
        if self.time_samples == 0 || self.max_time_samples < self.time_samples {
            errs.push("time sample counts are inconsistent".into());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(invalid(errs.join("; ")))
        }
    }

    /// `p ≥ 2`, `2/p + n/q = n/2`, `(n, p, q) ≠ (2, 2, ∞)`.
    pub fn classic_admissible(&self, n: usize) -> bool {
        let n = n as f64;
        let lhs = 2.0 / self.p + n / self.q;
        self.p >= 2.0 && (lhs - n / 2.0).abs() < 1e-12 && !(n == 2.0 && self.p == 2.0 && self.q.is_infinite())
    }

    /// `p ≥ 2`, `1/p + σ/q = σ/2`, `(σ, p, q) ≠ (1, 2, ∞)`.
    pub fn sigma_admissible(&self, sigma: f64) -> bool {
        let lhs = 1.0 / self.p + sigma / self.q;
        self.p >= 2.0
            && (lhs - sigma / 2.0).abs() < 1e-12
            && !(sigma == 1.0 && self.p == 2.0 && self.q.is_infinite())
    }
}

/// A way of turning coefficients into spatial `L^q` norms.
pub trait Synthesis: Sync {
    fn prepare<'a>(&'a self, template: &SpectralField) -> Result<Box<dyn PreparedNorm + 'a>>;
}

/// Spatial norm evaluator bound to a fixed mode list.
pub trait PreparedNorm: Sync {
    fn lq(&self, coeffs: &[Complex64], q: f64) -> Result<f64>;
}

struct TorusNorm(TorusSynthesis);

impl PreparedNorm for TorusNorm {
    fn lq(&self, coeffs: &[Complex64], q: f64) -> Result<f64> {
        let values = self.0.synthesize(coeffs);
        lq_of_values(&self.0.grid(), &values, q)
    }
}

impl Synthesis for TorusGrid {
    fn prepare<'a>(&'a self, template: &SpectralField) -> Result<Box<dyn PreparedNorm + 'a>> {
        Ok(Box::new(TorusNorm(TorusSynthesis::new(template, *self)?)))
    }
}

struct ZonalNorm<'a> {
    grid: &'a ZonalGrid,
    template: SpectralField,
}

impl PreparedNorm for ZonalNorm<'_> {
    fn lq(&self, coeffs: &[Complex64], q: f64) -> Result<f64> {
        let field = self.template.with_coeffs(coeffs.to_vec())?;
        let values = synthesize_zonal(&field, self.grid)?;
        lq_of_values(&self.grid, values.values(), q)
    }
}

impl Synthesis for ZonalGrid {
    fn prepare<'a>(&'a self, template: &SpectralField) -> Result<Box<dyn PreparedNorm + 'a>> {
        Ok(Box::new(ZonalNorm {
            grid: self,
            template: template.clone(),
        }))
    }
}

/// Certified value of a mixed norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedNorm {
    pub value: f64,
    /// Value at half the final number of samples.
    pub coarse: f64,
    pub time_samples: usize,
}

fn composite(evo: &dyn Evolution, norm: &dyn PreparedNorm, spec: &MixedNormSpec, n: usize) -> Result<f64> {
    let dt = spec.t_max / n as f64;
    let vals = par::map_range(n, |i| {
        let t = (i as f64 + 0.5) * dt;
        norm.lq(&evo.coeffs_at(t), spec.q)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    if spec.p.is_infinite() {
        return Ok(vals.into_iter().fold(0.0, f64::max));
    }
    let sum: f64 = vals.iter().map(|v| v.powf(spec.p)).sum();
    Ok((sum * dt).powf(1.0 / spec.p))
}

/// `‖u‖_{L^p([0,T]; L^q)}` for `u(t) = e^{-itP} u0`, by composite midpoint
/// sums in time. The sample count is doubled until two successive values
/// agree to `spec.rel_tol`; otherwise both values are returned in the error.
pub fn mixed_norm(
    prop: &dyn Propagator,
    u0: &SpectralField,
    spec: &MixedNormSpec,
    synth: &dyn Synthesis,
) -> Result<MixedNorm> {
    spec.validate()?;
    let evo = prop.evolution(u0)?;
    let norm = synth.prepare(evo.template())?;
    let mut n = spec.time_samples;
    let mut coarse = composite(evo.as_ref(), norm.as_ref(), spec, n)?;
    loop {
        let fine = composite(evo.as_ref(), norm.as_ref(), spec, 2 * n)?;
        let rel_change = (fine - coarse).abs() / fine.abs().max(f64::MIN_POSITIVE);
        if rel_change <= spec.rel_tol {
            return Ok(MixedNorm {
                value: fine,
                coarse,
                time_samples: 2 * n,
            });
        }
        if 2 * n >= spec.max_time_samples {
            return Err(Error::Convergence {
                coarse,
                fine,
                rel_change,
            });
        }
        coarse = fine;
        n *= 2;
    }
}

/// Mixed norm divided by `‖u0‖_{H^s}`.
pub fn strichartz_quotient(
    prop: &dyn Propagator,
    u0: &SpectralField,
    spec: &MixedNormSpec,
    synth: &dyn Synthesis,
    s: f64,
) -> Result<f64> {
    let denom = sobolev_norm(u0, s);
    if !(denom > 0.0) {
        return Err(invalid("Strichartz quotient of zero initial data"));
    }
    Ok(mixed_norm(prop, u0, spec, synth)?.value / denom)
}
