use super::exact::Propagator;
use crate::error::{invalid, Result};
use crate::spectral::SpectralField;

/// Extremes of `‖u(t)‖_{H^s} / ‖u0‖_{H^s}` over the sampled times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyDrift {
    pub max_ratio: f64,
    pub min_ratio: f64,
    /// Smallest `C` with `ratio ≤ e^{C|t|}` at every sample.
    pub growth_rate: f64,
}

impl EnergyDrift {
    /// `max |ratio - 1|`.
    pub fn deviation(&self) -> f64 {
        (self.max_ratio - 1.0).abs().max((self.min_ratio - 1.0).abs())
    }
}

pub fn energy_drift(prop: &dyn Propagator, u0: &SpectralField, s: f64, times: &[f64]) -> Result<EnergyDrift> {
    if times.is_empty() {
        return Err(invalid("energy drift needs at least one sample time"));
    }
    let evo = prop.evolution(u0)?;
    let n0 = evo.hs_norm(evo.template().coeffs(), s);
    if !(n0 > 0.0) {
        return Err(invalid("energy drift of zero initial data"));
    }
    let mut out = EnergyDrift {
        max_ratio: f64::NEG_INFINITY,
        min_ratio: f64::INFINITY,
        growth_rate: 0.0,
    };
    for &t in times {
        let r = evo.hs_norm(&evo.coeffs_at(t), s) / n0;
        out.max_ratio = out.max_ratio.max(r);
        out.min_ratio = out.min_ratio.min(r);
        if t != 0.0 {
            out.growth_rate = out.growth_rate.max(r.ln() / t.abs());
        }
    }
    Ok(out)
}
