use super::field::SpectralField;

/// Smooth profile `φ` with `supp φ ⊂ (1/4, 4)`, `0 ≤ φ ≤ 1` and
/// `Σ_{j≥0} φ(4^{-j} λ) = 1` for `λ ≥ 1`.
///
/// Built as `φ(λ) = χ(λ) − χ(4λ)` from a smooth non-increasing step `χ`
/// (`χ = 1` on `(−∞, 1]`, `χ = 0` on `[4, ∞)`), so the partition sum
/// telescopes to `1 − χ(4λ)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct PartitionBump;

impl PartitionBump {
    /// The step `χ`; the transition runs in `log₄ λ`.
    pub fn chi(&self, lambda: f64) -> f64 {
        if lambda <= 1.0 {
            return 1.0;
        }
        if lambda >= 4.0 {
            return 0.0;
        }
        let t = lambda.ln() / 4f64.ln();
        let a = flat(t);
        let b = flat(1.0 - t);
        1.0 - a / (a + b)
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        self.chi(lambda) - self.chi(4.0 * lambda)
    }

    /// Multiplier of block `j`: `φ(4^{-j} λ)`.
    pub fn block(&self, j: u32, lambda: f64) -> f64 {
        self.eval(lambda * 0.25f64.powi(j as i32))
    }
}

fn flat(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

pub fn make_partition_bump() -> PartitionBump {
    PartitionBump
}

/// `φ(−4^{-j} Δ) f` as an exact spectral multiplier.
pub fn lp_project(field: &SpectralField, j: u32, bump: &PartitionBump) -> SpectralField {
    field.map_multiplier(|l| bump.block(j, l))
}

/// Low-frequency remainder `χ(−4Δ) f`, so that
/// `lp_low(f) + Σ_j lp_project(f, j) = f` exactly mode by mode.
pub fn lp_low(field: &SpectralField, bump: &PartitionBump) -> SpectralField {
    field.map_multiplier(|l| bump.chi(4.0 * l))
}

/// Largest block index whose support meets `[0, lambda_max]`.
pub fn max_block(lambda_max: f64) -> u32 {
    if lambda_max < 1.0 {
        return 0;
    }
    (lambda_max.log(4.0).floor() as u32) + 1
}
