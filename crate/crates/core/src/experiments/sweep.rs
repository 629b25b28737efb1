use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::fit::FitResult;
use super::ScalingExperiment;
use crate::error::{invalid, Result};
use crate::geometry::torus_grid;
use crate::norms::{strichartz_quotient, MixedNormSpec};
use crate::operators::OperatorSpec;
use crate::spectral::{eigenvalue, ModeId, SpectralField};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub mixed: MixedNormSpec,
    pub s: f64,
    pub blocks: Vec<u32>,
    pub trials: usize,
    pub seed: u64,
    /// Largest allowed ratio between per-block maxima.
    pub max_ratio: f64,
}

impl SweepSpec {
    pub fn new(p: f64, q: f64, s: f64, blocks: Vec<u32>, trials: usize, seed: u64) -> Self {
        Self {
            mixed: MixedNormSpec::new(p, q),
            s,
            blocks,
            trials,
            seed,
            max_ratio: 2.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    /// Per-block maximum quotient against `2^j`.
    pub experiment: ScalingExperiment,
    /// Every quotient, block by block.
    pub quotients: Vec<Vec<f64>>,
    /// Largest over smallest per-block maximum.
    pub ratio: f64,
    pub fit: FitResult,
}

/// Complex Gaussian coefficients on the modes with `4^{j-1} < λ < 4^{j+1}`.
/// The stream `(j << 32) | trial` of a ChaCha8 generator seeded with `seed`
/// makes each draw independent of evaluation order.
pub fn block_field(manifold: &crate::geometry::ManifoldSpec, j: u32, trial: usize, seed: u64) -> Result<SpectralField> {
    let d = manifold.dim();
    let kmax = 1i64 << (j + 1);
    let (lo, hi) = (4f64.powi(j as i32 - 1), 4f64.powi(j as i32 + 1));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((j as u64) << 32) | trial as u64);
    let side = 2 * kmax + 1;
    let mut modes = Vec::new();
    let mut coeffs = Vec::new();
    for i in 0..side.pow(d as u32) {
        let mut rest = i;
        let mut k = vec![0i64; d];
        for kj in k.iter_mut().rev() {
            *kj = rest % side - kmax;
            rest /= side;
        }
        let id = ModeId::split_torus(manifold, &k)?;
        let lambda = eigenvalue(manifold, &id)?;
        if lambda > lo && lambda < hi {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            modes.push(id);
            coeffs.push(Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2);
        }
    }
    SpectralField::new(manifold.clone(), modes, coeffs)
}

/// Strichartz quotients of random data block by block.
pub fn random_data_sweep(op: &OperatorSpec, spec: &SweepSpec) -> Result<SweepOutcome> {
    if spec.trials < 8 {
        return Err(invalid(format!("random sweep needs at least 8 trials, got {}", spec.trials)));
    }
    let OperatorSpec::Signature { manifold, .. } = op else {
        return Err(invalid("random sweeps run on signature operators"));
    };
    if !manifold.is_flat_torus() {
        return Err(invalid("random sweeps run on flat tori"));
    }
    let mut quotients = Vec::with_capacity(spec.blocks.len());
    for &j in &spec.blocks {
        if j == 0 || j > 12 {
            return Err(invalid(format!("block index {j} outside 1..=12")));
        }
        // |k| < 2^{j+1}; four points per shortest wavelength
        let grid = torus_grid(manifold.dim(), 1 << (j + 3))?;
        let row = (0..spec.trials)
            .map(|trial| {
                let u0 = block_field(manifold, j, trial, spec.seed)?;
                strichartz_quotient(op, &u0, &spec.mixed, &grid, spec.s)
            })
            .collect::<Result<Vec<_>>>()?;
        quotients.push(row);
    }
    let maxima: Vec<f64> = quotients.iter().map(|r| r.iter().cloned().fold(0.0, f64::max)).collect();
    let ratio = maxima.iter().cloned().fold(0.0, f64::max) / maxima.iter().cloned().fold(f64::INFINITY, f64::min);
    let points = spec
        .blocks
        .iter()
        .zip(&maxima)
        .map(|(j, m)| (2f64.powi(*j as i32), *m))
        .collect();
    let experiment = ScalingExperiment::new("random data", "2^j", format!("max quotient s={}", spec.s), None, points)?;
    let fit = experiment.fit()?;
    Ok(SweepOutcome {
        experiment,
        quotients,
        ratio,
        fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ManifoldSpec;

    #[test]
    fn block_support_and_reproducibility() {
        let m = ManifoldSpec::split_torus(2).unwrap();
        let a = block_field(&m, 3, 5, 42).unwrap();
        let b = block_field(&m, 3, 5, 42).unwrap();
        assert_eq!(a.coeffs(), b.coeffs());
        assert!(a.eigenvalues().iter().all(|l| *l > 16.0 && *l < 256.0));
        let c = block_field(&m, 3, 6, 42).unwrap();
        assert_ne!(a.coeffs(), c.coeffs());
    }

    #[test]
    fn too_few_trials_rejected() {
        let op = OperatorSpec::signature(ManifoldSpec::split_torus(2).unwrap(), vec![1, -1]).unwrap();
        assert!(random_data_sweep(&op, &SweepSpec::new(6.0, 3.0, 1.0 / 6.0, vec![2, 3, 4, 5], 4, 1)).is_err());
    }

    #[test]
    fn sweep_is_bitwise_reproducible() {
        let op = OperatorSpec::signature(ManifoldSpec::split_torus(2).unwrap(), vec![1, -1]).unwrap();
        let spec = SweepSpec::new(6.0, 3.0, 1.0 / 6.0, vec![1, 2, 3, 4], 8, 7);
        let a = random_data_sweep(&op, &spec).unwrap();
        let b = random_data_sweep(&op, &spec).unwrap();
        assert_eq!(a.quotients, b.quotients);
    }

    #[test]
    fn higher_regularity_lowers_the_quotient() {
        let op = OperatorSpec::signature(ManifoldSpec::split_torus(2).unwrap(), vec![1, 1]).unwrap();
        let lo = random_data_sweep(&op, &SweepSpec::new(4.0, 4.0, 0.0, vec![1, 2, 3, 4], 8, 3)).unwrap();
        let hi = random_data_sweep(&op, &SweepSpec::new(4.0, 4.0, 0.5, vec![1, 2, 3, 4], 8, 3)).unwrap();
        for (a, b) in lo.quotients.iter().flatten().zip(hi.quotients.iter().flatten()) {
            assert!(b <= a);
        }
    }
}
