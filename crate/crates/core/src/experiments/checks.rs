//! Numerical checks of the structural identities: partition of unity,
//! stationarity of lifted characters, isometry invariance of quadrature,
//! the `S³ × S³` factorization, and Galerkin consistency.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::geometry::{haar_grid_s3, left_translate, quat_mul, ManifoldSpec, UnitQuaternion};
use crate::operators::{
    assemble_galerkin, degeneracy_check, energy_drift, propagate_exact, propagate_galerkin, symbol_eigenvalue,
    OperatorSpec, TrigPoly,
};
use crate::par;
use crate::spectral::{FactorMode, ModeId, PartitionBump, SpectralField, SphereBasis};
use crate::VOL_S3;

/// `(max |Σ_j φ(4^{-j}λ) - 1|, max φ outside (1/4, 4), min φ, max φ)` on
/// `samples` log-spaced points of `[1, 10⁶]`.
pub fn partition_check(bump: &PartitionBump, samples: usize) -> (f64, f64, f64, f64) {
    let (lo, hi) = (0.0f64, 6.0f64 * 10f64.ln());
    let mut sum_err: f64 = 0.0;
    let mut outside: f64 = 0.0;
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..samples {
        let lambda = (lo + (hi - lo) * i as f64 / (samples - 1).max(1) as f64).exp();
        let jmax = crate::spectral::max_block(lambda) + 2;
        let sum: f64 = (0..=jmax).map(|j| bump.block(j, lambda)).sum();
        sum_err = sum_err.max((sum - 1.0).abs());
        let v = bump.eval(lambda);
        min = min.min(v);
        max = max.max(v);
    }
    for i in 0..samples {
        // (0, 1/4] and [4, 4·10³)
        let a = 0.25 * (i as f64 + 1.0) / samples as f64;
        let b = 4.0 * 1000f64.powf(i as f64 / samples as f64);
        outside = outside.max(bump.eval(a)).max(bump.eval(b));
    }
    (sum_err, outside, min, max)
}

/// Largest `|μ|` of `-Δ_x + Δ_y` on the lifted characters `κ ≤ kappa_max`.
pub fn stationarity_check(kappa_max: u32) -> Result<f64> {
    let op = OperatorSpec::signature(ManifoldSpec::s3_x_s3(), vec![1, -1])?;
    let mut worst: f64 = 0.0;
    for k in 0..=kappa_max {
        let half = FactorMode::Sphere {
            degree: k,
            basis: SphereBasis::Lifted,
        };
        worst = worst.max(symbol_eigenvalue(&op, &ModeId(vec![half.clone(), half]))?.abs());
    }
    Ok(worst)
}

/// Largest `|∫ g(a·y) dμ - ∫ g dμ|` over `count` random `a`, for a fixed
/// degree-6 polynomial `g` on a grid exact to degree 8.
pub fn translation_check(count: usize, seed: u64) -> Result<f64> {
    let grid = haar_grid_s3(4)?;
    let g = |p: &UnitQuaternion| {
        let [a, b, c, d] = p.coords();
        1.0 + a * a * b - 3.0 * c.powi(4) + b * d + 2.0 * a.powi(3) * b * c * d - d.powi(6)
    };
    let base = grid.integrate(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let a = UnitQuaternion::random(&mut rng);
        worst = worst.max((left_translate(&a, &grid).integrate(g) - base).abs());
    }
    Ok(worst)
}

/// Clenshaw evaluation of `Σ c_κ e_κ` as a function of `cos θ`.
struct Zonal(Vec<Complex64>);

impl Zonal {
    fn new(f: &SpectralField) -> Result<Self> {
        let mut dense = Vec::new();
        for (m, c) in f.modes().iter().zip(f.coeffs()) {
            match m.0.as_slice() {
                [FactorMode::Sphere {
                    degree,
                    basis: SphereBasis::Zonal,
                }] => {
                    let k = *degree as usize;
                    if dense.len() <= k {
                        dense.resize(k + 1, Complex64::new(0.0, 0.0));
                    }
                    dense[k] += c;
                }
                _ => return Err(crate::error::invalid("expected a zonal field")),
            }
        }
        Ok(Self(dense))
    }

    fn at(&self, x: f64) -> Complex64 {
        let x = x.clamp(-1.0, 1.0);
        let (mut b1, mut b2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for c in self.0.iter().rev() {
            let b0 = c + b1 * (2.0 * x) - b2;
            b2 = b1;
            b1 = b0;
        }
        b1 / VOL_S3.sqrt()
    }
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl McEstimate {
    /// `|exact - mean| / stderr`.
    pub fn z_score(&self, exact: f64) -> f64 {
        (exact - self.mean).abs() / self.stderr
    }
}

/// Chunked sampling: chunk `c` draws from ChaCha8 stream `c`, so the
/// estimate does not depend on the thread count.
fn monte_carlo<F>(samples: usize, seed: u64, volume: f64, f: F) -> McEstimate
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let chunks = samples.div_ceil(par::CHUNK);
    let parts = par::map_range(chunks, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c as u64);
        let n = par::CHUNK.min(samples - c * par::CHUNK);
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let v = f(&mut rng);
            s1 += v;
            s2 += v * v;
        }
        (s1, s2)
    });
    let (s1, s2) = parts.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
    let n = samples as f64;
    let mean = s1 / n;
    let var = (s2 / n - mean * mean).max(0.0) * n / (n - 1.0);
    McEstimate {
        mean: volume * mean,
        stderr: volume * (var / n).sqrt(),
        samples,
    }
}

/// `∫∫ |f(x·y)|^q dμ(x) dμ(y)` from independent Haar pairs.
pub fn product_lq_monte_carlo(f: &SpectralField, q: f64, samples: usize, seed: u64) -> Result<McEstimate> {
    let z = Zonal::new(f)?;
    Ok(monte_carlo(samples, seed, VOL_S3 * VOL_S3, |rng| {
        let x = UnitQuaternion::random(rng);
        let y = UnitQuaternion::random(rng);
        crate::norms::abs_pow(z.at(quat_mul(&x, &y).x1()), q)
    }))
}

/// `‖(1 - Δ_x - Δ_y) f(x·y)‖²_{L²}` by Monte Carlo, with both Laplacians
/// taken by central differences of the degree-0 extension to `R⁴`; this
/// does not use the eigenvalue of the lifted character.
pub fn product_h2_monte_carlo(f: &SpectralField, samples: usize, seed: u64, step: f64) -> Result<McEstimate> {
    let z = Zonal::new(f)?;
    let u = |x: [f64; 4], y: [f64; 4]| -> Complex64 {
        let (Ok(x), Ok(y)) = (UnitQuaternion::normalized(x), UnitQuaternion::normalized(y)) else {
            return Complex64::new(f64::NAN, 0.0);
        };
        z.at(quat_mul(&x, &y).x1())
    };
    Ok(monte_carlo(samples, seed, VOL_S3 * VOL_S3, |rng| {
        let x = UnitQuaternion::random(rng).coords();
        let y = UnitQuaternion::random(rng).coords();
        let centre = u(x, y);
        let mut lap = Complex64::new(0.0, 0.0);
        for i in 0..4 {
            for sign in [-1.0, 1.0] {
                let mut xs = x;
                xs[i] += sign * step;
                let mut ys = y;
                ys[i] += sign * step;
                lap += u(xs, y) + u(x, ys) - centre * 2.0;
            }
        }
        lap /= step * step;
        (centre - lap).norm_sqr()
    }))
}

/// Random zonal field with degrees `0..=kmax`.
pub fn random_zonal(kmax: u32, seed: u64) -> Result<SpectralField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes = (0..=kmax).map(|k| ModeId(vec![FactorMode::zonal(k)])).collect();
    let coeffs = (0..=kmax)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    SpectralField::new(ManifoldSpec::s3(), modes, coeffs)
}

/// Random coefficients on the lattice `|k|_∞ ≤ kmax` of the split torus.
pub fn random_torus(d: usize, kmax: i64, seed: u64) -> Result<SpectralField> {
    let man = ManifoldSpec::split_torus(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = 2 * kmax + 1;
    let mut modes = Vec::new();
    let mut coeffs = Vec::new();
    for i in 0..side.pow(d as u32) {
        let mut rest = i;
        let mut k = vec![0; d];
        for kj in k.iter_mut().rev() {
            *kj = rest % side - kmax;
            rest /= side;
        }
        modes.push(ModeId::split_torus(&man, &k)?);
        coeffs.push(Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    }
    SpectralField::new(man, modes, coeffs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GalerkinChecks {
    /// Largest coefficient difference between Galerkin and exact flows.
    pub exact_mismatch: f64,
    /// Largest generalized-eigenvalue difference from the symbol.
    pub eigenvalue_mismatch: f64,
    /// `max |H - Hᴴ|` for a variable-coefficient operator.
    pub hermitian_defect: f64,
    /// Relative drift of the Gram norm along that flow.
    pub gram_drift: f64,
    /// Evolved energy above `|k|_∞ = K/2`.
    pub tail_fraction: f64,
    pub identity_rank: usize,
    pub cosine_rank: usize,
}

/// A smooth symmetric coefficient matrix and density on `T²`.
pub fn wavy_operator() -> Result<OperatorSpec> {
    let off = TrigPoly::cosine(&[1, 1], 0.2);
    let a = vec![
        vec![TrigPoly::constant(2, 1.0).plus(TrigPoly::cosine(&[1, 0], 0.3)), off.clone()],
        vec![off, TrigPoly::constant(2, 1.5).plus(TrigPoly::cosine(&[0, 1], 0.4))],
    ];
    let rho = TrigPoly::constant(2, 2.0)
        .plus(TrigPoly::cosine(&[0, 1], 0.5))
        .plus(TrigPoly::cosine(&[1, -1], 0.3));
    OperatorSpec::variable_torus(2, rho, a)
}

/// `a = diag(1, cos x₁)`, `ρ = 1`.
pub fn cosine_operator() -> Result<OperatorSpec> {
    let a = vec![
        vec![TrigPoly::constant(2, 1.0), TrigPoly::zero(2)],
        vec![TrigPoly::zero(2), TrigPoly::cosine(&[1, 0], 1.0)],
    ];
    OperatorSpec::variable_torus(2, TrigPoly::constant(2, 1.0), a)
}

pub fn galerkin_checks(cutoff: usize, seed: u64) -> Result<GalerkinChecks> {
    let man = ManifoldSpec::split_torus(2)?;
    let mut exact_mismatch: f64 = 0.0;
    let mut eigenvalue_mismatch: f64 = 0.0;
    for signs in [vec![1, 1], vec![1, -1]] {
        let op = OperatorSpec::signature(man.clone(), signs)?;
        let sys = assemble_galerkin(&op, cutoff)?;
        let mut symbols = sys
            .modes()
            .iter()
            .map(|k| symbol_eigenvalue(&op, &ModeId::split_torus(&man, k)?))
            .collect::<Result<Vec<_>>>()?;
        symbols.sort_by(f64::total_cmp);
        for (a, b) in sys.eigenvalues().iter().zip(&symbols) {
            eigenvalue_mismatch = eigenvalue_mismatch.max((a - b).abs());
        }
        let u0 = random_torus(2, cutoff as i64, seed)?;
        let c0 = sys.project(&u0)?;
        for t in [0.1, 0.5, 1.0] {
            let g = propagate_galerkin(&sys, &c0, t)?;
            let e = propagate_exact(&op, &u0, t)?;
            let e = sys.project(&e)?;
            for (a, b) in g.iter().zip(&e) {
                exact_mismatch = exact_mismatch.max((a - b).norm());
            }
        }
    }
    let wavy = assemble_galerkin(&wavy_operator()?, cutoff)?;
    // smooth data well inside the cutoff
    let u0 = random_torus(2, (cutoff / 4).max(1) as i64, seed ^ 0x5eed)?;
    let c0 = wavy.project(&u0)?;
    let n0 = wavy.gram_norm(&c0);
    let mut gram_drift: f64 = 0.0;
    let mut tail_fraction: f64 = 0.0;
    for t in [0.1, 0.25, 0.5, 1.0] {
        let ct = propagate_galerkin(&wavy, &c0, t)?;
        gram_drift = gram_drift.max((wavy.gram_norm(&ct) - n0).abs() / n0);
        tail_fraction = tail_fraction.max(wavy.tail_fraction(&ct));
    }
    Ok(GalerkinChecks {
        exact_mismatch,
        eigenvalue_mismatch,
        hermitian_defect: wavy.hermitian_defect(),
        gram_drift,
        tail_fraction,
        identity_rank: degeneracy_check(&OperatorSpec::constant_diagonal(&[1.0, 1.0])?, 256)?.m,
        cosine_rank: degeneracy_check(&cosine_operator()?, 256)?.m,
    })
}

/// Largest `|‖u(t)‖_{H^s}/‖u0‖_{H^s} - 1|` for a signature operator on the
/// split torus over the given regularities and times.
pub fn signature_energy_deviation(signs: &[i8], s_values: &[f64], times: &[f64], seed: u64) -> Result<f64> {
    let u0 = random_torus(signs.len(), 8, seed)?;
    let op = OperatorSpec::signature(u0.manifold().clone(), signs.to_vec())?;
    let mut worst: f64 = 0.0;
    for &s in s_values {
        worst = worst.max(energy_drift(&op, &u0, s, times)?.deviation());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{product_zonal_hs, product_zonal_lq};
    use crate::spectral::make_partition_bump;

    #[test]
    fn partition_identity_holds() {
        let (sum, outside, min, max) = partition_check(&make_partition_bump(), 10_000);
        assert!(sum <= 1e-12);
        assert_eq!(outside, 0.0);
        assert!(min >= 0.0 && max <= 1.0);
    }

    #[test]
    fn lifted_characters_are_stationary() {
        assert_eq!(stationarity_check(256).unwrap(), 0.0);
    }

    #[test]
    fn translations_preserve_polynomial_integrals() {
        assert!(translation_check(100, 1).unwrap() <= 1e-8);
    }

    #[test]
    fn factorization_monte_carlo_small() {
        let f = random_zonal(5, 3).unwrap();
        let g = crate::geometry::zonal_grid_s3(255).unwrap();
        for q in [2.0, 4.0] {
            let exact = product_zonal_lq(&f, &g, q).unwrap().powf(q);
            let mc = product_lq_monte_carlo(&f, q, 100_000, 11).unwrap();
            assert!(mc.z_score(exact) < 4.0, "q={q}: {exact} vs {mc:?}");
        }
    }

    #[test]
    fn finite_difference_lift_matches_h2_formula() {
        let f = random_zonal(4, 5).unwrap();
        let exact = product_zonal_hs(&f, 2.0).unwrap().powi(2);
        let mc = product_h2_monte_carlo(&f, 50_000, 2, 1e-3).unwrap();
        assert!(mc.z_score(exact) < 4.0, "{exact} vs {mc:?}");
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let f = random_zonal(3, 1).unwrap();
        let a = product_lq_monte_carlo(&f, 4.0, 10_000, 5).unwrap();
        let b = product_lq_monte_carlo(&f, 4.0, 10_000, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn galerkin_consistency() {
        let c = galerkin_checks(4, 1).unwrap();
        assert!(c.exact_mismatch <= 1e-10, "{c:?}");
        assert!(c.eigenvalue_mismatch <= 1e-10, "{c:?}");
        assert!(c.hermitian_defect <= 1e-10, "{c:?}");
        assert!(c.gram_drift <= 1e-10, "{c:?}");
        assert_eq!((c.identity_rank, c.cosine_rank), (2, 1));
    }

    #[test]
    fn signature_energy_is_conserved() {
        for signs in [[1i8, 1], [1, -1]] {
            let dev = signature_energy_deviation(&signs, &[0.0, 0.5, 1.0], &[0.1, 0.5, 1.0], 4).unwrap();
            assert!(dev <= 1e-12, "{dev}");
        }
    }
}
