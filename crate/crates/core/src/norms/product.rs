use num_complex::Complex64;

use super::grid_field::{lq_norm, GridField};
use crate::error::{invalid, Result};
use crate::geometry::{ManifoldSpec, ZonalGrid};
use crate::spectral::{synthesize_zonal, FactorMode, ModeId, SpectralField, SphereBasis};
use crate::VOL_S3;

fn zonal_pairs(f: &SpectralField) -> Result<Vec<(u32, Complex64)>> {
    if f.manifold() != &ManifoldSpec::s3() {
        return Err(invalid("expected a zonal field on S3"));
    }
    f.modes()
        .iter()
        .zip(f.coeffs())
        .map(|(m, c)| match m.0.as_slice() {
            [FactorMode::Sphere {
                degree,
                basis: SphereBasis::Zonal,
            }] => Ok((*degree, *c)),
            _ => Err(invalid(format!("mode {m:?} is not zonal"))),
        })
        .collect()
}

/// `‖f(x·y)‖_{L^q(S³×S³)} = Vol(S³)^{1/q} ‖f‖_{L^q(S³)}` from samples.
pub fn product_zonal_lq_values(values: &GridField<&ZonalGrid>, q: f64) -> Result<f64> {
    let single = lq_norm(values, q)?;
    Ok(if q.is_infinite() {
        single
    } else {
        VOL_S3.powf(1.0 / q) * single
    })
}

/// `‖f(x·y)‖_{L^q(S³×S³)}` for a zonal field, synthesized on `grid`.
pub fn product_zonal_lq(f: &SpectralField, grid: &ZonalGrid, q: f64) -> Result<f64> {
    product_zonal_lq_values(&synthesize_zonal(f, grid)?, q)
}

/// Exact `‖f(x·y)‖_{H^s(S³×S³)}`: each character lifts to an eigenfunction
/// of `-Δ_x - Δ_y` with eigenvalue `2κ(κ+2)` and `L²` norm `√Vol`.
pub fn product_zonal_hs(f: &SpectralField, s: f64) -> Result<f64> {
    let sum: f64 = zonal_pairs(f)?
        .into_iter()
        .map(|(k, c)| {
            let k = k as f64;
            (1.0 + 2.0 * k * (k + 2.0)).powf(s) * VOL_S3 * c.norm_sqr()
        })
        .sum();
    Ok(sum.sqrt())
}

/// `f(x·y)` as a field on `S³ × S³` in the orthonormal lifted characters
/// `e_κ(x·y)/√Vol`.
pub fn lift_to_product(f: &SpectralField) -> Result<SpectralField> {
    let pairs = zonal_pairs(f)?;
    let lifted = FactorMode::Sphere {
        degree: 0,
        basis: SphereBasis::Lifted,
    };
    let modes = pairs
        .iter()
        .map(|(k, _)| {
            let m = match lifted {
                FactorMode::Sphere { basis, .. } => FactorMode::Sphere { degree: *k, basis },
                FactorMode::Torus(_) => unreachable!(),
            };
            ModeId(vec![m.clone(), m])
        })
        .collect();
    let coeffs = pairs.iter().map(|(_, c)| c * VOL_S3.sqrt()).collect();
    SpectralField::new(ManifoldSpec::s3_x_s3(), modes, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::zonal_grid_s3;
    use crate::norms::lq_norm;
    use crate::spectral::sobolev_norm;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn zonal(coeffs: Vec<Complex64>) -> SpectralField {
        let modes = (0..coeffs.len() as u32).map(|k| ModeId(vec![FactorMode::zonal(k)])).collect();
        SpectralField::new(ManifoldSpec::s3(), modes, coeffs).unwrap()
    }

    #[test]
    fn constant_function() {
        let g = zonal_grid_s3(63).unwrap();
        let one = zonal(vec![Complex64::new(VOL_S3.sqrt(), 0.0)]);
        assert!((product_zonal_lq(&one, &g, 2.0).unwrap() - VOL_S3).abs() < 1e-12);
        assert!((product_zonal_hs(&one, 0.0).unwrap() - VOL_S3).abs() < 1e-12);
    }

    #[test]
    fn single_mode_h1() {
        let f = zonal(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        let want = 7f64.sqrt() * VOL_S3.sqrt();
        assert!((product_zonal_hs(&f, 1.0).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn lift_is_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let f = zonal((0..9).map(|_| Complex64::new(rng.random::<f64>(), rng.random::<f64>())).collect());
        let g = zonal_grid_s3(127).unwrap();
        let lifted = lift_to_product(&f).unwrap();
        for s in [0.0, 0.5, 1.0, 2.0] {
            let a = product_zonal_hs(&f, s).unwrap();
            assert!((sobolev_norm(&lifted, s) - a).abs() < 1e-12 * a);
        }
        let l2 = product_zonal_lq(&f, &g, 2.0).unwrap();
        assert!((l2 - product_zonal_hs(&f, 0.0).unwrap()).abs() < 1e-10 * l2);
        let single = lq_norm(&synthesize_zonal(&f, &g).unwrap(), 2.0).unwrap();
        assert!((l2 * l2 - VOL_S3 * single * single).abs() < 1e-10 * l2 * l2);
    }

    #[test]
    fn interpolation_inequality_constant_is_small() {
        // ‖f(x·y)‖_{H^s} ≤ C ‖f(x·y)‖_{L²}^{1-s/2} ‖f(x·y)‖_{H²}^{s/2}
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let n = rng.random_range(1..30);
            let f = zonal(
                (0..n)
                    .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                    .collect(),
            );
            let l2 = product_zonal_hs(&f, 0.0).unwrap();
            let h2 = product_zonal_hs(&f, 2.0).unwrap();
            for s in [0.5, 1.0, 1.5] {
                let c = product_zonal_hs(&f, s).unwrap() / (l2.powf(1.0 - s / 2.0) * h2.powf(s / 2.0));
                worst = worst.max(c);
            }
        }
        assert!(worst <= 2.0, "measured constant {worst}");
    }
}
