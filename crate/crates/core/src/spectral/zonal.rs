use num_complex::Complex64;

use super::fft::dst1;
use super::field::{FactorMode, ModeId, SpectralField, SphereBasis};
use crate::error::{invalid, Error, Result};
use crate::geometry::{ManifoldSpec, ZonalGrid};
use crate::norms::GridField;
use crate::VOL_S3;

/// Chebyshev polynomial of the second kind by the three-term recurrence.
pub fn cheb_u(k: u32, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let (mut u0, mut u1) = (1.0, 2.0 * x);
    for _ in 1..k {
        let u2 = 2.0 * x * u1 - u0;
        u0 = u1;
        u1 = u2;
    }
    u1
}

/// `e_κ(θ) = U_κ(cos θ)/√(2π²)`.
pub fn zonal_basis_value(degree: u32, theta: f64) -> f64 {
    cheb_u(degree, theta.cos()) / VOL_S3.sqrt()
}

fn zonal_degrees(field: &SpectralField) -> Result<Vec<u32>> {
    if field.manifold() != &ManifoldSpec::s3() {
        return Err(invalid("zonal field must live on a single S3 factor"));
    }
    field
        .modes()
        .iter()
        .map(|m| match m.0.as_slice() {
            [FactorMode::Sphere {
                degree,
                basis: SphereBasis::Zonal,
            }] => Ok(*degree),
            _ => Err(invalid(format!("mode {m:?} is not zonal"))),
        })
        .collect()
}

/// Pointwise evaluation of a zonal field at colatitude `theta` (Clenshaw).
pub fn eval_zonal(field: &SpectralField, theta: f64) -> Result<Complex64> {
    let degrees = zonal_degrees(field)?;
    let kmax = degrees.iter().copied().max().unwrap_or(0) as usize;
    let mut dense = vec![Complex64::new(0.0, 0.0); kmax + 1];
    for (k, c) in degrees.iter().zip(field.coeffs()) {
        dense[*k as usize] += c;
    }
    let x = theta.cos();
    let (mut b1, mut b2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for c in dense.iter().rev() {
        let b0 = c + b1 * (2.0 * x) - b2;
        b2 = b1;
        b1 = b0;
    }
    Ok(b1 / VOL_S3.sqrt())
}

/// Projects samples on a zonal grid onto the characters `e_0, …, e_K`.
///
/// With nodes `θ_i = iπ/(N+1)` the quadrature sums reduce to a type-I sine
/// transform and the discrete basis is exactly orthonormal for `κ < N`.
/// `K` may not exceed `N/4`.
pub fn analyze_zonal_s3(field: &GridField<&ZonalGrid>, k_max: usize) -> Result<SpectralField> {
    let grid = field.grid();
    let n = grid.thetas().len();
    if 4 * k_max > n {
        return Err(Error::Resolution(format!(
            "degree {k_max} needs at least {} zonal nodes, grid has {n}",
            4 * k_max
        )));
    }
    // c_κ = Σ w_i f_i U_κ(cos θ_i)/√V,  w_i U_κ = 4π h sin θ_i sin((κ+1)θ_i)
    let h = grid.spacing();
    let scale = 4.0 * std::f64::consts::PI * h / VOL_S3.sqrt();
    let x: Vec<Complex64> = field
        .values()
        .iter()
        .zip(grid.thetas())
        .map(|(f, t)| f * t.sin())
        .collect();
    let s = dst1(&x);
    let modes = (0..=k_max as u32)
        .map(|k| ModeId(vec![FactorMode::zonal(k)]))
        .collect();
    let coeffs = s[..=k_max].iter().map(|v| v * scale).collect();
    SpectralField::new(ManifoldSpec::s3(), modes, coeffs)
}

/// Values of a zonal field on the nodes of `grid`.
pub fn synthesize_zonal<'g>(field: &SpectralField, grid: &'g ZonalGrid) -> Result<GridField<&'g ZonalGrid>> {
    let degrees = zonal_degrees(field)?;
    let n = grid.thetas().len();
    let mut dense = vec![Complex64::new(0.0, 0.0); n];
    for (k, c) in degrees.iter().zip(field.coeffs()) {
        let k = *k as usize;
        if k >= n {
            return Err(Error::Resolution(format!("degree {k} not representable on {n} nodes")));
        }
        dense[k] += c;
    }
    // f(θ_i) = Σ c_κ sin((κ+1)θ_i) / (sin θ_i √V)
    let s = dst1(&dense);
    let inv = 1.0 / VOL_S3.sqrt();
    let values = s
        .into_iter()
        .zip(grid.thetas())
        .map(|(v, t)| v * (inv / t.sin()))
        .collect();
    GridField::new(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::zonal_grid_s3;
    use crate::norms::lq_norm;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample(grid: &ZonalGrid, f: impl Fn(f64) -> f64) -> GridField<&ZonalGrid> {
        let v = grid.thetas().iter().map(|t| Complex64::new(f(*t), 0.0)).collect();
        GridField::new(grid, v).unwrap()
    }

    #[test]
    fn constant_projects_on_degree_zero() {
        let g = zonal_grid_s3(127).unwrap();
        let f = analyze_zonal_s3(&sample(&g, |_| 1.0 / VOL_S3.sqrt()), 16).unwrap();
        assert!((f.coeffs()[0].re - 1.0).abs() < 1e-12);
        assert!(f.coeffs()[1..].iter().all(|c| c.norm() < 1e-12));
    }

    #[test]
    fn cosine_is_half_of_u1() {
        let g = zonal_grid_s3(127).unwrap();
        let f = analyze_zonal_s3(&sample(&g, f64::cos), 16).unwrap();
        // oracle: direct quadrature against the normalized basis
        let direct = g.integrate(|t| t.cos() * zonal_basis_value(1, t));
        assert!((f.coeffs()[1].re - direct).abs() < 1e-12);
        assert!((f.coeffs()[1].re - VOL_S3.sqrt() / 2.0).abs() < 1e-10);
        for (k, c) in f.coeffs().iter().enumerate() {
            if k != 1 {
                assert!(c.norm() < 1e-10);
            }
        }
    }

    #[test]
    fn parseval_and_round_trip() {
        let g = zonal_grid_s3(255).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let coeffs: Vec<Complex64> = (0..=20)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let modes = (0..=20).map(|k| ModeId(vec![FactorMode::zonal(k)])).collect();
        let f = SpectralField::new(ManifoldSpec::s3(), modes, coeffs).unwrap();
        let gv = synthesize_zonal(&f, &g).unwrap();
        let l2 = lq_norm(&gv, 2.0).unwrap();
        assert!((l2 - f.l2_norm()).abs() < 1e-10);
        let back = analyze_zonal_s3(&gv, 63).unwrap();
        for k in 0..=63 {
            let want = if k <= 20 { f.coeffs()[k] } else { Complex64::new(0.0, 0.0) };
            assert!((back.coeffs()[k] - want).norm() < 1e-12);
        }
        for (i, t) in g.thetas().iter().enumerate().step_by(17) {
            let direct = eval_zonal(&f, *t).unwrap();
            assert!((direct - gv.values()[i]).norm() < 1e-11);
        }
    }

    #[test]
    fn too_many_degrees_rejected() {
        let g = zonal_grid_s3(63).unwrap();
        let err = analyze_zonal_s3(&sample(&g, |_| 1.0), 16).unwrap_err();
        assert_eq!(err.class(), "resolution");
        assert!(analyze_zonal_s3(&sample(&g, |_| 1.0), 15).is_ok());
    }
}
