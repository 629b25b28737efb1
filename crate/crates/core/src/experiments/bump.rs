use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::geometry::{zonal_grid_s3, ZonalGrid};
use crate::norms::{lq_norm, product_zonal_hs, product_zonal_lq_values, GridField};
use crate::spectral::{analyze_zonal_s3, SpectralField};

/// Radial bump `ψ(r) = exp(1 - 1/(1 - (r/r₀)²))` on `[0, r₀)`, zero beyond.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpProfile {
    r0: f64,
}

/// Smallest number of zonal nodes per unit of `λ`.
pub const MIN_NODES_PER_LAMBDA: usize = 64;

/// Fewest nodes that must fall inside the support of `φ_λ`.
pub const MIN_SUPPORT_NODES: usize = 8;

impl Default for BumpProfile {
    fn default() -> Self {
        Self { r0: 0.5 }
    }
}

impl BumpProfile {
    pub fn new(r0: f64) -> Result<Self> {
        if !(r0 > 0.0 && r0 < 1.0) {
            return Err(invalid(format!("bump radius {r0} must lie in (0, 1)")));
        }
        Ok(Self { r0 })
    }

    pub fn radius(&self) -> f64 {
        self.r0
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.with_derivatives(r)[0]
    }

    /// `[ψ, ψ', ψ'']` at `r ≥ 0`.
    pub fn with_derivatives(&self, r: f64) -> [f64; 3] {
        let u = (r / self.r0).powi(2);
        if u >= 1.0 {
            return [0.0; 3];
        }
        let v = 1.0 - u;
        let psi = (1.0 - 1.0 / v).exp();
        // ψ as a function of u: ψ_u = ψ g, ψ_uu = ψ (g² + g')
        let g = -1.0 / (v * v);
        let dg = -2.0 / (v * v * v);
        let du = 2.0 * r / (self.r0 * self.r0);
        let ddu = 2.0 / (self.r0 * self.r0);
        let psi_u = psi * g;
        let psi_uu = psi * (g * g + dg);
        [psi, psi_u * du, psi_uu * du * du + psi_u * ddu]
    }
}

/// Zonal grid with about `nodes_per_lambda·λ` nodes; `N + 1` is a power of
/// two so the sine transforms use radix-2 FFTs.
pub fn zonal_grid_for(lambda: f64, nodes_per_lambda: usize) -> Result<ZonalGrid> {
    if nodes_per_lambda < MIN_NODES_PER_LAMBDA {
        return Err(invalid(format!(
            "{nodes_per_lambda} nodes per unit of lambda is below the minimum {MIN_NODES_PER_LAMBDA}"
        )));
    }
    if !(lambda >= 1.0 && lambda.is_finite()) {
        return Err(invalid(format!("lambda = {lambda} must be >= 1")));
    }
    let want = (nodes_per_lambda as f64 * lambda).ceil() as usize;
    let n = (want + 1).next_power_of_two() - 1;
    if n > 1 << 26 {
        return Err(invalid(format!("lambda = {lambda} needs an unreasonably large grid")));
    }
    zonal_grid_s3(n)
}

/// `φ_λ(θ) = ψ(λ sin θ)` for `θ < π/2` and zero otherwise.
pub fn bump_family<'g>(lambda: f64, profile: &BumpProfile, grid: &'g ZonalGrid) -> Result<GridField<&'g ZonalGrid>> {
    if !(lambda >= 1.0 && lambda.is_finite()) {
        return Err(invalid(format!("lambda = {lambda} must be >= 1")));
    }
    let inside = grid
        .thetas()
        .iter()
        .take_while(|t| t.sin() * lambda < profile.radius() && **t < std::f64::consts::FRAC_PI_2)
        .count();
    if inside < MIN_SUPPORT_NODES {
        return Err(Error::Resolution(format!(
            "only {inside} nodes inside the support at lambda = {lambda}; need {MIN_SUPPORT_NODES}"
        )));
    }
    let values = grid
        .thetas()
        .iter()
        .map(|&t| {
            let v = if t < std::f64::consts::FRAC_PI_2 {
                profile.eval(lambda * t.sin())
            } else {
                0.0
            };
            Complex64::new(v, 0.0)
        })
        .collect();
    GridField::new(grid, values)
}

/// `‖φ_λ‖_{H²(S³)} = ‖(1 - Δ)φ_λ‖_{L²}` from the analytic zonal Laplacian
/// `f'' + 2 cot θ f'`, without a spectral transform.
pub fn bump_h2_direct(lambda: f64, profile: &BumpProfile, grid: &ZonalGrid) -> f64 {
    grid.integrate(|t| {
        if t >= std::f64::consts::FRAC_PI_2 {
            return 0.0;
        }
        let (s, c) = t.sin_cos();
        let [p, dp, ddp] = profile.with_derivatives(lambda * s);
        let f1 = dp * lambda * c;
        let f2 = ddp * lambda * lambda * c * c - dp * lambda * s;
        let lap = f2 + 2.0 * c / s * f1;
        (p - lap).powi(2)
    })
    .sqrt()
}

/// The stationary datum `u0(x, y) = φ_λ(x·y)` on `S³ × S³`, held through
/// the zonal profile.
#[derive(Debug, Clone)]
pub struct StationaryDatum<'g> {
    pub lambda: f64,
    pub samples: GridField<&'g ZonalGrid>,
    /// Character coefficients `c_κ` of `φ_λ`, `κ ≤ N/4`.
    pub zonal: SpectralField,
}

impl StationaryDatum<'_> {
    /// `‖u0‖_{L^q(S³×S³)}`.
    pub fn lq(&self, q: f64) -> Result<f64> {
        product_zonal_lq_values(&self.samples, q)
    }

    /// `‖u0‖_{H^s(S³×S³)}`.
    pub fn hs(&self, s: f64) -> Result<f64> {
        product_zonal_hs(&self.zonal, s)
    }

    /// `‖φ_λ‖_{L^q(S³)}`.
    pub fn profile_lq(&self, q: f64) -> Result<f64> {
        lq_norm(&self.samples, q)
    }
}

pub fn stationary_family<'g>(lambda: f64, profile: &BumpProfile, grid: &'g ZonalGrid) -> Result<StationaryDatum<'g>> {
    let samples = bump_family(lambda, profile, grid)?;
    let zonal = analyze_zonal_s3(&samples, grid.thetas().len() / 4)?;
    Ok(StationaryDatum { lambda, samples, zonal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{haar_grid_s3, left_translate, UnitQuaternion};
    use crate::operators::{symbol_eigenvalue, OperatorSpec};
    use crate::spectral::sobolev_norm;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn profile_values() {
        let p = BumpProfile::default();
        assert_eq!(p.eval(0.0), 1.0);
        assert_eq!(p.eval(0.5), 0.0);
        assert_eq!(p.eval(0.7), 0.0);
        assert!(p.eval(0.25) > 0.0 && p.eval(0.25) < 1.0);
        assert!(BumpProfile::new(1.0).is_err());
    }

    #[test]
    fn derivatives_match_central_differences() {
        let p = BumpProfile::default();
        let h = 1e-5;
        for r in [0.05, 0.2, 0.37, 0.45] {
            let [_, d1, d2] = p.with_derivatives(r);
            let fd1 = (p.eval(r + h) - p.eval(r - h)) / (2.0 * h);
            let fd2 = (p.eval(r + h) - 2.0 * p.eval(r) + p.eval(r - h)) / (h * h);
            assert!((d1 - fd1).abs() < 1e-6 * (1.0 + d1.abs()), "r={r}");
            assert!((d2 - fd2).abs() < 1e-3 * (1.0 + d2.abs()), "r={r}");
        }
    }

    /// Backward differences of orders 1 to 4 at the edge of the support.
    #[test]
    fn flat_contact_at_radius() {
        let p = BumpProfile::default();
        let h = 1e-3;
        let r0 = p.radius();
        let f = |i: i32| p.eval(r0 - i as f64 * h);
        let binom = [[1.0, -1.0, 0.0, 0.0, 0.0], [1.0, -2.0, 1.0, 0.0, 0.0], [1.0, -3.0, 3.0, -1.0, 0.0], [1.0, -4.0, 6.0, -4.0, 1.0]];
        for (order, row) in binom.iter().enumerate() {
            let d: f64 = row.iter().enumerate().map(|(i, c)| c * f(i as i32)).sum::<f64>() / h.powi(order as i32 + 1);
            assert!(d.abs() < 1e-6, "order {}: {d}", order + 1);
        }
    }

    #[test]
    fn family_examples() {
        let p = BumpProfile::default();
        for lambda in [8.0, 32.0] {
            let g = zonal_grid_for(lambda, 64).unwrap();
            let f = bump_family(lambda, &p, &g).unwrap();
            // first node: ψ at r = λ sin θ₁, written out
            let u = (lambda * g.thetas()[0].sin() / p.radius()).powi(2);
            assert!((f.values()[0].re - (1.0 - 1.0 / (1.0 - u)).exp()).abs() < 1e-14);
            assert!(f.values()[0].re > 0.98);
            for (t, v) in g.thetas().iter().zip(f.values()) {
                if t.sin() > p.radius() / lambda {
                    assert_eq!(v.re, 0.0);
                }
            }
        }
    }

    #[test]
    fn under_resolved_support_refused() {
        let g = zonal_grid_s3(63).unwrap();
        assert!(matches!(bump_family(64.0, &BumpProfile::default(), &g), Err(Error::Resolution(_))));
        assert!(zonal_grid_for(8.0, 32).is_err());
    }

    #[test]
    fn spectral_and_direct_norms_agree() {
        let p = BumpProfile::default();
        let g = zonal_grid_for(16.0, 1024).unwrap();
        let d = stationary_family(16.0, &p, &g).unwrap();
        let l2 = lq_norm(&d.samples, 2.0).unwrap();
        assert!((d.zonal.l2_norm() - l2).abs() < 1e-10 * l2);
        let direct = bump_h2_direct(16.0, &p, &g);
        let spectral = sobolev_norm(&d.zonal, 2.0);
        assert!((direct - spectral).abs() < 1e-6 * direct, "{direct} vs {spectral}");
    }

    #[test]
    fn l2_scaling_by_change_of_variables() {
        // ‖φ_λ‖²_{L²} → 4π λ^{-3} ∫ ψ(r)² r² dr as λ → ∞
        let p = BumpProfile::default();
        let radial: f64 = {
            let n = 100_000;
            let h = p.radius() / n as f64;
            (0..n).map(|i| {
                let r = (i as f64 + 0.5) * h;
                p.eval(r).powi(2) * r * r * h
            }).sum()
        };
        for lambda in [64.0, 256.0] {
            let g = zonal_grid_for(lambda, 256).unwrap();
            let l2 = lq_norm(&bump_family(lambda, &p, &g).unwrap(), 2.0).unwrap();
            let want = (4.0 * std::f64::consts::PI * radial).sqrt() * lambda.powf(-1.5);
            assert!((l2 / want - 1.0).abs() < 1e-3, "lambda={lambda}: {l2} vs {want}");
        }
    }

    #[test]
    fn stationary_modes_have_zero_symbol() {
        let g = zonal_grid_for(8.0, 64).unwrap();
        let d = stationary_family(8.0, &BumpProfile::default(), &g).unwrap();
        let lifted = crate::norms::lift_to_product(&d.zonal).unwrap();
        let op = OperatorSpec::signature(lifted.manifold().clone(), vec![1, -1]).unwrap();
        for m in lifted.modes() {
            assert_eq!(symbol_eigenvalue(&op, m).unwrap(), 0.0);
        }
    }

    #[test]
    fn translated_bump_integral_is_invariant() {
        // ∫ φ_λ(a·y) dμ(y) = ∫ φ_λ dμ; φ_λ evaluated pointwise from x₁ = cos θ
        let p = BumpProfile::default();
        let lambda = 1.0;
        let f = |q: &UnitQuaternion| {
            let t = q.colatitude();
            if t < std::f64::consts::FRAC_PI_2 { p.eval(lambda * t.sin()) } else { 0.0 }
        };
        let grid = haar_grid_s3(60).unwrap();
        let base = grid.integrate(f);
        let zonal = zonal_grid_for(lambda, 4096).unwrap();
        let exact = zonal.integrate(|t| if t < std::f64::consts::FRAC_PI_2 { p.eval(lambda * t.sin()) } else { 0.0 });
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let a = UnitQuaternion::random(&mut rng);
            let moved = left_translate(&a, &grid).integrate(f);
            assert!((moved - exact).abs() < 1e-2 * exact, "{moved} vs {exact}");
        }
        assert!((base - exact).abs() < 1e-2 * exact);
    }
}
