use std::collections::HashSet;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::geometry::{Factor, ManifoldSpec};

/// How a degree-`κ` eigenfunction on an `S³` factor is selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SphereBasis {
    /// The normalized character `U_κ(cos θ)/√(2π²)`.
    Zonal,
    /// Half of a lifted character `χ_κ(x·y)` on a pair of `S³` factors;
    /// both factors of the pair carry the same degree.
    Lifted,
    /// An element of an orthonormal basis of the `(κ+1)²`-dimensional
    /// eigenspace.
    Index(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FactorMode {
    Torus(Vec<i64>),
    Sphere { degree: u32, basis: SphereBasis },
}

impl FactorMode {
    pub fn zonal(degree: u32) -> Self {
        FactorMode::Sphere {
            degree,
            basis: SphereBasis::Zonal,
        }
    }
}

/// One mode per manifold factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModeId(pub Vec<FactorMode>);

impl ModeId {
    pub fn torus(k: &[i64]) -> Self {
        ModeId(vec![FactorMode::Torus(k.to_vec())])
    }

    /// Splits a flat lattice vector across the factors of a flat torus.
    pub fn split_torus(manifold: &ManifoldSpec, k: &[i64]) -> Result<Self> {
        let mut out = Vec::with_capacity(manifold.factors().len());
        let mut at = 0;
        for f in manifold.factors() {
            match f {
                Factor::Torus { dim, .. } => {
                    let part = k
                        .get(at..at + dim)
                        .ok_or_else(|| invalid("lattice vector shorter than manifold"))?;
                    out.push(FactorMode::Torus(part.to_vec()));
                    at += dim;
                }
                Factor::Sphere3 => return Err(invalid("manifold is not a flat torus")),
            }
        }
        if at != k.len() {
            return Err(invalid("lattice vector longer than manifold"));
        }
        Ok(ModeId(out))
    }

    /// Concatenated lattice vector of an all-torus mode.
    pub fn lattice(&self) -> Option<Vec<i64>> {
        let mut out = Vec::new();
        for m in &self.0 {
            match m {
                FactorMode::Torus(k) => out.extend_from_slice(k),
                FactorMode::Sphere { .. } => return None,
            }
        }
        Some(out)
    }
}

/// Per-factor eigenvalues of `-Δ` for `mode`.
pub fn factor_eigenvalues(manifold: &ManifoldSpec, mode: &ModeId) -> Result<Vec<f64>> {
    let factors = manifold.factors();
    if factors.len() != mode.0.len() {
        return Err(invalid(format!(
            "mode has {} components, manifold has {} factors",
            mode.0.len(),
            factors.len()
        )));
    }
    factors
        .iter()
        .zip(&mode.0)
        .map(|(f, m)| match (f, m) {
            (Factor::Torus { dim, period }, FactorMode::Torus(k)) => {
                if k.len() != *dim {
                    return Err(invalid(format!(
                        "lattice vector of length {} on a {dim}-torus",
                        k.len()
                    )));
                }
                let scale = (2.0 * PI / period).powi(2);
                Ok(scale * k.iter().map(|&v| (v * v) as f64).sum::<f64>())
            }
            (Factor::Sphere3, FactorMode::Sphere { degree, basis }) => {
                if let SphereBasis::Index(i) = basis {
                    let dim = (*degree as u64 + 1).pow(2);
                    if *i as u64 >= dim {
                        return Err(invalid(format!(
                            "index {i} outside the degree-{degree} eigenspace of dimension {dim}"
                        )));
                    }
                }
                let k = *degree as f64;
                Ok(k * (k + 2.0))
            }
            _ => Err(invalid(format!("mode {m:?} does not fit factor {f:?}"))),
        })
        .collect()
}

/// Eigenvalue of `-Δ_{g0}`: the sum of the factor eigenvalues.
pub fn eigenvalue(manifold: &ManifoldSpec, mode: &ModeId) -> Result<f64> {
    Ok(factor_eigenvalues(manifold, mode)?.into_iter().sum())
}

/// Coefficients against an orthonormal eigenbasis of `-Δ_{g0}`.
#[derive(Debug, Clone)]
pub struct SpectralField {
    manifold: ManifoldSpec,
    modes: Vec<ModeId>,
    eigenvalues: Vec<f64>,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(manifold: ManifoldSpec, modes: Vec<ModeId>, coeffs: Vec<Complex64>) -> Result<Self> {
        if modes.len() != coeffs.len() {
            return Err(invalid(format!(
                "{} modes but {} coefficients",
                modes.len(),
                coeffs.len()
            )));
        }
        let mut seen = HashSet::with_capacity(modes.len());
        for m in &modes {
            if !seen.insert(m) {
                return Err(invalid(format!("duplicate mode {m:?}")));
            }
        }
        let eigenvalues = modes
            .iter()
            .map(|m| eigenvalue(&manifold, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            manifold,
            modes,
            eigenvalues,
            coeffs,
        })
    }

    /// Same modes, new coefficients.
    pub fn with_coeffs(&self, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != self.coeffs.len() {
            return Err(invalid("coefficient count changed"));
        }
        Ok(Self {
            manifold: self.manifold.clone(),
            modes: self.modes.clone(),
            eigenvalues: self.eigenvalues.clone(),
            coeffs,
        })
    }

    pub fn manifold(&self) -> &ManifoldSpec {
        &self.manifold
    }

    pub fn modes(&self) -> &[ModeId] {
        &self.modes
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// `L²` norm by Parseval.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(0.0, f64::max)
    }

    /// Applies a real multiplier `m(λ)` coefficient-wise.
    pub fn map_multiplier<F: Fn(f64) -> f64>(&self, m: F) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&self.eigenvalues)
            .map(|(c, &l)| c * m(l))
            .collect();
        Self {
            coeffs,
            ..self.clone()
        }
    }
}

/// `(Σ (1+λ)^s |c|²)^{1/2}`; the canonical `H^s` norm of the crate.
pub fn sobolev_norm(field: &SpectralField, s: f64) -> f64 {
    field
        .coeffs
        .iter()
        .zip(&field.eigenvalues)
        .map(|(c, l)| (1.0 + l).powf(s) * c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn torus_eigenvalue() {
        let t2 = ManifoldSpec::torus(2).unwrap();
        assert_eq!(eigenvalue(&t2, &ModeId::torus(&[3, 4])).unwrap(), 25.0);
        let t = ManifoldSpec::new(vec![Factor::Torus { dim: 1, period: PI }]).unwrap();
        assert!((eigenvalue(&t, &ModeId::torus(&[3])).unwrap() - 36.0).abs() < 1e-12);
    }

    #[test]
    fn product_eigenvalue_is_additive() {
        let m = ManifoldSpec::s3_x_s3();
        for k in 0..10u32 {
            let mode = ModeId(vec![FactorMode::zonal(k), FactorMode::zonal(k)]);
            let kf = k as f64;
            assert_eq!(eigenvalue(&m, &mode).unwrap(), 2.0 * kf * (kf + 2.0));
        }
    }

    /// Finite-difference Laplace–Beltrami on S³ applied to the harmonic
    /// extension of `U_2(x1)`, `H(x) = 4 x1² - |x|²`.
    #[test]
    fn sphere_degree_two_matches_finite_differences() {
        let h = |x: &[f64; 4]| 4.0 * x[0] * x[0] - x.iter().map(|v| v * v).sum::<f64>();
        // zero-homogeneous extension; its flat Laplacian on |x| = 1 is Δ_S3
        let ext = |x: &[f64; 4]| {
            let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            h(&x.map(|v| v / r))
        };
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let eps = 1e-4;
        for _ in 0..20 {
            let p = crate::geometry::UnitQuaternion::random(&mut rng).coords();
            let mut lap = 0.0;
            for i in 0..4 {
                let mut a = p;
                let mut b = p;
                a[i] += eps;
                b[i] -= eps;
                lap += (ext(&a) - 2.0 * ext(&p) + ext(&b)) / (eps * eps);
            }
            let val = h(&p);
            if val.abs() > 0.1 {
                let est = -lap / val;
                assert!((est - 8.0).abs() < 1e-3, "estimate {est}");
            }
        }
        let s3 = ManifoldSpec::s3();
        assert_eq!(eigenvalue(&s3, &ModeId(vec![FactorMode::zonal(2)])).unwrap(), 8.0);
    }

    #[test]
    fn mismatched_modes_rejected() {
        let t2 = ManifoldSpec::torus(2).unwrap();
        assert!(eigenvalue(&t2, &ModeId::torus(&[1])).is_err());
        assert!(eigenvalue(&t2, &ModeId(vec![FactorMode::zonal(1)])).is_err());
        let s3 = ManifoldSpec::s3();
        let bad = ModeId(vec![FactorMode::Sphere {
            degree: 1,
            basis: SphereBasis::Index(4),
        }]);
        assert!(eigenvalue(&s3, &bad).is_err());
        let dup = SpectralField::new(
            t2,
            vec![ModeId::torus(&[1, 0]), ModeId::torus(&[1, 0])],
            vec![Complex64::new(1.0, 0.0); 2],
        );
        assert!(dup.is_err());
    }

    #[test]
    fn sobolev_examples() {
        let t1 = ManifoldSpec::torus(1).unwrap();
        // λ = 3 is not a torus eigenvalue, so use S³ degree 1 (λ = 3)
        let s3 = ManifoldSpec::s3();
        let f = SpectralField::new(s3, vec![ModeId(vec![FactorMode::zonal(1)])], vec![Complex64::new(0.0, 2.0)])
            .unwrap();
        assert!((sobolev_norm(&f, 2.0) - 8.0).abs() < 1e-12);
        let g = SpectralField::new(
            t1,
            vec![ModeId::torus(&[0]), ModeId::torus(&[5])],
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.5, -0.5)],
        )
        .unwrap();
        assert_eq!(sobolev_norm(&g, 0.0), g.l2_norm());
    }

    proptest! {
        #[test]
        fn sobolev_norm_is_monotone_in_s(seed in 0u64..500, s1 in -2.0f64..2.0, ds in 0.0f64..2.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t2 = ManifoldSpec::torus(2).unwrap();
            let modes: Vec<ModeId> = (1..6).map(|k| ModeId::torus(&[k, -k + 1])).collect();
            let coeffs = (0..modes.len())
                .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect();
            let f = SpectralField::new(t2, modes, coeffs).unwrap();
            prop_assert!(sobolev_norm(&f, s1 + ds) >= sobolev_norm(&f, s1) * (1.0 - 1e-14));
        }
    }
}
