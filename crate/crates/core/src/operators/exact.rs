use num_complex::Complex64;

use super::galerkin::GalerkinSystem;
use super::spec::OperatorSpec;
use crate::error::{invalid, Result};
use crate::spectral::{FactorMode, ModeId, SpectralField};

/// Eigenvalue `μ = Σ_i sign_i λ_i` of a signature operator on `mode`. May be
/// negative when the signature is mixed.
pub fn symbol_eigenvalue(op: &OperatorSpec, mode: &ModeId) -> Result<f64> {
    match op {
        OperatorSpec::Signature { manifold, signs } => {
            let parts = crate::spectral::factor_eigenvalues(manifold, mode)?;
            Ok(parts.iter().zip(signs).map(|(l, s)| *s as f64 * l).sum())
        }
        OperatorSpec::VariableTorus { .. } => Err(invalid("symbol eigenvalues exist only for signature operators")),
    }
}

fn check_manifold(op: &OperatorSpec, field: &SpectralField) -> Result<()> {
    match op {
        OperatorSpec::Signature { manifold, .. } if manifold == field.manifold() => Ok(()),
        OperatorSpec::Signature { .. } => Err(invalid("field lives on a different manifold than the operator")),
        OperatorSpec::VariableTorus { .. } => Err(invalid("exact propagation needs a signature operator")),
    }
}

/// `e^{-itP}` applied coefficient-wise.
pub fn propagate_exact(op: &OperatorSpec, field: &SpectralField, t: f64) -> Result<SpectralField> {
    ExactEvolution::new(op, field)?.field_at(t)
}

/// A solution `u(t)` that can be sampled at arbitrary times.
pub trait Evolution: Sync {
    /// Modes and manifold of `u(t)`; its coefficients are those of `u(0)`.
    fn template(&self) -> &SpectralField;

    fn coeffs_at(&self, t: f64) -> Vec<Complex64>;

    /// `‖u‖_{H^s}` of a coefficient vector over the template modes.
    fn hs_norm(&self, coeffs: &[Complex64], s: f64) -> f64 {
        self.template()
            .eigenvalues()
            .iter()
            .zip(coeffs)
            .map(|(l, c)| (1.0 + l).powf(s) * c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    fn field_at(&self, t: f64) -> Result<SpectralField> {
        self.template().with_coeffs(self.coeffs_at(t))
    }
}

/// Anything that generates a flow `u0 ↦ u(t)`.
pub trait Propagator: Sync {
    fn evolution<'a>(&'a self, u0: &SpectralField) -> Result<Box<dyn Evolution + 'a>>;
}

/// Diagonal flow with precomputed eigenvalues.
#[derive(Debug, Clone)]
pub struct ExactEvolution {
    field: SpectralField,
    mu: Vec<f64>,
}

impl ExactEvolution {
    pub fn new(op: &OperatorSpec, field: &SpectralField) -> Result<Self> {
        check_manifold(op, field)?;
        check_lifted_pairs(field)?;
        let mu = field
            .modes()
            .iter()
            .map(|m| symbol_eigenvalue(op, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            field: field.clone(),
            mu,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.mu
    }
}

/// A lifted character spans two consecutive sphere factors of equal degree.
fn check_lifted_pairs(field: &SpectralField) -> Result<()> {
    use crate::spectral::SphereBasis::Lifted;
    for m in field.modes() {
        let mut i = 0;
        while i < m.0.len() {
            if let FactorMode::Sphere { degree, basis: Lifted } = &m.0[i] {
                match m.0.get(i + 1) {
                    Some(FactorMode::Sphere { degree: d2, basis: Lifted }) if d2 == degree => i += 2,
                    _ => return Err(invalid(format!("unpaired lifted character in {m:?}"))),
                }
            } else {
                i += 1;
            }
        }
    }
    Ok(())
}

impl Evolution for ExactEvolution {
    fn template(&self) -> &SpectralField {
        &self.field
    }

    fn coeffs_at(&self, t: f64) -> Vec<Complex64> {
        self.field
            .coeffs()
            .iter()
            .zip(&self.mu)
            .map(|(c, mu)| c * Complex64::from_polar(1.0, -t * mu))
            .collect()
    }
}

impl Propagator for OperatorSpec {
    fn evolution<'a>(&'a self, u0: &SpectralField) -> Result<Box<dyn Evolution + 'a>> {
        match self {
            OperatorSpec::Signature { .. } => Ok(Box::new(ExactEvolution::new(self, u0)?)),
            OperatorSpec::VariableTorus { .. } => Err(invalid(
                "variable-coefficient operators propagate through an assembled Galerkin system",
            )),
        }
    }
}

impl Propagator for GalerkinSystem {
    fn evolution<'a>(&'a self, u0: &SpectralField) -> Result<Box<dyn Evolution + 'a>> {
        Ok(Box::new(self.evolution_of(u0)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ManifoldSpec;
    use crate::spectral::SphereBasis;
    use proptest::prelude::*;

    fn torus_op(signs: Vec<i8>) -> OperatorSpec {
        OperatorSpec::signature(ManifoldSpec::split_torus(2).unwrap(), signs).unwrap()
    }

    fn lattice_field(coeffs: &[(i64, i64, f64, f64)]) -> SpectralField {
        let m = ManifoldSpec::split_torus(2).unwrap();
        let modes = coeffs.iter().map(|(a, b, _, _)| ModeId::split_torus(&m, &[*a, *b]).unwrap()).collect();
        let c = coeffs.iter().map(|(_, _, re, im)| Complex64::new(*re, *im)).collect();
        SpectralField::new(m, modes, c).unwrap()
    }

    #[test]
    fn symbol_examples() {
        let m = ManifoldSpec::split_torus(2).unwrap();
        let k = ModeId::split_torus(&m, &[3, 4]).unwrap();
        assert_eq!(symbol_eigenvalue(&torus_op(vec![1, 1]), &k).unwrap(), 25.0);
        assert_eq!(symbol_eigenvalue(&torus_op(vec![1, -1]), &k).unwrap(), -7.0);
        let op = OperatorSpec::signature(ManifoldSpec::s3_x_s3(), vec![1, -1]).unwrap();
        for kappa in 0..50 {
            let half = FactorMode::Sphere {
                degree: kappa,
                basis: SphereBasis::Lifted,
            };
            let mode = ModeId(vec![half.clone(), half]);
            assert_eq!(symbol_eigenvalue(&op, &mode).unwrap(), 0.0);
        }
    }

    #[test]
    fn mismatched_manifold_rejected() {
        let f = SpectralField::new(ManifoldSpec::s3(), vec![ModeId(vec![FactorMode::zonal(1)])], vec![Complex64::new(1.0, 0.0)]).unwrap();
        assert!(propagate_exact(&torus_op(vec![1, 1]), &f, 0.1).is_err());
    }

    #[test]
    fn unpaired_lifted_mode_rejected() {
        let op = OperatorSpec::signature(ManifoldSpec::s3_x_s3(), vec![1, -1]).unwrap();
        let a = FactorMode::Sphere { degree: 2, basis: SphereBasis::Lifted };
        let b = FactorMode::Sphere { degree: 3, basis: SphereBasis::Lifted };
        let f = SpectralField::new(ManifoldSpec::s3_x_s3(), vec![ModeId(vec![a, b])], vec![Complex64::new(1.0, 0.0)]).unwrap();
        assert!(propagate_exact(&op, &f, 0.1).is_err());
    }

    #[test]
    fn kernel_modes_are_stationary() {
        let f = lattice_field(&[(2, 2, 1.0, 0.5), (-3, 3, 0.2, -1.0)]);
        let op = torus_op(vec![1, -1]);
        for t in [0.1, 1.0, 17.3] {
            let g = propagate_exact(&op, &f, t).unwrap();
            assert_eq!(g.coeffs(), f.coeffs());
        }
    }

    fn arb_field() -> impl Strategy<Value = SpectralField> {
        proptest::collection::vec((-0.5..0.5f64, -0.5..0.5f64), 25).prop_map(|c| {
            let entries: Vec<(i64, i64, f64, f64)> = (0..25)
                .map(|i| ((i / 5) as i64 - 2, (i % 5) as i64 - 2, c[i].0, c[i].1))
                .collect();
            lattice_field(&entries)
        })
    }

    proptest! {
        #[test]
        fn group_property(f in arb_field(), t1 in -2.0..2.0f64, t2 in -2.0..2.0f64, elliptic in any::<bool>()) {
            let op = torus_op(if elliptic { vec![1, 1] } else { vec![1, -1] });
            let a = propagate_exact(&op, &propagate_exact(&op, &f, t1).unwrap(), t2).unwrap();
            let b = propagate_exact(&op, &f, t1 + t2).unwrap();
            for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
                prop_assert!((x - y).norm() <= 1e-12);
            }
            let back = propagate_exact(&op, &propagate_exact(&op, &f, t1).unwrap(), -t1).unwrap();
            for (x, y) in back.coeffs().iter().zip(f.coeffs()) {
                prop_assert!((x - y).norm() <= 1e-12);
            }
            let n0 = f.l2_norm();
            prop_assert!((propagate_exact(&op, &f, t1).unwrap().l2_norm() - n0).abs() <= 1e-13 * n0.max(1.0));
        }
    }
}
