use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// One factor of a product manifold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Factor {
    /// Flat torus `(R / period Z)^dim`.
    Torus { dim: usize, period: f64 },
    /// Round unit three-sphere.
    Sphere3,
}

impl Factor {
    pub fn torus(dim: usize) -> Self {
        Factor::Torus {
            dim,
            period: 2.0 * std::f64::consts::PI,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Factor::Torus { dim, .. } => *dim,
            Factor::Sphere3 => 3,
        }
    }
}

/// Ordered product of factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifoldSpec {
    factors: Vec<Factor>,
}

impl ManifoldSpec {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(invalid("a manifold needs at least one factor"));
        }
        for f in &factors {
            if let Factor::Torus { dim, period } = f {
                if *dim == 0 {
                    return Err(invalid("torus factor of dimension 0"));
                }
                if !(period.is_finite() && *period > 0.0) {
                    return Err(invalid(format!("torus period {period} must be positive")));
                }
            }
        }
        Ok(Self { factors })
    }

    /// `T^d` as a single factor with period `2π`.
    pub fn torus(d: usize) -> Result<Self> {
        Self::new(vec![Factor::torus(d)])
    }

    /// `T¹ × … × T¹` (`d` factors); needed for sign patterns per axis.
    pub fn split_torus(d: usize) -> Result<Self> {
        Self::new(vec![Factor::torus(1); d])
    }

    pub fn s3() -> Self {
        Self {
            factors: vec![Factor::Sphere3],
        }
    }

    pub fn s3_x_s3() -> Self {
        Self {
            factors: vec![Factor::Sphere3, Factor::Sphere3],
        }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(Factor::dim).sum()
    }

    pub fn is_flat_torus(&self) -> bool {
        self.factors.iter().all(|f| matches!(f, Factor::Torus { .. }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_add() {
        let m = ManifoldSpec::new(vec![Factor::torus(2), Factor::Sphere3]).unwrap();
        assert_eq!(m.dim(), 5);
        assert!(!m.is_flat_torus());
        assert_eq!(ManifoldSpec::s3_x_s3().dim(), 6);
        assert!(ManifoldSpec::split_torus(2).unwrap().is_flat_torus());
    }

    #[test]
    fn empty_and_degenerate_rejected() {
        assert!(ManifoldSpec::new(vec![]).is_err());
        assert!(ManifoldSpec::torus(0).is_err());
        assert!(ManifoldSpec::new(vec![Factor::Torus { dim: 1, period: -1.0 }]).is_err());
    }
}
