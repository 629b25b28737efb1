use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{Factor, ManifoldSpec};

/// One term `c·e^{ik·x}` of a trigonometric polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigTerm {
    pub k: Vec<i64>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// Real-valued trigonometric polynomial on `T^d`, stored as a
/// conjugate-symmetric coefficient table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigPoly {
    pub dim: usize,
    pub terms: Vec<TrigTerm>,
}

impl TrigPoly {
    pub fn constant(dim: usize, c: f64) -> Self {
        Self {
            dim,
            terms: vec![TrigTerm {
                k: vec![0; dim],
                re: c,
                im: 0.0,
            }],
        }
    }

    /// `amp·cos(k·x)`.
    pub fn cosine(k: &[i64], amp: f64) -> Self {
        let neg: Vec<i64> = k.iter().map(|v| -v).collect();
        Self {
            dim: k.len(),
            terms: vec![
                TrigTerm {
                    k: k.to_vec(),
                    re: amp / 2.0,
                    im: 0.0,
                },
                TrigTerm {
                    k: neg,
                    re: amp / 2.0,
                    im: 0.0,
                },
            ],
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: Vec::new() }
    }

    pub fn plus(mut self, other: TrigPoly) -> Self {
        self.terms.extend(other.terms);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(invalid("trigonometric polynomial on a 0-torus"));
        }
        for t in &self.terms {
            if t.k.len() != self.dim {
                return Err(invalid(format!("frequency {:?} in a {}-variable polynomial", t.k, self.dim)));
            }
            if !(t.re.is_finite() && t.im.is_finite()) {
                return Err(invalid("non-finite trigonometric coefficient"));
            }
        }
        for t in &self.terms {
            let neg: Vec<i64> = t.k.iter().map(|v| -v).collect();
            let c = self.coefficient(&t.k);
            let cn = self.coefficient(&neg);
            if (c - cn.conj()).norm() > 1e-14 * (1.0 + c.norm()) {
                return Err(invalid(format!(
                    "coefficients at {:?} and its negative are not conjugate: the polynomial is not real",
                    t.k
                )));
            }
        }
        Ok(())
    }

    /// Total coefficient at frequency `k` (repeated terms are summed).
    pub fn coefficient(&self, k: &[i64]) -> Complex64 {
        self.terms
            .iter()
            .filter(|t| t.k == k)
            .map(|t| Complex64::new(t.re, t.im))
            .sum()
    }

    /// Largest `|k|_∞` among the terms.
    pub fn bandwidth(&self) -> i64 {
        self.terms
            .iter()
            .flat_map(|t| t.k.iter().map(|v| v.abs()))
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let phase: f64 = t.k.iter().zip(x).map(|(k, x)| *k as f64 * x).sum();
                t.re * phase.cos() - t.im * phase.sin()
            })
            .sum()
    }
}

/// Description of the generator `P`.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorSpec {
    /// `P = -Σ_i sign_i Δ_i` over the factors of a product manifold.
    Signature { manifold: ManifoldSpec, signs: Vec<i8> },
    /// `P = -ρ^{-1} ∂_j a^{jk} ρ ∂_k` on `(R/2πZ)^d`.
    VariableTorus {
        d: usize,
        rho: TrigPoly,
        a: Vec<Vec<TrigPoly>>,
    },
}

/// Points per axis of the grid on which `ρ > 0` is checked.
const POSITIVITY_SAMPLES: usize = 64;

impl OperatorSpec {
    pub fn signature(manifold: ManifoldSpec, signs: Vec<i8>) -> Result<Self> {
        if signs.len() != manifold.factors().len() {
            return Err(invalid(format!(
                "{} signs for {} factors",
                signs.len(),
                manifold.factors().len()
            )));
        }
        if signs.iter().any(|s| s.abs() != 1) {
            return Err(invalid(format!("signs must be +1 or -1, got {signs:?}")));
        }
        Ok(OperatorSpec::Signature { manifold, signs })
    }

    pub fn variable_torus(d: usize, rho: TrigPoly, a: Vec<Vec<TrigPoly>>) -> Result<Self> {
        if d == 0 {
            return Err(invalid("variable-coefficient operator on a 0-torus"));
        }
        if a.len() != d || a.iter().any(|row| row.len() != d) {
            return Err(invalid(format!("coefficient matrix must be {d}x{d}")));
        }
        rho.validate()?;
        if rho.dim != d {
            return Err(invalid("density has the wrong number of variables"));
        }
        for (j, row) in a.iter().enumerate() {
            for (k, e) in row.iter().enumerate() {
                e.validate()?;
                if e.dim != d {
                    return Err(invalid(format!("a[{j}][{k}] has the wrong number of variables")));
                }
                if !same_poly(e, &a[k][j]) {
                    return Err(invalid(format!("coefficient matrix is not symmetric at ({j}, {k})")));
                }
            }
        }
        let n = POSITIVITY_SAMPLES.max(4 * rho.bandwidth() as usize + 4);
        let total = n.checked_pow(d as u32).filter(|t| *t <= 1 << 22).unwrap_or(1 << 22);
        let h = 2.0 * std::f64::consts::PI / n as f64;
        for i in 0..total {
            let mut rest = i;
            let mut x = vec![0.0; d];
            for xj in x.iter_mut().rev() {
                *xj = (rest % n) as f64 * h;
                rest /= n;
            }
            let r = rho.eval(&x);
            if !(r > 0.0) {
                return Err(Error::HypothesisViolation(format!("density rho = {r:e} <= 0 at {x:?}")));
            }
        }
        Ok(OperatorSpec::VariableTorus { d, rho, a })
    }

    /// `ρ = 1`, `a = diag(entries)`.
    pub fn constant_diagonal(entries: &[f64]) -> Result<Self> {
        let d = entries.len();
        let a = (0..d)
            .map(|j| {
                (0..d)
                    .map(|k| if j == k { TrigPoly::constant(d, entries[j]) } else { TrigPoly::zero(d) })
                    .collect()
            })
            .collect();
        Self::variable_torus(d, TrigPoly::constant(d, 1.0), a)
    }

    /// The same operator written with variable coefficients; only for
    /// signature operators on `2π`-periodic flat tori.
    pub fn to_variable_torus(&self) -> Result<Self> {
        match self {
            OperatorSpec::VariableTorus { .. } => Ok(self.clone()),
            OperatorSpec::Signature { manifold, signs } => {
                let mut diag = Vec::new();
                for (f, s) in manifold.factors().iter().zip(signs) {
                    match f {
                        Factor::Torus { dim, period } if (period - 2.0 * std::f64::consts::PI).abs() < 1e-15 => {
                            diag.extend(std::iter::repeat_n(*s as f64, *dim))
                        }
                        _ => return Err(invalid("only 2π-periodic torus factors have a variable-coefficient form")),
                    }
                }
                Self::constant_diagonal(&diag)
            }
        }
    }

    /// Total dimension `n` of the underlying manifold.
    pub fn dim(&self) -> usize {
        match self {
            OperatorSpec::Signature { manifold, .. } => manifold.dim(),
            OperatorSpec::VariableTorus { d, .. } => *d,
        }
    }

    /// Coefficient matrix `a^{jk}(x)` in coordinates. For signature operators
    /// this is the constant block-diagonal sign pattern.
    pub fn coefficient_matrix(&self, x: &[f64]) -> Vec<Vec<f64>> {
        match self {
            OperatorSpec::Signature { manifold, signs } => {
                let n = manifold.dim();
                let mut m = vec![vec![0.0; n]; n];
                let mut at = 0;
                for (f, s) in manifold.factors().iter().zip(signs) {
                    for _ in 0..f.dim() {
                        m[at][at] = *s as f64;
                        at += 1;
                    }
                }
                m
            }
            OperatorSpec::VariableTorus { a, .. } => {
                a.iter().map(|row| row.iter().map(|e| e.eval(x)).collect()).collect()
            }
        }
    }
}

fn same_poly(a: &TrigPoly, b: &TrigPoly) -> bool {
    a.terms
        .iter()
        .chain(&b.terms)
        .all(|t| (a.coefficient(&t.k) - b.coefficient(&t.k)).norm() <= 1e-14)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_evaluates() {
        let p = TrigPoly::cosine(&[1, 0], 3.0);
        assert!((p.eval(&[0.3, 1.0]) - 3.0 * 0.3f64.cos()).abs() < 1e-15);
        assert_eq!(p.bandwidth(), 1);
        p.validate().unwrap();
    }

    #[test]
    fn non_real_polynomial_rejected() {
        let p = TrigPoly {
            dim: 1,
            terms: vec![TrigTerm { k: vec![1], re: 1.0, im: 0.0 }],
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn signature_sign_count_checked() {
        let m = ManifoldSpec::split_torus(2).unwrap();
        assert!(OperatorSpec::signature(m.clone(), vec![1]).is_err());
        assert!(OperatorSpec::signature(m.clone(), vec![1, 2]).is_err());
        assert!(OperatorSpec::signature(m, vec![1, -1]).is_ok());
    }

    #[test]
    fn nonpositive_density_is_a_hypothesis_violation() {
        let rho = TrigPoly::constant(1, 0.5).plus(TrigPoly::cosine(&[1], 1.0));
        let a = vec![vec![TrigPoly::constant(1, 1.0)]];
        match OperatorSpec::variable_torus(1, rho, a) {
            Err(Error::HypothesisViolation(_)) => {}
            other => panic!("expected hypothesis violation, got {other:?}"),
        }
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        let a = vec![
            vec![TrigPoly::constant(2, 1.0), TrigPoly::cosine(&[1, 0], 0.1)],
            vec![TrigPoly::zero(2), TrigPoly::constant(2, 1.0)],
        ];
        assert!(OperatorSpec::variable_torus(2, TrigPoly::constant(2, 1.0), a).is_err());
    }

    #[test]
    fn signature_matrix_pattern() {
        let op = OperatorSpec::signature(ManifoldSpec::s3_x_s3(), vec![1, -1]).unwrap();
        let m = op.coefficient_matrix(&[]);
        let diag: Vec<f64> = (0..6).map(|i| m[i][i]).collect();
        assert_eq!(diag, vec![1.0, 1.0, 1.0, -1.0, -1.0, -1.0]);
    }
}
