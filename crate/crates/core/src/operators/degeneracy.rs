use nalgebra::DMatrix;

use super::spec::OperatorSpec;
use crate::error::{invalid, Result};
use crate::par;

/// Determinant floor `c₀` for the rank test.
pub const DET_THRESHOLD: f64 = 1e-6;

/// Largest principal pattern of `a^{jk}` that stays uniformly invertible.
#[derive(Debug, Clone, PartialEq)]
pub struct DegeneracyReport {
    /// Uniform rank; 0 when no single entry stays invertible everywhere.
    pub m: usize,
    /// Coordinate indices of the selected principal submatrix.
    pub pattern: Vec<usize>,
    /// `min_x |det b(x)|` over the samples for the selected pattern.
    pub min_det: f64,
    /// Points per axis.
    pub samples: usize,
    /// Smallest and largest pointwise rank seen; they differ when the rank
    /// is not uniform over the manifold.
    pub pointwise_rank: (usize, usize),
}

fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, m, &mut Vec::with_capacity(m), &mut out);
    out
}

fn minor(a: &[Vec<f64>], s: &[usize]) -> f64 {
    DMatrix::from_fn(s.len(), s.len(), |i, j| a[s[i]][s[j]]).determinant().abs()
}

/// Samples `a^{jk}` on a tensor grid of `samples^d` points and searches the
/// principal submatrices from the full matrix downward.
pub fn degeneracy_check(op: &OperatorSpec, samples: usize) -> Result<DegeneracyReport> {
    if samples == 0 {
        return Err(invalid("degeneracy check needs at least one sample"));
    }
    let n = op.dim();
    let points: Vec<Vec<f64>> = match op {
        // constant pattern: one evaluation suffices
        OperatorSpec::Signature { .. } => vec![vec![0.0; n]],
        OperatorSpec::VariableTorus { d, .. } => {
            let total = samples
                .checked_pow(*d as u32)
                .filter(|t| *t <= 1 << 22)
                .ok_or_else(|| invalid("too many sample points"))?;
            let h = 2.0 * std::f64::consts::PI / samples as f64;
            (0..total)
                .map(|mut i| {
                    let mut x = vec![0.0; *d];
                    for xj in x.iter_mut().rev() {
                        *xj = (i % samples) as f64 * h;
                        i /= samples;
                    }
                    x
                })
                .collect()
        }
    };
    let mats = par::map_slice(&points, |x| op.coefficient_matrix(x));
    let patterns: Vec<Vec<Vec<usize>>> = (0..=n).map(|m| subsets(n, m)).collect();

    let point_rank = |a: &Vec<Vec<f64>>| {
        (1..=n)
            .rev()
            .find(|&m| patterns[m].iter().any(|s| minor(a, s) >= DET_THRESHOLD))
            .unwrap_or(0)
    };
    let ranks = par::map_slice(&mats, point_rank);
    let pointwise_rank = (
        ranks.iter().cloned().min().unwrap_or(0),
        ranks.iter().cloned().max().unwrap_or(0),
    );

    for m in (1..=n).rev() {
        let best = patterns[m]
            .iter()
            .map(|s| {
                let worst = mats.iter().map(|a| minor(a, s)).fold(f64::INFINITY, f64::min);
                (s, worst)
            })
            .filter(|(_, w)| *w >= DET_THRESHOLD)
            .max_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((s, w)) = best {
            return Ok(DegeneracyReport {
                m,
                pattern: s.clone(),
                min_det: w,
                samples,
                pointwise_rank,
            });
        }
    }
    Ok(DegeneracyReport {
        m: 0,
        pattern: Vec::new(),
        min_det: 0.0,
        samples,
        pointwise_rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ManifoldSpec;
    use crate::operators::TrigPoly;

    fn diag(a11: TrigPoly, a22: TrigPoly) -> OperatorSpec {
        let a = vec![vec![a11, TrigPoly::zero(2)], vec![TrigPoly::zero(2), a22]];
        OperatorSpec::variable_torus(2, TrigPoly::constant(2, 1.0), a).unwrap()
    }

    #[test]
    fn identity_metric_full_rank() {
        let r = degeneracy_check(&OperatorSpec::constant_diagonal(&[1.0, 1.0]).unwrap(), 16).unwrap();
        assert_eq!(r.m, 2);
        assert!((r.min_det - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cosine_entry_drops_rank() {
        let op = diag(TrigPoly::constant(2, 1.0), TrigPoly::cosine(&[1, 0], 1.0));
        let r = degeneracy_check(&op, 256).unwrap();
        assert_eq!(r.m, 1);
        assert_eq!(r.pattern, vec![0]);
        assert!((r.min_det - 1.0).abs() < 1e-15);
        assert_eq!(r.pointwise_rank, (1, 2));
        // direct sweep: the 2x2 determinant cos x vanishes at x = π/2
        let min2 = (0..256)
            .map(|i| (2.0 * std::f64::consts::PI * i as f64 / 256.0).cos().abs())
            .fold(f64::INFINITY, f64::min);
        assert!(min2 < DET_THRESHOLD);
    }

    #[test]
    fn rank_stable_under_refinement() {
        let op = diag(TrigPoly::constant(2, 1.0), TrigPoly::cosine(&[1, 0], 1.0));
        for s in [64, 128, 512] {
            assert_eq!(degeneracy_check(&op, s).unwrap().m, 1);
        }
    }

    #[test]
    fn mixed_signature_product_is_nondegenerate() {
        let op = OperatorSpec::signature(ManifoldSpec::s3_x_s3(), vec![1, -1]).unwrap();
        let r = degeneracy_check(&op, 8).unwrap();
        assert_eq!(r.m, 6);
        assert_eq!(r.min_det, 1.0);
    }

    #[test]
    fn vanishing_everywhere_reports_zero() {
        let op = diag(TrigPoly::zero(2), TrigPoly::zero(2));
        assert_eq!(degeneracy_check(&op, 8).unwrap().m, 0);
    }
}
