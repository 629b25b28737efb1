use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::geometry::Quadrature;
use crate::par;

/// Complex samples aligned with the nodes of a quadrature rule.
#[derive(Debug, Clone)]
pub struct GridField<G> {
    grid: G,
    values: Vec<Complex64>,
}

impl<G: Quadrature> GridField<G> {
    pub fn new(grid: G, values: Vec<Complex64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(invalid(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &G {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }
}

/// `|z|^q`, avoiding `powf` for the common exponents.
#[inline]
pub fn abs_pow(z: Complex64, q: f64) -> f64 {
    let n2 = z.norm_sqr();
    if q == 2.0 {
        n2
    } else if q == 4.0 {
        n2 * n2
    } else if q == 3.0 {
        n2 * n2.sqrt()
    } else if q == 1.0 {
        n2.sqrt()
    } else {
        n2.powf(0.5 * q)
    }
}

pub(crate) fn lq_of_values<G: Quadrature + Sync>(grid: &G, values: &[Complex64], q: f64) -> Result<f64> {
    if q.is_nan() || q < 1.0 {
        return Err(invalid(format!("L^q norm needs q >= 1, got {q}")));
    }
    if q.is_infinite() {
        return Ok(par::max_range(values.len(), |i| values[i].norm()));
    }
    let s = par::sum_range(values.len(), |i| grid.weight(i) * abs_pow(values[i], q));
    Ok(s.powf(1.0 / q))
}

/// `(Σ w_i |v_i|^q)^{1/q}`, or `max |v_i|` for `q = ∞`.
pub fn lq_norm<G: Quadrature + Sync>(field: &GridField<G>, q: f64) -> Result<f64> {
    lq_of_values(&field.grid, &field.values, q)
}
