use std::collections::HashMap;

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rustfft::FftDirection;

use super::exact::Evolution;
use super::spec::OperatorSpec;
use crate::error::{invalid, Error, Result};
use crate::geometry::torus_grid;
use crate::par;
use crate::spectral::{fft_nd, ModeId, SpectralField};

/// Largest admissible basis size `(2K+1)^d`.
pub const MAX_BASIS: usize = 4096;

/// Truncation of `P` to the exponentials with `|k|_∞ ≤ K`, with the
/// generalized eigendecomposition `H V = G V diag(μ)`, `Vᴴ G V = I`.
#[derive(Debug, Clone)]
pub struct GalerkinSystem {
    d: usize,
    cutoff: usize,
    grid_n: usize,
    modes: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    h: DMatrix<Complex64>,
    gram: DMatrix<Complex64>,
    hermitian_defect: f64,
    gram_min_eigenvalue: f64,
    mu: Vec<f64>,
    v: DMatrix<Complex64>,
}

fn lattice(d: usize, k: usize) -> Vec<Vec<i64>> {
    let side = 2 * k + 1;
    (0..side.pow(d as u32))
        .map(|mut i| {
            let mut v = vec![0i64; d];
            for x in v.iter_mut().rev() {
                *x = (i % side) as i64 - k as i64;
                i /= side;
            }
            v
        })
        .collect()
}

/// Fourier coefficients `ĝ_m` of a real function sampled on an `n^d` grid.
fn coefficients<F: Fn(&[f64]) -> f64 + Sync>(d: usize, n: usize, g: F) -> Result<Vec<Complex64>> {
    let grid = torus_grid(d, n)?;
    let mut data: Vec<Complex64> = par::map_range(n.pow(d as u32), |i| Complex64::new(g(&grid.node(i)), 0.0));
    fft_nd(&mut data, d, n, FftDirection::Forward);
    let scale = 1.0 / data.len() as f64;
    data.iter_mut().for_each(|c| *c *= scale);
    Ok(data)
}

/// Assembles with the smallest power-of-two grid that resolves every
/// product `a^{pq}ρ e_l ē_k` exactly.
pub fn assemble_galerkin(op: &OperatorSpec, cutoff: usize) -> Result<GalerkinSystem> {
    let band = match op {
        OperatorSpec::VariableTorus { rho, a, .. } => {
            let ba = a.iter().flatten().map(|e| e.bandwidth()).max().unwrap_or(0);
            (ba + rho.bandwidth()) as usize
        }
        OperatorSpec::Signature { .. } => return assemble_galerkin(&op.to_variable_torus()?, cutoff),
    };
    let n = (2 * cutoff + band + 1).next_power_of_two().max(4);
    assemble_galerkin_with_grid(op, cutoff, n)
}

/// Assembles on an explicit `n^d` sampling grid; fails when the grid
/// aliases the integrands.
pub fn assemble_galerkin_with_grid(op: &OperatorSpec, cutoff: usize, n: usize) -> Result<GalerkinSystem> {
    let op = op.to_variable_torus()?;
    let OperatorSpec::VariableTorus { d, rho, a } = &op else {
        unreachable!()
    };
    let d = *d;
    if cutoff == 0 {
        return Err(invalid("Galerkin cutoff must be at least 1"));
    }
    let size = (2 * cutoff + 1).checked_pow(d as u32).unwrap_or(usize::MAX);
    if size > MAX_BASIS {
        return Err(invalid(format!("basis of {size} modes exceeds the cap of {MAX_BASIS}")));
    }
    let band = a.iter().flatten().map(|e| e.bandwidth()).max().unwrap_or(0) + rho.bandwidth();
    if n <= 2 * cutoff + band as usize {
        return Err(Error::Resolution(format!(
            "{n} points per axis alias products of bandwidth {band} with cutoff {cutoff}"
        )));
    }
    let rho_hat = coefficients(d, n, |x| rho.eval(x))?;
    let mut g_hat = vec![vec![Vec::new(); d]; d];
    for p in 0..d {
        for q in p..d {
            let c = coefficients(d, n, |x| a[p][q].eval(x) * rho.eval(x))?;
            g_hat[q][p] = c.clone();
            g_hat[p][q] = c;
        }
    }
    let modes = lattice(d, cutoff);
    let slot = |k: &[i64], l: &[i64]| {
        k.iter()
            .zip(l)
            .fold(0usize, |s, (a, b)| s * n + (a - b).rem_euclid(n as i64) as usize)
    };
    let m = modes.len();
    let rows: Vec<(Vec<Complex64>, Vec<Complex64>)> = par::map_range(m, |r| {
        let k = &modes[r];
        let mut hrow = Vec::with_capacity(m);
        let mut grow = Vec::with_capacity(m);
        for l in &modes {
            let s = slot(k, l);
            let mut acc = Complex64::new(0.0, 0.0);
            for p in 0..d {
                for q in 0..d {
                    acc += g_hat[p][q][s] * (l[p] * k[q]) as f64;
                }
            }
            hrow.push(acc);
            grow.push(rho_hat[s]);
        }
        (hrow, grow)
    });
    let h = DMatrix::from_fn(m, m, |r, c| rows[r].0[c]);
    let gram = DMatrix::from_fn(m, m, |r, c| rows[r].1[c]);
    let hermitian_defect = (&h - h.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let h_sym = (&h + h.adjoint()).scale(0.5);
    let g_sym = (&gram + gram.adjoint()).scale(0.5);

    let gram_min_eigenvalue = g_sym
        .clone()
        .symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let chol = Cholesky::new(g_sym.clone())
        .filter(|_| gram_min_eigenvalue > 0.0)
        .ok_or_else(|| Error::InvalidSystem(format!("Gram matrix is not positive definite (min eigenvalue {gram_min_eigenvalue:e})")))?;
    let l = chol.l();
    let y = l
        .solve_lower_triangular(&h_sym)
        .ok_or_else(|| Error::InvalidSystem("singular Cholesky factor".into()))?;
    let c = l
        .solve_lower_triangular(&y.adjoint())
        .ok_or_else(|| Error::InvalidSystem("singular Cholesky factor".into()))?;
    let c = (&c + c.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(c);
    let v = l
        .adjoint()
        .solve_upper_triangular(&eig.eigenvectors)
        .ok_or_else(|| Error::InvalidSystem("singular Cholesky factor".into()))?;
    let index = modes.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
    Ok(GalerkinSystem {
        d,
        cutoff,
        grid_n: n,
        modes,
        index,
        h,
        gram,
        hermitian_defect,
        gram_min_eigenvalue,
        mu: eig.eigenvalues.iter().cloned().collect(),
        v,
    })
}

impl GalerkinSystem {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Points per axis of the sampling grid used for assembly.
    pub fn grid_points(&self) -> usize {
        self.grid_n
    }

    pub fn modes(&self) -> &[Vec<i64>] {
        &self.modes
    }

    pub fn stiffness(&self) -> &DMatrix<Complex64> {
        &self.h
    }

    pub fn gram(&self) -> &DMatrix<Complex64> {
        &self.gram
    }

    /// `max |H - Hᴴ|` before symmetrization.
    pub fn hermitian_defect(&self) -> f64 {
        self.hermitian_defect
    }

    pub fn gram_min_eigenvalue(&self) -> f64 {
        self.gram_min_eigenvalue
    }

    /// Generalized eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut mu = self.mu.clone();
        mu.sort_by(f64::total_cmp);
        mu
    }

    /// Coefficients of `field` in system order; fails for modes beyond the
    /// cutoff.
    pub fn project(&self, field: &SpectralField) -> Result<Vec<Complex64>> {
        let man = field.manifold();
        if !man.is_flat_torus() || man.dim() != self.d {
            return Err(invalid("field is not on the Galerkin torus"));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.modes.len()];
        for (m, c) in field.modes().iter().zip(field.coeffs()) {
            let k = m.lattice().expect("flat torus modes are lattice vectors");
            let i = self
                .index
                .get(&k)
                .ok_or_else(|| Error::Resolution(format!("mode {k:?} lies beyond the cutoff {}", self.cutoff)))?;
            out[*i] += c;
        }
        Ok(out)
    }

    /// `sqrt(cᴴ G c)`: the `L²(ρ dx)` norm.
    pub fn gram_norm(&self, coeffs: &[Complex64]) -> f64 {
        let c = DVector::from_column_slice(coeffs);
        (c.adjoint() * &self.gram * &c)[(0, 0)].re.max(0.0).sqrt()
    }

    /// Sobolev norm with the density weight: `sqrt(dᴴ G d)`,
    /// `d_k = (1+|k|²)^{s/2} c_k`.
    pub fn gram_hs_norm(&self, coeffs: &[Complex64], s: f64) -> f64 {
        let d: Vec<Complex64> = self
            .modes
            .iter()
            .zip(coeffs)
            .map(|(k, c)| c * (1.0 + k.iter().map(|v| (v * v) as f64).sum::<f64>()).powf(s / 2.0))
            .collect();
        self.gram_norm(&d)
    }

    /// Share of `Σ|c_k|²` carried by modes with `|k|_∞ > K/2`.
    pub fn tail_fraction(&self, coeffs: &[Complex64]) -> f64 {
        let half = self.cutoff as i64 / 2;
        let (mut tail, mut total) = (0.0, 0.0);
        for (k, c) in self.modes.iter().zip(coeffs) {
            let e = c.norm_sqr();
            total += e;
            if k.iter().any(|v| v.abs() > half) {
                tail += e;
            }
        }
        if total > 0.0 {
            tail / total
        } else {
            0.0
        }
    }

    /// Evolution of `u0` inside the truncation.
    pub fn evolution_of(&self, u0: &SpectralField) -> Result<GalerkinEvolution<'_>> {
        let c0 = self.project(u0)?;
        let modes = self
            .modes
            .iter()
            .map(|k| ModeId::split_torus(u0.manifold(), k))
            .collect::<Result<Vec<_>>>()?;
        let template = SpectralField::new(u0.manifold().clone(), modes, c0.clone())?;
        let w = self.v.adjoint() * (&self.gram * DVector::from_vec(c0));
        Ok(GalerkinEvolution { sys: self, template, w })
    }
}

/// `c(t) = V e^{-itμ} Vᴴ G c(0)`.
pub fn propagate_galerkin(sys: &GalerkinSystem, coeffs: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
    if coeffs.len() != sys.modes.len() {
        return Err(invalid(format!(
            "{} coefficients for a basis of {}",
            coeffs.len(),
            sys.modes.len()
        )));
    }
    let w = sys.v.adjoint() * (&sys.gram * DVector::from_column_slice(coeffs));
    Ok(apply_phases(sys, &w, t))
}

fn apply_phases(sys: &GalerkinSystem, w: &DVector<Complex64>, t: f64) -> Vec<Complex64> {
    let rotated = DVector::from_iterator(
        w.len(),
        w.iter().zip(&sys.mu).map(|(c, mu)| c * Complex64::from_polar(1.0, -t * mu)),
    );
    (&sys.v * rotated).iter().cloned().collect()
}

pub struct GalerkinEvolution<'a> {
    sys: &'a GalerkinSystem,
    template: SpectralField,
    w: DVector<Complex64>,
}

impl Evolution for GalerkinEvolution<'_> {
    fn template(&self) -> &SpectralField {
        &self.template
    }

    fn coeffs_at(&self, t: f64) -> Vec<Complex64> {
        apply_phases(self.sys, &self.w, t)
    }

    fn hs_norm(&self, coeffs: &[Complex64], s: f64) -> f64 {
        self.sys.gram_hs_norm(coeffs, s)
    }
}
