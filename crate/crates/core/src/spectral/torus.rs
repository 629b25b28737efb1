use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftDirection;

use super::fft::fft_nd;
use super::field::{ModeId, SpectralField};
use crate::error::{invalid, Error, Result};
use crate::geometry::{ManifoldSpec, TorusGrid};
use crate::norms::GridField;

/// Coefficients against `e^{ik·x}/(2π)^{d/2}` of grid values on a flat
/// torus. Every lattice vector with components in `[-N/2, N/2)` is returned.
pub fn analyze_torus(manifold: &ManifoldSpec, field: &GridField<TorusGrid>) -> Result<SpectralField> {
    let grid = *field.grid();
    if !manifold.is_flat_torus() || manifold.dim() != grid.dim() {
        return Err(invalid(format!(
            "grid of dimension {} does not match manifold {manifold:?}",
            grid.dim()
        )));
    }
    let (d, n) = (grid.dim(), grid.n());
    let mut data = field.values().to_vec();
    fft_nd(&mut data, d, n, FftDirection::Forward);
    let scale = (2.0 * PI).powf(d as f64 / 2.0) / data.len() as f64;
    let half = (n / 2) as i64;
    let mut modes = Vec::with_capacity(data.len());
    let mut coeffs = Vec::with_capacity(data.len());
    for (i, v) in data.into_iter().enumerate() {
        let k: Vec<i64> = grid
            .index(i)
            .into_iter()
            .map(|j| {
                let j = j as i64;
                if j < half {
                    j
                } else {
                    j - n as i64
                }
            })
            .collect();
        modes.push(ModeId::split_torus(manifold, &k)?);
        coeffs.push(v * scale);
    }
    SpectralField::new(manifold.clone(), modes, coeffs)
}

/// Precomputed placement of a fixed mode list on a torus grid; reused for
/// every time sample of an evolution.
#[derive(Debug, Clone)]
pub struct TorusSynthesis {
    grid: TorusGrid,
    slots: Vec<usize>,
}

impl TorusSynthesis {
    pub fn new(field: &SpectralField, grid: TorusGrid) -> Result<Self> {
        let manifold = field.manifold();
        if !manifold.is_flat_torus() || manifold.dim() != grid.dim() {
            return Err(invalid("field manifold does not match the torus grid"));
        }
        let n = grid.n() as i64;
        let slots = field
            .modes()
            .iter()
            .map(|m| {
                let k = m.lattice().expect("flat torus modes are lattice vectors");
                let mut slot = 0usize;
                for &kj in &k {
                    if 2 * kj.abs() >= n {
                        return Err(Error::Resolution(format!(
                            "mode {k:?} is not resolved by {n} points per axis"
                        )));
                    }
                    slot = slot * n as usize + kj.rem_euclid(n) as usize;
                }
                Ok(slot)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { grid, slots })
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn synthesize(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let d = self.grid.dim();
        let n = self.grid.n();
        let mut data = vec![Complex64::new(0.0, 0.0); n.pow(d as u32)];
        for (slot, c) in self.slots.iter().zip(coeffs) {
            data[*slot] += c;
        }
        fft_nd(&mut data, d, n, FftDirection::Inverse);
        let scale = (2.0 * PI).powf(-(d as f64) / 2.0);
        data.iter_mut().for_each(|v| *v *= scale);
        data
    }
}

/// Grid values of a flat-torus field. Fails when a mode reaches the Nyquist
/// index of the grid.
pub fn synthesize_torus(field: &SpectralField, grid: TorusGrid) -> Result<GridField<TorusGrid>> {
    let synth = TorusSynthesis::new(field, grid)?;
    GridField::new(grid, synth.synthesize(field.coeffs()))
}
