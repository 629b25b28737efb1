use std::f64::consts::PI;

use super::quaternion::{quat_mul, UnitQuaternion};
use crate::error::{invalid, Result};
use crate::VOL_S3;

/// Anything that assigns a weight to each of a finite list of nodes.
pub trait Quadrature {
    fn len(&self) -> usize;

    fn weight(&self, i: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn total_weight(&self) -> f64 {
        (0..self.len()).map(|i| self.weight(i)).sum()
    }
}

impl<G: Quadrature + ?Sized> Quadrature for &G {
    fn len(&self) -> usize {
        (**self).len()
    }

    fn weight(&self, i: usize) -> f64 {
        (**self).weight(i)
    }
}

/// Explicit nodes with positive weights.
#[derive(Debug, Clone)]
pub struct QuadratureGrid<P> {
    nodes: Vec<P>,
    weights: Vec<f64>,
    tolerance: f64,
}

pub type S3Grid = QuadratureGrid<UnitQuaternion>;

impl<P> QuadratureGrid<P> {
    pub fn new(nodes: Vec<P>, weights: Vec<f64>, tolerance: f64) -> Result<Self> {
        if nodes.len() != weights.len() {
            return Err(invalid(format!(
                "{} nodes but {} weights",
                nodes.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(invalid(format!("quadrature weight {w} is not positive")));
        }
        Ok(Self {
            nodes,
            weights,
            tolerance,
        })
    }

    pub fn nodes(&self) -> &[P] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Declared relative accuracy of the rule on its exactness class.
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn integrate<F: Fn(&P) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(x))
            .sum()
    }
}

impl<P> Quadrature for QuadratureGrid<P> {
    fn len(&self) -> usize {
        self.nodes.len()
    }

    fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    (p1, n * (x * p1 - p0) / (x * x - 1.0))
}

/// Product rule on `S³` in coordinates `x = (cos θ, sin θ · ω)`, `ω ∈ S²`.
///
/// Colatitude: Gauss–Chebyshev (second kind) with `level + 1` nodes.
/// Sphere `S²`: Gauss–Legendre in `cos β` (`level + 1` nodes) times
/// `2 level + 2` equispaced azimuths. The rule integrates every polynomial
/// in `(x1, …, x4)` of degree `≤ 2 level` exactly.
pub fn haar_grid_s3(level: usize) -> Result<S3Grid> {
    if level == 0 {
        return Err(invalid("haar grid level must be positive"));
    }
    let n_theta = level + 1;
    let n_polar = level + 1;
    let n_azimuth = 2 * level + 2;
    let (zs, zw) = gauss_legendre(n_polar);

    let mut nodes = Vec::with_capacity(n_theta * n_polar * n_azimuth);
    let mut weights = Vec::with_capacity(nodes.capacity());
    for i in 1..=n_theta {
        let theta = i as f64 * PI / (n_theta as f64 + 1.0);
        let w_theta = PI / (n_theta as f64 + 1.0) * theta.sin().powi(2);
        for (z, wz) in zs.iter().zip(&zw) {
            let rho = (1.0 - z * z).sqrt();
            for k in 0..n_azimuth {
                let phi = 2.0 * PI * k as f64 / n_azimuth as f64;
                let dir = [rho * phi.cos(), rho * phi.sin(), *z];
                nodes.push(UnitQuaternion::from_polar(theta, dir));
                weights.push(w_theta * wz * 2.0 * PI / n_azimuth as f64);
            }
        }
    }
    QuadratureGrid::new(nodes, weights, 1e-10)
}

/// Pullback of a grid under the left translation `y ↦ a·y`.
pub fn left_translate(a: &UnitQuaternion, grid: &S3Grid) -> S3Grid {
    QuadratureGrid {
        nodes: grid.nodes.iter().map(|y| quat_mul(a, y)).collect(),
        weights: grid.weights.clone(),
        tolerance: grid.tolerance,
    }
}

/// One-dimensional rule for zonal functions on `S³`:
/// `Σ w_i f(θ_i) ≈ 4π ∫₀^π f(θ) sin²θ dθ`.
///
/// Nodes `θ_i = iπ/(N+1)`, `i = 1..N` (Gauss–Chebyshev of the second kind in
/// `cos θ`), exact for polynomials in `cos θ` of degree `≤ 2N − 1`.
#[derive(Debug, Clone)]
pub struct ZonalGrid {
    thetas: Vec<f64>,
    weights: Vec<f64>,
}

impl ZonalGrid {
    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Node spacing `π/(N+1)`.
    pub fn spacing(&self) -> f64 {
        PI / (self.thetas.len() as f64 + 1.0)
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.thetas
            .iter()
            .zip(&self.weights)
            .map(|(t, w)| w * f(*t))
            .sum()
    }
}

impl Quadrature for ZonalGrid {
    fn len(&self) -> usize {
        self.thetas.len()
    }

    fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }
}

pub fn zonal_grid_s3(n: usize) -> Result<ZonalGrid> {
    if n < 2 {
        return Err(invalid(format!("zonal grid needs N >= 2, got {n}")));
    }
    let h = PI / (n as f64 + 1.0);
    let thetas: Vec<f64> = (1..=n).map(|i| i as f64 * h).collect();
    let scale = 2.0 * VOL_S3 / (n as f64 + 1.0);
    let weights = thetas.iter().map(|t| scale * t.sin().powi(2)).collect();
    Ok(ZonalGrid { thetas, weights })
}

/// Uniform grid on `(R/2πZ)^dim` with `n` points per axis, row-major with
/// the last axis fastest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusGrid {
    dim: usize,
    n: usize,
}

impl TorusGrid {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    pub fn cell_weight(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Integer multi-index of flat node `i`.
    pub fn index(&self, mut i: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim];
        for slot in idx.iter_mut().rev() {
            *slot = i % self.n;
            i /= self.n;
        }
        idx
    }

    pub fn node(&self, i: usize) -> Vec<f64> {
        let h = self.spacing();
        self.index(i).into_iter().map(|j| j as f64 * h).collect()
    }

    pub fn to_quadrature(&self) -> QuadratureGrid<Vec<f64>> {
        let w = self.cell_weight();
        QuadratureGrid {
            nodes: (0..self.len()).map(|i| self.node(i)).collect(),
            weights: vec![w; self.len()],
            tolerance: 1e-12,
        }
    }
}

impl Quadrature for TorusGrid {
    fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    fn weight(&self, _i: usize) -> f64 {
        self.cell_weight()
    }
}

/// Uniform `n^d` grid; `n` must be a power of two.
pub fn torus_grid(d: usize, n: usize) -> Result<TorusGrid> {
    if d == 0 {
        return Err(invalid("torus dimension must be positive"));
    }
    if n == 0 || !n.is_power_of_two() {
        return Err(invalid(format!("torus grid size {n} is not a power of two")));
    }
    if (n as f64).powi(d as i32) > (1u64 << 32) as f64 {
        return Err(invalid(format!("torus grid {n}^{d} is too large")));
    }
    Ok(TorusGrid { dim: d, n })
}
