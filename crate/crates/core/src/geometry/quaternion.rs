use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Result};

/// Allowed deviation of `|x|` from one.
pub const UNIT_TOL: f64 = 1e-12;

/// A point of `S³ ⊂ R⁴`, identified with `SU(2)` through
///
/// ```text
/// (x1, x2, x3, x4) ↦ [[x1 + i x2,  x3 + i x4],
///                     [-x3 + i x4, x1 - i x2]]
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitQuaternion([f64; 4]);

impl UnitQuaternion {
    pub const IDENTITY: UnitQuaternion = UnitQuaternion([1.0, 0.0, 0.0, 0.0]);

    /// Validates that the coordinates lie on the unit sphere.
    pub fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Result<Self> {
        let x = [x1, x2, x3, x4];
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOL {
            return Err(invalid(format!(
                "quaternion ({x1}, {x2}, {x3}, {x4}) has norm {norm}, expected 1"
            )));
        }
        Ok(Self(x))
    }

    /// Projects a nonzero vector of `R⁴` onto the sphere.
    pub fn normalized(x: [f64; 4]) -> Result<Self> {
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(invalid("cannot normalize a zero or non-finite vector"));
        }
        Ok(Self(x.map(|v| v / norm)))
    }

    /// Haar-distributed sample: a normalized standard Gaussian vector.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let x: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            if let Ok(q) = Self::normalized(x) {
                return q;
            }
        }
    }

    /// Point at colatitude `theta` from the identity in direction `dir`
    /// (a unit vector of `R³`).
    pub fn from_polar(theta: f64, dir: [f64; 3]) -> Self {
        let (s, c) = theta.sin_cos();
        Self::normalized([c, s * dir[0], s * dir[1], s * dir[2]])
            .expect("polar coordinates give a nonzero vector")
    }

    pub fn coords(&self) -> [f64; 4] {
        self.0
    }

    pub fn x1(&self) -> f64 {
        self.0[0]
    }

    /// Geodesic distance to the identity, `acos(x1)` in `[0, π]`.
    pub fn colatitude(&self) -> f64 {
        self.0[0].clamp(-1.0, 1.0).acos()
    }

    pub fn to_su2(&self) -> [[Complex64; 2]; 2] {
        let [x1, x2, x3, x4] = self.0;
        [
            [Complex64::new(x1, x2), Complex64::new(x3, x4)],
            [Complex64::new(-x3, x4), Complex64::new(x1, -x2)],
        ]
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

impl std::ops::Mul for UnitQuaternion {
    type Output = UnitQuaternion;

    fn mul(self, rhs: Self) -> Self {
        quat_mul(&self, &rhs)
    }
}

/// Group law of `S³`: the Hamilton product, renormalized.
pub fn quat_mul(a: &UnitQuaternion, b: &UnitQuaternion) -> UnitQuaternion {
    let [x1, x2, x3, x4] = a.0;
    let [y1, y2, y3, y4] = b.0;
    let z = [
        x1 * y1 - x2 * y2 - x3 * y3 - x4 * y4,
        x1 * y2 + x2 * y1 + x3 * y4 - x4 * y3,
        x1 * y3 - x2 * y4 + x3 * y1 + x4 * y2,
        x1 * y4 + x2 * y3 - x3 * y2 + x4 * y1,
    ];
    let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
    UnitQuaternion(z.map(|v| v / norm))
}

/// `(x1, -x2, -x3, -x4)`.
pub fn quat_inv(a: &UnitQuaternion) -> UnitQuaternion {
    let [x1, x2, x3, x4] = a.0;
    UnitQuaternion([x1, -x2, -x3, -x4])
}
