//! Points, group operations, isometries and quadrature rules for `S³`,
//! flat tori `T^d`, and finite products of them.

mod manifold;
mod quadrature;
mod quaternion;

pub use manifold::{Factor, ManifoldSpec};
pub use quadrature::{
    gauss_legendre, haar_grid_s3, left_translate, torus_grid, zonal_grid_s3, Quadrature,
    QuadratureGrid, S3Grid, TorusGrid, ZonalGrid,
};
pub use quaternion::{quat_inv, quat_mul, UnitQuaternion, UNIT_TOL};
