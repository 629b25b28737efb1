//! Spatial `L^q` norms, mixed `L^p_t L^q_x` norms with a time-refinement
//! certificate, Strichartz quotients, and the reductions that turn norms of
//! `f(x·y)` on `S³ × S³` into one-dimensional zonal computations.

mod grid_field;
mod mixed;
mod product;

pub use grid_field::{abs_pow, lq_norm, GridField};
pub use mixed::{
    mixed_norm, strichartz_quotient, MixedNorm, MixedNormSpec, PreparedNorm, Synthesis,
};
pub use product::{lift_to_product, product_zonal_hs, product_zonal_lq, product_zonal_lq_values};
