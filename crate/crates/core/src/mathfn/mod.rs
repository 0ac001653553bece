//! Special functions and integral evaluation.
//!
//! Everything the pricing layer integrates is a polynomial-times-power
//! kernel, so [`power_poly_integral`] evaluates those in closed form via
//! elementary antiderivatives. The adaptive Gauss-Kronrod quadrature in
//! [`adaptive_quad`] exists only as an independent cross-check oracle; the
//! pricing path never goes through it.

mod gamma_fn;
mod normal;
mod power_poly;
mod quad;

pub use gamma_fn::gamma;
pub use normal::norm_cdf;
pub use power_poly::{power_poly_integral, power_poly_integral_mirrored, PowerPolyIntegral};
pub use quad::{adaptive_quad, adaptive_quad_singular};
