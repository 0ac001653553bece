//! Pricing library for the subdiffusive fractional Merton short-rate model.
//!
//! The short rate and the stock are driven by correlated fractional Brownian
//! motions run on the operational clock of an inverse alpha-stable
//! subordinator. The library provides:
//!
//! - closed-form zero-coupon bond and European option prices for the general
//!   model and its three nested reductions ([`bond`], [`pricing`]);
//! - finite-difference residual verification that the closed forms satisfy
//!   their governing PDEs, with convergence-order estimation ([`pde`]);
//! - exact-covariance path simulation of the subordinated processes and a
//!   Monte Carlo oracle for the transformed pricing kernel ([`simulate`]);
//! - the special functions and the quadrature oracle backing the above
//!   ([`mathfn`]), and the self-check suites wired into the CLI ([`verify`]).
//!
//! ```
//! use sfmerton::model::{Contract, MarketState, ModelParams, OptionKind};
//!
//! let params = ModelParams {
//!     alpha: 0.9,
//!     hurst: 0.6,
//!     mu_r: 0.5,
//!     sigma_r: 0.3,
//!     mu_s: 0.0,
//!     sigma_s: 0.4,
//!     rho: 0.4,
//! }
//! .validated()
//! .unwrap();
//! let state = MarketState { short_rate: 0.3, stock: 2.0 };
//! let contract = Contract {
//!     strike: 3.0,
//!     maturity: 0.3,
//!     valuation_time: 0.0,
//!     kind: OptionKind::Call,
//! };
//! let quote = sfmerton::pricing::price(&params, &state, &contract).unwrap();
//! assert!(quote.price > 0.0 && quote.price < state.stock);
//! ```

// Validation comparisons are written as `!(x > 0.0)` so NaN is rejected;
// tabulated rational-approximation constants keep their reference digits;
// stencil code indexes neighbor points directly.
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::excessive_precision,
    clippy::needless_range_loop
)]

pub mod bond;
pub mod error;
pub mod mathfn;
pub mod model;
pub mod pde;
pub mod pricing;
pub mod simulate;
pub mod verify;

pub use error::{Error, Result};
pub use model::{Contract, MarketState, ModelParams, ModelVariant, OptionKind};
