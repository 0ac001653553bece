//! Zero-coupon bond pricing.
//!
//! The bond price is `P(r, t, T) = exp(-r*tau + f1(tau))` with `tau = T - t`
//! and log-price adjustment
//!
//! ```text
//! f1(tau) = H/Gamma(alpha)^{2H} * int_0^tau (T-s)^{kappa-1} * (sigma_r^2 s^2 - 2 mu_r s) ds,
//! ```
//!
//! `kappa = 2*alpha*H`. Note that `f1` depends on the absolute maturity `T`
//! through the kernel, not only on `tau`; the operations therefore take
//! `(t, maturity)` and never a bare time-to-maturity.

use crate::error::{Error, Result};
use crate::mathfn::power_poly_integral_mirrored;
use crate::model::{ModelParams, ModelVariant};

/// A priced zero-coupon bond. `price = exp(-r*tau + f1)` holds exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BondQuote {
    /// Discount factor (price per unit face).
    pub price: f64,
    /// Log-price adjustment f1(tau).
    pub f1: f64,
    /// Time to maturity tau = T - t.
    pub tau: f64,
}

fn check_times(t: f64, maturity: f64) -> Result<()> {
    if !(t >= 0.0 && t <= maturity) {
        return Err(Error::domain(format!(
            "need 0 <= t <= maturity, got t = {t}, T = {maturity}"
        )));
    }
    Ok(())
}

/// Log-price adjustment under the general model, evaluated in closed form.
pub fn f1_general(params: &ModelParams, t: f64, maturity: f64) -> Result<f64> {
    check_times(t, maturity)?;
    let tau = maturity - t;
    if tau == 0.0 || (params.sigma_r == 0.0 && params.mu_r == 0.0) {
        return Ok(0.0);
    }
    let integral = power_poly_integral_mirrored(
        params.kappa(),
        maturity,
        -2.0 * params.mu_r,
        params.sigma_r * params.sigma_r,
        0.0,
        tau,
    )?;
    Ok(params.hurst / params.gamma_norm() * integral)
}

/// Bond price `exp(-r*(T-t) + f1(T-t))`; exactly 1 at `t = maturity`.
pub fn bond_price(params: &ModelParams, r: f64, t: f64, maturity: f64) -> Result<BondQuote> {
    let f1 = f1_general(params, t, maturity)?;
    let tau = maturity - t;
    Ok(BondQuote {
        price: (-r * tau + f1).exp(),
        f1,
        tau,
    })
}

/// Corollary-specific closed forms of `f1`, one per reduced variant.
///
/// These are written out independently of [`f1_general`]'s generic
/// coefficient machinery so that the reduction tests compare two genuinely
/// distinct evaluation routes. `variant` must match what the parameters
/// classify as.
pub fn f1_special(
    params: &ModelParams,
    t: f64,
    maturity: f64,
    variant: ModelVariant,
) -> Result<f64> {
    let actual = params.variant();
    if actual != variant {
        return Err(Error::VariantMismatch {
            expected: variant,
            actual,
        });
    }
    check_times(t, maturity)?;
    let tau = maturity - t;
    let (sr2, mu_r) = (params.sigma_r * params.sigma_r, params.mu_r);
    match variant {
        // Constant kernel: f1 depends on tau alone.
        ModelVariant::Merton => Ok(sr2 * tau.powi(3) / 6.0 - mu_r * tau * tau / 2.0),
        // Kernel (T-s)^{2H-1}; at t = 0 the moment integrals are Beta values.
        ModelVariant::FracMerton => {
            let h2 = 2.0 * params.hurst;
            if t == 0.0 {
                Ok(sr2 * maturity.powf(h2 + 2.0) / ((h2 + 1.0) * (h2 + 2.0))
                    - mu_r * maturity.powf(h2 + 1.0) / (h2 + 1.0))
            } else {
                let (j1, j2) = kernel_moments(h2, maturity, tau);
                Ok(params.hurst * (sr2 * j2 - 2.0 * mu_r * j1))
            }
        }
        // Kernel (T-s)^{alpha-1} scaled by 1/Gamma(alpha).
        ModelVariant::SubMerton => {
            let g = crate::mathfn::gamma(params.alpha)?;
            let (j1, j2) = kernel_moments(params.alpha, maturity, tau);
            Ok((sr2 / 2.0 * j2 - mu_r * j1) / g)
        }
        ModelVariant::SubFracMerton => f1_general(params, t, maturity),
    }
}

// Moment integrals J_j = int_0^tau (T-s)^{p-1} s^j ds for j = 1, 2, via the
// substitution u = T - s and direct antiderivatives.
fn kernel_moments(p: f64, maturity: f64, tau: f64) -> (f64, f64) {
    let a = maturity; // u at s = 0
    let b = maturity - tau; // u at s = tau
    let dp = |q: f64| a.powf(q) - b.powf(q);
    let j1 = maturity * dp(p) / p - dp(p + 1.0) / (p + 1.0);
    let j2 = maturity * maturity * dp(p) / p - 2.0 * maturity * dp(p + 1.0) / (p + 1.0)
        + dp(p + 2.0) / (p + 2.0);
    (j1, j2)
}
