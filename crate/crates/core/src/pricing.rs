//! European option closed forms, the t = 0 specialization, and the
//! four-variant price-table generator.
//!
//! The call value is `S*Phi(d1) - K*P(r,t,T)*Phi(d2)` with
//!
//! ```text
//! d1 = [ln(S/K) - ln P + V/2] / sqrt(V),     d2 = d1 - sqrt(V),
//! V  = 2H/Gamma(alpha)^{2H} * int_t^T sigma_hat^2(s) * s^{kappa-1} ds,
//! sigma_hat^2(s) = sigma_s^2 + 2 rho sigma_r sigma_s (T-s) + sigma_r^2 (T-s)^2.
//! ```
//!
//! The put is `K*P*Phi(-d2) - S*Phi(-d1)`; the `S` factor on the second term
//! is forced by put-call parity (see NOTES.md for the convention ledger).

use std::fmt::Write as _;

use crate::bond::{bond_price, BondQuote};
use crate::error::{Error, Result};
use crate::mathfn::{norm_cdf, power_poly_integral, PowerPolyIntegral};
use crate::model::{Contract, MarketState, ModelParams, ModelVariant, OptionKind};

/// Integrated variance entering `d1`/`d2`, with its structural pieces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceDecomposition {
    /// Total variance V over [t, T].
    pub total_variance: f64,
    /// Kernel exponent kappa = 2*alpha*hurst.
    pub kappa: f64,
    maturity: f64,
    sigma_s: f64,
    sigma_r: f64,
    rho: f64,
}

impl VarianceDecomposition {
    /// The instantaneous factor `sigma_hat^2(s)`, a nonnegative quadratic in
    /// `(T - s)` for any correlation in [-1, 1].
    pub fn sigma_hat_sq_at(&self, s: f64) -> f64 {
        let u = self.maturity - s;
        self.sigma_s * self.sigma_s
            + 2.0 * self.rho * self.sigma_r * self.sigma_s * u
            + self.sigma_r * self.sigma_r * u * u
    }
}

/// Integrated variance `V` over `[t, maturity]`, evaluated in closed form.
pub fn total_variance(params: &ModelParams, t: f64, maturity: f64) -> Result<VarianceDecomposition> {
    if !(t >= 0.0 && t <= maturity) {
        return Err(Error::domain(format!(
            "need 0 <= t <= maturity, got t = {t}, T = {maturity}"
        )));
    }
    let kappa = params.kappa();
    let coeffs = [
        params.sigma_s * params.sigma_s,
        2.0 * params.rho * params.sigma_r * params.sigma_s,
        params.sigma_r * params.sigma_r,
    ];
    let integral = power_poly_integral(&PowerPolyIntegral {
        kappa,
        horizon: maturity,
        coeffs,
        lower: t,
        upper: maturity,
    })?;
    let mut v = 2.0 * params.hurst / params.gamma_norm() * integral;
    if v < 0.0 {
        // sigma_hat^2 >= 0 for |rho| <= 1, so a genuinely negative V can only
        // come from an out-of-range correlation; tiny negatives are roundoff.
        if v < -1e-12 * (1.0 + coeffs[0] + coeffs[2]) {
            return Err(Error::NegativeVariance { value: v });
        }
        v = 0.0;
    }
    Ok(VarianceDecomposition {
        total_variance: v,
        kappa,
        maturity,
        sigma_s: params.sigma_s,
        sigma_r: params.sigma_r,
        rho: params.rho,
    })
}

/// A priced European option.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptionQuote {
    pub price: f64,
    pub d1: f64,
    pub d2: f64,
    pub bond: BondQuote,
    pub variance: VarianceDecomposition,
    pub kind: OptionKind,
    pub variant: ModelVariant,
}

/// Prices a European call or put under the general model.
///
/// Degenerate cases (`t = maturity`, or all volatilities zero so `V = 0`)
/// return the intrinsic value against the bond-discounted strike, which is
/// the continuous limit of the closed form.
pub fn price(params: &ModelParams, state: &MarketState, contract: &Contract) -> Result<OptionQuote> {
    params.validate()?;
    state.validate()?;
    contract.validate()?;

    let t = contract.valuation_time;
    let bond = bond_price(params, state.short_rate, t, contract.maturity)?;
    let variance = total_variance(params, t, contract.maturity)?;
    let v = variance.total_variance;
    let s = state.stock;
    let k = contract.strike;
    let discounted_strike = k * bond.price;

    let (d1, d2, call) = if v == 0.0 {
        let moneyness = s - discounted_strike;
        let d = if moneyness > 0.0 {
            f64::INFINITY
        } else if moneyness < 0.0 {
            f64::NEG_INFINITY
        } else {
            0.0
        };
        (d, d, moneyness.max(0.0))
    } else {
        let sqrt_v = v.sqrt();
        let d1 = ((s / k).ln() - bond.price.ln() + 0.5 * v) / sqrt_v;
        let d2 = d1 - sqrt_v;
        (d1, d2, s * norm_cdf(d1) - discounted_strike * norm_cdf(d2))
    };

    let price = match contract.kind {
        OptionKind::Call => call,
        OptionKind::Put => {
            if v == 0.0 {
                (discounted_strike - s).max(0.0)
            } else {
                discounted_strike * norm_cdf(-d2) - s * norm_cdf(-d1)
            }
        }
    };

    Ok(OptionQuote {
        price,
        d1,
        d2,
        bond,
        variance,
        kind: contract.kind,
        variant: params.variant(),
    })
}

/// The t = 0 closed forms: bond shortcut `P0`, effective rate `r_bar`, and
/// effective variance rate `sigma_bar_sq`, alongside the general quote.
///
/// `sigma_bar_sq` is the integral-backed value (it satisfies
/// `sigma_bar_sq * T = V` identically); `sigma_bar_sq_alt` is the variant
/// that omits the factor 2 on the cross and quadratic terms, kept only for
/// comparison, with the price it would imply in `price_alt`. See NOTES.md.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OriginQuote {
    pub quote: OptionQuote,
    /// Bond shortcut P0 = exp(-r_bar * T); equals the general bond price.
    pub p0: f64,
    /// Effective flat rate over [0, T].
    pub r_bar: f64,
    /// Effective variance rate; `sigma_bar_sq * T` equals the total variance.
    pub sigma_bar_sq: f64,
    /// Black-Scholes-shaped price computed from (r_bar, sigma_bar_sq);
    /// agrees with `quote.price` to roundoff.
    pub price_bs_form: f64,
    /// Alternate variance rate without the factor-2 cross/quadratic terms.
    pub sigma_bar_sq_alt: f64,
    /// Price implied by the alternate variance rate.
    pub price_alt: f64,
}

/// Evaluates the t = 0 specialization. Requires `contract.valuation_time = 0`.
pub fn price_at_origin(
    params: &ModelParams,
    state: &MarketState,
    contract: &Contract,
) -> Result<OriginQuote> {
    if contract.valuation_time != 0.0 {
        return Err(Error::domain(format!(
            "origin forms require t = 0, got t = {}",
            contract.valuation_time
        )));
    }
    let quote = price(params, state, contract)?;

    let t_mat = contract.maturity;
    let k = params.kappa();
    let gn = params.gamma_norm();
    let h2 = 2.0 * params.hurst;
    let sr2 = params.sigma_r * params.sigma_r;

    // Shortcut forms: the moment integrals over (0, T) are Beta values.
    let rate_adj = h2 * t_mat.powf(k) / (gn * k * (k + 1.0))
        * (params.mu_r - sr2 * t_mat / (k + 2.0));
    let r_bar = state.short_rate + rate_adj;
    let p0 = (-r_bar * t_mat).exp();

    let cross = params.rho * params.sigma_r * params.sigma_s;
    let base = h2 * t_mat.powf(k - 1.0) / (gn * k);
    let sigma_bar_sq = base
        * (params.sigma_s * params.sigma_s
            + 2.0 * cross * t_mat / (k + 1.0)
            + 2.0 * sr2 * t_mat * t_mat / ((k + 1.0) * (k + 2.0)));
    let sigma_bar_sq_alt = base
        * (params.sigma_s * params.sigma_s
            + cross * t_mat / (k + 1.0)
            + sr2 * t_mat * t_mat / ((k + 1.0) * (k + 2.0)));

    let bs_form = |var_rate: f64| -> f64 {
        let total = var_rate * t_mat;
        if total <= 0.0 {
            return match contract.kind {
                OptionKind::Call => (state.stock - contract.strike * p0).max(0.0),
                OptionKind::Put => (contract.strike * p0 - state.stock).max(0.0),
            };
        }
        let sig_rt = total.sqrt();
        let d1 = ((state.stock / contract.strike).ln() + r_bar * t_mat + 0.5 * total) / sig_rt;
        let d2 = d1 - sig_rt;
        match contract.kind {
            OptionKind::Call => {
                state.stock * norm_cdf(d1) - contract.strike * p0 * norm_cdf(d2)
            }
            OptionKind::Put => {
                contract.strike * p0 * norm_cdf(-d2) - state.stock * norm_cdf(-d1)
            }
        }
    };

    Ok(OriginQuote {
        quote,
        p0,
        r_bar,
        sigma_bar_sq,
        price_bs_form: bs_form(sigma_bar_sq),
        sigma_bar_sq_alt,
        price_alt: bs_form(sigma_bar_sq_alt),
    })
}

/// Four-variant call-price grid in the standard comparison layout:
/// stock-level rows against maturity column groups, one column per variant.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceTable {
    pub strike: f64,
    pub valuation_time: f64,
    pub s_values: Vec<f64>,
    pub maturities: Vec<f64>,
    /// Prices indexed `[s][maturity][variant]` with variants in
    /// [`ModelVariant::ALL`] order, flattened row-major.
    pub prices: Vec<f64>,
}

impl PriceTable {
    pub fn get(&self, si: usize, ti: usize, vi: usize) -> f64 {
        let n_t = self.maturities.len();
        self.prices[(si * n_t + ti) * 4 + vi]
    }

    /// CSV with columns `S,T,variant,price`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("S,T,variant,price\n");
        for (si, s) in self.s_values.iter().enumerate() {
            for (ti, t) in self.maturities.iter().enumerate() {
                for (vi, v) in ModelVariant::ALL.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "{},{},{},{}",
                        fmt_g17(*s),
                        fmt_g17(*t),
                        v,
                        fmt_g17(self.get(si, ti, vi))
                    );
                }
            }
        }
        out
    }

    /// Aligned text table: one row per stock level, one four-column group per
    /// maturity, prices at 4 decimals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut header1 = format!("{:>6} ", "");
        let mut header2 = format!("{:>6} ", "S");
        for t in &self.maturities {
            header1.push_str(&format!("| {:^35} ", format!("T={t}")));
            for v in ModelVariant::ALL {
                header2.push_str(&format!("{:>8} ", v.column_label()));
            }
            header2.push_str("| ");
        }
        let _ = writeln!(out, "{}", header1.trim_end());
        let _ = writeln!(out, "{}", header2.trim_end().trim_end_matches('|').trim_end());
        for (si, s) in self.s_values.iter().enumerate() {
            let mut row = format!("{s:>6} ");
            for ti in 0..self.maturities.len() {
                for vi in 0..4 {
                    row.push_str(&format!("{:>8.4} ", self.get(si, ti, vi)));
                }
                row.push_str("| ");
            }
            let _ = writeln!(out, "{}", row.trim_end().trim_end_matches('|').trim_end());
        }
        out
    }
}

/// Round-trip-exact float formatting (17 significant digits).
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Prices the call grid for all four variants derived from `base` (the
/// variants override `(alpha, hurst)` and keep every other parameter).
pub fn price_table(
    base: &ModelParams,
    s_values: &[f64],
    maturities: &[f64],
    strike: f64,
    r0: f64,
    t: f64,
) -> Result<PriceTable> {
    if s_values.is_empty() || maturities.is_empty() {
        return Err(Error::domain("price table needs at least one S and one T"));
    }
    let variant_params: Vec<ModelParams> = ModelVariant::ALL
        .iter()
        .map(|v| base.with_variant(*v).validated())
        .collect::<Result<_>>()?;
    let mut prices = Vec::with_capacity(s_values.len() * maturities.len() * 4);
    for &s in s_values {
        for &maturity in maturities {
            let contract = Contract {
                strike,
                maturity,
                valuation_time: t,
                kind: OptionKind::Call,
            };
            for p in &variant_params {
                let state = MarketState {
                    short_rate: r0,
                    stock: s,
                };
                prices.push(price(p, &state, &contract)?.price);
            }
        }
    }
    Ok(PriceTable {
        strike,
        valuation_time: t,
        s_values: s_values.to_vec(),
        maturities: maturities.to_vec(),
        prices,
    })
}
