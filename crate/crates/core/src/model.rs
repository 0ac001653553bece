//! Model parameters, contracts, and variant classification.
//!
//! The short rate follows an arithmetic process `dX = mu_r dtau + sigma_r dB1(tau)`
//! and the stock a geometric one `dX = mu_s X dtau + sigma_s X dB2(tau)`, both
//! driven by fractional Brownian motions with Hurst parameter `H` and
//! correlation `rho`, and both run on the operational clock `T_alpha(t)` of an
//! inverse alpha-stable subordinator. The pair `(alpha, hurst)` selects one of
//! four nested model variants; `alpha = 1` collapses the clock to physical
//! time and `hurst = 1/2` collapses the noise to Brownian motion.

use std::fmt;

use crate::error::{Error, Result};
use crate::mathfn::gamma;

/// All model constants. Pricing never reads `mu_s`; it is retained for path
/// simulation only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Subdiffusion exponent, in (1/2, 1]. The value 1 is the physical-time limit.
    pub alpha: f64,
    /// Hurst parameter, in [1/2, 1).
    pub hurst: f64,
    /// Short-rate drift.
    pub mu_r: f64,
    /// Short-rate volatility, >= 0.
    pub sigma_r: f64,
    /// Stock drift (simulation only).
    pub mu_s: f64,
    /// Stock volatility, >= 0.
    pub sigma_s: f64,
    /// Correlation between the two driving FBMs, in [-1, 1].
    pub rho: f64,
}

impl ModelParams {
    /// Checks every domain invariant, returning the record unchanged iff all
    /// hold. The combined constraint `2*alpha - alpha*hurst > 1` comes from
    /// the bond derivation and holds automatically at `alpha = 1`.
    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    /// Same checks as [`validated`](Self::validated), by reference.
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.5 && self.alpha <= 1.0) {
            return Err(Error::domain(format!(
                "alpha must lie in (1/2, 1], got {}",
                self.alpha
            )));
        }
        if !(self.hurst >= 0.5 && self.hurst < 1.0) {
            return Err(Error::domain(format!(
                "hurst must lie in [1/2, 1), got {}",
                self.hurst
            )));
        }
        let c = 2.0 * self.alpha - self.alpha * self.hurst;
        if !(c > 1.0) {
            return Err(Error::domain(format!(
                "2\u{3b1}\u{2212}\u{3b1}H \u{2264} 1 (got {c}); need 2\u{3b1}\u{2212}\u{3b1}H > 1"
            )));
        }
        if !(self.sigma_r >= 0.0) {
            return Err(Error::domain(format!(
                "sigma_r must be >= 0, got {}",
                self.sigma_r
            )));
        }
        if !(self.sigma_s >= 0.0) {
            return Err(Error::domain(format!(
                "sigma_s must be >= 0, got {}",
                self.sigma_s
            )));
        }
        if !(self.rho >= -1.0 && self.rho <= 1.0) {
            return Err(Error::domain(format!(
                "rho must lie in [-1, 1], got {}",
                self.rho
            )));
        }
        if !(self.mu_r.is_finite() && self.mu_s.is_finite()) {
            return Err(Error::domain("drift parameters must be finite"));
        }
        Ok(())
    }

    /// Classifies `(alpha, hurst)` into the four named variants. Total on
    /// validated parameters.
    pub fn variant(&self) -> ModelVariant {
        match (self.alpha == 1.0, self.hurst == 0.5) {
            (true, true) => ModelVariant::Merton,
            (false, true) => ModelVariant::SubMerton,
            (true, false) => ModelVariant::FracMerton,
            (false, false) => ModelVariant::SubFracMerton,
        }
    }

    /// Returns a copy with `(alpha, hurst)` overridden to the given variant's
    /// defining values (`SubMerton` keeps `alpha`, `FracMerton` keeps `hurst`).
    pub fn with_variant(&self, variant: ModelVariant) -> ModelParams {
        let (alpha, hurst) = match variant {
            ModelVariant::Merton => (1.0, 0.5),
            ModelVariant::SubMerton => (self.alpha, 0.5),
            ModelVariant::FracMerton => (1.0, self.hurst),
            ModelVariant::SubFracMerton => (self.alpha, self.hurst),
        };
        ModelParams {
            alpha,
            hurst,
            ..*self
        }
    }

    /// The power exponent `kappa = 2*alpha*hurst` of the operational-clock
    /// kernel `s^{kappa-1}`. Lies in (1/2, 2) on the admitted domain.
    pub fn kappa(&self) -> f64 {
        2.0 * self.alpha * self.hurst
    }

    /// `Gamma(alpha)^{2H}`, the clock normalization shared by every formula.
    pub fn gamma_norm(&self) -> f64 {
        gamma(self.alpha)
            .expect("alpha validated positive")
            .powf(2.0 * self.hurst)
    }

    /// The operational-clock variance density
    /// `g(t) = H * t^{2*alpha*H - 1} / Gamma(alpha)^{2H}`.
    ///
    /// This single factor scales every diffusion coefficient in the model
    /// PDEs: the effective stock and rate variances are `g(t)*sigma_s^2` and
    /// `g(t)*sigma_r^2`. At `alpha = 1, hurst = 1/2` it is the constant 1/2.
    pub fn clock_scale(&self, t: f64) -> f64 {
        self.hurst * t.powf(self.kappa() - 1.0) / self.gamma_norm()
    }
}

/// Call-or-put flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptionKind {
    Call,
    Put,
}

impl fmt::Display for OptionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OptionKind::Call => write!(f, "call"),
            OptionKind::Put => write!(f, "put"),
        }
    }
}

/// European option contract.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contract {
    /// Strike price, > 0.
    pub strike: f64,
    /// Maturity T.
    pub maturity: f64,
    /// Valuation time t, with 0 <= t <= T.
    pub valuation_time: f64,
    pub kind: OptionKind,
}

impl Contract {
    pub fn validate(&self) -> Result<()> {
        if !(self.strike > 0.0) {
            return Err(Error::domain(format!(
                "strike must be > 0, got {}",
                self.strike
            )));
        }
        if !(self.valuation_time >= 0.0 && self.valuation_time <= self.maturity) {
            return Err(Error::domain(format!(
                "need 0 <= valuation_time <= maturity, got t = {}, T = {}",
                self.valuation_time, self.maturity
            )));
        }
        Ok(())
    }

    /// Time to maturity `T - t`.
    pub fn tau(&self) -> f64 {
        self.maturity - self.valuation_time
    }
}

/// Current market observables. The short rate is unrestricted in sign: the
/// rate process is arithmetic and has no positivity floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketState {
    pub short_rate: f64,
    /// Stock price, > 0.
    pub stock: f64,
}

impl MarketState {
    pub fn validate(&self) -> Result<()> {
        if !(self.stock > 0.0) {
            return Err(Error::domain(format!(
                "stock must be > 0, got {}",
                self.stock
            )));
        }
        if !self.short_rate.is_finite() {
            return Err(Error::domain("short_rate must be finite"));
        }
        Ok(())
    }
}

/// The four nested model variants, keyed by whether the clock is subordinated
/// (`alpha < 1`) and whether the noise is fractional (`hurst > 1/2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelVariant {
    Merton,
    SubMerton,
    FracMerton,
    SubFracMerton,
}

impl ModelVariant {
    /// Fixed display/emission order used by the price table.
    pub const ALL: [ModelVariant; 4] = [
        ModelVariant::Merton,
        ModelVariant::SubMerton,
        ModelVariant::FracMerton,
        ModelVariant::SubFracMerton,
    ];

    /// Short column label (`P_M`, `P_SM`, `P_FM`, `P_SFM`).
    pub fn column_label(&self) -> &'static str {
        match self {
            ModelVariant::Merton => "P_M",
            ModelVariant::SubMerton => "P_SM",
            ModelVariant::FracMerton => "P_FM",
            ModelVariant::SubFracMerton => "P_SFM",
        }
    }
}

impl fmt::Display for ModelVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ModelVariant::Merton => "Merton",
            ModelVariant::SubMerton => "SubMerton",
            ModelVariant::FracMerton => "FracMerton",
            ModelVariant::SubFracMerton => "SubFracMerton",
        };
        write!(f, "{name}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ModelParams {
        ModelParams {
            alpha: 0.9,
            hurst: 0.6,
            mu_r: 0.5,
            sigma_r: 0.3,
            mu_s: 0.0,
            sigma_s: 0.4,
            rho: 0.4,
        }
    }

    #[test]
    fn accepts_reference_parameters() {
        let p = base().validated().unwrap();
        assert_eq!(p, base());
        // 2*0.9 - 0.9*0.6 = 1.26 > 1
        assert!(2.0 * p.alpha - p.alpha * p.hurst > 1.0);
    }

    #[test]
    fn classical_limit_is_merton() {
        let p = ModelParams {
            alpha: 1.0,
            hurst: 0.5,
            ..base()
        }
        .validated()
        .unwrap();
        assert_eq!(p.variant(), ModelVariant::Merton);
    }

    #[test]
    fn rejects_combined_constraint_violation() {
        // 2*0.6 - 0.6*0.5 = 0.9 <= 1
        let err = ModelParams {
            alpha: 0.6,
            hurst: 0.5,
            ..base()
        }
        .validated()
        .unwrap_err();
        match err {
            Error::Domain(msg) => assert!(msg.contains('\u{2264}'), "message: {msg}"),
            other => panic!("expected Domain, got {other:?}"),
        }
    }

    #[test]
    fn rejects_out_of_range_fields() {
        assert!(ModelParams { alpha: 0.5, ..base() }.validate().is_err());
        assert!(ModelParams { alpha: 1.2, ..base() }.validate().is_err());
        assert!(ModelParams { hurst: 0.4, ..base() }.validate().is_err());
        assert!(ModelParams { hurst: 1.0, ..base() }.validate().is_err());
        assert!(ModelParams { sigma_r: -0.1, ..base() }.validate().is_err());
        assert!(ModelParams { sigma_s: -1.0, ..base() }.validate().is_err());
        assert!(ModelParams { rho: -1.5, ..base() }.validate().is_err());
        assert!(ModelParams { mu_r: f64::NAN, ..base() }.validate().is_err());
    }

    #[test]
    fn validation_is_idempotent() {
        let once = base().validated().unwrap();
        let twice = once.validated().unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn classification_covers_all_variants() {
        let cases = [
            (1.0, 0.5, ModelVariant::Merton),
            (0.9, 0.5, ModelVariant::SubMerton),
            (1.0, 0.6, ModelVariant::FracMerton),
            (0.9, 0.6, ModelVariant::SubFracMerton),
        ];
        for (alpha, hurst, want) in cases {
            let p = ModelParams {
                alpha,
                hurst,
                ..base()
            }
            .validated()
            .unwrap();
            assert_eq!(p.variant(), want);
        }
    }

    #[test]
    fn variant_override_roundtrips() {
        let p = base().validated().unwrap();
        for v in ModelVariant::ALL {
            let q = p.with_variant(v).validated().unwrap();
            assert_eq!(q.variant(), v);
            // untouched fields survive
            assert_eq!(q.sigma_r, p.sigma_r);
            assert_eq!(q.rho, p.rho);
        }
    }

    #[test]
    fn clock_scale_is_half_in_classical_limit() {
        let p = ModelParams {
            alpha: 1.0,
            hurst: 0.5,
            ..base()
        };
        for t in [0.01, 0.5, 3.0] {
            assert!((p.clock_scale(t) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn contract_and_state_validation() {
        let c = Contract {
            strike: 3.0,
            maturity: 0.3,
            valuation_time: 0.0,
            kind: OptionKind::Call,
        };
        c.validate().unwrap();
        assert!(Contract { strike: 0.0, ..c }.validate().is_err());
        assert!(Contract {
            valuation_time: 0.4,
            ..c
        }
        .validate()
        .is_err());

        MarketState {
            short_rate: -0.02,
            stock: 2.0,
        }
        .validate()
        .unwrap();
        assert!(MarketState {
            short_rate: 0.1,
            stock: 0.0
        }
        .validate()
        .is_err());
    }
}
