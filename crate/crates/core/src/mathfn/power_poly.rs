//! Closed-form evaluation of the power-times-polynomial integrals.
//!
//! Every integral in the bond and option formulas has the shape
//!
//! ```text
//! int_a^b [c0 + c1*(T-s) + c2*(T-s)^2] * s^{kappa-1} ds
//! ```
//!
//! with `kappa = 2*alpha*hurst > 0`. Expanding the polynomial factor into
//! powers of `s` reduces the integrand to `p0*s^{kappa-1} + p1*s^kappa +
//! p2*s^{kappa+1}`, whose antiderivatives are elementary. The integrable
//! endpoint singularity at `s = 0` (when `kappa < 1`) is handled exactly:
//! the antiderivative `s^kappa / kappa` vanishes there.

use crate::error::{Error, Result};

/// Specification of one power-times-polynomial integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerPolyIntegral {
    /// Power exponent `kappa` of the `s^{kappa-1}` kernel, > 0.
    pub kappa: f64,
    /// Horizon `T` appearing inside the polynomial factor `(T-s)^j`.
    pub horizon: f64,
    /// Polynomial coefficients `(c0, c1, c2)` of `c0 + c1*(T-s) + c2*(T-s)^2`.
    pub coeffs: [f64; 3],
    /// Lower integration bound `a`, with `0 <= a`.
    pub lower: f64,
    /// Upper integration bound `b`, with `a <= b <= T`.
    pub upper: f64,
}

impl PowerPolyIntegral {
    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0) {
            return Err(Error::domain(format!(
                "kappa must be > 0, got {}",
                self.kappa
            )));
        }
        if !(self.lower >= 0.0 && self.lower <= self.upper && self.upper <= self.horizon) {
            return Err(Error::domain(format!(
                "need 0 <= lower <= upper <= horizon, got a = {}, b = {}, T = {}",
                self.lower, self.upper, self.horizon
            )));
        }
        if !self.coeffs.iter().all(|c| c.is_finite()) {
            return Err(Error::domain("coefficients must be finite"));
        }
        Ok(())
    }

    /// The integrand `[c0 + c1*(T-s) + c2*(T-s)^2] * s^{kappa-1}`, exposed so
    /// the quadrature oracle can integrate exactly what the closed form claims.
    pub fn integrand(&self, s: f64) -> f64 {
        let u = self.horizon - s;
        (self.coeffs[0] + self.coeffs[1] * u + self.coeffs[2] * u * u)
            * s.powf(self.kappa - 1.0)
    }
}

/// Exact value of the integral described by `spec`.
pub fn power_poly_integral(spec: &PowerPolyIntegral) -> Result<f64> {
    spec.validate()?;
    let [c0, c1, c2] = spec.coeffs;
    let t = spec.horizon;
    let k = spec.kappa;
    // c0 + c1*(T-s) + c2*(T-s)^2 expanded in powers of s.
    let p0 = c0 + c1 * t + c2 * t * t;
    let p1 = -(c1 + 2.0 * c2 * t);
    let p2 = c2;
    let anti = |s: f64| -> f64 {
        if s == 0.0 {
            return 0.0;
        }
        let sk = s.powf(k);
        sk / k * p0 + sk * s / (k + 1.0) * p1 + sk * s * s / (k + 2.0) * p2
    };
    Ok(anti(spec.upper) - anti(spec.lower))
}

/// The mirrored kernel form `int_a^b (T-s)^{kappa-1} * (d1*s + d2*s^2) ds`,
/// mapped onto [`power_poly_integral`] by the substitution `s -> T - s`.
///
/// This is the shape the bond exponent integrates over `(0, tau)`.
pub fn power_poly_integral_mirrored(
    kappa: f64,
    horizon: f64,
    d1: f64,
    d2: f64,
    lower: f64,
    upper: f64,
) -> Result<f64> {
    power_poly_integral(&PowerPolyIntegral {
        kappa,
        horizon,
        coeffs: [0.0, d1, d2],
        lower: horizon - upper,
        upper: horizon - lower,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mathfn::{adaptive_quad, adaptive_quad_singular};
    use proptest::prelude::*;

    fn spec(kappa: f64, horizon: f64, coeffs: [f64; 3], lower: f64, upper: f64) -> PowerPolyIntegral {
        PowerPolyIntegral {
            kappa,
            horizon,
            coeffs,
            lower,
            upper,
        }
    }

    #[test]
    fn unit_kernel_unit_interval() {
        // kappa = 1 makes the kernel s^0; the constant coefficient integrates to 1.
        let v = power_poly_integral(&spec(1.0, 1.0, [1.0, 0.0, 0.0], 0.0, 1.0)).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn beta_two_two() {
        // int_0^1 (1-s)*s ds = 1/6
        let v = power_poly_integral(&spec(2.0, 1.0, [0.0, 1.0, 0.0], 0.0, 1.0)).unwrap();
        assert!((v - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn fractional_kappa_closed_form() {
        // int_0^1 (1-s)*s^{kappa-1} ds = 1/(kappa*(kappa+1))
        let k = 1.08;
        let v = power_poly_integral(&spec(k, 1.0, [0.0, 1.0, 0.0], 0.0, 1.0)).unwrap();
        let want = 1.0 / (k * (k + 1.0)); // = 0.44515669515669...
        assert!((v - want).abs() < 1e-14, "got {v}, want {want}");
        // cross-check against the quadrature oracle
        let q = adaptive_quad(|s| (1.0 - s) * s.powf(k - 1.0), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - q).abs() < 1e-10);
    }

    #[test]
    fn mirrored_form_matches_substitution() {
        // int_0^tau (T-s)^{kappa-1} * s ds with tau = T is a Beta integral:
        // T^{kappa+1} / (kappa*(kappa+1)).
        let (k, t) = (0.7, 2.3);
        let v = power_poly_integral_mirrored(k, t, 1.0, 0.0, 0.0, t).unwrap();
        let want = t.powf(k + 1.0) / (k * (k + 1.0));
        assert!(((v - want) / want).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_bounds() {
        assert!(power_poly_integral(&spec(1.0, 1.0, [1.0, 0.0, 0.0], -0.1, 1.0)).is_err());
        assert!(power_poly_integral(&spec(1.0, 1.0, [1.0, 0.0, 0.0], 0.8, 0.2)).is_err());
        assert!(power_poly_integral(&spec(1.0, 1.0, [1.0, 0.0, 0.0], 0.0, 1.5)).is_err());
        assert!(power_poly_integral(&spec(0.0, 1.0, [1.0, 0.0, 0.0], 0.0, 1.0)).is_err());
        assert!(power_poly_integral(&spec(1.0, 1.0, [f64::NAN, 0.0, 0.0], 0.0, 1.0)).is_err());
    }

    #[test]
    fn empty_range_is_exact_zero() {
        let v = power_poly_integral(&spec(0.9, 1.0, [0.3, -0.2, 1.1], 0.4, 0.4)).unwrap();
        assert_eq!(v, 0.0);
    }

    proptest! {
        // Randomized sweep of the closed form against the quadrature oracle,
        // including singular-at-zero kernels (kappa < 1).
        #[test]
        fn agrees_with_quadrature(
            kappa in 0.5f64..2.0,
            horizon in 0.1f64..5.0,
            c0 in -1.0f64..1.0,
            c1 in -1.0f64..1.0,
            c2 in -1.0f64..1.0,
            frac_a in 0.0f64..1.0,
            frac_b in 0.0f64..1.0,
        ) {
            let (fa, fb) = if frac_a <= frac_b { (frac_a, frac_b) } else { (frac_b, frac_a) };
            let s = spec(kappa, horizon, [c0, c1, c2], fa * horizon, fb * horizon);
            let v = power_poly_integral(&s).unwrap();
            let q = if s.lower == 0.0 && kappa < 1.0 {
                adaptive_quad_singular(|x| s.integrand(x), s.lower, s.upper, 1e-11, kappa)
            } else {
                adaptive_quad(|x| s.integrand(x), s.lower, s.upper, 1e-11)
            }.unwrap();
            prop_assert!((v - q).abs() <= 1e-8 * (1.0 + v.abs()), "closed {v} quad {q}");
        }
    }
}
