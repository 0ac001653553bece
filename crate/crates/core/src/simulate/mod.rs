//! Sample-path generation for the subordinated model and the Monte Carlo
//! pricing oracle.
//!
//! The operational clock is the inverse of an alpha-stable subordinator
//! simulated on a fine lattice; fractional Brownian motion is generated with
//! exact-covariance methods (circulant embedding, Cholesky fallback) on that
//! same lattice, so the subordinated processes are evaluated at exact lattice
//! points with no interpolation. Flat stretches of the clock therefore
//! reproduce bit-identical flat stretches of the rate and stock paths.

mod fbm;
mod rng;
mod stable;

pub use fbm::{correlated_fbm_pair, fbm_covariance, fbm_path, fbm_path_cholesky, fgn_autocovariance};
pub use rng::RngStream;
pub use stable::{inverse_subordinator, one_sided_stable, sample_stable_levels};

use std::fmt::Write as _;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::mathfn::norm_cdf;
use crate::model::ModelParams;

/// Default operational-time lattice step for a given physical horizon: fine
/// enough that the physical-time limit (`alpha` near 1) tracks `t` to well
/// under a percent of the horizon.
pub fn default_resolution(horizon: f64) -> f64 {
    horizon / 2000.0
}

/// A simulated path of the model: physical time grid, operational clock, and
/// the aligned short-rate and stock paths.
#[derive(Debug, Clone, PartialEq)]
pub struct PathBundle {
    pub t_grid: Vec<f64>,
    /// Inverse-subordinator values on `t_grid`; nondecreasing, starts at 0.
    pub t_alpha: Vec<f64>,
    pub r_path: Vec<f64>,
    pub s_path: Vec<f64>,
}

impl PathBundle {
    /// Appends this path in the long CSV schema
    /// `path_id,t,T_alpha,r,S` (no header), 17 significant digits.
    pub fn write_csv_rows(&self, path_id: usize, out: &mut String) {
        for i in 0..self.t_grid.len() {
            let _ = writeln!(
                out,
                "{},{:.16e},{:.16e},{:.16e},{:.16e}",
                path_id, self.t_grid[i], self.t_alpha[i], self.r_path[i], self.s_path[i]
            );
        }
    }

    /// Header row for the long CSV schema.
    pub const CSV_HEADER: &'static str = "path_id,t,T_alpha,r,S";
}

fn check_sim_params(params: &ModelParams) -> Result<()> {
    // The simulator admits the wider subordinator range alpha in (0, 1]; the
    // pricing constraint 2*alpha - alpha*H > 1 is not needed here.
    if !(params.alpha > 0.0 && params.alpha <= 1.0) {
        return Err(Error::domain(format!(
            "simulation requires alpha in (0, 1], got {}",
            params.alpha
        )));
    }
    if !(params.hurst >= 0.5 && params.hurst < 1.0) {
        return Err(Error::domain(format!(
            "hurst must lie in [1/2, 1), got {}",
            params.hurst
        )));
    }
    if !(params.sigma_r >= 0.0 && params.sigma_s >= 0.0) {
        return Err(Error::domain("volatilities must be >= 0"));
    }
    if !(params.rho >= -1.0 && params.rho <= 1.0) {
        return Err(Error::domain(format!(
            "rho must lie in [-1, 1], got {}",
            params.rho
        )));
    }
    Ok(())
}

/// Simulates one joint path of the clock, the short rate and the stock on a
/// uniform physical-time grid.
///
/// The rate is `r(t) = r0 + mu_r T_alpha(t) + sigma_r B1(T_alpha(t))` and the
/// stock follows the pathwise exponential
/// `S(t) = s0 exp(mu_s T_alpha(t) - sigma_s^2 T_alpha(t)^{2H} / 2 + sigma_s B2(T_alpha(t)))`,
/// which reduces to geometric Brownian motion at `hurst = 1/2` (see NOTES.md
/// for the solution convention). At `alpha = 1` the clock is the identity.
///
/// Lane use of `stream`: callers producing ensembles should pass the path
/// index as the stream id; the subordinator and the FBM pair internally use
/// disjoint sub-lanes `4*stream_id` and `4*stream_id + 1`.
pub fn model_paths(
    params: &ModelParams,
    r0: f64,
    s0: f64,
    t_grid: &[f64],
    stream: RngStream,
    resolution: Option<f64>,
) -> Result<PathBundle> {
    check_sim_params(params)?;
    if !(s0 > 0.0) {
        return Err(Error::domain(format!("s0 must be > 0, got {s0}")));
    }
    stable::check_uniform_from_zero(t_grid, "t_grid")?;

    let horizon = *t_grid.last().expect("nonempty grid");
    let (indices, step) = if params.alpha == 1.0 {
        // Physical-time limit: the clock is the identity and the FBM lattice
        // is the physical grid itself.
        ((0..t_grid.len()).collect::<Vec<usize>>(), t_grid[1] - t_grid[0])
    } else {
        let dtau = resolution.unwrap_or_else(|| default_resolution(horizon.max(f64::MIN_POSITIVE)));
        let idx = stable::inverse_subordinator_indices(
            params.alpha,
            t_grid,
            stream.sublane(0),
            dtau,
        )?;
        (idx, dtau)
    };
    let max_idx = *indices.iter().max().expect("nonempty grid");
    let t_alpha: Vec<f64> = indices.iter().map(|&k| k as f64 * step).collect();

    // FBM pair on the operational lattice 0, step, ..., max_idx*step; the
    // clock values land exactly on lattice points.
    let lattice: Vec<f64> = (0..=max_idx).map(|k| k as f64 * step).collect();
    let (b1, b2) = if lattice.len() >= 2 {
        correlated_fbm_pair(params.hurst, params.rho, &lattice, stream.sublane(1))?
    } else {
        (vec![0.0], vec![0.0])
    };

    let two_h = 2.0 * params.hurst;
    let mut r_path = Vec::with_capacity(t_grid.len());
    let mut s_path = Vec::with_capacity(t_grid.len());
    for (i, &k) in indices.iter().enumerate() {
        let tau = t_alpha[i];
        r_path.push(r0 + params.mu_r * tau + params.sigma_r * b1[k]);
        s_path.push(
            s0 * (params.mu_s * tau - 0.5 * params.sigma_s * params.sigma_s * tau.powf(two_h)
                + params.sigma_s * b2[k])
                .exp(),
        );
    }
    Ok(PathBundle {
        t_grid: t_grid.to_vec(),
        t_alpha,
        r_path,
        s_path,
    })
}

/// Monte Carlo estimate of the transformed pricing kernel
/// `E[(z_T - K)^+]` with `z_T` lognormal, mean `z0`, log-variance `v`.
///
/// Returns `(estimate, standard_error)`. Per-path substreams are derived as
/// `stream_id + 1 + path_index`, and the reduction runs in fixed path order,
/// so the result is independent of any outer parallelism.
pub fn mc_theta_price(
    z0: f64,
    strike: f64,
    v: f64,
    n_paths: usize,
    stream: RngStream,
) -> Result<(f64, f64)> {
    if !(z0 > 0.0) {
        return Err(Error::domain(format!("z0 must be > 0, got {z0}")));
    }
    if !(strike >= 0.0) {
        return Err(Error::domain(format!("strike must be >= 0, got {strike}")));
    }
    if !(v >= 0.0) {
        return Err(Error::domain(format!("variance must be >= 0, got {v}")));
    }
    if n_paths < 1000 {
        return Err(Error::domain(format!(
            "need at least 1000 paths, got {n_paths}"
        )));
    }
    if v == 0.0 {
        return Ok(((z0 - strike).max(0.0), 0.0));
    }
    let sqrt_v = v.sqrt();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for i in 0..n_paths {
        let mut rng = stream.substream(1 + i as u64).rng();
        let z: f64 = rng.sample(StandardNormal);
        let terminal = z0 * (-0.5 * v + sqrt_v * z).exp();
        let payoff = (terminal - strike).max(0.0);
        sum += payoff;
        sum_sq += payoff * payoff;
    }
    let n = n_paths as f64;
    let mean = sum / n;
    let var = (sum_sq - n * mean * mean).max(0.0) / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
}

/// Closed form of the transformed kernel: `z0 Phi(d1) - K Phi(d2)` with
/// `d1 = [ln(z0/K) + v/2]/sqrt(v)`. This is what [`mc_theta_price`] estimates.
pub fn theta_closed_form(z0: f64, strike: f64, v: f64) -> f64 {
    if v <= 0.0 {
        return (z0 - strike).max(0.0);
    }
    if strike == 0.0 {
        return z0;
    }
    let sqrt_v = v.sqrt();
    let d1 = ((z0 / strike).ln() + 0.5 * v) / sqrt_v;
    let d2 = d1 - sqrt_v;
    z0 * norm_cdf(d1) - strike * norm_cdf(d2)
}
