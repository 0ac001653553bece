//! Exact-covariance fractional Brownian motion.
//!
//! Paths are generated from the fractional Gaussian noise of the unit-spaced
//! grid via circulant embedding (Davies-Harte) and rescaled by
//! self-similarity, `B(k*dt) = dt^H * B(k)` in distribution. If the
//! embedding eigenvalues come out negative the generator falls back to a
//! direct Cholesky factorization of the path covariance; both routes are
//! distributionally exact, no Euler or wavelet approximation is involved.

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rustfft::{num_complex::Complex, FftPlanner};

use crate::error::{Error, Result};
use crate::simulate::rng::RngStream;
use crate::simulate::stable::check_uniform_from_zero;

/// FBM covariance `(s^{2H} + t^{2H} - |t-s|^{2H}) / 2`.
pub fn fbm_covariance(hurst: f64, s: f64, t: f64) -> f64 {
    let two_h = 2.0 * hurst;
    0.5 * (s.powf(two_h) + t.powf(two_h) - (t - s).abs().powf(two_h))
}

/// Autocovariance of unit-spaced fractional Gaussian noise at integer `lag`.
pub fn fgn_autocovariance(hurst: f64, lag: usize) -> f64 {
    let two_h = 2.0 * hurst;
    let k = lag as f64;
    0.5 * ((k + 1.0).powf(two_h) - 2.0 * k.powf(two_h) + (k - 1.0).abs().powf(two_h))
}

fn check_hurst(hurst: f64) -> Result<()> {
    if !(0.5..1.0).contains(&hurst) {
        return Err(Error::domain(format!(
            "hurst must lie in [1/2, 1), got {hurst}"
        )));
    }
    Ok(())
}

// Circulant eigenvalues of the FGN covariance embedded on a ring of length
// 2*(n-1). Returns None when the embedding is not nonnegative definite.
fn embedding_eigenvalues(hurst: f64, n_inc: usize) -> Option<Vec<f64>> {
    let m = 2 * n_inc;
    let mut row: Vec<Complex<f64>> = (0..m)
        .map(|j| {
            let lag = j.min(m - j);
            Complex::new(fgn_autocovariance(hurst, lag), 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut row);
    let max = row.iter().map(|c| c.re).fold(0.0f64, f64::max);
    let mut eigen = Vec::with_capacity(m);
    for c in row {
        if c.re < -1e-10 * max.max(1.0) {
            return None;
        }
        eigen.push(c.re.max(0.0));
    }
    Some(eigen)
}

// One unit-spaced FGN vector of length n_inc via Davies-Harte.
fn fgn_davies_harte(eigen: &[f64], n_inc: usize, rng: &mut ChaCha12Rng) -> Vec<f64> {
    let m = eigen.len();
    debug_assert_eq!(m, 2 * n_inc);
    let mf = m as f64;
    let mut spectrum = vec![Complex::new(0.0, 0.0); m];
    let z0: f64 = rng.sample(StandardNormal);
    spectrum[0] = Complex::new((eigen[0] / mf).sqrt() * z0, 0.0);
    let zh: f64 = rng.sample(StandardNormal);
    spectrum[n_inc] = Complex::new((eigen[n_inc] / mf).sqrt() * zh, 0.0);
    for j in 1..n_inc {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        let scale = (eigen[j] / (2.0 * mf)).sqrt();
        spectrum[j] = Complex::new(scale * a, scale * b);
        spectrum[m - j] = spectrum[j].conj();
    }
    FftPlanner::new().plan_fft_forward(m).process(&mut spectrum);
    spectrum[..n_inc].iter().map(|c| c.re).collect()
}

// Lower-triangular Cholesky factor of the FBM covariance at the positive
// grid times; used as the exact fallback and by the method-level tests.
pub(crate) fn fbm_cholesky_factor(hurst: f64, times: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = times.len();
    let mut l = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = fbm_covariance(hurst, times[i], times[j]);
            for k in 0..j {
                sum -= l[i][k] * l[j][k];
            }
            if i == j {
                if sum <= 0.0 {
                    return Err(Error::domain(format!(
                        "covariance factorization failed at pivot {i} ({sum:.3e})"
                    )));
                }
                l[i][j] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    Ok(l)
}

fn fgn_unit(hurst: f64, n_inc: usize, rng: &mut ChaCha12Rng) -> Result<Vec<f64>> {
    // Tiny grids go straight to the direct factorization.
    if n_inc >= 4 {
        if let Some(eigen) = embedding_eigenvalues(hurst, n_inc) {
            return Ok(fgn_davies_harte(&eigen, n_inc, rng));
        }
    }
    let times: Vec<f64> = (1..=n_inc).map(|k| k as f64).collect();
    let l = fbm_cholesky_factor(hurst, &times)?;
    let z: Vec<f64> = (0..n_inc).map(|_| rng.sample(StandardNormal)).collect();
    let mut path = vec![0.0f64; n_inc];
    for i in 0..n_inc {
        let mut acc = 0.0;
        for k in 0..=i {
            acc += l[i][k] * z[k];
        }
        path[i] = acc;
    }
    // convert path values to increments
    let mut fgn = path;
    for i in (1..n_inc).rev() {
        fgn[i] -= fgn[i - 1];
    }
    Ok(fgn)
}

fn assemble(fgn: &[f64], dt_pow_h: f64) -> Vec<f64> {
    let mut b = Vec::with_capacity(fgn.len() + 1);
    b.push(0.0);
    let mut acc = 0.0;
    for &x in fgn {
        acc += x;
        b.push(acc * dt_pow_h);
    }
    b
}

/// Zero-mean FBM sample on a uniform grid starting at 0, exact in
/// distribution (covariance `(s^{2H}+t^{2H}-|t-s|^{2H})/2`).
pub fn fbm_path(hurst: f64, tau_grid: &[f64], stream: RngStream) -> Result<Vec<f64>> {
    check_hurst(hurst)?;
    check_uniform_from_zero(tau_grid, "tau_grid")?;
    let dt = tau_grid[1] - tau_grid[0];
    let mut rng = stream.rng();
    let fgn = fgn_unit(hurst, tau_grid.len() - 1, &mut rng)?;
    Ok(assemble(&fgn, dt.powf(hurst)))
}

/// FBM sample via the direct covariance factorization, bypassing the
/// circulant embedding. Same distribution as [`fbm_path`]; exposed so tests
/// can exercise the fallback route on its own.
pub fn fbm_path_cholesky(hurst: f64, tau_grid: &[f64], stream: RngStream) -> Result<Vec<f64>> {
    check_hurst(hurst)?;
    check_uniform_from_zero(tau_grid, "tau_grid")?;
    let l = fbm_cholesky_factor(hurst, &tau_grid[1..])?;
    let mut rng = stream.rng();
    let n = tau_grid.len() - 1;
    let z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let mut b = vec![0.0f64; n + 1];
    for i in 0..n {
        let mut acc = 0.0;
        for k in 0..=i {
            acc += l[i][k] * z[k];
        }
        b[i + 1] = acc;
    }
    Ok(b)
}

/// Two FBM paths with cross-covariance `rho` times the FBM covariance,
/// built as `B2 = rho*B1 + sqrt(1-rho^2)*B_perp`. At `rho = +/-1` the second
/// path is exactly `+/-B1`.
pub fn correlated_fbm_pair(
    hurst: f64,
    rho: f64,
    tau_grid: &[f64],
    stream: RngStream,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_hurst(hurst)?;
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::domain(format!(
            "rho must lie in [-1, 1], got {rho}"
        )));
    }
    check_uniform_from_zero(tau_grid, "tau_grid")?;
    let dt = tau_grid[1] - tau_grid[0];
    let n_inc = tau_grid.len() - 1;
    let mut rng = stream.rng();
    let fgn1 = fgn_unit(hurst, n_inc, &mut rng)?;
    let fgn_perp = fgn_unit(hurst, n_inc, &mut rng)?;
    let comp = (1.0 - rho * rho).sqrt();
    let fgn2: Vec<f64> = fgn1
        .iter()
        .zip(&fgn_perp)
        .map(|(a, b)| rho * a + comp * b)
        .collect();
    let dt_pow_h = dt.powf(hurst);
    Ok((assemble(&fgn1, dt_pow_h), assemble(&fgn2, dt_pow_h)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, horizon: f64) -> Vec<f64> {
        (0..n).map(|i| horizon * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn cholesky_reproduces_covariance_exactly() {
        // Method-level exactness: L L^T must match the analytic covariance
        // to 1e-10 with no Monte Carlo noise involved.
        for (n, hurst) in [(128usize, 0.75f64), (512, 0.6)] {
            let times: Vec<f64> = (1..=n).map(|k| k as f64 / n as f64).collect();
            let l = fbm_cholesky_factor(hurst, &times).unwrap();
            let mut worst = 0.0f64;
            for i in 0..n {
                for j in 0..=i {
                    let mut acc = 0.0;
                    for k in 0..=j {
                        acc += l[i][k] * l[j][k];
                    }
                    worst = worst.max((acc - fbm_covariance(hurst, times[i], times[j])).abs());
                }
            }
            assert!(worst < 1e-10, "n = {n}, H = {hurst}: {worst}");
        }
    }

    #[test]
    fn embedding_eigenvalues_reconstruct_autocovariance() {
        for hurst in [0.5, 0.6, 0.75, 0.9] {
            let n_inc = 64;
            let eigen = embedding_eigenvalues(hurst, n_inc)
                .unwrap_or_else(|| panic!("embedding negative at H = {hurst}"));
            let m = eigen.len();
            // Inverse transform of the eigenvalues must return the embedded
            // covariance sequence.
            let mut spec: Vec<Complex<f64>> =
                eigen.iter().map(|&e| Complex::new(e / m as f64, 0.0)).collect();
            FftPlanner::new().plan_fft_inverse(m).process(&mut spec);
            for lag in 0..n_inc {
                let want = fgn_autocovariance(hurst, lag);
                assert!(
                    (spec[lag].re - want).abs() < 1e-10,
                    "H = {hurst}, lag {lag}: {} vs {want}",
                    spec[lag].re
                );
            }
        }
    }

    #[test]
    fn brownian_increments_are_uncorrelated() {
        let g = grid(257, 1.0);
        let n_paths = 20_000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for i in 0..n_paths {
            let b = fbm_path(0.5, &g, RngStream::with_stream(31, i)).unwrap();
            let inc: Vec<f64> = b.windows(2).map(|w| w[1] - w[0]).collect();
            let mut num = 0.0;
            let mut den = 0.0;
            for w in inc.windows(2) {
                num += w[0] * w[1];
            }
            for x in &inc {
                den += x * x;
            }
            let rho1 = num / den;
            sum += rho1;
            sum_sq += rho1 * rho1;
        }
        let n = n_paths as f64;
        let mean = sum / n;
        let var = (sum_sq - n * mean * mean) / (n - 1.0);
        let se = (var / n).sqrt();
        assert!(mean.abs() <= 3.0 * se, "lag-1 autocorr {mean}, se {se}");
    }

    #[test]
    fn terminal_variance_and_covariance() {
        let hurst = 0.8;
        let g = grid(17, 1.0);
        let n_paths = 100_000;
        let mid = 8; // tau = 0.5
        let mut xs = Vec::with_capacity(n_paths);
        let mut ys = Vec::with_capacity(n_paths);
        for i in 0..n_paths {
            let b = fbm_path(hurst, &g, RngStream::with_stream(77, i as u64)).unwrap();
            xs.push(b[mid]);
            ys.push(*b.last().unwrap());
        }
        let n = n_paths as f64;
        let mean_y = ys.iter().sum::<f64>() / n;
        let var_y = ys.iter().map(|y| (y - mean_y) * (y - mean_y)).sum::<f64>() / (n - 1.0);
        let se_var = var_y * (2.0 / (n - 1.0)).sqrt();
        assert!(
            (var_y - 1.0).abs() <= 3.0 * se_var,
            "Var[B(1)] = {var_y}, se {se_var}"
        );

        let mean_x = xs.iter().sum::<f64>() / n;
        let prods: Vec<f64> = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (x - mean_x) * (y - mean_y))
            .collect();
        let cov = prods.iter().sum::<f64>() / (n - 1.0);
        let mean_p = prods.iter().sum::<f64>() / n;
        let var_p = prods.iter().map(|p| (p - mean_p) * (p - mean_p)).sum::<f64>() / (n - 1.0);
        let se_cov = (var_p / n).sqrt();
        let want = fbm_covariance(hurst, 0.5, 1.0); // = 0.5
        assert!(
            (cov - want).abs() <= 3.0 * se_cov,
            "cov = {cov}, want {want}, se {se_cov}"
        );
    }

    #[test]
    fn perfectly_correlated_pair_is_identical() {
        let g = grid(33, 1.0);
        let (b1, b2) = correlated_fbm_pair(0.7, 1.0, &g, RngStream::new(5)).unwrap();
        assert_eq!(b1, b2);
        let (c1, c2) = correlated_fbm_pair(0.7, -1.0, &g, RngStream::new(5)).unwrap();
        for (x, y) in c1.iter().zip(&c2) {
            assert_eq!(*y, -*x);
        }
    }

    #[test]
    fn pair_correlation_matches_rho() {
        let hurst = 0.6;
        let rho = 0.4;
        let g = grid(9, 1.0);
        let n_paths = 50_000;
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..n_paths {
            let (b1, b2) =
                correlated_fbm_pair(hurst, rho, &g, RngStream::with_stream(123, i as u64)).unwrap();
            xs.push(*b1.last().unwrap());
            ys.push(*b2.last().unwrap());
        }
        let n = n_paths as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let mut sxy = 0.0;
        let mut sxx = 0.0;
        let mut syy = 0.0;
        for (x, y) in xs.iter().zip(&ys) {
            sxy += (x - mx) * (y - my);
            sxx += (x - mx) * (x - mx);
            syy += (y - my) * (y - my);
        }
        let corr = sxy / (sxx * syy).sqrt();
        // SE of the sample correlation is about (1 - rho^2)/sqrt(n).
        let se = (1.0 - rho * rho) / n.sqrt();
        assert!((corr - rho).abs() <= 3.0 * se, "corr {corr}, se {se}");

        let mut zeros = Vec::new();
        for i in 0..n_paths {
            let (b1, b2) =
                correlated_fbm_pair(hurst, 0.0, &g, RngStream::with_stream(321, i as u64)).unwrap();
            zeros.push(b1.last().unwrap() * b2.last().unwrap());
        }
        let mean0 = zeros.iter().sum::<f64>() / n;
        let var0 = zeros.iter().map(|z| (z - mean0) * (z - mean0)).sum::<f64>() / (n - 1.0);
        let se0 = (var0 / n).sqrt();
        assert!(mean0.abs() <= 3.0 * se0, "rho=0 cross moment {mean0}");
    }

    #[test]
    fn davies_harte_and_cholesky_sample_same_law() {
        // Quick two-sample check on terminal variance.
        let g = grid(17, 1.0);
        let n_paths = 20_000;
        let var = |f: &dyn Fn(u64) -> f64| {
            let vals: Vec<f64> = (0..n_paths).map(|i| f(i as u64)).collect();
            let m = vals.iter().sum::<f64>() / n_paths as f64;
            vals.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n_paths - 1) as f64
        };
        let v_dh = var(&|i| {
            *fbm_path(0.7, &g, RngStream::with_stream(1, i))
                .unwrap()
                .last()
                .unwrap()
        });
        let v_ch = var(&|i| {
            *fbm_path_cholesky(0.7, &g, RngStream::with_stream(2, i))
                .unwrap()
                .last()
                .unwrap()
        });
        assert!((v_dh - 1.0).abs() < 0.05, "DH terminal var {v_dh}");
        assert!((v_ch - 1.0).abs() < 0.05, "Cholesky terminal var {v_ch}");
    }

    #[test]
    fn rejects_bad_input() {
        let g = grid(9, 1.0);
        assert!(fbm_path(0.4, &g, RngStream::new(0)).is_err());
        assert!(fbm_path(1.0, &g, RngStream::new(0)).is_err());
        assert!(fbm_path(0.7, &[0.0, 0.1, 0.3], RngStream::new(0)).is_err());
        assert!(correlated_fbm_pair(0.7, 1.5, &g, RngStream::new(0)).is_err());
    }
}
