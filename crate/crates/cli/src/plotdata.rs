//! Plot-ready tables: marginal densities, autocorrelations, fitted curves.

use ggbayes::{autocorrelation, Chain, Dataset, Params};

/// Gaussian KDE of `ln x` mapped back to the x scale, so the density stays
/// on (0, ∞) and copes with long right tails. Returns `(x, density)`.
pub fn log_kde(samples: &[f64], points: usize) -> Vec<(f64, f64)> {
    let logs: Vec<f64> = samples.iter().map(|x| x.ln()).collect();
    let mut sorted = logs.clone();
    sorted.sort_by(f64::total_cmp);
    // Constant draws have no density to estimate; the sample sd would be
    // rounding noise rather than zero.
    if points < 2 || sorted.is_empty() || sorted[0] == sorted[sorted.len() - 1] {
        return Vec::new();
    }
    let n = logs.len() as f64;
    let mean = logs.iter().sum::<f64>() / n;
    let sd = (logs.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let q = |p: f64| sorted[((sorted.len() - 1) as f64 * p).round() as usize];
    let iqr = q(0.75) - q(0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    let h = 0.9 * spread * n.powf(-0.2);
    if !(h > 0.0 && h.is_finite()) {
        return Vec::new();
    }
    let (lo, hi) = (sorted[0] - 3.0 * h, sorted[sorted.len() - 1] + 3.0 * h);
    let norm = 1.0 / (n * h * (2.0 * std::f64::consts::PI).sqrt());
    (0..points)
        .map(|i| {
            let y = lo + (hi - lo) * i as f64 / (points - 1) as f64;
            let fy: f64 = logs.iter().map(|l| (-0.5 * ((y - l) / h).powi(2)).exp()).sum::<f64>() * norm;
            let x = y.exp();
            (x, fy / x)
        })
        .collect()
}

/// Rows of `(lag, acf_phi, acf_mu, acf_alpha)`; the lag count is capped at a
/// quarter of the chain length.
pub fn acf_rows(chain: &Chain, max_lag: usize) -> ggbayes::Result<Vec<(usize, [f64; 3])>> {
    let lag = max_lag.min(chain.len().saturating_sub(1) / 4);
    let phi = autocorrelation(&chain.phi_series(), lag)?;
    let mu = autocorrelation(&chain.mu_series(), lag)?;
    let alpha = autocorrelation(&chain.alpha_series(), lag)?;
    Ok((0..=lag).map(|k| (k, [phi[k], mu[k], alpha[k]])).collect())
}

/// Fitted pdf, survival and hazard at `p` plus the empirical survival, on
/// a grid spanning the data. Values that overflow are written as NaN.
pub fn fitted_curves(p: &Params, data: &Dataset, points: usize) -> Vec<[f64; 5]> {
    let mut sorted = data.values().to_vec();
    sorted.sort_by(f64::total_cmp);
    let hi = sorted[sorted.len() - 1] * 1.1;
    let n = sorted.len() as f64;
    (1..=points)
        .map(|i| {
            let t = hi * i as f64 / points as f64;
            let at_or_below = sorted.partition_point(|&v| v <= t) as f64;
            [
                t,
                p.pdf(t).unwrap_or(f64::NAN),
                p.survival(t).unwrap_or(f64::NAN),
                p.hazard(t).unwrap_or(f64::NAN),
                1.0 - at_or_below / n,
            ]
        })
        .collect()
}
