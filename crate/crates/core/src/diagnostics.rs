//! Convergence diagnostics and posterior summaries.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ggdist::GgParams;
use crate::optimize::{nelder_mead, NelderMeadOptions};
use crate::posterior::{log_posterior, FixedParam, Lifetimes, McmcChain};
use crate::scalar::Real;

fn mean<T: Real>(xs: &[T]) -> T {
    xs.iter().copied().sum::<T>() / T::from_usize(xs.len()).expect("length")
}

/// Sample variance with divisor `n − 1`.
fn sample_variance<T: Real>(xs: &[T]) -> T {
    let m = mean(xs);
    let ss: T = xs.iter().map(|&x| (x - m) * (x - m)).sum();
    ss / T::from_usize(xs.len() - 1).expect("length")
}

/// Long-run variance of a segment's mean by non-overlapping batch means,
/// `⌊√n⌋` batches, divided by the segment length.
fn batch_means_var_of_mean<T: Real>(xs: &[T]) -> T {
    let n = xs.len();
    let batches = ((n as f64).sqrt().floor() as usize).max(2);
    let size = n / batches;
    let means: Vec<T> = (0..batches).map(|b| mean(&xs[b * size..(b + 1) * size])).collect();
    // Var(batch mean) ≈ σ²_LR / size, so σ²_LR / n = Var(batch mean) · size / n
    sample_variance(&means) * T::from_usize(size).expect("size") / T::from_usize(n).expect("n")
}

/// Geweke z-score comparing the first `first_frac` and last `last_frac` of a series.
///
/// `|z| < 1.96` passes at the 95% level.
pub fn geweke_z<T: Real>(series: &[T], first_frac: f64, last_frac: f64) -> Result<T> {
    if series.len() < 100 {
        return Err(Error::Config(format!("Geweke needs at least 100 draws, got {}", series.len())));
    }
    if !(first_frac > 0.0 && last_frac > 0.0 && first_frac + last_frac <= 1.0) {
        return Err(Error::Config(format!(
            "invalid Geweke fractions {first_frac}, {last_frac}"
        )));
    }
    let n = series.len();
    let na = ((first_frac * n as f64).floor() as usize).max(4);
    let nb = ((last_frac * n as f64).floor() as usize).max(4);
    let a = &series[..na];
    let b = &series[n - nb..];
    let diff = mean(a) - mean(b);
    let se2 = batch_means_var_of_mean(a) + batch_means_var_of_mean(b);
    if se2 <= T::zero() {
        return Ok(if diff == T::zero() {
            T::zero()
        } else {
            T::infinity().copysign(diff)
        });
    }
    Ok(diff / se2.sqrt())
}

/// Shortest interval covering `⌈mass · n⌉` sorted draws; ties go to the leftmost window.
pub fn hpd_interval<T: Real>(samples: &[T], mass: f64) -> Result<(T, T)> {
    if samples.len() < 100 {
        return Err(Error::Config(format!("HPD needs at least 100 draws, got {}", samples.len())));
    }
    if !(mass > 0.0 && mass < 1.0) {
        return Err(Error::Config(format!("HPD mass must lie in (0, 1), got {mass}")));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let n = sorted.len();
    let k = ((mass * n as f64).ceil() as usize).clamp(1, n);
    let mut best = 0;
    let mut best_width = T::infinity();
    for i in 0..=n - k {
        let w = sorted[i + k - 1] - sorted[i];
        if w < best_width {
            best_width = w;
            best = i;
        }
    }
    Ok((sorted[best], sorted[best + k - 1]))
}

/// Biased sample autocorrelations for lags `0..=max_lag`.
///
/// A constant series has no variance to normalize by; it gets ACF 1 at lag
/// zero and 0 elsewhere.
pub fn autocorrelation<T: Real>(series: &[T], max_lag: usize) -> Result<Vec<T>> {
    let n = series.len();
    if max_lag == 0 || 4 * max_lag >= n {
        return Err(Error::Config(format!("max_lag must be positive and below n/4 (n = {n}), got {max_lag}")));
    }
    let m = mean(series);
    let centred: Vec<T> = series.iter().map(|&x| x - m).collect();
    let c0: T = centred.iter().map(|&x| x * x).sum();
    let mut out = Vec::with_capacity(max_lag + 1);
    out.push(T::one());
    for k in 1..=max_lag {
        if c0 <= T::zero() {
            out.push(T::zero());
            continue;
        }
        let ck: T = centred[..n - k].iter().zip(&centred[k..]).map(|(&a, &b)| a * b).sum();
        out.push(ck / c0);
    }
    Ok(out)
}

/// A mode search result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeEstimate<T> {
    pub params: GgParams<T>,
    pub log_posterior: T,
    /// False when the optimizer could not improve on the best stored draw.
    pub improved: bool,
    pub evaluations: usize,
}

/// Joint posterior mode by Nelder–Mead in log-parameter space, started from
/// the stored draw with the highest log posterior.
pub fn posterior_mode<T: Real>(chain: &McmcChain<T>, data: &Lifetimes<T>) -> Result<ModeEstimate<T>> {
    posterior_mode_fixed(chain, data, FixedParam::None)
}

/// [`posterior_mode`] with one shape parameter held at a constant.
pub fn posterior_mode_fixed<T: Real>(
    chain: &McmcChain<T>,
    data: &Lifetimes<T>,
    fixed: FixedParam<T>,
) -> Result<ModeEstimate<T>> {
    if chain.is_empty() {
        return Err(Error::Config("chain has no draws".into()));
    }
    let mut seed = chain.draws[0];
    let mut seed_lp = T::neg_infinity();
    for p in &chain.draws {
        let lp = log_posterior(p, data)?;
        if lp > seed_lp {
            seed = *p;
            seed_lp = lp;
        }
    }
    let build = |x: &[T]| -> Option<GgParams<T>> {
        let (phi, mu, alpha) = match fixed {
            FixedParam::None => (x[0].exp(), x[1].exp(), x[2].exp()),
            FixedParam::Phi(v) => (v, x[0].exp(), x[1].exp()),
            FixedParam::Alpha(v) => (x[0].exp(), x[1].exp(), v),
        };
        GgParams::new(phi, mu, alpha).ok()
    };
    let neg_lp = |x: &[T]| -> T {
        build(x)
            .and_then(|p| log_posterior(&p, data).ok())
            .map_or(T::infinity(), |lp| -lp)
    };
    let opts = NelderMeadOptions {
        max_evals: 6000,
        f_tol: 1e-12,
        initial_step: 0.1,
    };
    let (best, value, evals) = match fixed {
        FixedParam::None => {
            let start = [seed.phi().ln(), seed.mu().ln(), seed.alpha().ln()];
            // restart once from the result to escape a collapsed simplex
            let m = nelder_mead(|x: &[T; 3]| neg_lp(x), start, opts);
            let m2 = nelder_mead(|x: &[T; 3]| neg_lp(x), m.x, opts);
            (m2.x.to_vec(), m2.value, m.evals + m2.evals)
        }
        FixedParam::Phi(_) => {
            let start = [seed.mu().ln(), seed.alpha().ln()];
            let m = nelder_mead(|x: &[T; 2]| neg_lp(x), start, opts);
            let m2 = nelder_mead(|x: &[T; 2]| neg_lp(x), m.x, opts);
            (m2.x.to_vec(), m2.value, m.evals + m2.evals)
        }
        FixedParam::Alpha(_) => {
            let start = [seed.phi().ln(), seed.mu().ln()];
            let m = nelder_mead(|x: &[T; 2]| neg_lp(x), start, opts);
            let m2 = nelder_mead(|x: &[T; 2]| neg_lp(x), m.x, opts);
            (m2.x.to_vec(), m2.value, m.evals + m2.evals)
        }
    };
    let params = build(&best).unwrap_or(seed);
    let lp = -value;
    if lp > seed_lp {
        Ok(ModeEstimate {
            params,
            log_posterior: lp,
            improved: true,
            evaluations: evals,
        })
    } else {
        Ok(ModeEstimate {
            params: seed,
            log_posterior: seed_lp,
            improved: false,
            evaluations: evals,
        })
    }
}

/// Per-parameter summary block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamSummary<T> {
    pub mode: T,
    pub mean: T,
    pub sd: T,
    pub hpd_low: T,
    pub hpd_high: T,
    pub geweke_z: T,
}

impl<T: Real> ParamSummary<T> {
    pub fn geweke_pass(&self) -> bool {
        self.geweke_z.abs() < T::lit(1.96)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PosteriorSummary<T> {
    pub phi: ParamSummary<T>,
    pub mu: ParamSummary<T>,
    pub alpha: ParamSummary<T>,
    pub mode_log_posterior: T,
    pub mode_improved: bool,
    /// Set when every draw is identical (zero spread).
    pub degenerate: bool,
    pub geweke_pass: bool,
}

fn summarize_series<T: Real>(series: &[T], mode: T) -> Result<ParamSummary<T>> {
    let (hpd_low, hpd_high) = hpd_interval(series, 0.95)?;
    Ok(ParamSummary {
        mode,
        mean: mean(series),
        sd: sample_variance(series).sqrt(),
        hpd_low,
        hpd_high,
        geweke_z: geweke_z(series, 0.1, 0.5)?,
    })
}

/// Mode, SD, 95% HPD and Geweke z for φ, μ and α.
pub fn summarize<T: Real>(chain: &McmcChain<T>, data: &Lifetimes<T>) -> Result<PosteriorSummary<T>> {
    let mode = posterior_mode(chain, data)?;
    let phi = summarize_series(&chain.phi_series(), mode.params.phi())?;
    let mu = summarize_series(&chain.mu_series(), mode.params.mu())?;
    let alpha = summarize_series(&chain.alpha_series(), mode.params.alpha())?;
    let degenerate = [phi.sd, mu.sd, alpha.sd].iter().all(|&s| s == T::zero());
    Ok(PosteriorSummary {
        geweke_pass: phi.geweke_pass() && mu.geweke_pass() && alpha.geweke_pass(),
        phi,
        mu,
        alpha,
        mode_log_posterior: mode.log_posterior,
        mode_improved: mode.improved,
        degenerate,
    })
}
