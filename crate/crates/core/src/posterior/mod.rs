//! Likelihood, modified-reference posterior and its conditionals, plus the
//! Metropolis-within-Gibbs sampler built on them.
//!
//! With `S(α) = Σ tᵢ^α`, integrating μ out of the joint posterior leaves
//! `Γ(nφ) / (α S(α)^{nφ})`, which is where the `−nφ ln S(α)` terms below
//! and the `n − 1/2` power of α in the α-conditional come from.

mod sampler;

pub use sampler::{run_chain, run_chain_fixed, run_chains, FixedParam, Init, McmcChain, McmcConfig};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ggdist::GgParams;
use crate::priors::{log_prior, modified_alpha_log_density, PriorSpec};
use crate::scalar::{log_sum_exp, Real};
use crate::specfun::{ln_gamma, ln_gamma_draw, trigamma, RandomSource};

/// Positive lifetimes with cached sufficient statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lifetimes<T> {
    values: Vec<T>,
    #[serde(skip)]
    log_values: Vec<T>,
    sum_log: T,
}

impl<T: Real> Lifetimes<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        for (i, &v) in values.iter().enumerate() {
            if !(v > T::zero() && v.is_finite()) {
                return Err(Error::NonPositive {
                    line: i + 1,
                    value: v.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        let log_values: Vec<T> = values.iter().map(|v| v.ln()).collect();
        let sum_log = log_values.iter().copied().sum();
        Ok(Self {
            values,
            log_values,
            sum_log,
        })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn log_values(&self) -> &[T] {
        &self.log_values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `n` as a scalar.
    pub fn n(&self) -> T {
        T::from_usize(self.values.len()).expect("sample size")
    }

    pub fn sum_log(&self) -> T {
        self.sum_log
    }

    pub fn sum(&self) -> T {
        self.values.iter().copied().sum()
    }

    pub fn mean(&self) -> T {
        self.sum() / self.n()
    }

    /// `ln Σ tᵢ^α`, via log-sum-exp.
    pub fn log_sum_pow(&self, alpha: T) -> T {
        log_sum_exp(self.log_values.iter().map(|&l| alpha * l))
    }

    /// True when the values are not all identical.
    pub fn has_distinct_values(&self) -> bool {
        self.values.iter().any(|&v| v != self.values[0])
    }
}

/// `ln L(φ, μ, α)` for i.i.d. GG lifetimes.
pub fn log_likelihood<T: Real>(p: &GgParams<T>, data: &Lifetimes<T>) -> Result<T> {
    let (phi, mu, alpha) = (p.phi(), p.mu(), p.alpha());
    let n = data.n();
    let ap = alpha * phi;
    Ok(n * alpha.ln() - n * ln_gamma(phi)? + n * ap * mu.ln() + (ap - T::one()) * data.sum_log()
        - (alpha * mu.ln() + data.log_sum_pow(alpha)).exp())
}

/// Unnormalized log posterior under the modified reference prior.
pub fn log_posterior<T: Real>(p: &GgParams<T>, data: &Lifetimes<T>) -> Result<T> {
    Ok(log_prior(PriorSpec::ModifiedReference, p)? + log_likelihood(p, data)?)
}

/// Exact draw from μ | α, φ, t: `W ~ gamma(nφ, rate S(α))`, `μ = W^{1/α}`.
pub fn draw_mu<T: Real>(alpha: T, phi: T, data: &Lifetimes<T>, rng: &mut RandomSource) -> Result<T> {
    check_positive("draw_mu", alpha, phi)?;
    let shape = (data.n() * phi).as_f64();
    let ln_w = ln_gamma_draw(shape, rng)? - data.log_sum_pow(alpha).as_f64();
    Ok(T::lit((ln_w / alpha.as_f64()).exp()))
}

fn check_positive<T: Real>(func: &'static str, alpha: T, phi: T) -> Result<()> {
    if !(alpha > T::zero() && alpha.is_finite() && phi > T::zero() && phi.is_finite()) {
        return Err(Error::domain(func, format!("alpha and phi must be positive, got alpha={alpha}, phi={phi}")));
    }
    Ok(())
}

/// Log density of α | φ, t with μ integrated out (unnormalized).
pub fn log_cond_alpha<T: Real>(alpha: T, phi: T, data: &Lifetimes<T>) -> Result<T> {
    check_positive("log_cond_alpha", alpha, phi)?;
    let n = data.n();
    // prior α^{1/2 − 2α/(1+α)} × likelihood α^n × μ-integral α^{-1}
    Ok(modified_alpha_log_density(alpha)? + (n - T::one()) * alpha.ln() + (alpha * phi - T::one()) * data.sum_log()
        - n * phi * data.log_sum_pow(alpha))
}

/// Log density of φ | α, t with μ integrated out (unnormalized).
pub fn log_cond_phi<T: Real>(phi: T, alpha: T, data: &Lifetimes<T>) -> Result<T> {
    check_positive("log_cond_phi", alpha, phi)?;
    let n = data.n();
    Ok(T::lit(0.5) * trigamma(phi)?.ln() + ln_gamma(n * phi)? - n * ln_gamma(phi)?
        + (alpha * phi - T::one()) * data.sum_log()
        - n * phi * data.log_sum_pow(alpha))
}
