use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{draw_mu, log_cond_alpha, log_cond_phi, Lifetimes};
use crate::error::{Error, Result};
use crate::ggdist::GgParams;
use crate::scalar::Real;
use crate::specfun::RandomSource;

const TARGET_ACCEPTANCE: f64 = 0.35;

/// Sampler configuration. Defaults follow the 31 000 / 1 000 / 30 protocol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McmcConfig {
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub proposal_sd_log_alpha: f64,
    pub proposal_sd_log_phi: f64,
    pub seed: u64,
    pub adapt_during_burnin: bool,
}

impl Default for McmcConfig {
    fn default() -> Self {
        Self {
            iterations: 31_000,
            burn_in: 1_000,
            thin: 30,
            proposal_sd_log_alpha: 0.3,
            proposal_sd_log_phi: 0.3,
            seed: 0,
            adapt_during_burnin: true,
        }
    }
}

impl McmcConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.thin == 0 {
            return Err(Error::Config("thin must be at least 1".into()));
        }
        if self.burn_in >= self.iterations {
            return Err(Error::Config(format!(
                "burn-in ({}) must be smaller than iterations ({})",
                self.burn_in, self.iterations
            )));
        }
        if self.draw_count() < 100 {
            return Err(Error::Config(format!(
                "(iterations - burn_in) / thin must be at least 100, got {}",
                self.draw_count()
            )));
        }
        for (name, v) in [
            ("proposal_sd_log_alpha", self.proposal_sd_log_alpha),
            ("proposal_sd_log_phi", self.proposal_sd_log_phi),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Number of stored draws, `⌊(iterations − burn_in) / thin⌋`.
    pub fn draw_count(&self) -> usize {
        self.iterations.saturating_sub(self.burn_in) / self.thin
    }
}

/// Starting point for a chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Init<T> {
    /// α = 1, φ = 1, μ = 1 / mean(t): the exponential fit.
    Auto,
    At(GgParams<T>),
}

/// Holds a component at a constant value, giving the Weibull (φ = 1) or
/// gamma (α = 1) sub-model samplers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FixedParam<T> {
    None,
    Phi(T),
    Alpha(T),
}

/// Post burn-in, thinned draws plus sampler bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McmcChain<T> {
    pub draws: Vec<GgParams<T>>,
    /// Post burn-in acceptance rate of the α move (NaN when α is held fixed).
    pub acceptance_alpha: f64,
    pub acceptance_phi: f64,
    /// Proposal scales in effect after burn-in adaptation.
    pub tuned_sd_log_alpha: f64,
    pub tuned_sd_log_phi: f64,
    pub config: McmcConfig,
}

impl<T: Real> McmcChain<T> {
    pub fn phi_series(&self) -> Vec<T> {
        self.draws.iter().map(GgParams::phi).collect()
    }

    pub fn mu_series(&self) -> Vec<T> {
        self.draws.iter().map(GgParams::mu).collect()
    }

    pub fn alpha_series(&self) -> Vec<T> {
        self.draws.iter().map(GgParams::alpha).collect()
    }

    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }
}

/// Random-walk Metropolis step on the log scale; `log_target` excludes the Jacobian.
struct LogWalk {
    sd: f64,
    accepted: usize,
    proposed: usize,
}

impl LogWalk {
    fn new(sd: f64) -> Self {
        Self {
            sd,
            accepted: 0,
            proposed: 0,
        }
    }

    fn step<T: Real>(
        &mut self,
        current: T,
        current_log_target: T,
        rng: &mut RandomSource,
        log_target: impl Fn(T) -> Result<T>,
    ) -> (T, T, bool) {
        let proposal = T::lit((current.as_f64().ln() + self.sd * rng.standard_normal()).exp());
        let log_u = rng.uniform().ln();
        self.proposed += 1;
        if !(proposal > T::zero() && proposal.is_finite()) {
            return (current, current_log_target, false);
        }
        let Ok(lt) = log_target(proposal) else {
            return (current, current_log_target, false);
        };
        // + ln x for the log-scale Jacobian
        let log_ratio = (lt + proposal.ln()) - (current_log_target + current.ln());
        if lt.is_finite() && log_u < log_ratio.as_f64() {
            self.accepted += 1;
            (proposal, lt, true)
        } else {
            (current, current_log_target, false)
        }
    }

    fn adapt(&mut self, iteration: usize, accepted: bool) {
        let gain = (iteration as f64 + 1.0).powf(-0.6);
        let signal = if accepted { 1.0 } else { 0.0 } - TARGET_ACCEPTANCE;
        self.sd = (self.sd.ln() + gain * signal).exp().clamp(1e-4, 10.0);
    }

    fn rate(&self) -> f64 {
        if self.proposed == 0 {
            f64::NAN
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    fn reset_counts(&mut self) {
        self.accepted = 0;
        self.proposed = 0;
    }
}

/// Runs the Metropolis-within-Gibbs sampler on the modified-reference posterior.
///
/// Each iteration updates α | φ and φ | α by log-scale random walks against
/// the μ-marginalized conditionals, then draws μ | α, φ exactly. Proposal
/// scales adapt during burn-in only.
pub fn run_chain<T: Real>(data: &Lifetimes<T>, config: &McmcConfig, init: Init<T>) -> Result<McmcChain<T>> {
    run_chain_fixed(data, config, init, FixedParam::None)
}

/// [`run_chain`] with one shape parameter optionally held fixed.
pub fn run_chain_fixed<T: Real>(
    data: &Lifetimes<T>,
    config: &McmcConfig,
    init: Init<T>,
    fixed: FixedParam<T>,
) -> Result<McmcChain<T>> {
    config.validate()?;
    let start = match init {
        Init::Auto => GgParams::new(T::one(), data.mean().recip(), T::one())?,
        Init::At(p) => p,
    };
    let (mut alpha, mut phi) = (start.alpha(), start.phi());
    match fixed {
        FixedParam::Phi(v) => phi = v,
        FixedParam::Alpha(v) => alpha = v,
        FixedParam::None => {}
    }
    let mut mu = start.mu();
    GgParams::new(phi, mu, alpha)?;
    let update_alpha = !matches!(fixed, FixedParam::Alpha(_));
    let update_phi = !matches!(fixed, FixedParam::Phi(_));

    let mut rng = RandomSource::new(config.seed);
    let mut walk_alpha = LogWalk::new(config.proposal_sd_log_alpha);
    let mut walk_phi = LogWalk::new(config.proposal_sd_log_phi);
    let mut lt_alpha = log_cond_alpha(alpha, phi, data)?;
    let mut draws = Vec::with_capacity(config.draw_count());

    for it in 0..config.iterations {
        if it == config.burn_in {
            walk_alpha.reset_counts();
            walk_phi.reset_counts();
        }
        let adapting = config.adapt_during_burnin && it < config.burn_in;
        if update_alpha {
            let (a, _, acc) = walk_alpha.step(alpha, lt_alpha, &mut rng, |a| log_cond_alpha(a, phi, data));
            alpha = a;
            if adapting {
                walk_alpha.adapt(it, acc);
            }
        }
        if update_phi {
            let lt_phi = log_cond_phi(phi, alpha, data)?;
            let (p, _, acc) = walk_phi.step(phi, lt_phi, &mut rng, |p| log_cond_phi(p, alpha, data));
            phi = p;
            if adapting {
                walk_phi.adapt(it, acc);
            }
        }
        lt_alpha = log_cond_alpha(alpha, phi, data)?;
        mu = draw_mu(alpha, phi, data, &mut rng)?;

        if it >= config.burn_in && (it - config.burn_in + 1).is_multiple_of(config.thin) {
            // μ can leave the representable range when nφ is tiny; keep the last valid value
            let p = GgParams::new(phi, mu, alpha).or_else(|_| {
                draws
                    .last()
                    .copied()
                    .map(|last: GgParams<T>| GgParams::new(phi, last.mu(), alpha))
                    .unwrap_or_else(|| GgParams::new(phi, data.mean().recip(), alpha))
            })?;
            draws.push(p);
        }
    }

    Ok(McmcChain {
        draws,
        acceptance_alpha: if update_alpha { walk_alpha.rate() } else { f64::NAN },
        acceptance_phi: if update_phi { walk_phi.rate() } else { f64::NAN },
        tuned_sd_log_alpha: walk_alpha.sd,
        tuned_sd_log_phi: walk_phi.sd,
        config: config.clone(),
    })
}

/// `k` independent chains, seeds derived from `config.seed`, run in parallel.
pub fn run_chains<T: Real>(data: &Lifetimes<T>, config: &McmcConfig, k: usize) -> Result<Vec<McmcChain<T>>> {
    (0..k)
        .into_par_iter()
        .map(|i| {
            let cfg = McmcConfig {
                seed: crate::seeds::derive(config.seed, &[i as u64]),
                ..config.clone()
            };
            run_chain(data, &cfg, Init::Auto)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> McmcConfig {
        McmcConfig {
            iterations: 3_200,
            burn_in: 200,
            thin: 3,
            seed: 11,
            ..McmcConfig::default()
        }
    }

    fn data() -> Lifetimes<f64> {
        Lifetimes::new(vec![0.8, 1.2, 0.5, 2.3, 1.9, 0.7, 1.1, 3.0, 0.9, 1.4]).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(McmcConfig::default().validate().is_ok());
        assert_eq!(McmcConfig::default().draw_count(), 1000);
        let bad = McmcConfig {
            thin: 0,
            ..McmcConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = McmcConfig {
            burn_in: 31_000,
            ..McmcConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = McmcConfig {
            iterations: 2_000,
            burn_in: 1_000,
            thin: 30,
            ..McmcConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn draw_count_and_determinism() {
        let d = data();
        let a = run_chain(&d, &small(), Init::Auto).unwrap();
        let b = run_chain(&d, &small(), Init::Auto).unwrap();
        assert_eq!(a.len(), 1000);
        assert_eq!(a, b);
        let c = run_chain(
            &d,
            &McmcConfig {
                seed: 12,
                ..small()
            },
            Init::Auto,
        )
        .unwrap();
        assert_ne!(a.draws, c.draws);
    }

    #[test]
    fn fixed_parameters_stay_fixed() {
        let d = data();
        let w = run_chain_fixed(&d, &small(), Init::Auto, FixedParam::Phi(1.0)).unwrap();
        assert!(w.draws.iter().all(|p| p.phi() == 1.0));
        assert!(w.acceptance_phi.is_nan());
        let g = run_chain_fixed(&d, &small(), Init::Auto, FixedParam::Alpha(1.0)).unwrap();
        assert!(g.draws.iter().all(|p| p.alpha() == 1.0));
    }

    #[test]
    fn explicit_init_is_used() {
        let d = data();
        let init = GgParams::new(2.0, 0.5, 1.5).unwrap();
        let c = run_chain(&d, &small(), Init::At(init)).unwrap();
        assert_eq!(c.len(), 1000);
    }

    #[test]
    fn independent_chains_differ() {
        let d = data();
        let chains = run_chains(&d, &small(), 3).unwrap();
        assert_eq!(chains.len(), 3);
        assert_ne!(chains[0].draws, chains[1].draws);
        let again = run_chains(&d, &small(), 3).unwrap();
        assert_eq!(chains, again);
    }
}
