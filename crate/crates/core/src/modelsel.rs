//! DIC and BIC for the GG model and its Weibull, gamma and lognormal relatives.
//!
//! Weibull and gamma reuse the GG sampler with φ = 1 or α = 1 held fixed, so
//! their priors are the modified reference prior restricted to the free
//! parameters. The lognormal uses conjugate draws under `p(m, σ²) ∝ 1/σ²`.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::diagnostics::{posterior_mode, posterior_mode_fixed};
use crate::error::{Error, Result};
use crate::ggdist::GgParams;
use crate::posterior::{log_likelihood, run_chain, run_chain_fixed, FixedParam, Init, Lifetimes, McmcConfig};
use crate::specfun::{ln_gamma_draw, RandomSource};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Model {
    #[serde(rename = "GG")]
    Gg,
    Weibull,
    Gamma,
    Lognormal,
}

impl Model {
    pub const ALL: [Model; 4] = [Model::Gg, Model::Weibull, Model::Gamma, Model::Lognormal];

    /// Number of free parameters.
    pub fn k(self) -> usize {
        match self {
            Model::Gg => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Gg => "GG",
            Model::Weibull => "Weibull",
            Model::Gamma => "Gamma",
            Model::Lognormal => "Lognormal",
        })
    }
}

/// A point in one of the candidate models' parameter spaces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ModelParams {
    /// GG, Weibull (φ = 1) and gamma (α = 1) all live here.
    Gg(GgParams<f64>),
    /// `ln T ~ N(location, scale²)`.
    Lognormal { location: f64, scale: f64 },
}

impl ModelParams {
    pub fn log_likelihood(&self, data: &Lifetimes<f64>) -> Result<f64> {
        match *self {
            ModelParams::Gg(p) => log_likelihood(&p, data),
            ModelParams::Lognormal { location, scale } => {
                if !(scale > 0.0 && scale.is_finite()) {
                    return Err(Error::domain("lognormal", format!("scale must be positive, got {scale}")));
                }
                let n = data.n();
                let ss: f64 = data.log_values().iter().map(|&y| (y - location).powi(2)).sum();
                Ok(-data.sum_log() - n * scale.ln() - 0.5 * n * (2.0 * std::f64::consts::PI).ln()
                    - ss / (2.0 * scale * scale))
            }
        }
    }
}

/// `D(θ) = −2 ln L(θ)`.
pub fn deviance(p: &ModelParams, data: &Lifetimes<f64>) -> Result<f64> {
    Ok(-2.0 * p.log_likelihood(data)?)
}

/// `−2 ln L(θ̂) + k ln n`.
pub fn bic(best: &ModelParams, data: &Lifetimes<f64>, k: usize) -> Result<f64> {
    Ok(deviance(best, data)? + k as f64 * data.n().ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dic {
    pub mean_deviance: f64,
    pub deviance_at_mean: f64,
    pub p_d: f64,
    pub dic: f64,
}

fn mean_point(draws: &[ModelParams]) -> Result<ModelParams> {
    let n = draws.len() as f64;
    match draws[0] {
        ModelParams::Gg(_) => {
            let mut acc = [0.0; 3];
            for d in draws {
                let ModelParams::Gg(p) = d else {
                    return Err(Error::Config("mixed parameter kinds in chain".into()));
                };
                for (a, v) in acc.iter_mut().zip(p.to_array()) {
                    *a += v;
                }
            }
            Ok(ModelParams::Gg(GgParams::new(acc[0] / n, acc[1] / n, acc[2] / n)?))
        }
        ModelParams::Lognormal { .. } => {
            let (mut l, mut s) = (0.0, 0.0);
            for d in draws {
                let ModelParams::Lognormal { location, scale } = d else {
                    return Err(Error::Config("mixed parameter kinds in chain".into()));
                };
                l += location;
                s += scale;
            }
            Ok(ModelParams::Lognormal {
                location: l / n,
                scale: s / n,
            })
        }
    }
}

/// `D̄ + p_D` with `p_D = D̄ − D(θ̄)`, θ̄ the per-parameter posterior mean.
pub fn dic(draws: &[ModelParams], data: &Lifetimes<f64>) -> Result<Dic> {
    if draws.is_empty() {
        return Err(Error::Config("DIC needs at least one draw".into()));
    }
    let mut total = 0.0;
    for d in draws {
        total += deviance(d, data)?;
    }
    let mean_deviance = total / draws.len() as f64;
    let deviance_at_mean = deviance(&mean_point(draws)?, data)?;
    let p_d = mean_deviance - deviance_at_mean;
    Ok(Dic {
        mean_deviance,
        deviance_at_mean,
        p_d,
        dic: mean_deviance + p_d,
    })
}

/// Fitted model with its information criteria.
#[derive(Debug, Clone, Serialize)]
pub struct ModelFit {
    pub model: Model,
    pub k: usize,
    /// Posterior-mode plug-in used for BIC.
    pub point: ModelParams,
    pub mean_deviance: f64,
    pub deviance_at_mean: f64,
    pub p_d: f64,
    pub dic: f64,
    pub bic: f64,
    /// DIC's effective parameter count came out negative.
    pub p_d_negative: bool,
    #[serde(skip)]
    pub draws: Vec<ModelParams>,
}

fn assemble(model: Model, point: ModelParams, draws: Vec<ModelParams>, data: &Lifetimes<f64>) -> Result<ModelFit> {
    let d = dic(&draws, data)?;
    Ok(ModelFit {
        model,
        k: model.k(),
        point,
        mean_deviance: d.mean_deviance,
        deviance_at_mean: d.deviance_at_mean,
        p_d: d.p_d,
        dic: d.dic,
        bic: bic(&point, data, model.k())?,
        p_d_negative: d.p_d < 0.0,
        draws,
    })
}

/// Conjugate posterior of `(location, σ²)` for log-lifetimes under `p ∝ 1/σ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LognormalPosterior {
    pub n: usize,
    pub mean_log: f64,
    pub ss_log: f64,
}

impl LognormalPosterior {
    pub fn new(data: &Lifetimes<f64>) -> Self {
        let mean_log = data.sum_log() / data.n();
        let ss_log = data.log_values().iter().map(|&y| (y - mean_log).powi(2)).sum();
        Self {
            n: data.len(),
            mean_log,
            ss_log,
        }
    }

    /// `E[location | t]`, the mean of the log-lifetimes.
    pub fn posterior_mean_location(&self) -> f64 {
        self.mean_log
    }

    /// Joint mode: location = mean log, σ² = SS / (n + 2).
    pub fn mode(&self) -> ModelParams {
        ModelParams::Lognormal {
            location: self.mean_log,
            scale: (self.ss_log / (self.n as f64 + 2.0)).sqrt(),
        }
    }

    /// `σ² = SS / (2G)`, `G ~ gamma((n−1)/2)`, then `location ~ N(mean, σ²/n)`.
    pub fn draws(&self, count: usize, seed: u64) -> Result<Vec<ModelParams>> {
        if self.n < 2 || self.ss_log <= 0.0 {
            return Err(Error::Config("lognormal posterior needs at least two distinct lifetimes".into()));
        }
        let mut rng = RandomSource::new(seed);
        let shape = (self.n as f64 - 1.0) / 2.0;
        (0..count)
            .map(|_| {
                let g = ln_gamma_draw(shape, &mut rng)?.exp();
                let var = self.ss_log / (2.0 * g);
                let location = self.mean_log + (var / self.n as f64).sqrt() * rng.standard_normal();
                Ok(ModelParams::Lognormal {
                    location,
                    scale: var.sqrt(),
                })
            })
            .collect()
    }
}

/// Fits the full GG model.
pub fn fit_gg(data: &Lifetimes<f64>, config: &McmcConfig) -> Result<ModelFit> {
    let chain = run_chain(data, config, Init::Auto)?;
    let mode = posterior_mode(&chain, data)?;
    let draws = chain.draws.iter().copied().map(ModelParams::Gg).collect();
    assemble(Model::Gg, ModelParams::Gg(mode.params), draws, data)
}

/// Fits one of the two-parameter relatives.
pub fn fit_submodel(model: Model, data: &Lifetimes<f64>, config: &McmcConfig) -> Result<ModelFit> {
    let fixed = match model {
        Model::Gg => return fit_gg(data, config),
        Model::Weibull => FixedParam::Phi(1.0),
        Model::Gamma => FixedParam::Alpha(1.0),
        Model::Lognormal => {
            config.validate()?;
            let post = LognormalPosterior::new(data);
            let draws = post.draws(config.draw_count(), config.seed)?;
            return assemble(model, post.mode(), draws, data);
        }
    };
    let chain = run_chain_fixed(data, config, Init::Auto, fixed)?;
    let mode = posterior_mode_fixed(&chain, data, fixed)?;
    let draws = chain.draws.iter().copied().map(ModelParams::Gg).collect();
    assemble(model, ModelParams::Gg(mode.params), draws, data)
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub fits: Vec<ModelFit>,
    pub winner_dic: Model,
    pub winner_bic: Model,
}

impl Comparison {
    pub fn fit(&self, model: Model) -> Option<&ModelFit> {
        self.fits.iter().find(|f| f.model == model)
    }
}

/// Fits all four models (in parallel) and picks the lowest finite DIC and BIC.
pub fn compare(data: &Lifetimes<f64>, config: &McmcConfig) -> Result<Comparison> {
    let fits: Vec<ModelFit> = Model::ALL
        .par_iter()
        .map(|&m| fit_submodel(m, data, config))
        .collect::<Result<_>>()?;
    // a non-finite criterion (e.g. a posterior mean that does not exist) cannot win
    let argmin = |key: fn(&ModelFit) -> f64| {
        fits.iter()
            .filter(|f| key(f).is_finite())
            .min_by(|a, b| key(a).total_cmp(&key(b)))
            .map_or(fits[0].model, |f| f.model)
    };
    let winner_dic = argmin(|f| f.dic);
    let winner_bic = argmin(|f| f.bic);
    Ok(Comparison {
        fits,
        winner_dic,
        winner_bic,
    })
}
