//! Monte Carlo study: simulate GG samples, fit each one, and aggregate
//! relative bias, squared error and HPD coverage per parameter.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::diagnostics::summarize;
use crate::error::{Error, Result};
use crate::ggdist::GgParams;
use crate::posterior::{run_chain, Init, Lifetimes, McmcConfig};
use crate::seeds;
use crate::specfun::RandomSource;

/// Which posterior summary enters MRE and MSE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Estimator {
    #[default]
    Mode,
    Mean,
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Estimator::Mode => "mode",
            Estimator::Mean => "mean",
        })
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mode" => Ok(Estimator::Mode),
            "mean" => Ok(Estimator::Mean),
            other => Err(Error::Config(format!("unknown estimator '{other}' (expected mode or mean)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyConfig {
    pub truth: GgParams<f64>,
    pub sample_sizes: Vec<usize>,
    pub replications: usize,
    pub mcmc: McmcConfig,
    pub master_seed: u64,
    pub estimator: Estimator,
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replications < 2 {
            return Err(Error::Config(format!(
                "replications must be at least 2, got {}",
                self.replications
            )));
        }
        if self.sample_sizes.is_empty() {
            return Err(Error::Config("at least one sample size is required".into()));
        }
        if let Some(&n) = self.sample_sizes.iter().find(|&&n| n < 2) {
            return Err(Error::Config(format!("sample sizes must be at least 2, got {n}")));
        }
        self.mcmc.validate()
    }
}

/// One row of the report: a parameter at a sample size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimRow {
    pub parameter: &'static str,
    pub n: usize,
    pub mre: f64,
    pub mse: f64,
    pub cov_low: f64,
    pub cov_up: f64,
    pub cov: f64,
    pub replications_used: usize,
    pub replications_failed: usize,
    pub geweke_pass_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub config: StudyConfig,
    pub rows: Vec<SimRow>,
}

impl SimReport {
    pub fn row(&self, parameter: &str, n: usize) -> Option<&SimRow> {
        self.rows.iter().find(|r| r.parameter == parameter && r.n == n)
    }
}

pub const PARAMETERS: [&str; 3] = ["phi", "mu", "alpha"];

/// Per-replication outcome for the three parameters in (φ, μ, α) order.
#[derive(Debug, Clone, Copy)]
struct Replicate {
    estimate: [f64; 3],
    hpd: [(f64, f64); 3],
    geweke_pass: bool,
}

fn replicate(cfg: &StudyConfig, n: usize, r: usize) -> Result<Replicate> {
    let mut data_rng = RandomSource::new(seeds::derive(cfg.master_seed, &[n as u64, r as u64, 0]));
    let data = Lifetimes::new(cfg.truth.sample(n, &mut data_rng)?)?;
    let mcmc = McmcConfig {
        seed: seeds::derive(cfg.master_seed, &[n as u64, r as u64, 1]),
        ..cfg.mcmc.clone()
    };
    let chain = run_chain(&data, &mcmc, Init::Auto)?;
    let s = summarize(&chain, &data)?;
    let blocks = [s.phi, s.mu, s.alpha];
    let pick = |b: &crate::diagnostics::ParamSummary<f64>| match cfg.estimator {
        Estimator::Mode => b.mode,
        Estimator::Mean => b.mean,
    };
    Ok(Replicate {
        estimate: blocks.map(|b| pick(&b)),
        hpd: blocks.map(|b| (b.hpd_low, b.hpd_high)),
        geweke_pass: s.geweke_pass,
    })
}

/// Runs the study. Replications run in parallel; each has its own seeds
/// derived from `(master_seed, n, r)`, so the report is deterministic.
pub fn run_study(cfg: &StudyConfig) -> Result<SimReport> {
    cfg.validate()?;
    let truth = cfg.truth.to_array();
    let mut rows = Vec::new();
    for &n in &cfg.sample_sizes {
        let outcomes: Vec<Result<Replicate>> =
            (0..cfg.replications).into_par_iter().map(|r| replicate(cfg, n, r)).collect();
        let ok: Vec<Replicate> = outcomes.iter().filter_map(|o| o.as_ref().ok().copied()).collect();
        let failed = outcomes.len() - ok.len();
        if ok.is_empty() {
            let first = outcomes.into_iter().find_map(|o| o.err());
            return Err(first.unwrap_or_else(|| Error::Config(format!("every replication failed at n = {n}"))));
        }
        let used = ok.len() as f64;
        let geweke_pass_rate = ok.iter().filter(|r| r.geweke_pass).count() as f64 / used;
        for (j, name) in PARAMETERS.iter().enumerate() {
            let theta = truth[j];
            let (mut rel, mut sq) = (0.0, 0.0);
            let (mut below, mut above, mut inside) = (0usize, 0usize, 0usize);
            for rep in &ok {
                let est = rep.estimate[j];
                rel += est / theta;
                sq += (est - theta).powi(2);
                let (lo, hi) = rep.hpd[j];
                if theta < lo {
                    below += 1;
                } else if theta > hi {
                    above += 1;
                } else {
                    inside += 1;
                }
            }
            rows.push(SimRow {
                parameter: name,
                n,
                mre: rel / used,
                mse: sq / used,
                cov_low: below as f64 / used,
                cov_up: above as f64 / used,
                cov: inside as f64 / used,
                replications_used: ok.len(),
                replications_failed: failed,
                geweke_pass_rate,
            });
        }
    }
    Ok(SimReport {
        config: cfg.clone(),
        rows,
    })
}
