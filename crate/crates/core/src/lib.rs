//! Objective Bayesian inference for the three-parameter generalized gamma
//! lifetime distribution.
//!
//! The numeric core is generic over [`Real`] (implemented for `f32` and
//! `f64`); quadrature, propriety checks, model comparison and the simulation
//! study run in `f64`. The aliases below cover the common `f64` case.

pub mod data;
pub mod diagnostics;
pub mod error;
pub mod ggdist;
pub mod modelsel;
pub mod optimize;
pub mod posterior;
pub mod priors;
pub mod quadrature;
pub mod scalar;
pub mod seeds;
pub mod simstudy;
pub mod specfun;

pub use data::{load_dataset, parse_lifetimes, MEEKER};
pub use diagnostics::{autocorrelation, geweke_z, hpd_interval, posterior_mode, summarize, ParamSummary, PosteriorSummary};
pub use error::{Error, Result};
pub use ggdist::{FisherMatrix, GgParams};
pub use modelsel::{compare, Comparison, Model, ModelFit, ModelParams};
pub use posterior::{log_likelihood, log_posterior, run_chain, FixedParam, Init, Lifetimes, McmcChain, McmcConfig};
pub use priors::{propriety_evidence, EvidenceOptions, PriorSpec, ProprietyEvidence, Verdict};
pub use scalar::Real;
pub use simstudy::{run_study, Estimator, SimReport, SimRow, StudyConfig};
pub use specfun::RandomSource;

pub type Params = GgParams<f64>;
pub type ParamsF32 = GgParams<f32>;
pub type Dataset = Lifetimes<f64>;
pub type DatasetF32 = Lifetimes<f32>;
pub type Chain = McmcChain<f64>;
pub type Summary = PosteriorSummary<f64>;
