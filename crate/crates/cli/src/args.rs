use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ggbayes::{McmcConfig, PriorSpec};

#[derive(Parser, Debug)]
#[command(
    name = "ggbayes",
    version,
    about = "Objective Bayesian analysis of lifetime data under the generalized gamma model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Fit the GG model under the modified reference prior
    Fit(FitArgs),
    /// Run the Monte Carlo study (MRE, MSE, HPD coverage)
    Simulate(SimulateArgs),
    /// Compare GG, Weibull, gamma and lognormal fits by DIC and BIC
    Compare(CompareArgs),
    /// Nested-box evidence on whether a prior yields a proper posterior
    PriorCheck(PriorCheckArgs),
    /// Re-run a command from its manifest.json
    Replay(ReplayArgs),
}

#[derive(Args, Debug, Clone)]
pub struct OutDir {
    /// Output directory (created if missing)
    #[arg(long, default_value = "ggbayes-out")]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct McmcArgs {
    #[arg(long, default_value_t = 31_000)]
    pub iters: usize,
    #[arg(long, default_value_t = 1_000)]
    pub burnin: usize,
    #[arg(long, default_value_t = 30)]
    pub thin: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Initial random-walk scale on log alpha
    #[arg(long, default_value_t = 0.3)]
    pub sd_alpha: f64,
    /// Initial random-walk scale on log phi
    #[arg(long, default_value_t = 0.3)]
    pub sd_phi: f64,
    /// Keep the proposal scales fixed during burn-in
    #[arg(long)]
    pub no_adapt: bool,
}

impl McmcArgs {
    pub fn config(&self) -> McmcConfig {
        McmcConfig {
            iterations: self.iters,
            burn_in: self.burnin,
            thin: self.thin,
            proposal_sd_log_alpha: self.sd_alpha,
            proposal_sd_log_phi: self.sd_phi,
            seed: self.seed,
            adapt_during_burnin: !self.no_adapt,
        }
    }

    fn argv(&self) -> Vec<String> {
        let mut v = vec![
            "--iters".into(),
            self.iters.to_string(),
            "--burnin".into(),
            self.burnin.to_string(),
            "--thin".into(),
            self.thin.to_string(),
            "--seed".into(),
            self.seed.to_string(),
            format!("--sd-alpha={:e}", self.sd_alpha),
            format!("--sd-phi={:e}", self.sd_phi),
        ];
        if self.no_adapt {
            v.push("--no-adapt".into());
        }
        v
    }
}

#[derive(Args, Debug, Clone)]
pub struct FitArgs {
    /// Lifetimes file (one value per line) or a builtin id such as "meeker"
    #[arg(long)]
    pub data: String,
    #[command(flatten)]
    pub mcmc: McmcArgs,
    /// Largest autocorrelation lag written
    #[arg(long, default_value_t = 50)]
    pub acf_lags: usize,
    /// Grid points for densities and fitted curves
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Args, Debug, Clone)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 0.4, allow_negative_numbers = true)]
    pub phi: f64,
    #[arg(long, default_value_t = 1.5, allow_negative_numbers = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Sample sizes, comma separated
    #[arg(long, value_delimiter = ',', default_value = "50,100,150,200,250,300")]
    pub n: Vec<usize>,
    /// Replications per sample size
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    /// Point estimate entering MRE and MSE: mode or mean
    #[arg(long, default_value = "mode")]
    pub estimator: ggbayes::Estimator,
    #[command(flatten)]
    pub mcmc: McmcArgs,
    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Args, Debug, Clone)]
pub struct CompareArgs {
    #[arg(long)]
    pub data: String,
    #[command(flatten)]
    pub mcmc: McmcArgs,
    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Args, Debug, Clone)]
pub struct PriorCheckArgs {
    #[arg(long)]
    pub data: String,
    /// alpha, phi, mu, ordered or modified
    #[arg(long)]
    pub prior: PriorSpec,
    /// Number of nested boxes (2^-k, 2^k)^2
    #[arg(long, default_value_t = 6)]
    pub levels: u32,
    #[command(flatten)]
    pub out: OutDir,
}

#[derive(Args, Debug, Clone)]
pub struct ReplayArgs {
    /// manifest.json written by an earlier run
    pub manifest: PathBuf,
    #[command(flatten)]
    pub out: OutDir,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Fit(_) => "fit",
            Command::Simulate(_) => "simulate",
            Command::Compare(_) => "compare",
            Command::PriorCheck(_) => "prior-check",
            Command::Replay(_) => "replay",
        }
    }

    /// Canonical arguments, every option spelled out, minus `--out`.
    pub fn argv(&self) -> Vec<String> {
        let mut v = vec![self.name().to_string()];
        match self {
            Command::Fit(a) => {
                v.extend(["--data".into(), a.data.clone()]);
                v.extend(a.mcmc.argv());
                v.extend([
                    "--acf-lags".into(),
                    a.acf_lags.to_string(),
                    "--grid".into(),
                    a.grid.to_string(),
                ]);
            }
            Command::Simulate(a) => {
                v.extend([
                    format!("--phi={:e}", a.phi),
                    format!("--mu={:e}", a.mu),
                    format!("--alpha={:e}", a.alpha),
                    format!("--n={}", a.n.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")),
                    "--reps".into(),
                    a.reps.to_string(),
                    "--estimator".into(),
                    a.estimator.to_string(),
                ]);
                v.extend(a.mcmc.argv());
            }
            Command::Compare(a) => {
                v.extend(["--data".into(), a.data.clone()]);
                v.extend(a.mcmc.argv());
            }
            Command::PriorCheck(a) => {
                v.extend([
                    "--data".into(),
                    a.data.clone(),
                    "--prior".into(),
                    a.prior.key().into(),
                    "--levels".into(),
                    a.levels.to_string(),
                ]);
            }
            Command::Replay(a) => v.push(a.manifest.display().to_string()),
        }
        v
    }

    pub fn out_dir(&self) -> &PathBuf {
        match self {
            Command::Fit(a) => &a.out.out,
            Command::Simulate(a) => &a.out.out,
            Command::Compare(a) => &a.out.out,
            Command::PriorCheck(a) => &a.out.out,
            Command::Replay(a) => &a.out.out,
        }
    }
}
