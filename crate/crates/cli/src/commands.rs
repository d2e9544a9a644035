use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use ggbayes::data::BUILTIN_IDS;
use ggbayes::modelsel::Model;
use ggbayes::{
    compare, load_dataset, propriety_evidence, run_chain, run_study, summarize, Dataset, EvidenceOptions, Init,
    McmcConfig, Params, StudyConfig,
};
use serde::Serialize;

use crate::args::{Command, CompareArgs, FitArgs, PriorCheckArgs, SimulateArgs};
use crate::chain_io::{fmt17, write_chain};
use crate::manifest::{unix_now, RunManifest, FILE_NAME};
use crate::plotdata::{acf_rows, fitted_curves, log_kde};
use crate::{Cli, Failure};

struct Outputs {
    dir: PathBuf,
    written: Vec<String>,
}

impl Outputs {
    fn create(dir: &Path) -> Result<Self, Failure> {
        fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn open(&mut self, name: &str) -> Result<BufWriter<File>, Failure> {
        let path = self.dir.join(name);
        let f = File::create(&path).map_err(|e| io_fail(&path, e))?;
        self.written.push(name.to_string());
        Ok(BufWriter::new(f))
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), Failure> {
        let mut w = self.open(name)?;
        serde_json::to_writer_pretty(&mut w, value).map_err(|e| Failure::Runtime(e.to_string()))?;
        writeln!(w).and_then(|()| w.flush()).map_err(|e| io_fail(&self.dir.join(name), e))
    }

    fn csv<I, R>(&mut self, name: &str, header: &[&str], rows: I) -> Result<(), Failure>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = String>,
    {
        let w = self.open(name)?;
        let mut out = csv::Writer::from_writer(w);
        let fail = |e: csv::Error| Failure::Runtime(format!("writing {name}: {e}"));
        out.write_record(header).map_err(fail)?;
        for r in rows {
            out.write_record(r).map_err(fail)?;
        }
        out.flush().map_err(|e| Failure::Runtime(format!("writing {name}: {e}")))
    }
}

fn io_fail(path: &Path, e: std::io::Error) -> Failure {
    Failure::Runtime(format!("cannot write {}: {e}", path.display()))
}

/// Makes file inputs absolute so a manifest can be replayed from anywhere.
fn canonical_source(source: &str) -> String {
    if BUILTIN_IDS.contains(&source) {
        return source.to_string();
    }
    fs::canonicalize(source)
        .map(|p| p.display().to_string())
        .unwrap_or_else(|_| source.to_string())
}

fn config_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).unwrap_or(serde_json::Value::Null)
}

pub fn execute(command: Command) -> Result<(), Failure> {
    let command = match command {
        Command::Replay(r) => {
            let m = RunManifest::load(&r.manifest)?;
            let mut argv = vec!["ggbayes".to_string()];
            argv.extend(m.args.iter().cloned());
            argv.push("--out".into());
            argv.push(r.out.out.display().to_string());
            let cli = <Cli as clap::Parser>::try_parse_from(&argv)
                .map_err(|e| Failure::Usage(format!("manifest arguments do not parse: {e}")))?;
            if matches!(cli.command, Command::Replay(_)) {
                return Err(Failure::Usage("a manifest cannot point at another replay".into()));
            }
            cli.command
        }
        other => other,
    };
    let command = match command {
        Command::Fit(mut a) => {
            a.data = canonical_source(&a.data);
            Command::Fit(a)
        }
        Command::Compare(mut a) => {
            a.data = canonical_source(&a.data);
            Command::Compare(a)
        }
        Command::PriorCheck(mut a) => {
            a.data = canonical_source(&a.data);
            Command::PriorCheck(a)
        }
        other => other,
    };

    let started = unix_now();
    let mut out = Outputs::create(command.out_dir())?;
    let (input, seed, config) = match &command {
        Command::Fit(a) => {
            let cfg = fit(a, &mut out)?;
            (Some(a.data.clone()), Some(cfg.seed), config_value(&cfg))
        }
        Command::Simulate(a) => {
            let cfg = simulate(a, &mut out)?;
            (None, Some(cfg.master_seed), config_value(&cfg))
        }
        Command::Compare(a) => {
            let cfg = compare_cmd(a, &mut out)?;
            (Some(a.data.clone()), Some(cfg.seed), config_value(&cfg))
        }
        Command::PriorCheck(a) => {
            let opts = prior_check(a, &mut out)?;
            (Some(a.data.clone()), None, config_value(&opts))
        }
        Command::Replay(_) => unreachable!("replay resolved above"),
    };
    let manifest = RunManifest {
        tool: "ggbayes".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.name().into(),
        args: command.argv(),
        input,
        seed,
        config,
        outputs: out.written.clone(),
        started_unix: started,
        finished_unix: unix_now(),
    };
    out.json(FILE_NAME, &manifest)?;
    println!("wrote {} files to {}", out.written.len(), out.dir.display());
    Ok(())
}

fn load(source: &str) -> Result<Dataset, Failure> {
    Ok(load_dataset(source)?)
}

#[derive(Serialize)]
struct DatasetInfo<'a> {
    source: &'a str,
    n: usize,
    sum: f64,
}

#[derive(Serialize)]
struct FitSummary<'a> {
    dataset: DatasetInfo<'a>,
    config: &'a McmcConfig,
    draws: usize,
    acceptance_alpha: f64,
    acceptance_phi: f64,
    tuned_sd_log_alpha: f64,
    tuned_sd_log_phi: f64,
    #[serde(flatten)]
    summary: &'a ggbayes::Summary,
    warnings: Vec<String>,
}

fn fit(a: &FitArgs, out: &mut Outputs) -> Result<McmcConfig, Failure> {
    let data = load(&a.data)?;
    let cfg = a.mcmc.config();
    cfg.validate()?;
    let chain = run_chain(&data, &cfg, Init::Auto)?;
    let summary = summarize(&chain, &data)?;

    let mut warnings = Vec::new();
    for (name, block) in [("phi", &summary.phi), ("mu", &summary.mu), ("alpha", &summary.alpha)] {
        if !block.geweke_pass() {
            warnings.push(format!("Geweke |z| = {:.3} for {name} exceeds 1.96", block.geweke_z.abs()));
        }
    }
    if summary.degenerate {
        warnings.push("every draw is identical".into());
    }
    for w in &warnings {
        eprintln!("warning: {w}");
    }

    out.json(
        "summary.json",
        &FitSummary {
            dataset: DatasetInfo {
                source: &a.data,
                n: data.len(),
                sum: data.sum(),
            },
            config: &cfg,
            draws: chain.len(),
            acceptance_alpha: chain.acceptance_alpha,
            acceptance_phi: chain.acceptance_phi,
            tuned_sd_log_alpha: chain.tuned_sd_log_alpha,
            tuned_sd_log_phi: chain.tuned_sd_log_phi,
            summary: &summary,
            warnings,
        },
    )?;

    let mut w = out.open("chain.csv")?;
    write_chain(&mut w, &chain).map_err(|e| Failure::Runtime(e.to_string()))?;
    w.flush().map_err(|e| Failure::Runtime(e.to_string()))?;

    let series = [("phi", chain.phi_series()), ("mu", chain.mu_series()), ("alpha", chain.alpha_series())];
    let density: Vec<Vec<String>> = series
        .iter()
        .flat_map(|(name, s)| {
            log_kde(s, a.grid)
                .into_iter()
                .map(move |(x, d)| vec![name.to_string(), fmt17(x), fmt17(d)])
        })
        .collect();
    out.csv("density.csv", &["parameter", "x", "density"], density)?;

    let acf = acf_rows(&chain, a.acf_lags)?;
    out.csv(
        "acf.csv",
        &["lag", "phi", "mu", "alpha"],
        acf.into_iter()
            .map(|(k, r)| vec![k.to_string(), fmt17(r[0]), fmt17(r[1]), fmt17(r[2])]),
    )?;

    let mode = Params::new(summary.phi.mode, summary.mu.mode, summary.alpha.mode)?;
    out.csv(
        "fitted_curves.csv",
        &["t", "pdf", "survival", "hazard", "empirical_survival"],
        fitted_curves(&mode, &data, a.grid)
            .into_iter()
            .map(|r| r.map(fmt17).to_vec()),
    )?;

    println!("{:>6} {:>14} {:>14} {:>14} {:>14} {:>9}", "", "mode", "mean", "hpd95 low", "hpd95 high", "geweke z");
    for (name, b) in [("phi", &summary.phi), ("mu", &summary.mu), ("alpha", &summary.alpha)] {
        println!(
            "{name:>6} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e} {:>9.3}",
            b.mode, b.mean, b.hpd_low, b.hpd_high, b.geweke_z
        );
    }
    Ok(cfg)
}

fn simulate(a: &SimulateArgs, out: &mut Outputs) -> Result<StudyConfig, Failure> {
    let truth = Params::new(a.phi, a.mu, a.alpha).map_err(|e| Failure::Usage(e.to_string()))?;
    let cfg = StudyConfig {
        truth,
        sample_sizes: a.n.clone(),
        replications: a.reps,
        mcmc: a.mcmc.config(),
        master_seed: a.mcmc.seed,
        estimator: a.estimator,
    };
    cfg.validate()?;
    let report = run_study(&cfg)?;
    out.json("sim_report.json", &report)?;
    out.csv(
        "sim_report.csv",
        &[
            "parameter",
            "n",
            "mre",
            "mse",
            "L",
            "U",
            "C",
            "replications_used",
            "replications_failed",
            "geweke_pass_rate",
        ],
        report.rows.iter().map(|r| {
            vec![
                r.parameter.to_string(),
                r.n.to_string(),
                fmt17(r.mre),
                fmt17(r.mse),
                fmt17(r.cov_low),
                fmt17(r.cov_up),
                fmt17(r.cov),
                r.replications_used.to_string(),
                r.replications_failed.to_string(),
                fmt17(r.geweke_pass_rate),
            ]
        }),
    )?;
    println!("{:>6} {:>5} {:>8} {:>10} {:>6} {:>6} {:>6}", "param", "n", "MRE", "MSE", "L", "U", "C");
    for r in &report.rows {
        println!(
            "{:>6} {:>5} {:>8.4} {:>10.4} {:>6.3} {:>6.3} {:>6.3}",
            r.parameter, r.n, r.mre, r.mse, r.cov_low, r.cov_up, r.cov
        );
    }
    Ok(cfg)
}

#[derive(Serialize)]
struct ComparisonReport<'a> {
    dataset: DatasetInfo<'a>,
    config: &'a McmcConfig,
    winner_dic: Model,
    winner_bic: Model,
    fits: &'a [ggbayes::ModelFit],
    warnings: Vec<String>,
}

fn compare_cmd(a: &CompareArgs, out: &mut Outputs) -> Result<McmcConfig, Failure> {
    let data = load(&a.data)?;
    let cfg = a.mcmc.config();
    cfg.validate()?;
    let cmp = compare(&data, &cfg)?;
    let warnings: Vec<String> = cmp
        .fits
        .iter()
        .filter(|f| f.p_d_negative)
        .map(|f| format!("{}: negative effective parameter count p_D = {:.4e}", f.model, f.p_d))
        .collect();
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    out.json(
        "comparison.json",
        &ComparisonReport {
            dataset: DatasetInfo {
                source: &a.data,
                n: data.len(),
                sum: data.sum(),
            },
            config: &cfg,
            winner_dic: cmp.winner_dic,
            winner_bic: cmp.winner_bic,
            fits: &cmp.fits,
            warnings,
        },
    )?;
    let mut header = vec!["criterion"];
    let names: Vec<String> = cmp.fits.iter().map(|f| f.model.to_string()).collect();
    header.extend(names.iter().map(String::as_str));
    header.push("winner");
    let row = |label: &str, pick: fn(&ggbayes::ModelFit) -> f64, winner: Model| {
        let mut r = vec![label.to_string()];
        r.extend(cmp.fits.iter().map(|f| fmt17(pick(f))));
        r.push(winner.to_string());
        r
    };
    out.csv(
        "comparison.csv",
        &header,
        [row("DIC", |f| f.dic, cmp.winner_dic), row("BIC", |f| f.bic, cmp.winner_bic)],
    )?;
    println!("{:>10} {:>12} {:>12} {:>10}", "model", "DIC", "BIC", "p_D");
    for f in &cmp.fits {
        println!("{:>10} {:>12.3} {:>12.3} {:>10.3}", f.model.to_string(), f.dic, f.bic, f.p_d);
    }
    println!("best by DIC: {}, best by BIC: {}", cmp.winner_dic, cmp.winner_bic);
    Ok(cfg)
}

#[derive(Serialize)]
struct EvidenceReport<'a> {
    dataset: DatasetInfo<'a>,
    options: EvidenceOptions,
    #[serde(flatten)]
    evidence: &'a ggbayes::ProprietyEvidence,
    total_growth: f64,
}

fn prior_check(a: &PriorCheckArgs, out: &mut Outputs) -> Result<EvidenceOptions, Failure> {
    let data = load(&a.data)?;
    let opts = EvidenceOptions::default();
    let ev = propriety_evidence(a.prior, &data, a.levels, opts)?;
    out.json(
        "evidence.json",
        &EvidenceReport {
            dataset: DatasetInfo {
                source: &a.data,
                n: data.len(),
                sum: data.sum(),
            },
            options: opts,
            evidence: &ev,
            total_growth: ev.total_growth(),
        },
    )?;
    let opt = |v: Option<f64>| v.map(fmt17).unwrap_or_default();
    out.csv(
        "evidence.csv",
        &["level", "lower", "upper", "integral", "error", "ratio", "relative_increment", "converged"],
        ev.boxes.iter().map(|b| {
            vec![
                b.level.to_string(),
                fmt17(b.lower),
                fmt17(b.upper),
                fmt17(b.integral),
                fmt17(b.error),
                opt(b.ratio),
                opt(b.relative_increment),
                b.converged.to_string(),
            ]
        }),
    )?;
    println!("{:>5} {:>22} {:>14} {:>10}", "level", "box", "integral", "ratio");
    for b in &ev.boxes {
        println!(
            "{:>5} {:>22} {:>14.6e} {:>10}",
            b.level,
            format!("({}, {})^2", b.lower, b.upper),
            b.integral,
            b.ratio.map(|r| format!("{r:.4}")).unwrap_or_default()
        );
    }
    println!("verdict: {}", ev.verdict);
    Ok(opts)
}
