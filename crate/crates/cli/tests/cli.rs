use std::fs;
use std::io::BufReader;
use std::path::Path;
use std::process::{Command, Output};

use ggbayes::{load_dataset, run_chain, Init, McmcConfig};
use ggbayes_cli::chain_io::read_chain;
use ggbayes_cli::manifest::RunManifest;
use serde_json::Value;
use tempfile::TempDir;

const SHORT: [&str; 8] = ["--iters", "1200", "--burnin", "200", "--thin", "10", "--seed", "7"];

fn ggbayes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ggbayes"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn with_out<'a>(args: &[&'a str], out: &'a Path) -> Vec<&'a str> {
    let mut v = args.to_vec();
    v.push("--out");
    v.push(out.to_str().unwrap());
    v
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn short_fit<'a>(extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = extra.to_vec();
    v.extend(SHORT);
    v
}

/// Runs `args`, replays the manifest into a second directory and asserts
/// every numeric artifact matches byte for byte.
fn assert_replay_identical(args: &[&str]) {
    let tmp = TempDir::new().unwrap();
    let first = tmp.path().join("first");
    let second = tmp.path().join("second");
    let o = ggbayes(&with_out(args, &first));
    assert!(o.status.success(), "{}", stderr(&o));
    let manifest = first.join("manifest.json");
    let o = ggbayes(&with_out(&["replay", manifest.to_str().unwrap()], &second));
    assert!(o.status.success(), "{}", stderr(&o));

    let m = RunManifest::load(&manifest).unwrap();
    assert!(!m.outputs.is_empty());
    for name in &m.outputs {
        let a = fs::read(first.join(name)).unwrap();
        let b = fs::read(second.join(name)).unwrap();
        assert!(a == b, "{name} differs after replay");
    }
    let m2 = RunManifest::load(&second.join("manifest.json")).unwrap();
    assert_eq!(m.args, m2.args);
    assert_eq!(m.config, m2.config);
    assert_eq!(m.seed, m2.seed);
}

#[test]
fn fit_writes_table_shaped_summary() {
    let tmp = TempDir::new().unwrap();
    let o = ggbayes(&with_out(&short_fit(&["fit", "--data", "meeker"]), tmp.path()));
    assert!(o.status.success(), "{}", stderr(&o));
    let s = json(&tmp.path().join("summary.json"));
    for p in ["phi", "mu", "alpha"] {
        let block = &s[p];
        assert!(block.is_object(), "missing block {p}: {s}");
        assert!(block["hpd_low"].as_f64().unwrap() <= block["hpd_high"].as_f64().unwrap());
    }
    assert_eq!(s["dataset"]["n"], 30);
    for f in ["chain.csv", "density.csv", "acf.csv", "fitted_curves.csv", "manifest.json"] {
        assert!(tmp.path().join(f).is_file(), "{f} not written");
    }
}

#[test]
fn chain_csv_reloads_to_the_sampled_chain() {
    let tmp = TempDir::new().unwrap();
    let o = ggbayes(&with_out(&short_fit(&["fit", "--data", "meeker"]), tmp.path()));
    assert!(o.status.success(), "{}", stderr(&o));
    let file = fs::File::open(tmp.path().join("chain.csv")).unwrap();
    let loaded = read_chain(BufReader::new(file)).unwrap();

    let cfg = McmcConfig {
        iterations: 1200,
        burn_in: 200,
        thin: 10,
        seed: 7,
        ..McmcConfig::default()
    };
    let data = load_dataset("meeker").unwrap();
    let direct = run_chain(&data, &cfg, Init::Auto).unwrap();
    assert_eq!(loaded, direct);
}

#[test]
fn missing_file_is_a_usage_error_naming_the_path() {
    let tmp = TempDir::new().unwrap();
    let missing = tmp.path().join("no_such_lifetimes.txt");
    let o = ggbayes(&with_out(&["fit", "--data", missing.to_str().unwrap()], tmp.path()));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no_such_lifetimes.txt"), "{}", stderr(&o));
}

#[test]
fn zero_thinning_is_rejected() {
    let tmp = TempDir::new().unwrap();
    let o = ggbayes(&with_out(&["fit", "--data", "meeker", "--thin", "0"], tmp.path()));
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn nonpositive_lifetime_names_the_line() {
    let tmp = TempDir::new().unwrap();
    let file = tmp.path().join("bad.txt");
    fs::write(&file, "3.0\n-1\n").unwrap();
    let o = ggbayes(&with_out(&["fit", "--data", file.to_str().unwrap()], tmp.path()));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn negative_phi_is_rejected() {
    let tmp = TempDir::new().unwrap();
    let o = ggbayes(&with_out(&["simulate", "--phi", "-0.4", "--reps", "5"], tmp.path()));
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let o = ggbayes(&["fit", "--data", "meeker", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_smoke_run() {
    let tmp = TempDir::new().unwrap();
    let args = [
        "simulate", "--n", "30,60", "--reps", "5", "--iters", "1200", "--burnin", "200", "--thin", "10", "--seed",
        "3",
    ];
    let o = ggbayes(&with_out(&args, tmp.path()));
    assert!(o.status.success(), "{}", stderr(&o));
    let r = json(&tmp.path().join("sim_report.json"));
    assert_eq!(r["rows"].as_array().unwrap().len(), 6);
    let csv = fs::read_to_string(tmp.path().join("sim_report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 7);
}

#[test]
fn compare_on_two_points_runs_and_names_winners() {
    let tmp = TempDir::new().unwrap();
    let file = tmp.path().join("two.txt");
    fs::write(&file, "1.0\n2.5\n").unwrap();
    let out = tmp.path().join("cmp");
    let o = ggbayes(&with_out(&short_fit(&["compare", "--data", file.to_str().unwrap()]), &out));
    assert!(o.status.success(), "{}", stderr(&o));
    let c = json(&out.join("comparison.json"));
    for key in ["winner_dic", "winner_bic"] {
        let w = c[key].as_str().unwrap();
        assert!(["GG", "Weibull", "Gamma", "Lognormal"].contains(&w), "{key} = {w}");
    }
    assert_eq!(c["fits"].as_array().unwrap().len(), 4);
    let csv = fs::read_to_string(out.join("comparison.csv")).unwrap();
    assert!(csv.lines().next().unwrap().ends_with("winner"));
}

#[test]
fn prior_check_ordered_diverges() {
    let tmp = TempDir::new().unwrap();
    let o = ggbayes(&with_out(&["prior-check", "--data", "meeker", "--prior", "ordered"], tmp.path()));
    assert!(o.status.success(), "{}", stderr(&o));
    let e = json(&tmp.path().join("evidence.json"));
    assert_eq!(e["verdict"], "diverging");
    assert_eq!(e["boxes"].as_array().unwrap().len(), 6);
}

#[test]
fn prior_check_phi_surfaces_domain_error() {
    let tmp = TempDir::new().unwrap();
    let o = ggbayes(&with_out(
        &["prior-check", "--data", "meeker", "--prior", "phi", "--levels", "40"],
        tmp.path(),
    ));
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("radicand"), "{}", stderr(&o));
}

#[test]
fn manifest_records_the_run() {
    let tmp = TempDir::new().unwrap();
    let o = ggbayes(&with_out(&short_fit(&["fit", "--data", "meeker"]), tmp.path()));
    assert!(o.status.success());
    let m = RunManifest::load(&tmp.path().join("manifest.json")).unwrap();
    assert_eq!(m.command, "fit");
    assert_eq!(m.seed, Some(7));
    assert_eq!(m.input.as_deref(), Some("meeker"));
    assert!(m.outputs.contains(&"chain.csv".to_string()));
}

#[test]
fn replay_is_byte_identical_for_fit() {
    assert_replay_identical(&short_fit(&["fit", "--data", "meeker"]));
}

#[test]
fn replay_is_byte_identical_for_compare() {
    assert_replay_identical(&short_fit(&["compare", "--data", "meeker"]));
}

#[test]
fn replay_is_byte_identical_for_simulate() {
    assert_replay_identical(&[
        "simulate", "--n", "40", "--reps", "4", "--iters", "1200", "--burnin", "200", "--thin", "10", "--seed", "5",
    ]);
}

#[test]
fn replay_is_byte_identical_for_prior_check() {
    assert_replay_identical(&["prior-check", "--data", "meeker", "--prior", "modified", "--levels", "4"]);
}
