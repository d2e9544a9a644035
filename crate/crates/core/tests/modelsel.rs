//! Sub-model fits and information criteria.

use ggbayes::modelsel::{fit_submodel, ModelParams};
use ggbayes::*;

fn posterior_means(fit: &ModelFit) -> [f64; 3] {
    let mut acc = [0.0; 3];
    for d in &fit.draws {
        let ModelParams::Gg(p) = d else { unreachable!() };
        for (a, v) in acc.iter_mut().zip(p.to_array()) {
            *a += v;
        }
    }
    acc.map(|a| a / fit.draws.len() as f64)
}

fn simulated(p: Params, n: usize, seed: u64) -> Dataset {
    Dataset::new(p.sample(n, &mut RandomSource::new(seed)).unwrap()).unwrap()
}

#[test]
fn weibull_fit_recovers_truth() {
    let data = simulated(Params::new(1.0, 0.5, 2.0).unwrap(), 10_000, 1);
    let fit = fit_submodel(Model::Weibull, &data, &McmcConfig::with_seed(2)).unwrap();
    let [phi, mu, alpha] = posterior_means(&fit);
    assert_eq!(phi, 1.0);
    assert!((mu / 0.5 - 1.0).abs() < 0.05, "{mu}");
    assert!((alpha / 2.0 - 1.0).abs() < 0.05, "{alpha}");
    assert_eq!(fit.k, 2);
}

#[test]
fn gamma_fit_recovers_truth() {
    let data = simulated(Params::new(3.0, 2.0, 1.0).unwrap(), 10_000, 3);
    let fit = fit_submodel(Model::Gamma, &data, &McmcConfig::with_seed(4)).unwrap();
    let [phi, mu, alpha] = posterior_means(&fit);
    assert_eq!(alpha, 1.0);
    assert!((phi / 3.0 - 1.0).abs() < 0.05, "{phi}");
    assert!((mu / 2.0 - 1.0).abs() < 0.05, "{mu}");
}

#[test]
fn criteria_are_internally_consistent() {
    let data = load_dataset("meeker").unwrap();
    let cmp = compare(&data, &McmcConfig::with_seed(5)).unwrap();
    assert_eq!(cmp.fits.len(), 4);
    for f in &cmp.fits {
        assert!((f.dic - (f.mean_deviance + f.p_d)).abs() < 1e-9 * f.dic.abs().max(1.0));
        assert!((f.p_d - (f.mean_deviance - f.deviance_at_mean)).abs() < 1e-9 * f.p_d.abs().max(1.0));
        assert_eq!(f.k, if f.model == Model::Gg { 3 } else { 2 });
        assert_eq!(f.p_d_negative, f.p_d < 0.0);
    }
    for m in [Model::Weibull, Model::Gamma, Model::Lognormal] {
        let f = cmp.fit(m).unwrap();
        assert!(f.p_d >= 0.0, "{m}: p_D = {}", f.p_d);
    }
}

#[test]
fn deviance_at_reference_mode() {
    let data = load_dataset("meeker").unwrap();
    let p = Params::new(0.08135, 0.00299, 10.48558).unwrap();
    let d = modelsel::deviance(&ModelParams::Gg(p), &data).unwrap();
    assert!((d + 2.0 * log_likelihood(&p, &data).unwrap()).abs() < 1e-12 * d);
    // frozen-φ GG and the Weibull form agree
    let w = Params::new(1.0, 0.0052, 1.25).unwrap();
    let direct: f64 = data
        .values()
        .iter()
        .map(|&t| {
            let z = 0.0052 * t;
            1.25f64.ln() + 1.25 * 0.0052f64.ln() + 0.25 * t.ln() - z.powf(1.25)
        })
        .sum();
    assert!((modelsel::deviance(&ModelParams::Gg(w), &data).unwrap() + 2.0 * direct).abs() < 1e-10);
}
