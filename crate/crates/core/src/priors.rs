//! The five prior specifications, the μ-marginalized posterior integrands
//! over (α, φ), and numerical evidence of (im)propriety on nested boxes.
//!
//! Every prior factorizes as `a(α) · b(φ) · μ^c`:
//!
//! | spec                | a(α)                    | b(φ)     | c  |
//! |---------------------|-------------------------|----------|----|
//! | `AlphaInterest`     | α                       | √ψ′(φ)   | −1 |
//! | `PhiInterest`       | 1/α                     | π(φ)     | −1 |
//! | `MuInterest`        | 1/α                     | √ψ′(φ)   | +1 |
//! | `OrderedTheta`      | 1/α                     | √ψ′(φ)   | −1 |
//! | `ModifiedReference` | α^{1/2 − 2α/(1+α)}      | √ψ′(φ)   | −1 |
//!
//! so μ integrates in closed form against the likelihood:
//! `∫ μ^{nαφ+c} e^{−μ^α S} dμ = Γ(k) / (α S^k)` with `k = nφ + (c+1)/α`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ggdist::GgParams;
use crate::posterior::Lifetimes;
use crate::quadrature::{integrate, integrate_2d, QuadResult, Rect, Tolerance};
use crate::scalar::Real;
use crate::specfun::{ln_gamma, trigamma};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PriorSpec {
    AlphaInterest,
    PhiInterest,
    MuInterest,
    OrderedTheta,
    ModifiedReference,
}

impl PriorSpec {
    pub const ALL: [PriorSpec; 5] = [
        PriorSpec::AlphaInterest,
        PriorSpec::PhiInterest,
        PriorSpec::MuInterest,
        PriorSpec::OrderedTheta,
        PriorSpec::ModifiedReference,
    ];

    /// Short name used on the command line.
    pub fn key(self) -> &'static str {
        match self {
            PriorSpec::AlphaInterest => "alpha",
            PriorSpec::PhiInterest => "phi",
            PriorSpec::MuInterest => "mu",
            PriorSpec::OrderedTheta => "ordered",
            PriorSpec::ModifiedReference => "modified",
        }
    }

    fn log_alpha_factor<T: Real>(self, alpha: T) -> Result<T> {
        match self {
            PriorSpec::AlphaInterest => Ok(alpha.ln()),
            PriorSpec::ModifiedReference => modified_alpha_log_density(alpha),
            _ => Ok(-alpha.ln()),
        }
    }

    fn log_phi_factor<T: Real>(self, phi: T) -> Result<T> {
        match self {
            PriorSpec::PhiInterest => phi_interest_log_density(phi),
            _ => Ok(T::lit(0.5) * trigamma(phi)?.ln()),
        }
    }

    fn mu_power(self) -> i32 {
        match self {
            PriorSpec::MuInterest => 1,
            _ => -1,
        }
    }
}

impl fmt::Display for PriorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for PriorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PriorSpec::ALL
            .into_iter()
            .find(|p| p.key() == s)
            .ok_or_else(|| Error::Config(format!("unknown prior {s:?}; expected alpha, phi, mu, ordered or modified")))
    }
}

/// `ln π(φ)` for the φ-of-interest prior, with the radicand evaluated as
/// written: `(φ + φ²ψ′ − 1) / (φ²ψ′² − ψ′ − 1)`.
///
/// A non-positive radicand is reported, never clamped.
pub fn phi_interest_log_density<T: Real>(phi: T) -> Result<T> {
    let psi1 = trigamma(phi)?;
    let one = T::one();
    let num = phi + phi * phi * psi1 - one;
    let den = phi * phi * psi1 * psi1 - psi1 - one;
    let radicand = num / den;
    if !(radicand > T::zero() && radicand.is_finite()) {
        return Err(Error::domain(
            "phi_interest_prior",
            format!(
                "radicand ({:e}) / ({:e}) is not positive at phi = {:e}",
                num.as_f64(),
                den.as_f64(),
                phi.as_f64()
            ),
        ));
    }
    Ok(T::lit(0.5) * radicand.ln())
}

/// `(1/2 − 2α/(1+α)) ln α`, the unnormalized log of the modified α prior.
pub fn modified_alpha_log_density<T: Real>(alpha: T) -> Result<T> {
    if !(alpha > T::zero() && alpha.is_finite()) {
        return Err(Error::domain("modified_alpha_log_density", format!("alpha must be positive, got {alpha}")));
    }
    let two = T::lit(2.0);
    Ok((T::lit(0.5) - two * alpha / (T::one() + alpha)) * alpha.ln())
}

/// Normalizing constant `k = ∫₀^∞ α^{1/2 − 2α/(1+α)} dα` of the modified α prior.
///
/// The tail behaves like `α^{-3/2}`, so `[1, ∞)` is mapped through
/// `α = 1/v²`, which leaves a bounded integrand on `(0, 1]`.
pub fn modified_alpha_normalizer() -> Result<QuadResult> {
    let tol = Tolerance {
        abs: 0.0,
        rel: 1e-10,
        max_panels: 5000,
    };
    let f = |a: f64| {
        if a <= 0.0 {
            0.0
        } else {
            modified_alpha_log_density(a).map(f64::exp).unwrap_or(f64::NAN)
        }
    };
    let g = |v: f64| {
        let a = 1.0 / (v * v);
        if !a.is_finite() {
            return 2.0;
        }
        // f(α) · 2α^{3/2}
        modified_alpha_log_density(a)
            .map(|l| 2.0 * (l + 1.5 * a.ln()).exp())
            .unwrap_or(f64::NAN)
    };
    let head = integrate(f, 0.0, 1.0, tol)?;
    let tail = integrate(g, 0.0, 1.0, tol)?;
    Ok(QuadResult {
        value: head.value + tail.value,
        error: head.error + tail.error,
        panels: head.panels + tail.panels,
        converged: head.converged && tail.converged,
    })
}

/// Unnormalized log prior density.
pub fn log_prior<T: Real>(spec: PriorSpec, p: &GgParams<T>) -> Result<T> {
    let mu_term = T::from_i32(spec.mu_power()).expect("small int") * p.mu().ln();
    Ok(spec.log_alpha_factor(p.alpha())? + spec.log_phi_factor(p.phi())? + mu_term)
}

/// `q(α) = ln(Σ tᵢ^α / (∏ tᵢ^α)^{1/n})`; at least `ln n` by AM–GM.
pub fn q_stat<T: Real>(alpha: T, data: &Lifetimes<T>) -> T {
    data.log_sum_pow(alpha) - alpha * data.sum_log() / data.n()
}

/// `p(α) = q(α) − ln n`; non-negative.
pub fn p_stat<T: Real>(alpha: T, data: &Lifetimes<T>) -> T {
    q_stat(alpha, data) - data.n().ln()
}

/// Log of the (α, φ) integrand left after integrating μ out of prior × likelihood.
pub fn marginal_mu_log_integrand<T: Real>(spec: PriorSpec, data: &Lifetimes<T>, alpha: T, phi: T) -> Result<T> {
    if !(alpha > T::zero() && alpha.is_finite() && phi > T::zero() && phi.is_finite()) {
        return Err(Error::domain(
            "marginal_mu_log_integrand",
            format!("alpha and phi must be positive, got alpha={alpha}, phi={phi}"),
        ));
    }
    let n = data.n();
    let c = T::from_i32(spec.mu_power()).expect("small int");
    let k = n * phi + (c + T::one()) / alpha;
    Ok(spec.log_alpha_factor(alpha)? + spec.log_phi_factor(phi)? + (n - T::one()) * alpha.ln()
        - n * ln_gamma(phi)?
        + (alpha * phi - T::one()) * data.sum_log()
        + ln_gamma(k)?
        - k * data.log_sum_pow(alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Diverging,
    Converging,
    /// Neither rule fired at the levels examined.
    Undetermined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Diverging => "diverging",
            Verdict::Converging => "converging",
            Verdict::Undetermined => "undetermined",
        })
    }
}

/// Thresholds for [`propriety_evidence`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EvidenceOptions {
    /// Every box-to-box ratio above this means diverging.
    pub growth_threshold: f64,
    /// A final relative increment below this means converging.
    pub convergence_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for EvidenceOptions {
    fn default() -> Self {
        Self {
            growth_threshold: 1.5,
            convergence_tol: 1e-3,
            rel_tol: 1e-7,
            max_panels: 4000,
        }
    }
}

/// One nested box `(2^{-k}, 2^k)²` in (α, φ) and the integral over it.
#[derive(Debug, Clone, Serialize)]
pub struct BoxIntegral {
    pub level: u32,
    pub lower: f64,
    pub upper: f64,
    /// Integral of `exp(log integrand − log_scale)`.
    pub integral: f64,
    pub error: f64,
    /// `integral / previous integral`; absent for the first box.
    pub ratio: Option<f64>,
    /// `(integral − previous) / integral`; absent for the first box.
    pub relative_increment: Option<f64>,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProprietyEvidence {
    pub prior: PriorSpec,
    pub boxes: Vec<BoxIntegral>,
    /// Common offset subtracted from the log integrand; integrals are `exp(−log_scale)` times the true ones.
    pub log_scale: f64,
    pub verdict: Verdict,
}

impl ProprietyEvidence {
    pub fn integrals(&self) -> Vec<f64> {
        self.boxes.iter().map(|b| b.integral).collect()
    }

    /// Last integral over the first.
    pub fn total_growth(&self) -> f64 {
        let v = self.integrals();
        v[v.len() - 1] / v[0]
    }
}

/// Integrates the μ-marginalized posterior over the nested boxes
/// `(2^{-k}, 2^k)²`, `k = 1..=levels`, and classifies the sequence.
///
/// Work is done in `(ln α, ln φ)`, with each new box integrated as the old
/// one plus the four rectangles of the surrounding ring, so the sequence is
/// nondecreasing by construction.
pub fn propriety_evidence(
    spec: PriorSpec,
    data: &Lifetimes<f64>,
    levels: u32,
    opts: EvidenceOptions,
) -> Result<ProprietyEvidence> {
    if levels < 3 {
        return Err(Error::Config(format!("levels must be at least 3, got {levels}")));
    }
    if !data.has_distinct_values() {
        return Err(Error::Config("propriety evidence needs at least two distinct lifetimes".into()));
    }
    let ln2 = std::f64::consts::LN_2;
    let log_f = |u: f64, v: f64| -> Result<f64> {
        Ok(marginal_mu_log_integrand(spec, data, u.exp(), v.exp())? + u + v)
    };

    // Offset from the largest value on a coarse grid over the biggest box.
    let half = f64::from(levels) * ln2;
    let grid = 64;
    let mut log_scale = f64::NEG_INFINITY;
    for i in 0..=grid {
        for j in 0..=grid {
            let u = -half + 2.0 * half * f64::from(i) / f64::from(grid);
            let v = -half + 2.0 * half * f64::from(j) / f64::from(grid);
            let lf = log_f(u, v)?;
            if lf.is_finite() && lf > log_scale {
                log_scale = lf;
            }
        }
    }
    if !log_scale.is_finite() {
        return Err(Error::Quadrature {
            region: format!("({0}, {1})^2", 2f64.powi(-(levels as i32)), 2f64.powi(levels as i32)),
            detail: "integrand is not finite anywhere on the grid".into(),
        });
    }

    let tol = Tolerance {
        abs: 0.0,
        rel: opts.rel_tol,
        max_panels: opts.max_panels,
    };
    let integrate_rect = |r: Rect| -> Result<QuadResult> {
        integrate_2d(|u, v| Ok((log_f(u, v)? - log_scale).exp()), r, tol).map_err(|e| match e {
            Error::Quadrature { detail, .. } => Error::Quadrature {
                region: format!(
                    "alpha in ({:.6e}, {:.6e}), phi in ({:.6e}, {:.6e})",
                    r.x0.exp(),
                    r.x1.exp(),
                    r.y0.exp(),
                    r.y1.exp()
                ),
                detail,
            },
            other => other,
        })
    };

    let mut boxes: Vec<BoxIntegral> = Vec::with_capacity(levels as usize);
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut all_converged = true;
    for k in 1..=levels {
        let outer = f64::from(k) * ln2;
        let pieces = if k == 1 {
            vec![Rect {
                x0: -outer,
                x1: outer,
                y0: -outer,
                y1: outer,
            }]
        } else {
            let inner = outer - ln2;
            vec![
                Rect { x0: -outer, x1: outer, y0: -outer, y1: -inner },
                Rect { x0: -outer, x1: outer, y0: inner, y1: outer },
                Rect { x0: -outer, x1: -inner, y0: -inner, y1: inner },
                Rect { x0: inner, x1: outer, y0: -inner, y1: inner },
            ]
        };
        for r in pieces {
            let q = integrate_rect(r)?;
            total += q.value;
            total_err += q.error;
            all_converged &= q.converged;
        }
        let prev = boxes.last().map(|b| b.integral);
        boxes.push(BoxIntegral {
            level: k,
            lower: 2f64.powi(-(k as i32)),
            upper: 2f64.powi(k as i32),
            integral: total,
            error: total_err,
            ratio: prev.map(|p| total / p),
            relative_increment: prev.map(|p| (total - p) / total),
            converged: all_converged,
        });
    }

    let verdict = classify(&boxes, opts);
    Ok(ProprietyEvidence {
        prior: spec,
        boxes,
        log_scale,
        verdict,
    })
}

fn classify(boxes: &[BoxIntegral], opts: EvidenceOptions) -> Verdict {
    let last = boxes.last().expect("at least one box");
    if last.relative_increment.is_some_and(|r| r < opts.convergence_tol) {
        return Verdict::Converging;
    }
    if boxes[1..]
        .iter()
        .all(|b| b.ratio.is_some_and(|r| r > opts.growth_threshold))
    {
        return Verdict::Diverging;
    }
    Verdict::Undetermined
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn data(v: &[f64]) -> Lifetimes<f64> {
        Lifetimes::new(v.to_vec()).unwrap()
    }

    #[test]
    fn ordered_prior_at_unit_params() {
        let p = GgParams::new(1.0, 1.0, 1.0).unwrap();
        let v = log_prior(PriorSpec::OrderedTheta, &p).unwrap();
        assert!((v - 0.5 * (PI * PI / 6.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn modified_prior_at_alpha_one() {
        for (phi, mu) in [(0.3, 2.0), (1.0, 0.5), (4.0, 10.0)] {
            let p = GgParams::new(phi, mu, 1.0).unwrap();
            let expected = 0.5 * trigamma::<f64>(phi).unwrap().ln() - f64::ln(mu);
            assert!((log_prior(PriorSpec::ModifiedReference, &p).unwrap() - expected).abs() < 1e-12);
        }
        assert_eq!(modified_alpha_log_density(1.0_f64).unwrap(), 0.0);
        assert!(modified_alpha_log_density(0.0_f64).is_err());
    }

    #[test]
    fn prior_ratio_identities() {
        for &(phi, mu, alpha) in &[(0.4, 1.5, 5.0), (2.0, 0.01, 0.3), (0.08, 0.003, 10.5)] {
            let p = GgParams::new(phi, mu, alpha).unwrap();
            let (la, lm) = (f64::ln(alpha), f64::ln(mu));
            let ord = log_prior(PriorSpec::OrderedTheta, &p).unwrap();
            let a = log_prior(PriorSpec::AlphaInterest, &p).unwrap();
            let m = log_prior(PriorSpec::MuInterest, &p).unwrap();
            let md = log_prior(PriorSpec::ModifiedReference, &p).unwrap();
            assert!((a - ord - 2.0 * la).abs() < 1e-12);
            assert!((m - ord - 2.0 * lm).abs() < 1e-12);
            assert!((md - ord - (1.5 - 2.0 * alpha / (1.0 + alpha)) * la).abs() < 1e-12);
        }
    }

    #[test]
    fn phi_interest_radicand_positive_for_moderate_phi() {
        for phi in [0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 20.0, 64.0] {
            assert!(phi_interest_log_density::<f64>(phi).unwrap().is_finite(), "phi={phi}");
        }
    }

    #[test]
    fn phi_interest_radicand_failure_is_reported() {
        // the denominator cancels catastrophically for very large φ
        let bad = (10..40).map(|k| 2f64.powi(k)).find(|&phi| phi_interest_log_density(phi).is_err());
        assert!(bad.is_some());
        let err = phi_interest_log_density(bad.unwrap()).unwrap_err();
        assert!(matches!(err, Error::Domain { .. }));
    }

    #[test]
    fn q_and_p_examples() {
        let ones = data(&[1.0, 1.0, 1.0]);
        for a in [0.3, 1.0, 7.0] {
            assert!((q_stat(a, &ones) - 3f64.ln()).abs() < 1e-12);
            assert!(p_stat(a, &ones).abs() < 1e-12);
        }
        let d = data(&[1.0, 2.0, 4.0]);
        assert!((q_stat(1.0, &d) - 3.5f64.ln()).abs() < 1e-12);
        assert!((p_stat(1.0, &d) - (7.0f64 / 6.0).ln()).abs() < 1e-12);
        // {0.5, 3}, α = 2: Σ = 9.25, geometric mean of squares = 1.5
        let d = data(&[0.5, 3.0]);
        assert!((q_stat(2.0, &d) - (9.25f64 / 1.5).ln()).abs() < 1e-12);
        assert!((p_stat(2.0, &d) - (4.625f64 / 1.5).ln()).abs() < 1e-12);
    }

    #[test]
    fn ordered_integrand_substitution() {
        let d = data(&[1.0, 1.0]);
        let v = marginal_mu_log_integrand(PriorSpec::OrderedTheta, &d, 1.0, 1.0).unwrap();
        let expected = 0.5 * (PI * PI / 6.0).ln() + ln_gamma(2.0).unwrap() - 2.0 * 2f64.ln();
        assert!((v - expected).abs() < 1e-12);
    }

    #[test]
    fn integrand_ratio_between_specs() {
        let d = data(&[0.4, 1.3, 2.2, 5.0]);
        for (a, phi) in [(0.5, 0.7), (3.0, 0.2), (11.0, 2.0)] {
            let m = marginal_mu_log_integrand(PriorSpec::ModifiedReference, &d, a, phi).unwrap();
            let o = marginal_mu_log_integrand(PriorSpec::OrderedTheta, &d, a, phi).unwrap();
            assert!((m - o - (1.5 - 2.0 * a / (1.0 + a)) * f64::ln(a)).abs() < 1e-10);
            let al = marginal_mu_log_integrand(PriorSpec::AlphaInterest, &d, a, phi).unwrap();
            assert!((al - o - 2.0 * f64::ln(a)).abs() < 1e-10);
        }
    }

    #[test]
    fn spec_names_round_trip() {
        for p in PriorSpec::ALL {
            assert_eq!(p.key().parse::<PriorSpec>().unwrap(), p);
        }
        assert!("jeffreys".parse::<PriorSpec>().is_err());
    }

    #[test]
    fn evidence_input_validation() {
        let d = data(&[1.0, 2.0]);
        assert!(propriety_evidence(PriorSpec::ModifiedReference, &d, 2, EvidenceOptions::default()).is_err());
        let same = data(&[2.0, 2.0, 2.0]);
        assert!(propriety_evidence(PriorSpec::ModifiedReference, &same, 4, EvidenceOptions::default()).is_err());
    }
}
