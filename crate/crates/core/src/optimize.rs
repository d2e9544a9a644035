//! Derivative-free Nelder–Mead minimization.

use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    /// Stop when the simplex's function values span less than this.
    pub f_tol: f64,
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_evals: 4000,
            f_tol: 1e-12,
            initial_step: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Minimum<T, const D: usize> {
    pub x: [T; D],
    pub value: T,
    pub evals: usize,
}

/// Minimizes `f` from `start`. Non-finite values are treated as +∞.
///
/// The returned point is never worse than `start`.
pub fn nelder_mead<T: Real, const D: usize>(
    mut f: impl FnMut(&[T; D]) -> T,
    start: [T; D],
    opts: NelderMeadOptions,
) -> Minimum<T, D> {
    let evals = std::cell::Cell::new(0usize);
    let mut eval = |x: &[T; D]| {
        evals.set(evals.get() + 1);
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            T::infinity()
        }
    };
    let step = T::lit(opts.initial_step);
    let mut simplex: Vec<([T; D], T)> = Vec::with_capacity(D + 1);
    simplex.push((start, eval(&start)));
    for i in 0..D {
        let mut x = start;
        x[i] = x[i] + step;
        let v = eval(&x);
        simplex.push((x, v));
    }
    let (alpha, gamma, rho, sigma) = (T::one(), T::lit(2.0), T::lit(0.5), T::lit(0.5));
    let combine = |a: &[T; D], b: &[T; D], t: T| {
        let mut out = *a;
        for k in 0..D {
            out[k] = a[k] + t * (b[k] - a[k]);
        }
        out
    };

    loop {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let spread = simplex[D].1 - simplex[0].1;
        if evals.get() >= opts.max_evals || (spread.is_finite() && spread.as_f64() <= opts.f_tol) {
            break;
        }
        let mut centroid = [T::zero(); D];
        for (x, _) in &simplex[..D] {
            for k in 0..D {
                centroid[k] = centroid[k] + x[k];
            }
        }
        let nd = T::from_usize(D).expect("dimension");
        for c in centroid.iter_mut() {
            *c = *c / nd;
        }
        let worst = simplex[D];
        let reflected = combine(&centroid, &worst.0, -alpha);
        let fr = eval(&reflected);
        if fr < simplex[0].1 {
            let expanded = combine(&centroid, &worst.0, -gamma);
            let fe = eval(&expanded);
            simplex[D] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[D - 1].1 {
            simplex[D] = (reflected, fr);
        } else {
            let (contracted, fc) = if fr < worst.1 {
                let c = combine(&centroid, &reflected, rho);
                (c, eval(&c))
            } else {
                let c = combine(&centroid, &worst.0, rho);
                (c, eval(&c))
            };
            if fc < worst.1.min(fr) {
                simplex[D] = (contracted, fc);
            } else {
                let best = simplex[0].0;
                for entry in simplex.iter_mut().skip(1) {
                    let x = combine(&best, &entry.0, sigma);
                    *entry = (x, eval(&x));
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    Minimum {
        x: simplex[0].0,
        value: simplex[0].1,
        evals: evals.get(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let m = nelder_mead(
            |x: &[f64; 2]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            [-1.2, 1.0],
            NelderMeadOptions {
                max_evals: 20_000,
                f_tol: 1e-20,
                initial_step: 0.5,
            },
        );
        assert!((m.x[0] - 1.0).abs() < 1e-5 && (m.x[1] - 1.0).abs() < 1e-5, "{:?}", m.x);
    }

    #[test]
    fn never_worse_than_start() {
        let f = |x: &[f64; 3]| x.iter().map(|v| (v - 2.0).powi(2)).sum::<f64>();
        let start = [1.9, 2.1, 2.0];
        let m = nelder_mead(f, start, NelderMeadOptions::default());
        assert!(m.value <= f(&start));
    }
}
