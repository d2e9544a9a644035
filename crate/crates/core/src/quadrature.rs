//! Adaptive Gauss–Kronrod quadrature in one and two dimensions.
//!
//! Both routines are globally adaptive: the panel with the largest error
//! estimate is bisected until the summed error meets the tolerance or the
//! panel budget runs out. Panels are processed in a fixed order, so results
//! are bit-reproducible.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// 15 nodes on [-1, 1] with their Kronrod and Gauss weights (Gauss weight 0 off the 7-point grid).
fn nodes15() -> [(f64, f64, f64); 15] {
    let mut out = [(0.0, 0.0, 0.0); 15];
    for i in 0..7 {
        let wg = if i % 2 == 1 { WG[i / 2] } else { 0.0 };
        out[i] = (-XGK[i], WGK[i], wg);
        out[14 - i] = (XGK[i], WGK[i], wg);
    }
    out[7] = (0.0, WGK[7], WG[3]);
    out
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-13,
            rel: 1e-10,
            max_panels: 2000,
        }
    }
}

impl Tolerance {
    fn met(&self, value: f64, error: f64) -> bool {
        error <= self.abs.max(self.rel * value.abs())
    }
}

struct Panel1 {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Panel1> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let (mut k, mut g) = (0.0, 0.0);
    for (x, wk, wg) in nodes15() {
        let t = centre + half * x;
        let y = f(t);
        if !y.is_finite() {
            return Err(Error::Quadrature {
                region: format!("[{a}, {b}]"),
                detail: format!("integrand is {y} at {t}"),
            });
        }
        k += wk * y;
        g += wg * y;
    }
    Ok(Panel1 {
        a,
        b,
        value: k * half,
        error: ((k - g) * half).abs(),
    })
}

fn largest(errors: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_err = f64::NEG_INFINITY;
    for (i, e) in errors.enumerate() {
        if e > best_err {
            best = i;
            best_err = e;
        }
    }
    best
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<QuadResult> {
    let mut panels = vec![gk15(&mut f, a, b)?];
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if tol.met(value, error) || panels.len() >= tol.max_panels {
            return Ok(QuadResult {
                value,
                error,
                panels: panels.len(),
                converged: tol.met(value, error),
            });
        }
        let worst = panels.swap_remove(largest(panels.iter().map(|p| p.error)));
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            panels.push(worst);
            let value: f64 = panels.iter().map(|p| p.value).sum();
            return Ok(QuadResult {
                value,
                error,
                panels: panels.len(),
                converged: false,
            });
        }
        panels.push(gk15(&mut f, worst.a, mid)?);
        panels.push(gk15(&mut f, mid, worst.b)?);
    }
}

/// Integrates `f` over `[a, ∞)` through the map `x = a + u / (1 - u)`.
/// `f` is taken to vanish at infinity.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(mut f: F, a: f64, tol: Tolerance) -> Result<QuadResult> {
    integrate(
        |u| {
            let w = 1.0 - u;
            let x = a + u / w;
            if !x.is_finite() {
                return 0.0;
            }
            let y = f(x);
            if y == 0.0 {
                0.0
            } else {
                y / (w * w)
            }
        },
        0.0,
        1.0,
        tol,
    )
}

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl std::fmt::Display for Rect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}] x [{}, {}]", self.x0, self.x1, self.y0, self.y1)
    }
}

struct Panel2 {
    rect: Rect,
    value: f64,
    error: f64,
    split_x: bool,
}

fn gk15_2d<F: FnMut(f64, f64) -> Result<f64>>(f: &mut F, rect: Rect) -> Result<Panel2> {
    let nodes = nodes15();
    let (cx, hx) = (0.5 * (rect.x0 + rect.x1), 0.5 * (rect.x1 - rect.x0));
    let (cy, hy) = (0.5 * (rect.y0 + rect.y1), 0.5 * (rect.y1 - rect.y0));
    // kk: Kronrod in both, gk: Gauss in x, kg: Gauss in y, gg: Gauss in both.
    let (mut kk, mut gk, mut kg, mut gg) = (0.0, 0.0, 0.0, 0.0);
    for &(xi, wkx, wgx) in &nodes {
        let x = cx + hx * xi;
        for &(yj, wky, wgy) in &nodes {
            let y = cy + hy * yj;
            let v = f(x, y)?;
            if !v.is_finite() {
                return Err(Error::Quadrature {
                    region: rect.to_string(),
                    detail: format!("integrand is {v} at ({x}, {y})"),
                });
            }
            kk += wkx * wky * v;
            gk += wgx * wky * v;
            kg += wkx * wgy * v;
            gg += wgx * wgy * v;
        }
    }
    let area = hx * hy;
    let ex = ((kk - gk) * area).abs();
    let ey = ((kk - kg) * area).abs();
    let eg = ((kk - gg) * area).abs();
    Ok(Panel2 {
        rect,
        value: kk * area,
        error: eg.max(ex).max(ey),
        split_x: ex >= ey,
    })
}

/// Integrates `f(x, y)` over `rect` by tensor-product Gauss–Kronrod panels.
///
/// Panels are bisected along the axis whose one-dimensional error
/// estimate is larger.
pub fn integrate_2d<F: FnMut(f64, f64) -> Result<f64>>(
    mut f: F,
    rect: Rect,
    tol: Tolerance,
) -> Result<QuadResult> {
    let mut panels = vec![gk15_2d(&mut f, rect)?];
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if tol.met(value, error) || panels.len() >= tol.max_panels {
            return Ok(QuadResult {
                value,
                error,
                panels: panels.len(),
                converged: tol.met(value, error),
            });
        }
        let worst = panels.swap_remove(largest(panels.iter().map(|p| p.error)));
        let r = worst.rect;
        let (a, b) = if worst.split_x {
            let m = 0.5 * (r.x0 + r.x1);
            (Rect { x1: m, ..r }, Rect { x0: m, ..r })
        } else {
            let m = 0.5 * (r.y0 + r.y1);
            (Rect { y1: m, ..r }, Rect { y0: m, ..r })
        };
        panels.push(gk15_2d(&mut f, a)?);
        panels.push(gk15_2d(&mut f, b)?);
    }
}
