use crate::error::{Error, Result};
use crate::scalar::Real;

// Arguments are shifted up to at least this before the asymptotic series is used.
const ASYMPTOTIC_FROM: f64 = 10.0;

fn check_positive<T: Real>(func: &'static str, x: T) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(func, format!("argument must be positive and finite, got {x}")))
    }
}

/// Stirling series for log Γ(z), z ≥ 10.
fn ln_gamma_asymptotic<T: Real>(z: T) -> T {
    // B_{2k} / (2k (2k-1))
    const COEF: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
        -3617.0 / 122400.0,
    ];
    let half = T::lit(0.5);
    let inv = z.recip();
    let inv2 = inv * inv;
    let mut term = inv;
    let mut series = T::zero();
    for c in COEF {
        series = series + T::lit(c) * term;
        term = term * inv2;
    }
    (z - half) * z.ln() - z + half * (T::lit(2.0) * T::PI()).ln() + series
}

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma<T: Real>(x: T) -> Result<T> {
    check_positive("ln_gamma", x)?;
    let threshold = T::lit(ASYMPTOTIC_FROM);
    let mut z = x;
    let mut prod = T::one();
    while z < threshold {
        prod = prod * z;
        z = z + T::one();
    }
    Ok(ln_gamma_asymptotic(z) - prod.ln())
}

/// ψ(x) = d/dx log Γ(x) for `x > 0`.
pub fn digamma<T: Real>(x: T) -> Result<T> {
    check_positive("digamma", x)?;
    let threshold = T::lit(ASYMPTOTIC_FROM);
    let mut z = x;
    let mut shift = T::zero();
    while z < threshold {
        shift = shift - z.recip();
        z = z + T::one();
    }
    let inv = z.recip();
    let inv2 = inv * inv;
    // ln z - 1/(2z) - sum B_{2k} / (2k z^{2k})
    const COEF: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32760.0,
        1.0 / 12.0,
    ];
    let mut term = inv2;
    let mut series = T::zero();
    for c in COEF {
        series = series + T::lit(c) * term;
        term = term * inv2;
    }
    Ok(shift + z.ln() - T::lit(0.5) * inv - series)
}

/// ψ′(x), the trigamma function, for `x > 0`. Always positive.
pub fn trigamma<T: Real>(x: T) -> Result<T> {
    check_positive("trigamma", x)?;
    let threshold = T::lit(ASYMPTOTIC_FROM);
    let mut z = x;
    let mut shift = T::zero();
    while z < threshold {
        shift = shift + (z * z).recip();
        z = z + T::one();
    }
    let inv = z.recip();
    let inv2 = inv * inv;
    // 1/z + 1/(2z^2) + sum B_{2k} / z^{2k+1}
    const COEF: [f64; 7] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
    ];
    let mut term = inv2 * inv;
    let mut series = T::zero();
    for c in COEF {
        series = series + T::lit(c) * term;
        term = term * inv2;
    }
    Ok(shift + inv + T::lit(0.5) * inv2 + series)
}
