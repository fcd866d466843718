use std::sync::OnceLock;

use crate::error::{Error, Result};

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k-1)), k = 1..=8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    let mut p = inv;
    for c in STIRLING {
        corr += c * p;
        p *= inv2;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_TWO_PI + corr
}

/// log Γ(x) for x > 0.
///
/// Positive integers up to 170 go through the exact factorial so that
/// `ln_gamma(1) == ln_gamma(2) == 0` bitwise. Other small arguments are
/// shifted above 12 by the recurrence before applying Stirling's series.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    if x.fract() == 0.0 && x <= 171.0 {
        return Ok(ln_factorial(x as u32 - 1));
    }
    if x >= 12.0 {
        return Ok(stirling(x));
    }
    let mut shift = 1.0;
    let mut z = x;
    while z < 12.0 {
        shift *= z;
        z += 1.0;
    }
    Ok(stirling(z) - shift.ln())
}

/// Infallible variant for internal callers that have already validated the argument.
pub(crate) fn lgam(x: f64) -> f64 {
    ln_gamma(x).expect("ln_gamma argument validated by caller")
}

const TABLE_LEN: usize = 4096;

fn factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(TABLE_LEN);
        let mut p = 1.0f64;
        t.push(0.0);
        for i in 1..TABLE_LEN {
            if i <= 170 {
                p *= i as f64;
                t.push(p.ln());
            } else {
                t.push(stirling(i as f64 + 1.0));
            }
        }
        t
    })
}

/// log k!. Exact products up to 170!, Stirling beyond; tabulated below 4096.
pub fn ln_factorial(k: u32) -> f64 {
    match factorial_table().get(k as usize) {
        Some(&v) => v,
        None => stirling(f64::from(k) + 1.0),
    }
}

/// log |binom(top, r)| and its sign for an integer (possibly negative) top.
///
/// Negative tops use `binom(-m, r) = (-1)^r binom(m + r - 1, r)`. A
/// nonnegative top with `r > top` yields an exact zero (sign 0).
pub fn ln_binomial_int(top: i64, r: i64) -> (f64, i8) {
    if r < 0 {
        return (f64::NEG_INFINITY, 0);
    }
    if top >= 0 {
        if r > top {
            return (f64::NEG_INFINITY, 0);
        }
        let l = ln_factorial(top as u32) - ln_factorial(r as u32) - ln_factorial((top - r) as u32);
        (l, 1)
    } else {
        let m = -top;
        let (l, _) = ln_binomial_int(m + r - 1, r);
        (l, if r % 2 == 0 { 1 } else { -1 })
    }
}

/// Generalised binomial coefficient binom(a, j) for real a, by the product formula.
pub fn binomial_real(a: f64, j: u32) -> f64 {
    let mut b = 1.0;
    for i in 0..j {
        b *= (a - f64::from(i)) / f64::from(i + 1);
    }
    b
}
