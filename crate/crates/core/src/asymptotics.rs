//! Large-`n` expansions of `log p_{n,n-2l}` and of the single-pair ratio
//! `p_{n,n-2}/p_{n,n}`, for fixed `τ` (strong) and for `τ = 1 - α²/n` (weak).

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{OnceLock, RwLock};

use serde::Serialize;

use crate::combinatorics::compositions;
use crate::error::{Error, Result};
use crate::exactprob::{log_p_nm, log_p_nn, ratio_l1_laguerre, EnsembleParams, Precision, Regime};
use crate::specfun::{
    bessel_i, binomial_real, hyp1f1, lgam, ln_factorial, log_sum, PolyCoeffs, SignedLog,
};

/// `log p_{n,n-2l} ≈ a1 n² + a2 n + a3 log n` at fixed `τ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StrongCoeffs {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

/// `log p_{n,n-2l} ≈ b1 n + b2 log n + b3` at `τ = 1 - α²/n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeakCoeffs {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
}

/// A truncated series `prefactor · Σ_k terms[k] n^{-k}`, in log form.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesEval {
    pub order: usize,
    pub terms: Vec<f64>,
    pub prefactor_log: f64,
    pub total_log: SignedLog,
}

pub const MAX_F_ORDER: u32 = 20;
pub const MAX_A_ORDER: u32 = 12;
pub const MAX_B_ORDER: u32 = 10;
const MAX_DIGITS_LOST: f64 = 10.0;

fn check_tau(tau: f64) -> Result<()> {
    if (0.0..1.0).contains(&tau) {
        Ok(())
    } else {
        Err(Error::Domain(format!("tau must lie in [0, 1), got {tau}")))
    }
}

fn digits_lost(sum: SignedLog, mag: SignedLog) -> f64 {
    if sum.is_zero() {
        return if mag.is_zero() { 0.0 } else { f64::INFINITY };
    }
    (mag.log_abs() - sum.log_abs()) / std::f64::consts::LN_10
}

fn guarded(what: &str, sum: SignedLog, mag: SignedLog) -> Result<f64> {
    let lost = digits_lost(sum, mag);
    if lost > MAX_DIGITS_LOST {
        return Err(Error::Cancellation(format!("{what} lost {lost:.1} digits")));
    }
    Ok(sum.to_f64())
}

pub fn strong_coeffs(tau: f64, l: usize) -> Result<StrongCoeffs> {
    check_tau(tau)?;
    let g = 0.25 * (2.0 / (1.0 + tau)).ln();
    let l = l as f64;
    Ok(StrongCoeffs {
        a1: -g,
        a2: g + l * ((3.0 - tau) / (1.0 + tau)).ln(),
        a3: -0.5 * l * l,
    })
}

/// `₁F₁(1/2; 2; x) - 1` without forming the leading 1.
fn kummer_half_two_m1(x: f64) -> f64 {
    let mut term = 0.25 * x;
    let mut sum = term;
    for k in 1..10_000 {
        let k = f64::from(k);
        term *= (0.5 + k) / (2.0 + k) * x / (k + 1.0);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `ℬ_0(α) = e^{α²/2}(I_0 - I_1)(α²/2) - 1`.
fn calb0(alpha: f64) -> f64 {
    kummer_half_two_m1(alpha * alpha)
}

pub fn weak_coeffs(alpha: f64, l: usize) -> Result<WeakCoeffs> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!(
            "alpha must be finite and nonnegative, got {alpha}"
        )));
    }
    let a2 = alpha * alpha;
    let tail = a2 / 8.0 - a2 * a2 / 32.0;
    let b3 = if l == 0 {
        tail
    } else {
        if alpha == 0.0 {
            return Err(Error::Degenerate(format!(
                "p_(n,n-2l) vanishes in the symmetric limit alpha = 0 (l = {l})"
            )));
        }
        l as f64 * (calb0(alpha) / 2.0).ln() - ln_factorial(l as u32) + tail
    };
    Ok(WeakCoeffs {
        b1: -a2 / 8.0,
        b2: l as f64,
        b3,
    })
}

/// Expansion `(1 - x/N)^N = e^{-x} Σ_q ℱ_q(x) (x/N)^q`.
#[allow(non_snake_case)]
pub fn F_q(x: f64, q: u32) -> Result<f64> {
    if q > MAX_F_ORDER {
        return Err(Error::Domain(format!(
            "F_q order {q} exceeds {MAX_F_ORDER}"
        )));
    }
    if q == 0 {
        return Ok(1.0);
    }
    let mut total = 0.0;
    for k in 1..=q {
        let inner = composition_weight(q, k);
        total += (-x).powi(k as i32) * (-ln_factorial(k)).exp() * inner;
    }
    Ok(total)
}

/// `Σ_{compositions u of q into k parts} Π 1/(u_v + 1)`, memoized.
fn composition_weight(q: u32, k: u32) -> f64 {
    static MEMO: OnceLock<RwLock<HashMap<(u32, u32), f64>>> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(&v) = memo.read().unwrap_or_else(|e| e.into_inner()).get(&(q, k)) {
        return v;
    }
    let v: f64 = compositions(q, k)
        .map(|c| {
            c.parts
                .iter()
                .map(|&u| 1.0 / f64::from(u + 1))
                .product::<f64>()
        })
        .sum();
    memo.write()
        .unwrap_or_else(|e| e.into_inner())
        .insert((q, k), v);
    v
}

/// `𝒢_q(t)` as a polynomial in `t`, from
/// `(1 + 2α²t/(2N - α²))^N = e^{α²t} Σ_q 𝒢_q(t) (α²/N)^q`.
///
/// The degree is `2q`: a composition with `k` parts contributes degree `q + k`.
#[allow(non_snake_case)]
pub fn G_q_poly(alpha: f64, q: u32) -> Result<PolyCoeffs> {
    if q > MAX_F_ORDER {
        return Err(Error::Domain(format!(
            "G_q order {q} exceeds {MAX_F_ORDER}"
        )));
    }
    if q == 0 {
        return Ok(PolyCoeffs::constant(1.0));
    }
    let one_minus_2t = PolyCoeffs::linear(1.0, -2.0);
    let piece: Vec<PolyCoeffs> = (0..=q)
        .map(|j| {
            if j == 0 {
                PolyCoeffs::zero()
            } else {
                (&PolyCoeffs::constant(1.0) - &one_minus_2t.powi(j + 1))
                    .scale(1.0 / f64::from(j + 1))
            }
        })
        .collect();
    // conv[m] = Σ over compositions of m into the current number of parts
    let mut conv: Vec<PolyCoeffs> = piece.clone();
    let a2 = alpha * alpha;
    let mut total = PolyCoeffs::zero();
    for k in 1..=q {
        let c = a2.powi(k as i32) * (-ln_factorial(k) - f64::from(q + k) * 2f64.ln()).exp();
        total = &total + &conv[q as usize].scale(c);
        if k < q {
            let mut next = vec![PolyCoeffs::zero(); q as usize + 1];
            for (m, slot) in next.iter_mut().enumerate() {
                for j in 1..m {
                    *slot = &*slot + &(&piece[j] * &conv[m - j]);
                }
            }
            conv = next;
        }
    }
    Ok(total)
}

fn memo_get(kind: u8, order: u32, x: f64) -> Option<f64> {
    memo_table()
        .read()
        .unwrap_or_else(|e| e.into_inner())
        .get(&(kind, order, x.to_bits()))
        .copied()
}

fn memo_put(kind: u8, order: u32, x: f64, v: f64) {
    memo_table()
        .write()
        .unwrap_or_else(|e| e.into_inner())
        .insert((kind, order, x.to_bits()), v);
}

fn memo_table() -> &'static RwLock<HashMap<(u8, u32, u64), f64>> {
    static MEMO: OnceLock<RwLock<HashMap<(u8, u32, u64), f64>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// `𝒜_r(τ)`, the strong-regime coefficients of the single-pair ratio
/// `p_{n,n-2}/p_{n,n} = ((3-τ)/(1+τ))^n n^{-1/2} Σ_r 𝒜_r(τ) n^{-r}`.
#[allow(non_snake_case)]
pub fn calA(r: u32, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    if r > MAX_A_ORDER {
        return Err(Error::Domain(format!(
            "calA order {r} exceeds {MAX_A_ORDER}"
        )));
    }
    if let Some(v) = memo_get(0, r, tau) {
        return Ok(v);
    }
    let rf = f64::from(r);
    let w = 4.0 / (3.0 - tau);
    let mut outer = Vec::new();
    let mut outer_mag = Vec::new();
    for j in 0..=r {
        let jf = f64::from(j);
        let mut bracket = vec![SignedLog::from_log(lgam(rf + 0.5))];
        for q in 1..=(r - j) {
            for k in 1..=q {
                let c = composition_weight(q, k);
                let lg = f64::from(q) * w.ln() + lgam(rf + f64::from(k) + 0.5) - ln_factorial(k)
                    + c.ln();
                bracket.push(SignedLog::new(lg, if k % 2 == 0 { 1 } else { -1 }));
            }
        }
        let (b, bmag) = log_sum(&bracket);
        let lw = (rf + 0.5) * ((3.0 - tau) / 4.0).ln()
            + (jf + 0.5) * (2.0 / (1.0 - tau)).ln()
            + lgam(jf + 1.5)
            - lgam(jf + 1.0);
        outer.push(b.scale_log(lw));
        outer_mag.push(bmag.scale_log(lw));
    }
    let (s, _) = log_sum(&outer);
    let (mag, _) = log_sum(&outer_mag);
    let pre = (1.0 + tau).powf(1.5) / (2.0 * 2f64.sqrt() * PI.powf(1.5) * (1.0 - tau));
    let v = pre * guarded(&format!("calA({r})"), s, mag)?;
    memo_put(0, r, tau, v);
    Ok(v)
}

/// Closed forms of `𝒜_0`, `𝒜_1`, `𝒜_2`.
#[allow(non_snake_case)]
pub fn calA_closed_form(r: u32, tau: f64) -> Option<f64> {
    let t = tau;
    let base = (3.0 - t).sqrt() * (1.0 + t).powf(1.5) / PI.sqrt();
    match r {
        0 => Some(base / (8.0 * (1.0 - t).powf(1.5))),
        1 => Some(base * (9.0 - 4.0 * t + t * t) / (64.0 * (1.0 - t).powf(2.5))),
        2 => Some(
            base * (3.0 * t.powi(4) - 18.0 * t.powi(3) + 44.0 * t * t - 82.0 * t + 143.0)
                / (512.0 * (1.0 - t).powf(3.5)),
        ),
        _ => None,
    }
}

/// `𝔰_k(α)`; `𝔰_0 = ₁F₁(1/2; 2; α²) - 1`.
///
/// For `k ≥ 1`, with `x = α²`, `P_k = 𝒢_k - Σ_{r=1}^k 𝒢_{k-r} t(1-t)^{r-1}/2^r`
/// and `R_k = P_k/t = Σ_s r_{k,s} t^s`,
///
/// `𝔰_k = (πx)^{-1} [Σ_s r_{k,s} √π Γ(s+1/2)/Γ(s+1) ₁F₁(s+1/2; s+1; x)
///        - 2^{-k}(x B(1/2, k+1/2) - B(1/2, k-1/2))]`.
pub fn frak_s(k: u32, alpha: f64) -> Result<f64> {
    if k == 0 {
        return Ok(calb0(alpha));
    }
    let x = alpha * alpha;
    let t = PolyCoeffs::linear(0.0, 1.0);
    let one_minus_t = PolyCoeffs::linear(1.0, -1.0);
    let mut p = G_q_poly(alpha, k)?;
    for r in 1..=k {
        let g = G_q_poly(alpha, k - r)?;
        let tail = (&t * &one_minus_t.powi(r - 1)).scale(0.5f64.powi(r as i32));
        p = &p - &(&g * &tail);
    }
    let rk = p.div_t();
    let mut terms = Vec::with_capacity(rk.coeffs().len() + 2);
    for (s, &c) in rk.coeffs().iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let sf = s as f64;
        let h = hyp1f1(sf + 0.5, sf + 1.0, x)?;
        let lg = 0.5 * PI.ln() + lgam(sf + 0.5) - lgam(sf + 1.0) + h.ln() + c.abs().ln();
        terms.push(SignedLog::new(lg, if c > 0.0 { 1 } else { -1 }));
    }
    let kf = f64::from(k);
    let beta = |b: f64| 0.5 * PI.ln() + lgam(b) - lgam(b + 0.5);
    let sc = -kf * 2f64.ln();
    if x > 0.0 {
        terms.push(SignedLog::new(sc + x.ln() + beta(kf + 0.5), -1));
    }
    terms.push(SignedLog::new(sc + beta(kf - 0.5), 1));
    let (s, mag) = log_sum(&terms);
    Ok(guarded(&format!("frak_s({k})"), s, mag)? / (PI * x))
}

/// `ℬ_k(α)`, the weak-regime coefficients of
/// `p_{n,n-2}/p_{n,n} = (n/2) Σ_k ℬ_k(α) n^{-k}`:
/// `ℬ_k = Σ_j binom(1/2, j) (-α²/2)^j α^{2(k-j)} 𝔰_{k-j}(α)`.
#[allow(non_snake_case)]
pub fn calB(k: u32, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!("calB needs alpha > 0, got {alpha}")));
    }
    if k > MAX_B_ORDER {
        return Err(Error::Domain(format!(
            "calB order {k} exceeds {MAX_B_ORDER}"
        )));
    }
    if let Some(v) = memo_get(1, k, alpha) {
        return Ok(v);
    }
    let a2 = alpha * alpha;
    let mut terms = Vec::new();
    for j in 0..=k {
        let c = binomial_real(0.5, j) * (-a2 / 2.0).powi(j as i32) * a2.powi((k - j) as i32);
        terms.push(SignedLog::from_f64(c * frak_s(k - j, alpha)?));
    }
    let (s, mag) = log_sum(&terms);
    let v = guarded(&format!("calB({k})"), s, mag)?;
    memo_put(1, k, alpha, v);
    Ok(v)
}

/// Bessel closed forms of `ℬ_0`, `ℬ_1`, `ℬ_2`. The `k = 1` expression
/// `(e^{α²/2} I_0(α²/2) - α² - 1)/2` does not agree with [`calB`].
#[allow(non_snake_case)]
pub fn calB_closed_form(k: u32, alpha: f64) -> Option<f64> {
    let a2 = alpha * alpha;
    let x = a2 / 2.0;
    let i0 = bessel_i(0, x).ok()?;
    let i1 = bessel_i(1, x).ok()?;
    let e = x.exp();
    match k {
        0 => Some(e * (i0 - i1) - 1.0),
        1 => Some(0.5 * (e * i0 - a2 - 1.0)),
        2 => Some(a2 / 24.0 * e * (a2 * i0 + (a2 - 1.0) * i1)),
        _ => None,
    }
}

/// `log p_{n,n-2l}` predicted by the three-term forms.
pub fn three_term_prediction(params: &EnsembleParams, l: usize) -> Result<f64> {
    params.validate()?;
    let n = params.n as f64;
    match params.regime {
        Regime::Strong { tau } => {
            let c = strong_coeffs(tau, l)?;
            Ok(c.a1 * n * n + c.a2 * n + c.a3 * n.ln())
        }
        Regime::Weak { alpha } => {
            let c = weak_coeffs(alpha, l)?;
            Ok(c.b1 * n + c.b2 * n.ln() + c.b3)
        }
    }
}

/// Truncated asymptotic series for `log p_{n,n-2l}`.
///
/// For `l = 1` this is `log p_{n,n} + log(ratio series)` with `m` terms of
/// `𝒜_k` (strong) or `ℬ_k` (weak); for `l = 0` it is `log p_{n,n}`; for
/// other `l` it is the three-term prediction (reported as a one-term series).
pub fn eval_series(params: &EnsembleParams, l: usize, m: usize) -> Result<SeriesEval> {
    params.validate()?;
    if l == 0 {
        let p = log_p_nn(params).ln();
        return Ok(SeriesEval {
            order: 1,
            terms: vec![1.0],
            prefactor_log: p,
            total_log: SignedLog::from_log(p),
        });
    }
    if l != 1 {
        let p = three_term_prediction(params, l)?;
        return Ok(SeriesEval {
            order: 1,
            terms: vec![1.0],
            prefactor_log: p,
            total_log: SignedLog::from_log(p),
        });
    }
    if m == 0 {
        return Err(Error::Domain("series order must be at least 1".into()));
    }
    let n = params.n as f64;
    let (pre, terms) = match params.regime {
        Regime::Strong { tau } => {
            let pre = n * ((3.0 - tau) / (1.0 + tau)).ln() - 0.5 * n.ln();
            let t = (0..m as u32)
                .map(|r| calA(r, tau))
                .collect::<Result<Vec<_>>>()?;
            (pre, t)
        }
        Regime::Weak { alpha } => {
            if alpha == 0.0 {
                return Err(Error::Degenerate(
                    "single-pair ratio vanishes at alpha = 0".into(),
                ));
            }
            let t = (0..m as u32)
                .map(|k| calB(k, alpha))
                .collect::<Result<Vec<_>>>()?;
            ((n / 2.0).ln(), t)
        }
    };
    let pre = pre + log_p_nn(params).ln();
    let sum: SignedLog = terms
        .iter()
        .enumerate()
        .map(|(k, &c)| SignedLog::from_f64(c).scale_log(-(k as f64) * n.ln()))
        .sum();
    Ok(SeriesEval {
        order: m,
        terms,
        prefactor_log: pre,
        total_log: sum.scale_log(pre),
    })
}

/// `|exact ratio / series - 1|` for the single-pair ratio with `m` terms.
pub fn l1_series_error(params: &EnsembleParams, m: usize) -> Result<f64> {
    let exact = ratio_l1_laguerre(params)?.log_abs() + log_p_nn(params).ln();
    let s = eval_series(params, 1, m)?;
    let ls = s
        .total_log
        .ln()
        .ok_or_else(|| Error::Quality("series sum is not positive".into()))?;
    Ok((exact - ls).exp_m1().abs())
}

/// Exact `log p_{n,n-2l}` minus the three-term prediction.
pub fn residual(params: &EnsembleParams, l: usize) -> Result<f64> {
    let exact = log_p_nm(params, l, false, Precision::Auto)?;
    Ok(exact.ln() - three_term_prediction(params, l)?)
}

/// Least-squares slope of `log|r|` against `log n`.
pub fn decay_exponent(points: &[(usize, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, r)| *r != 0.0 && r.is_finite())
        .map(|&(n, r)| ((n as f64).ln(), r.abs().ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / m, sy / m);
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// `|(1 - x/N)^N - e^{-x} Σ_{q≤m} ℱ_q(x)(x/N)^q|`, evaluated without
/// forming either side directly.
pub fn f_expansion_error(x: f64, big_n: f64, m: u32) -> Result<f64> {
    // N log(1 - x/N) + x = -Σ_{j≥2} x^j / (j N^{j-1})
    let u = big_n * log1p_tail(x / big_n, -1.0);
    let mut approx = 0.0;
    for q in 1..=m {
        approx += F_q(x, q)? * (x / big_n).powi(q as i32);
    }
    Ok(((-x).exp() * (u.exp_m1() - approx)).abs())
}

/// `|(1 + 2α²t/(2N-α²))^N - e^{α²t} Σ_{q≤m} 𝒢_q(t)(α²/N)^q|`.
pub fn g_expansion_error(alpha: f64, t: f64, big_n: f64, m: u32) -> Result<f64> {
    let a2 = alpha * alpha;
    let a = 2.0 * a2 * t / (2.0 * big_n - a2);
    // N log(1 + a) - α²t = N (log(1 + a) - a) + α²t α²/(2N - α²)
    let u = big_n * log1p_tail(a, 1.0) + a2 * t * a2 / (2.0 * big_n - a2);
    let mut approx = 0.0;
    for q in 1..=m {
        approx += G_q_poly(alpha, q)?.eval(t) * (a2 / big_n).powi(q as i32);
    }
    Ok(((a2 * t).exp() * (u.exp_m1() - approx)).abs())
}

/// `log(1 + s·y) - s·y` for small `y`, `s = ±1`, by its series.
fn log1p_tail(y: f64, s: f64) -> f64 {
    let z = s * y;
    if z.abs() > 0.1 {
        return z.ln_1p() - z;
    }
    let mut p = z * z;
    let mut sum = 0.0;
    let mut j = 2.0;
    loop {
        let term = p / j * if (j as i64) % 2 == 0 { -1.0 } else { 1.0 };
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            return sum;
        }
        p *= z;
        j += 1.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn strong_coefficients_at_tau_zero() {
        let c = strong_coeffs(0.0, 1).unwrap();
        assert!((c.a1 + 2f64.ln() / 4.0).abs() < 1e-15);
        assert!((c.a2 - (2f64.ln() / 4.0 + 3f64.ln())).abs() < 1e-15);
        assert_eq!(c.a3, -0.5);
        let c = strong_coeffs(0.5, 2).unwrap();
        assert!((c.a2 - ((4.0f64 / 3.0).ln() / 4.0 + 2.0 * (5.0f64 / 3.0).ln())).abs() < 1e-14);
        assert_eq!(c.a3, -2.0);
    }

    #[test]
    fn weak_coefficients() {
        let c = weak_coeffs(2.0, 0).unwrap();
        assert_eq!((c.b1, c.b2, c.b3), (-0.5, 0.0, 0.0));
        let c = weak_coeffs(1.0, 1).unwrap();
        let b0 = 0.5f64.exp() * (bessel_i(0, 0.5).unwrap() - bessel_i(1, 0.5).unwrap()) - 1.0;
        assert!((b0 - 0.3282).abs() < 1e-3);
        assert!((c.b3 - ((b0 / 2.0).ln() + 0.125 - 1.0 / 32.0)).abs() < 1e-13);
        assert!(matches!(weak_coeffs(0.0, 1), Err(Error::Degenerate(_))));
    }

    #[test]
    fn small_f_and_g() {
        assert_eq!(F_q(3.7, 0).unwrap(), 1.0);
        assert!((F_q(2.0, 1).unwrap() + 1.0).abs() < 1e-15);
        let g1 = G_q_poly(1.3, 1).unwrap();
        assert_eq!(g1.eval(0.0), 0.0);
        assert!((G_q_poly(2.0, 1).unwrap().eval(0.5) - 0.5).abs() < 1e-15);
        for &t in &[0.1, 0.3, 0.8] {
            assert!((g1.eval(t) - 1.69 * (t - t * t) / 2.0).abs() < 1e-14);
        }
        for q in 1..6 {
            assert_eq!(G_q_poly(1.0, q).unwrap().degree(), Some(2 * q as usize));
        }
    }

    #[test]
    fn f_property_point() {
        let direct = (1000.0 * (-1e-3f64).ln_1p()).exp();
        let series =
            (-1f64).exp() * (1.0 + F_q(1.0, 1).unwrap() * 1e-3 + F_q(1.0, 2).unwrap() * 1e-6);
        assert!((direct - series).abs() <= 5e-10);
        assert!(
            (f_expansion_error(1.0, 1000.0, 2).unwrap() - (direct - series).abs()).abs() < 1e-14
        );
    }

    #[test]
    fn g_first_order_error_is_second_order() {
        let e1 = g_expansion_error(1.0, 0.3, 1e3, 1).unwrap();
        let e2 = g_expansion_error(1.0, 0.3, 1e4, 1).unwrap();
        let ratio = e1 / e2;
        assert!((50.0..200.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn cala_matches_closed_forms() {
        for i in 0..5 {
            let tau = 0.2 * f64::from(i);
            for r in 0..3 {
                let a = calA(r, tau).unwrap();
                let b = calA_closed_form(r, tau).unwrap();
                assert!(
                    (a / b - 1.0).abs() < 1e-10,
                    "r = {r}, tau = {tau}: {a} vs {b}"
                );
            }
        }
        assert!((calA(0, 0.0).unwrap() - 3f64.sqrt() / (8.0 * PI.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn calb_zero_and_two_match_bessel_forms() {
        for &a in &[0.5f64, 1.0, 2.0] {
            for k in [0, 2] {
                let g = calB(k, a).unwrap();
                let c = calB_closed_form(k, a).unwrap();
                assert!(
                    (g / c - 1.0).abs() < 1e-10,
                    "k = {k}, alpha = {a}: {g} vs {c}"
                );
            }
        }
    }

    #[test]
    fn calb_one_is_minus_half_of_bessel_excess() {
        // ℬ_1 = (1 - e^{α²/2} I_0(α²/2)) / 2
        for &a in &[0.5f64, 1.0, 2.0] {
            let x = a * a / 2.0;
            let want = 0.5 * (1.0 - x.exp() * bessel_i(0, x).unwrap());
            assert!((calB(1, a).unwrap() / want - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn series_structure() {
        let p = EnsembleParams::strong(100, 0.0).unwrap();
        let s = eval_series(&p, 1, 1).unwrap();
        let want =
            log_p_nn(&p).ln() + 100.0 * 3f64.ln() - 0.5 * 100f64.ln() + calA(0, 0.0).unwrap().ln();
        assert!((s.total_log.ln().unwrap() - want).abs() < 1e-12);
        assert_eq!(
            eval_series(&p, 0, 3).unwrap().total_log.ln().unwrap(),
            log_p_nn(&p).ln()
        );
        let w = EnsembleParams::weak(100, 0.0).unwrap();
        assert!(matches!(eval_series(&w, 1, 2), Err(Error::Degenerate(_))));
    }

    #[test]
    fn strong_l0_prediction_is_exact() {
        for &tau in &[0.0, 0.5, 0.9] {
            let p = EnsembleParams::strong(50, tau).unwrap();
            let a = three_term_prediction(&p, 0).unwrap();
            assert!((a - log_p_nn(&p).ln()).abs() <= 1e-12 * a.abs());
        }
    }

    #[test]
    fn decay_fit() {
        let pts: Vec<_> = [10usize, 20, 40, 80]
            .iter()
            .map(|&n| (n, 3.0 / (n as f64).powf(1.5)))
            .collect();
        assert!((decay_exponent(&pts).unwrap() + 1.5).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn f_matches_direct_expansion(x in 0.05f64..3.0) {
            // (1 - x/N)^N e^x = 1 - x²/(2N) + (x⁴/8 - x³/3)/N² + O(N^-3)
            let f2 = F_q(x, 2).unwrap() * x * x;
            prop_assert!((f2 - (x.powi(4) / 8.0 - x.powi(3) / 3.0)).abs() < 1e-13 * (1.0 + x.powi(4)));
        }

        #[test]
        fn a1_nonpositive(tau in 0.0f64..0.999, l in 0usize..6) {
            let c = strong_coeffs(tau, l).unwrap();
            prop_assert!(c.a1 <= 0.0);
            prop_assert_eq!(c.a3, -((l * l) as f64) / 2.0);
        }

        #[test]
        fn b1_nonpositive(alpha in 0.01f64..5.0, l in 0usize..6) {
            let c = weak_coeffs(alpha, l).unwrap();
            prop_assert_eq!(c.b1, -alpha * alpha / 8.0);
            prop_assert_eq!(c.b2, l as f64);
        }
    }
}
