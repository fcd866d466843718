//! Exact (to quadrature tolerance) probabilities `p_{n,m}` that an `n×n`
//! elliptic real Ginibre matrix has `m = n - 2l` real eigenvalues.
//!
//! Four independent routes are provided for the single-pair ratio
//! `p_{n,n-2}/p_{n,n}`: the Laguerre–erfc integral, the endpoint-singular
//! `s`-integral, the trace of `ρ̂`, and (in [`crate::prekernel`]) the
//! half-plane Pfaffian integral. General `l` goes through the traces
//! `Tr ρ̂^j` and the column zonal polynomial.

use std::fmt;

use serde::Serialize;

use crate::combinatorics::{zonal_1k_scaled, ZonalValue};
use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_jacobi_endpoints, integrate_semi_infinite_gaussian,
    integrate_semi_infinite_gaussian_many, LogIntegral,
};
use crate::specfun::{erfcx, laguerre_general, ln_factorial, DoubleDouble, SignedLog};

/// Fixed `τ`, or `τ = 1 - α²/n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "regime", rename_all = "snake_case")]
pub enum Regime {
    Strong { tau: f64 },
    Weak { alpha: f64 },
}

/// Matrix size and asymmetry.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnsembleParams {
    pub n: usize,
    pub regime: Regime,
}

impl EnsembleParams {
    pub fn strong(n: usize, tau: f64) -> Result<Self> {
        let p = EnsembleParams {
            n,
            regime: Regime::Strong { tau },
        };
        p.validate()?;
        Ok(p)
    }

    pub fn weak(n: usize, alpha: f64) -> Result<Self> {
        let p = EnsembleParams {
            n,
            regime: Regime::Weak { alpha },
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n % 2 != 0 {
            return Err(Error::Domain(format!(
                "n must be even and positive, got {}",
                self.n
            )));
        }
        match self.regime {
            Regime::Strong { tau } if !(0.0..1.0).contains(&tau) => {
                Err(Error::Domain(format!("tau must lie in [0, 1), got {tau}")))
            }
            Regime::Weak { alpha } if !(alpha >= 0.0) || alpha * alpha > self.n as f64 => Err(
                Error::Domain(format!("alpha must satisfy 0 <= alpha^2 <= n, got {alpha}")),
            ),
            _ => Ok(()),
        }
    }

    /// The effective `τ`.
    pub fn tau(&self) -> f64 {
        match self.regime {
            Regime::Strong { tau } => tau,
            Regime::Weak { alpha } => 1.0 - alpha * alpha / self.n as f64,
        }
    }

    /// `1 - τ`, exact in the weak regime.
    pub fn one_minus_tau(&self) -> f64 {
        match self.regime {
            Regime::Strong { tau } => 1.0 - tau,
            Regime::Weak { alpha } => alpha * alpha / self.n as f64,
        }
    }

    pub(crate) fn require_nonsymmetric(&self) -> Result<()> {
        if self.one_minus_tau() <= 0.0 {
            return Err(Error::Domain(
                "tau = 1 is the symmetric limit; all eigenvalues are real".into(),
            ));
        }
        Ok(())
    }
}

/// A probability held as its natural logarithm.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
pub struct LogProb(pub f64);

impl LogProb {
    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn prob(self) -> f64 {
        self.0.exp()
    }
}

impl fmt::Display for LogProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Arithmetic used for the matrix powers behind `Tr ρ̂^j`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    /// Currently double-double for every `n`.
    #[default]
    Auto,
    Double,
    Extended,
}

/// Quadrature order used per panel by the exact routes.
pub const DEFAULT_ORDER: usize = 24;

/// `log p_{n,n} = -(1/4) log(2/(1+τ)) (n² - n)`.
pub fn log_p_nn(params: &EnsembleParams) -> LogProb {
    let n = params.n as f64;
    let l = std::f64::consts::LN_2 - params.tau().ln_1p();
    LogProb(-0.25 * l * n * n + 0.25 * l * n)
}

/// `p_{n,n-2}/p_{n,n} = ∫_0^∞ 2y e^{y²} erfc(cy) L_{n-2}^2(-2y²) dy`, `c = √(2/(1-τ))`.
pub fn ratio_l1_laguerre_integral(params: &EnsembleParams, order: usize) -> Result<LogIntegral> {
    params.validate()?;
    params.require_nonsymmetric()?;
    let omt = params.one_minus_tau();
    let c = (2.0 / omt).sqrt();
    // c² - 1 = (1 + τ)/(1 - τ)
    let decay = (2.0 - omt) / omt;
    let deg = params.n as i64 - 2;
    let h = |y: f64| {
        if y == 0.0 {
            return SignedLog::ZERO;
        }
        let lag = laguerre_general(deg, 2, -2.0 * y * y).expect("degree is nonnegative");
        lag.scale_log((2.0 * y).ln() + erfcx(c * y).ln() - decay * y * y)
    };
    integrate_semi_infinite_gaussian(h, decay, order)
}

pub fn ratio_l1_laguerre(params: &EnsembleParams) -> Result<SignedLog> {
    ratio_l1_laguerre_integral(params, DEFAULT_ORDER)?.checked("Laguerre route")
}

/// `log[((1+u)^n - nu - 1)/u²]` without cancellation for small `u`.
fn log_bracket_over_u2(n: usize, u: f64) -> f64 {
    let nf = n as f64;
    if nf * u < 0.5 {
        // Σ_{k≥2} binom(n,k) u^{k-2}
        let mut term = nf * (nf - 1.0) / 2.0;
        let mut sum = term;
        for k in 3..=n {
            term *= (nf - k as f64 + 1.0) / k as f64 * u;
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        sum.ln()
    } else {
        let lead = nf * u.ln_1p();
        lead + (-((nf * u).ln_1p() - lead).exp_m1()).ln() - 2.0 * u.ln()
    }
}

/// The single-pair ratio as the `s`-integral
/// `(1+τ)^{3/2}/(4√2 π(1-τ)) ∫_0^1 s^{-1/2}(1-s)^{-3/2}/(1-(1-τ)s/2) [(1+u)^n - nu - 1] ds`,
/// `u = 2(1-τ)(1-s)/(1+τ)`.
///
/// The bracket is `O((1-s)²)` at `s = 1`, so it is divided by `u²` and the
/// integral is handed to the Jacobi-endpoint rule with `p = -1/2, q = 1/2`.
pub fn ratio_l1_s_quadrature(params: &EnsembleParams, order: usize) -> Result<LogIntegral> {
    params.validate()?;
    params.require_nonsymmetric()?;
    let n = params.n;
    let omt = params.one_minus_tau();
    let opt = 2.0 - omt;
    let c = 2.0 * omt / opt;
    // prefactor · c² = (1-τ)/(π √(2(1+τ)))
    let log_pre = omt.ln() - std::f64::consts::PI.ln() - 0.5 * (2.0 * opt).ln();
    let g = |s: f64, one_minus_s: f64| {
        let u = c * one_minus_s;
        let denom = 1.0 - 0.5 * omt * s;
        SignedLog::from_log(log_pre + log_bracket_over_u2(n, u) - denom.ln())
    };
    integrate_jacobi_endpoints(g, -0.5, 0.5, order)
}

pub fn ratio_l1_s_integral(params: &EnsembleParams) -> Result<SignedLog> {
    ratio_l1_s_quadrature(params, DEFAULT_ORDER)?.checked("s-integral route")
}

/// `Tr ρ̂^1, …, Tr ρ̂^l` with quadrature diagnostics.
#[derive(Clone, Debug, Serialize)]
pub struct RhoTraces {
    pub l: usize,
    pub traces: Vec<SignedLog>,
    /// Largest order-doubling estimate over all matrix entries.
    pub entry_quad_err: f64,
    /// `Tr ρ̂^j = scaled[j-1] · e^{j·log_unit}`, kept at full working precision.
    #[serde(skip)]
    pub scaled: Vec<DoubleDouble>,
    pub log_unit: f64,
    pub extended: bool,
}

impl RhoTraces {
    /// Zonal polynomial of the first `l` traces.
    pub fn zonal(&self, l: usize) -> Result<ZonalValue> {
        zonal_1k_scaled(&self.scaled[..l], self.log_unit)
    }

    /// Digits the zonal sum may lose at this precision before results are refused.
    pub fn max_digits_lost(&self) -> f64 {
        if self.extended {
            MAX_ZONAL_DIGITS_LOST_EXTENDED
        } else {
            MAX_ZONAL_DIGITS_LOST
        }
    }
}

/// Entries of `ρ̂` (size `n/2 × n/2`) in signed-log form, row-major.
///
/// `[ρ̂]_{j,k} = ∫_0^∞ y^{2d-1} e^{y²} erfc(cy) [(2j-1) L_{2j-1}^{2d-1}(-2y²) + 2y² L_{2j-3}^{2d+1}(-2y²)] dy`
/// with `d = k - j`. Both Laguerre factors have `degree + superscript = 2k - 2 ≥ 0`,
/// so every term is nonnegative at the negative argument, and the low-order
/// zero coefficients supply the powers of `y` that cancel `y^{2d-1}` for
/// `d ≤ 0`. Everything is combined in the log domain.
pub fn rho_matrix(params: &EnsembleParams, order: usize) -> Result<(Vec<SignedLog>, f64)> {
    params.validate()?;
    params.require_nonsymmetric()?;
    let h = params.n / 2;
    let omt = params.one_minus_tau();
    let c = (2.0 / omt).sqrt();
    let decay = (2.0 - omt) / omt;
    let f = |y: f64| -> Vec<SignedLog> {
        let mut out = Vec::with_capacity(h * h);
        if y == 0.0 {
            out.resize(h * h, SignedLog::ZERO);
            return out;
        }
        let x = -2.0 * y * y;
        let ly = y.ln();
        let base = erfcx(c * y).ln() - decay * y * y;
        for j in 1..=h as i64 {
            for k in 1..=h as i64 {
                let d = k - j;
                let a = laguerre_general(2 * j - 1, 2 * d - 1, x).expect("degree >= 1");
                let b = laguerre_general(2 * j - 3, 2 * d + 1, x).expect("degree >= -1");
                let br = a.scale_log(((2 * j - 1) as f64).ln()) + b.scale_log((2.0 * y * y).ln());
                out.push(br.scale_log(base + (2 * d - 1) as f64 * ly));
            }
        }
        out
    };
    let ints = integrate_semi_infinite_gaussian_many(f, h * h, decay, order)?;
    let mut err: f64 = 0.0;
    let mut vals = Vec::with_capacity(h * h);
    for (i, it) in ints.into_iter().enumerate() {
        let v = it.checked(&format!("rho entry ({}, {})", i / h + 1, i % h + 1))?;
        err = err.max(it.rel_err_estimate);
        vals.push(v);
    }
    Ok((vals, err))
}

/// Diagonal similarity `D ρ̂ D^{-1}` (which keeps every trace of every
/// power) chosen so that row and column log-maxima match, followed by a
/// common shift. Returns the shifted matrix in plain doubles and the shift.
fn balance(m: &[SignedLog], h: usize) -> (Vec<f64>, f64) {
    let mut d = vec![0.0f64; h];
    let lg = |i: usize, j: usize, d: &[f64]| {
        let v = m[i * h + j];
        if v.is_zero() {
            f64::NEG_INFINITY
        } else {
            v.log_abs() + d[i] - d[j]
        }
    };
    for _ in 0..50 {
        let mut moved = 0.0f64;
        for i in 0..h {
            let row = (0..h)
                .filter(|&j| j != i)
                .map(|j| lg(i, j, &d))
                .fold(f64::NEG_INFINITY, f64::max);
            let col = (0..h)
                .filter(|&j| j != i)
                .map(|j| lg(j, i, &d))
                .fold(f64::NEG_INFINITY, f64::max);
            if row.is_finite() && col.is_finite() {
                let shift = 0.5 * (col - row);
                d[i] += shift;
                moved = moved.max(shift.abs());
            }
        }
        if moved < 1e-3 {
            break;
        }
    }
    let top = (0..h * h)
        .map(|idx| lg(idx / h, idx % h, &d))
        .fold(f64::NEG_INFINITY, f64::max);
    let out = (0..h * h)
        .map(|idx| {
            let v = m[idx];
            if v.is_zero() {
                0.0
            } else {
                f64::from(v.sign()) * (lg(idx / h, idx % h, &d) - top).exp()
            }
        })
        .collect();
    (out, top)
}

fn traces_double(b: &[f64], h: usize, l: usize) -> Vec<DoubleDouble> {
    let mut p = b.to_vec();
    let mut out = Vec::with_capacity(l);
    for step in 0..l {
        out.push(DoubleDouble::from(
            (0..h).map(|i| p[i * h + i]).sum::<f64>(),
        ));
        if step + 1 < l {
            let mut q = vec![0.0; h * h];
            for i in 0..h {
                for k in 0..h {
                    let a = p[i * h + k];
                    for j in 0..h {
                        q[i * h + j] += a * b[k * h + j];
                    }
                }
            }
            p = q;
        }
    }
    out
}

fn traces_extended(b: &[f64], h: usize, l: usize) -> Vec<DoubleDouble> {
    let bd: Vec<DoubleDouble> = b.iter().map(|&x| DoubleDouble::from(x)).collect();
    let mut p = bd.clone();
    let mut out = Vec::with_capacity(l);
    for step in 0..l {
        out.push((0..h).map(|i| p[i * h + i]).sum::<DoubleDouble>());
        if step + 1 < l {
            let mut q = vec![DoubleDouble::ZERO; h * h];
            for i in 0..h {
                for k in 0..h {
                    let a = p[i * h + k];
                    for j in 0..h {
                        q[i * h + j] += a * bd[k * h + j];
                    }
                }
            }
            p = q;
        }
    }
    out
}

/// `Tr ρ̂^j` for `j = 1..=l`.
pub fn rho_traces(params: &EnsembleParams, l: usize, precision: Precision) -> Result<RhoTraces> {
    params.validate()?;
    let h = params.n / 2;
    if l == 0 || l > h {
        return Err(Error::Domain(format!(
            "trace count l = {l} must lie in 1..={h}"
        )));
    }
    let (m, err) = rho_matrix(params, DEFAULT_ORDER)?;
    let (b, shift) = balance(&m, h);
    let extended = !matches!(precision, Precision::Double);
    let scaled = if extended {
        traces_extended(&b, h, l)
    } else {
        traces_double(&b, h, l)
    };
    let traces = scaled
        .iter()
        .enumerate()
        .map(|(j, &t)| SignedLog::from_f64(t.to_f64()).scale_log(shift * (j + 1) as f64))
        .collect();
    Ok(RhoTraces {
        l,
        traces,
        entry_quad_err: err,
        scaled,
        log_unit: shift,
        extended,
    })
}

/// Digits the zonal sum may lose before `log_p_nm` refuses to answer, for
/// traces held in plain doubles and in double-double respectively.
pub const MAX_ZONAL_DIGITS_LOST: f64 = 10.0;
pub const MAX_ZONAL_DIGITS_LOST_EXTENDED: f64 = 20.0;

fn zonal_log(tr: &RhoTraces, l: usize) -> Result<f64> {
    let z = tr.zonal(l)?;
    if z.digits_lost > tr.max_digits_lost() {
        return Err(Error::Cancellation(format!(
            "zonal sum for l = {l} lost {:.1} digits",
            z.digits_lost
        )));
    }
    z.value.ln().ok_or_else(|| {
        Error::Quality(format!(
            "zonal value for l = {l} is not positive: {}",
            z.value
        ))
    })
}

/// `log p_{n,n-2l}`.
///
/// `l = 0` is the closed form, `l = 1` the Laguerre integral (checked
/// against the `s`-integral when `verify` is set), and `l ≥ 2` the zonal
/// polynomial of the `ρ̂` traces.
pub fn log_p_nm(
    params: &EnsembleParams,
    l: usize,
    verify: bool,
    precision: Precision,
) -> Result<LogProb> {
    params.validate()?;
    let h = params.n / 2;
    if l > h {
        return Err(Error::Domain(format!("l = {l} exceeds n/2 = {h}")));
    }
    let pnn = log_p_nn(params);
    if l == 0 {
        return Ok(pnn);
    }
    params.require_nonsymmetric()?;
    if l == 1 {
        let r = ratio_l1_laguerre(params)?;
        if verify {
            let alt = ratio_l1_s_integral(params)?;
            let rel = ((r - alt) / alt).to_f64().abs();
            if rel > 1e-8 {
                return Err(Error::Quality(format!(
                    "l = 1 routes disagree by {rel:.3e} at n = {}, tau = {}",
                    params.n,
                    params.tau()
                )));
            }
        }
        return Ok(LogProb(pnn.0 + r.log_abs()));
    }
    let tr = rho_traces(params, l, precision)?;
    Ok(LogProb(pnn.0 + zonal_log(&tr, l)? - ln_factorial(l as u32)))
}

/// Full distribution `(m, log p_{n,m})` for `m = n, n-2, …, 0`.
pub fn distribution(
    params: &EnsembleParams,
    precision: Precision,
) -> Result<Vec<(usize, LogProb)>> {
    params.validate()?;
    let h = params.n / 2;
    if params.one_minus_tau() <= 0.0 {
        return Ok((0..=h)
            .map(|l| {
                (
                    params.n - 2 * l,
                    LogProb(if l == 0 { 0.0 } else { f64::NEG_INFINITY }),
                )
            })
            .collect());
    }
    let pnn = log_p_nn(params);
    let r1 = ratio_l1_laguerre(params)?;
    let mut out = vec![
        (params.n, pnn),
        (params.n - 2, LogProb(pnn.0 + r1.log_abs())),
    ];
    if h >= 2 {
        let tr = rho_traces(params, h, precision)?;
        for l in 2..=h {
            out.push((
                params.n - 2 * l,
                LogProb(pnn.0 + zonal_log(&tr, l)? - ln_factorial(l as u32)),
            ));
        }
    }
    Ok(out)
}

/// `log Σ_l p_{n,n-2l} = log p_{n,n} + log det(I + ρ̂)`, the count generating
/// function at 1. Free of the cancellation in the per-`l` zonal sums, so it
/// checks normalization for every `n`.
pub fn log_total_probability(params: &EnsembleParams) -> Result<f64> {
    params.validate()?;
    let pnn = log_p_nn(params).ln();
    if params.one_minus_tau() <= 0.0 {
        return Ok(pnn);
    }
    let h = params.n / 2;
    let (m, _) = rho_matrix(params, DEFAULT_ORDER)?;
    let (b, top) = balance(&m, h);
    let mut a: Vec<DoubleDouble> = b.iter().map(|&x| DoubleDouble::from(x)).collect();
    let id = DoubleDouble::from((-top).exp());
    for i in 0..h {
        a[i * h + i] += id;
    }
    let mut log_det = h as f64 * top;
    let mut sign = 1.0;
    for c in 0..h {
        let p = (c..h)
            .max_by(|&i, &j| {
                a[i * h + c]
                    .to_f64()
                    .abs()
                    .total_cmp(&a[j * h + c].to_f64().abs())
            })
            .expect("nonempty column");
        if a[p * h + c].to_f64() == 0.0 {
            return Err(Error::Quality("I + rho is singular".into()));
        }
        if p != c {
            for k in 0..h {
                a.swap(c * h + k, p * h + k);
            }
            sign = -sign;
        }
        let piv = a[c * h + c];
        if piv.to_f64() < 0.0 {
            sign = -sign;
        }
        log_det += piv.to_f64().abs().ln() + (piv.lo / piv.hi).ln_1p();
        for i in c + 1..h {
            let f = a[i * h + c] / piv;
            for k in c..h {
                let t = a[i * h + k] - f * a[c * h + k];
                a[i * h + k] = t;
            }
        }
    }
    if sign < 0.0 {
        return Err(Error::Quality("det(I + rho) is negative".into()));
    }
    Ok(pnn + log_det)
}

/// Mean and variance of the real-eigenvalue count from the exact distribution.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CountMoments {
    pub mean: f64,
    pub variance: f64,
}

pub const MAX_MEAN_N: usize = 12;

pub fn mean_count_exact(params: &EnsembleParams) -> Result<CountMoments> {
    if params.n > MAX_MEAN_N {
        return Err(Error::Resource(format!(
            "exact moments need the full distribution; n = {} exceeds {MAX_MEAN_N}",
            params.n
        )));
    }
    let dist = distribution(params, Precision::Auto)?;
    let mut mean = 0.0;
    let mut second = 0.0;
    for (m, lp) in dist {
        let p = lp.prob();
        mean += m as f64 * p;
        second += (m * m) as f64 * p;
    }
    Ok(CountMoments {
        mean,
        variance: second - mean * mean,
    })
}
