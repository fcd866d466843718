use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::legendre::{gauss_legendre, QuadratureRule};
use crate::error::{Error, Result};
use crate::specfun::{log_sum, SignedLog};

/// Shifted sums below this fraction of the summed magnitudes are reported as cancelled.
const CANCELLATION: f64 = 1e-13;
/// Integrand tails are cut once they fall `e^{-80}` below the running peak.
const TAIL_LOG: f64 = 80.0;
const MAX_PANELS: usize = 4096;

/// Result of a log-domain integration.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LogIntegral {
    pub value: SignedLog,
    pub rel_err_estimate: f64,
    /// The signed sum lost more than 13 digits; `value` is then zero.
    pub cancelled: bool,
    /// The outermost panel still carried more than `1e-10` of the total.
    pub truncated: bool,
}

impl LogIntegral {
    fn from_parts(sum: SignedLog, mag: SignedLog, rel_err: f64, truncated: bool) -> Self {
        let cancelled =
            !mag.is_zero() && (sum.is_zero() || sum.log_abs() - mag.log_abs() < CANCELLATION.ln());
        LogIntegral {
            value: if cancelled { SignedLog::ZERO } else { sum },
            rel_err_estimate: rel_err,
            cancelled,
            truncated,
        }
    }

    /// Turns the quality flags into errors.
    pub fn checked(self, what: &str) -> Result<SignedLog> {
        if self.cancelled {
            return Err(Error::Cancellation(format!(
                "{what}: integral cancelled to below 1e-13"
            )));
        }
        if self.truncated {
            return Err(Error::Truncation(format!(
                "{what}: tail panel above 1e-10 of the total"
            )));
        }
        Ok(self.value)
    }
}

fn rel_diff(a: SignedLog, b: SignedLog) -> f64 {
    if b.is_zero() {
        return if a.is_zero() { 0.0 } else { f64::INFINITY };
    }
    ((a - b) / b).to_f64().abs()
}

/// `Σ w_i f(x_i)` with `f` supplied in signed-log form, max-shifted so that
/// exponents up to `±1e8` never overflow.
pub fn integrate_log_domain(
    f_log: impl Fn(f64) -> SignedLog,
    rule: &QuadratureRule,
) -> LogIntegral {
    let terms: Vec<SignedLog> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&x, &w)| f_log(x).scale_log(w.ln()))
        .collect();
    let (sum, mag) = log_sum(&terms);
    LogIntegral::from_parts(sum, mag, rule.est_error, false)
}

const JACOBI_PANELS: usize = 8;

/// `∫_0^1 s^p (1-s)^q g(s) ds` through `s = sin²θ`.
///
/// `g` receives both `s` and `1 - s` (the latter computed as `cos²θ`, so it
/// keeps full relative precision near `s = 1`) and returns its value in
/// signed-log form. The θ-range is split into panels graded geometrically
/// toward θ = 0, where peaked integrands concentrate for large `n`. The
/// error estimate compares `order` against `2·order` nodes per panel.
pub fn integrate_jacobi_endpoints(
    g: impl Fn(f64, f64) -> SignedLog + Sync,
    p: f64,
    q: f64,
    order: usize,
) -> Result<LogIntegral> {
    if !(p > -1.0 && q > -1.0) {
        return Err(Error::Domain(format!(
            "Jacobi exponents must exceed -1, got p={p}, q={q}"
        )));
    }
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut breaks = vec![0.0];
    for k in (0..JACOBI_PANELS).rev() {
        breaks.push(half_pi / 2f64.powi(k as i32));
    }
    let run = |ord: usize| -> Result<(SignedLog, SignedLog)> {
        let base = gauss_legendre(ord)?;
        let mut terms = Vec::with_capacity(ord * JACOBI_PANELS);
        for w in breaks.windows(2) {
            let rule = base.mapped(w[0], w[1]);
            for (&th, &wt) in rule.nodes.iter().zip(&rule.weights) {
                let (sn, cs) = th.sin_cos();
                let jac =
                    std::f64::consts::LN_2 + (2.0 * p + 1.0) * sn.ln() + (2.0 * q + 1.0) * cs.ln();
                terms.push(g(sn * sn, cs * cs).scale_log(jac + wt.ln()));
            }
        }
        Ok(log_sum(&terms))
    };
    let (coarse, _) = run(order)?;
    let (fine, mag) = run(2 * order)?;
    Ok(LogIntegral::from_parts(
        fine,
        mag,
        rel_diff(coarse, fine),
        false,
    ))
}

/// `∫_0^∞ h(y) dy` for an integrand with Gaussian decay `e^{-decay·y²}`.
pub fn integrate_semi_infinite_gaussian(
    h: impl Fn(f64) -> SignedLog + Sync,
    decay: f64,
    order: usize,
) -> Result<LogIntegral> {
    let mut out = integrate_semi_infinite_gaussian_many(|y| vec![h(y)], 1, decay, order)?;
    Ok(out.remove(0))
}

/// Vector-valued form of [`integrate_semi_infinite_gaussian`]: `h` returns
/// `count` integrands evaluated at the same abscissa.
///
/// The half-line is covered by panels of width `R0/16`, `R0 = √(80/decay)`.
/// Panels are added until the range has passed `R0` and every component's
/// latest panel has fallen `e^{-80}` below that component's largest panel, so
/// integrands whose mass sits well beyond the origin are still captured.
pub fn integrate_semi_infinite_gaussian_many(
    h: impl Fn(f64) -> Vec<SignedLog> + Sync,
    count: usize,
    decay: f64,
    order: usize,
) -> Result<Vec<LogIntegral>> {
    if !(decay > 0.0) {
        return Err(Error::Domain(format!(
            "Gaussian decay must be positive, got {decay}"
        )));
    }
    let r0 = (TAIL_LOG / decay).sqrt();
    let width = r0 / 16.0;
    let coarse_rule = gauss_legendre(order)?;
    let fine_rule = gauss_legendre(2 * order)?;

    let mut coarse_panels: Vec<Vec<SignedLog>> = vec![Vec::new(); count];
    let mut fine_terms: Vec<Vec<SignedLog>> = vec![Vec::new(); count];
    let mut peak = vec![f64::NEG_INFINITY; count];
    let mut last = vec![SignedLog::ZERO; count];
    let mut panels = 0;
    loop {
        let lo = panels as f64 * width;
        let hi = lo + width;
        let panel = |rule: &QuadratureRule| -> Vec<Vec<SignedLog>> {
            let r = rule.mapped(lo, hi);
            r.nodes
                .par_iter()
                .zip(r.weights.par_iter())
                .map(|(&y, &w)| {
                    let lw = w.ln();
                    h(y).into_iter().map(|v| v.scale_log(lw)).collect()
                })
                .collect()
        };
        let coarse = panel(&coarse_rule);
        let fine = panel(&fine_rule);
        for c in 0..count {
            let cs: Vec<SignedLog> = coarse.iter().map(|v| v[c]).collect();
            coarse_panels[c].push(log_sum(&cs).0);
            let fs: Vec<SignedLog> = fine.iter().map(|v| v[c]).collect();
            let (psum, pmag) = log_sum(&fs);
            if !pmag.is_zero() {
                peak[c] = peak[c].max(pmag.log_abs());
            }
            last[c] = psum;
            fine_terms[c].extend(fs);
        }
        panels += 1;
        let settled = (0..count).all(|c| {
            peak[c] == f64::NEG_INFINITY
                || last[c].is_zero()
                || last[c].log_abs() < peak[c] - TAIL_LOG
        });
        if hi >= r0 && settled {
            break;
        }
        if panels >= MAX_PANELS {
            break;
        }
    }
    let mut out = Vec::with_capacity(count);
    for c in 0..count {
        let (fine, mag) = log_sum(&fine_terms[c]);
        let (coarse, _) = log_sum(&coarse_panels[c]);
        let truncated = !fine.is_zero()
            && !last[c].is_zero()
            && last[c].log_abs() - fine.log_abs() > (1e-10f64).ln();
        out.push(LogIntegral::from_parts(
            fine,
            mag,
            rel_diff(coarse, fine),
            truncated,
        ));
    }
    Ok(out)
}

/// Rectangle `[-x_max, x_max] × (0, y_max]` tiled by square-ish panels.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct HalfPlaneBox {
    pub x_max: f64,
    pub y_max: f64,
    pub panel_x: f64,
    pub panel_y: f64,
}

impl HalfPlaneBox {
    /// Box whose edges sit `√(80/decay)` beyond the bulk in each direction.
    pub fn from_decay(bulk_x: f64, bulk_y: f64, decay_x: f64, decay_y: f64) -> Self {
        HalfPlaneBox {
            x_max: bulk_x + (TAIL_LOG / decay_x).sqrt(),
            y_max: bulk_y + (TAIL_LOG / decay_y).sqrt(),
            panel_x: 1.0,
            panel_y: (0.5 / decay_y.sqrt()).min(1.0),
        }
    }

    /// Same panel sizes, both half-widths doubled.
    pub fn doubled(&self) -> Self {
        HalfPlaneBox {
            x_max: 2.0 * self.x_max,
            y_max: 2.0 * self.y_max,
            ..*self
        }
    }
}

/// Complex-valued half-plane integral with quality flags.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct HalfPlaneIntegral {
    pub value: Complex64,
    pub rel_err_estimate: f64,
    pub cancelled: bool,
    pub truncated: bool,
}

/// `∫_{ℍ} k(z) d²z` by a tensor-product Gauss–Legendre rule over `bx`.
///
/// Each panel carries `order × order` nodes; the error estimate comes from
/// repeating with `2·order`. Panels are evaluated in parallel but summed in
/// a fixed order, so results are bitwise reproducible.
pub fn integrate_upper_halfplane(
    k: impl Fn(Complex64) -> Complex64 + Sync,
    bx: &HalfPlaneBox,
    order: usize,
) -> Result<HalfPlaneIntegral> {
    let nx = (2.0 * bx.x_max / bx.panel_x).ceil().max(1.0) as usize;
    let ny = (bx.y_max / bx.panel_y).ceil().max(1.0) as usize;
    let hx = 2.0 * bx.x_max / nx as f64;
    let hy = bx.y_max / ny as f64;

    let run = |ord: usize| -> Result<(Complex64, f64, f64)> {
        let base = gauss_legendre(ord)?;
        let panels: Vec<(Complex64, f64, bool)> = (0..nx * ny)
            .into_par_iter()
            .map(|idx| {
                let (ix, iy) = (idx / ny, idx % ny);
                let xr = base.mapped(-bx.x_max + ix as f64 * hx, -bx.x_max + (ix + 1) as f64 * hx);
                let yr = base.mapped(iy as f64 * hy, (iy + 1) as f64 * hy);
                let mut s = Complex64::new(0.0, 0.0);
                let mut m = 0.0;
                for (&x, &wx) in xr.nodes.iter().zip(&xr.weights) {
                    for (&y, &wy) in yr.nodes.iter().zip(&yr.weights) {
                        let v = k(Complex64::new(x, y)) * (wx * wy);
                        s += v;
                        m += v.norm();
                    }
                }
                let edge = ix == 0 || ix == nx - 1 || iy == ny - 1;
                (s, m, edge)
            })
            .collect();
        let mut total = Complex64::new(0.0, 0.0);
        let mut mag = 0.0;
        let mut edge = 0.0;
        for (s, m, e) in panels {
            total += s;
            mag += m;
            if e {
                edge += m;
            }
        }
        Ok((total, mag, edge))
    };
    let (coarse, _, _) = run(order)?;
    let (fine, mag, edge) = run(2 * order)?;
    let cancelled = fine.norm() < CANCELLATION * mag;
    let rel = if fine.norm() > 0.0 {
        (coarse - fine).norm() / fine.norm()
    } else {
        0.0
    };
    Ok(HalfPlaneIntegral {
        value: if cancelled {
            Complex64::new(0.0, 0.0)
        } else {
            fine
        },
        rel_err_estimate: rel,
        cancelled,
        truncated: !cancelled && edge > 1e-10 * fine.norm(),
    })
}
