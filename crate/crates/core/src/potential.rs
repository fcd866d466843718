//! The effective potential felt by a single complex-conjugate pair in the
//! presence of `n` real eigenvalues: its minimum on the imaginary axis,
//! the depth of that minimum relative to the real axis, and the Hessian.

use std::f64::consts::{FRAC_2_SQRT_PI, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactprob::EnsembleParams;
use crate::quadrature::gauss_legendre;
use crate::specfun::erfcx;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PotentialParams {
    pub n: usize,
    pub tau: f64,
    /// Height below which `Q_sc` is evaluated at `x + i r` instead of `x + i y`.
    pub r: f64,
}

impl PotentialParams {
    pub fn new(n: usize, tau: f64) -> Result<Self> {
        let p = PotentialParams { n, tau, r: 0.0 };
        p.validate()?;
        Ok(p)
    }

    pub fn with_r(self, r: f64) -> Result<Self> {
        let p = PotentialParams { r, ..self };
        p.validate()?;
        Ok(p)
    }

    pub fn from_ensemble(e: &EnsembleParams) -> Result<Self> {
        e.validate()?;
        PotentialParams::new(e.n, e.tau())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Domain("n must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.tau) {
            return Err(Error::Domain(format!(
                "tau must lie in [0, 1), got {}",
                self.tau
            )));
        }
        if !(self.r >= 0.0) || !self.r.is_finite() {
            return Err(Error::Domain(format!(
                "r must be finite and nonnegative, got {}",
                self.r
            )));
        }
        Ok(())
    }

    /// `c_n = √(2n/(1-τ²))`.
    pub fn c_n(&self) -> f64 {
        (2.0 * self.n as f64 / (1.0 - self.tau * self.tau)).sqrt()
    }

    /// Half-width `√(2(1+τ))` of the semicircle support.
    pub fn sc_radius(&self) -> f64 {
        sc_radius(self.tau)
    }
}

fn sc_radius(tau: f64) -> f64 {
    (2.0 * (1.0 + tau)).sqrt()
}

/// Location and depth of the minimum of `Q_n^{(r)}` on the imaginary axis.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MinimumReport {
    pub y_star_n: f64,
    /// `Q_n^{(r)}(0) - Q_n^{(r)}(i y*_n)`, with `Q_n^{(r)}(0)` regularized
    /// by dropping the `-(1/n) log 4y²` divergence.
    pub q_gap: f64,
    pub hessian: [[f64; 2]; 2],
}

fn require_upper(z: Complex64) -> Result<()> {
    if !(z.im > 0.0) {
        return Err(Error::Domain(format!("need Im z > 0, got {z}")));
    }
    Ok(())
}

/// `log erfc(t)` for `t ≥ 0`.
fn ln_erfc_pos(t: f64) -> f64 {
    erfcx(t).ln() - t * t
}

/// `Q_{τ,n}(z) = -(1/n) log[2y erfc(c_n y)] + (x² - y²)/(1+τ)`.
#[allow(non_snake_case)]
pub fn Q_tau_n(z: Complex64, params: &PotentialParams) -> Result<f64> {
    params.validate()?;
    require_upper(z)?;
    let (x, y) = (z.re, z.im);
    let n = params.n as f64;
    Ok(
        -((2.0 * y).ln() + ln_erfc_pos(params.c_n() * y)) / n
            + (x * x - y * y) / (1.0 + params.tau),
    )
}

/// The `n → ∞` limit `x²/(1+τ) + y²/(1-τ)`.
#[allow(non_snake_case)]
pub fn Q_tau(z: Complex64, tau: f64) -> f64 {
    z.re * z.re / (1.0 + tau) + z.im * z.im / (1.0 - tau)
}

/// True when `z` is within `1e-6` of the semicircle support.
pub fn near_support(z: Complex64, tau: f64) -> bool {
    let a = sc_radius(tau);
    let dx = (z.re.abs() - a).max(0.0);
    (dx * dx + z.im * z.im).sqrt() < 1e-6
}

/// `Q_sc(z) = -∫ log|z - t|² dρ_sc(t)` for the semicircle on
/// `[-√(2(1+τ)), √(2(1+τ))]`, by quadrature in `t = a sin θ`.
///
/// The θ-range is split at the projection of `z` onto the support, with
/// panels graded geometrically toward it so that points close to the
/// support are still resolved.
#[allow(non_snake_case)]
pub fn Q_sc(z: Complex64, tau: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&tau) {
        return Err(Error::Domain(format!("tau must lie in [0, 1), got {tau}")));
    }
    let a = sc_radius(tau);
    let (x, y) = (z.re, z.im.abs());
    if y == 0.0 && x.abs() <= a {
        return Err(Error::Domain(format!(
            "Q_sc is singular on the support, z = {z}"
        )));
    }
    let half = PI / 2.0;
    let theta0 = (x / a).clamp(-1.0, 1.0).asin();
    let mut cuts = vec![-half, half, theta0];
    let mut w = PI;
    let floor = (y.max((x.abs() - a).max(0.0)) / a).max(1e-300);
    while w > floor && w > 1e-14 {
        w /= 4.0;
        cuts.push(theta0 - w);
        cuts.push(theta0 + w);
    }
    cuts.retain(|c| (-half..=half).contains(c));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let rule = gauss_legendre(32)?;
    let mut total = 0.0;
    for pair in cuts.windows(2) {
        let r = rule.mapped(pair[0], pair[1]);
        total += r.integrate(|th| {
            let t = a * th.sin();
            let c = th.cos();
            (2.0 / PI) * c * c * ((x - t) * (x - t) + y * y).ln()
        });
    }
    Ok(-total)
}

/// `Q_sc` on the imaginary axis in closed form, with `A = a²/y²`:
/// `-2 log y - 2[log((1+√(1+A))/2) + ½(1-√(1+A))/(1+√(1+A))]`.
#[allow(non_snake_case)]
pub fn Q_sc_imaginary_axis(y: f64, tau: f64) -> f64 {
    let a2 = 2.0 * (1.0 + tau);
    let s = (1.0 + a2 / (y * y)).sqrt();
    -2.0 * y.abs().ln() - 2.0 * (((1.0 + s) / 2.0).ln() + 0.5 * (1.0 - s) / (1.0 + s))
}

/// `Q_sc(0) = 1 + log(2/(1+τ))`.
#[allow(non_snake_case)]
pub fn Q_sc_origin(tau: f64) -> f64 {
    1.0 + (2.0 / (1.0 + tau)).ln()
}

/// `Q_n^{(r)}(z) = -(1/n) log[4y² erfc(c_n y)] + (x²-y²)/(1+τ) + Q_sc(x + i max(y, r))`.
#[allow(non_snake_case)]
pub fn Q_n_r(z: Complex64, params: &PotentialParams) -> Result<f64> {
    params.validate()?;
    require_upper(z)?;
    let (x, y) = (z.re, z.im);
    let n = params.n as f64;
    let lifted = Complex64::new(x, y.max(params.r));
    Ok(-((4.0 * y * y).ln() + ln_erfc_pos(params.c_n() * y)) / n
        + (x * x - y * y) / (1.0 + params.tau)
        + Q_sc(lifted, params.tau)?)
}

/// `lim_{y→0⁺} [Q_n^{(r)}(iy) + (1/n) log 4y²] = Q_sc(i r)` (or `Q_sc(0)` at `r = 0`).
#[allow(non_snake_case)]
pub fn Q_n_r_origin_regularized(params: &PotentialParams) -> Result<f64> {
    params.validate()?;
    if params.r == 0.0 {
        Ok(Q_sc_origin(params.tau))
    } else {
        Q_sc(Complex64::new(0.0, params.r), params.tau)
    }
}

/// `∂_y Q_n^{(0)}(iy) = -2/(ny) + (2c_n/(√π n))/erfcx(c_n y) - 2√(2(1+τ) + y²)/(1+τ)`.
#[allow(non_snake_case)]
pub fn dQ_dy(y: f64, params: &PotentialParams) -> Result<f64> {
    params.validate()?;
    if !(y > 0.0) {
        return Err(Error::Domain(format!("need y > 0, got {y}")));
    }
    let n = params.n as f64;
    let c = params.c_n();
    let tau = params.tau;
    Ok(-2.0 / (n * y) + FRAC_2_SQRT_PI * c / n / erfcx(c * y)
        - 2.0 * (2.0 * (1.0 + tau) + y * y).sqrt() / (1.0 + tau))
}

/// `y* = √(2(1-τ)²/(3-τ))`.
pub fn y_star_limit(tau: f64) -> f64 {
    (2.0 * (1.0 - tau).powi(2) / (3.0 - tau)).sqrt()
}

/// `log((3-τ)/(1+τ))`, the limiting depth of the minimum.
pub fn gap_limit(tau: f64) -> f64 {
    ((3.0 - tau) / (1.0 + tau)).ln()
}

const BRACKET: (f64, f64) = (1e-8, 10.0);
const HESSIAN_STEP: f64 = 1e-4;

/// Minimum of `Q_n^{(0)}` on the imaginary axis by bisection on `∂_y Q`.
pub fn find_minimum(params: &PotentialParams) -> Result<MinimumReport> {
    params.validate()?;
    let (mut lo, mut hi) = BRACKET;
    let (flo, fhi) = (dQ_dy(lo, params)?, dQ_dy(hi, params)?);
    if !(flo < 0.0 && fhi > 0.0) {
        return Err(Error::NonBracketing(format!(
            "dQ/dy = {flo:.3e} at {lo}, {fhi:.3e} at {hi} (n = {}, tau = {})",
            params.n, params.tau
        )));
    }
    while hi - lo > 1e-15 * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if dQ_dy(mid, params)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let y = 0.5 * (lo + hi);
    let q = |x: f64, yy: f64| Q_n_r(Complex64::new(x, yy), params);
    let h = HESSIAN_STEP;
    let q0 = q(0.0, y)?;
    let hxx = (q(h, y)? - 2.0 * q0 + q(-h, y)?) / (h * h);
    let hyy = (q(0.0, y + h)? - 2.0 * q0 + q(0.0, y - h)?) / (h * h);
    let hxy = (q(h, y + h)? - q(h, y - h)? - q(-h, y + h)? + q(-h, y - h)?) / (4.0 * h * h);
    Ok(MinimumReport {
        y_star_n: y,
        q_gap: Q_n_r_origin_regularized(params)? - q0,
        hessian: [[hxx, hxy], [hxy, hyy]],
    })
}

/// The Hessian at the limiting minimum, from the harmonicity of
/// `(x²-y²)/(1+τ) + Q_sc` and the large-`n` form of `∂_y Q`:
/// `diag((1-τ)/(1+τ), (3-τ)/(1-τ))`.
pub fn hessian_limit(tau: f64) -> [[f64; 2]; 2] {
    [
        [(1.0 - tau) / (1.0 + tau), 0.0],
        [0.0, (3.0 - tau) / (1.0 - tau)],
    ]
}
