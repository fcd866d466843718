//! The GOE prekernel `κ_n(ζ, η)` in three equivalent forms, and the
//! half-plane Pfaffian integral for `p_{n,n-2}/p_{n,n}`.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactprob::EnsembleParams;
use crate::quadrature::{
    gauss_legendre_dd, integrate_upper_halfplane, HalfPlaneBox, HalfPlaneIntegral,
};
use crate::specfun::{
    erfc, hermite_psi_all, hermite_psi_all_dd, lgam, ln_factorial, ComplexDD, DoubleDouble,
    PolyCoeffs, SignedLog,
};

pub const MAX_SUM_N: usize = 60;
pub const MAX_PFAFFIAN_N: usize = 40;
pub const RATIONAL_THRESHOLD: f64 = 1e-6;
pub const INTEGRAL_ORDER: usize = 64;

/// Skew-orthogonal polynomials for the weight `e^{-x²}`:
/// `q_{2j} = H_{2j}/2^{2j}`, `q_{2j+1} = (H_{2j+1} - 4j H_{2j-1})/2^{2j+1}`,
/// with skew norms `h_j = √π (2j)!/2^{2j}`.
#[derive(Clone, Debug, Serialize)]
pub struct SkewPolySystem {
    pub n: usize,
    pub q: Vec<PolyCoeffs>,
    pub h: Vec<f64>,
}

impl SkewPolySystem {
    pub fn new(n: usize) -> Result<Self> {
        check_n(n, MAX_SUM_N)?;
        let herm: Vec<PolyCoeffs> = (0..=n).map(PolyCoeffs::hermite).collect();
        let mut q = Vec::with_capacity(n);
        let mut h = Vec::with_capacity(n / 2);
        for j in 0..n / 2 {
            let s = 0.25f64.powi(j as i32);
            q.push(herm[2 * j].scale(s));
            let odd = if j == 0 {
                herm[1].clone()
            } else {
                &herm[2 * j + 1] - &herm[2 * j - 1].scale(4.0 * j as f64)
            };
            q.push(odd.scale(0.5 * s));
            h.push((0.5 * PI.ln() + ln_factorial(2 * j as u32) - 2.0 * j as f64 * 2f64.ln()).exp());
        }
        Ok(SkewPolySystem { n, q, h })
    }

    /// `½ e^{-(ζ²+η²)/2} Σ_j (q_{2j+1}(ζ) q_{2j}(η) - q_{2j}(ζ) q_{2j+1}(η))/h_j`
    /// evaluated from the raw coefficients. Only usable at small `n`.
    pub fn kappa_raw(&self, zeta: Complex64, eta: Complex64) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (j, &hj) in self.h.iter().enumerate() {
            let (e, o) = (&self.q[2 * j], &self.q[2 * j + 1]);
            s += (o.eval_complex(zeta) * e.eval_complex(eta)
                - e.eval_complex(zeta) * o.eval_complex(eta))
                / hj;
        }
        0.5 * (-(zeta * zeta + eta * eta) / 2.0).exp() * s
    }
}

fn check_n(n: usize, cap: usize) -> Result<()> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::Domain(format!(
            "n must be even and positive, got {n}"
        )));
    }
    if n > cap {
        return Err(Error::Domain(format!(
            "n = {n} exceeds {cap} for this representation"
        )));
    }
    Ok(())
}

/// Skew-orthogonal sum, written in normalized Hermite functions:
/// `κ_n = (1/(2√2)) Σ_{j<n/2} [(√(2j+1) ψ_{2j+1}(ζ) - √(2j) ψ_{2j-1}(ζ)) ψ_{2j}(η) - (ζ ↔ η)]`.
pub fn kappa_sum(n: usize, zeta: Complex64, eta: Complex64) -> Result<Complex64> {
    check_n(n, MAX_SUM_N)?;
    let pz = hermite_psi_all(n, zeta)?;
    let pe = hermite_psi_all(n, eta)?;
    let odd = |p: &[Complex64], j: usize| {
        let mut v = ((2 * j + 1) as f64).sqrt() * p[2 * j + 1];
        if j > 0 {
            v -= ((2 * j) as f64).sqrt() * p[2 * j - 1];
        }
        v
    };
    let mut s = Complex64::new(0.0, 0.0);
    for j in 0..n / 2 {
        s += odd(&pz, j) * pe[2 * j] - odd(&pe, j) * pz[2 * j];
    }
    Ok(s / (2.0 * SQRT_2))
}

/// Closed form
/// `κ_n = -(√n/(2√2)) [Ψ_1/(ζ-η) - Ψ_2/(ζ-η)²]`, switching to
/// [`kappa_integral`] when `|ζ - η| < 1e-6`.
pub fn kappa_rational(n: usize, zeta: Complex64, eta: Complex64) -> Result<Complex64> {
    check_n(n, usize::MAX)?;
    let d = zeta - eta;
    if d.norm() < RATIONAL_THRESHOLD {
        return kappa_integral(n, zeta, eta, INTEGRAL_ORDER);
    }
    let pz = hermite_psi_all(n, zeta)?;
    let pe = hermite_psi_all(n, eta)?;
    let nf = n as f64;
    let psi1 = (2.0 * nf).sqrt() * pz[n - 1] * pe[n - 1]
        - (2.0 * (nf - 1.0)).sqrt() * pz[n - 2] * pe[n]
        - eta * pz[n] * pe[n - 1]
        + zeta * pz[n - 1] * pe[n];
    let psi2 = pz[n] * pe[n - 1] - pz[n - 1] * pe[n];
    Ok(-(nf.sqrt() / (2.0 * SQRT_2)) * (psi1 / d - psi2 / (d * d)))
}

/// `ψ̃_N(s) = (s² - 1) ψ_N - 2√(2N) s ψ_{N-1} + 2√(N(N-1)) ψ_{N-2}`.
fn psi_tilde(p: &[ComplexDD], big_n: usize, s: ComplexDD) -> ComplexDD {
    let nf = DoubleDouble::from(big_n as f64);
    let one = ComplexDD::new(DoubleDouble::ONE, DoubleDouble::ZERO);
    let mut v = (s * s - one) * p[big_n] - (s * p[big_n - 1]).scale((nf.mul_f64(8.0)).sqrt());
    if big_n >= 2 {
        v += p[big_n - 2].scale((nf * (nf - DoubleDouble::ONE)).mul_f64(4.0).sqrt());
    }
    v
}

/// Integral form along the segment `s_t = tζ + (1-t)η`, split into
/// `order`-node panels no longer than 2 in `s`:
/// `κ_n = -(√n/(2√2)) [ψ_{n-1}(η) ∫ t ψ̃_n(s_t) dt - ψ_n(η) ∫ t ψ̃_{n-1}(s_t) dt + ψ_n(ζ) ψ_{n-1}(η)]`.
///
/// Away from the bulk the integrand is many orders of magnitude larger than
/// the result, so nodes, weights, Hermite functions and sums are all carried
/// in double-double.
pub fn kappa_integral(
    n: usize,
    zeta: Complex64,
    eta: Complex64,
    order: usize,
) -> Result<Complex64> {
    check_n(n, usize::MAX)?;
    let base = gauss_legendre_dd(order)?;
    let panels = ((zeta - eta).norm() / 2.0).ceil().max(1.0) as usize;
    let (z, e) = (ComplexDD::from_c64(zeta), ComplexDD::from_c64(eta));
    let mut i_n = ComplexDD::default();
    let mut i_n1 = ComplexDD::default();
    let width = DoubleDouble::from(panels as f64).recip();
    let half_width = width.mul_f64(0.5);
    for k in 0..panels {
        let lo = width.mul_f64(k as f64);
        for &(x, w) in &base {
            let t = lo + (x + DoubleDouble::ONE) * half_width;
            let s = z.scale(t) + e.scale(DoubleDouble::ONE - t);
            let p = hermite_psi_all_dd(n, s)?;
            let wt = w * half_width * t;
            i_n += psi_tilde(&p, n, s).scale(wt);
            i_n1 += psi_tilde(&p, n - 1, s).scale(wt);
        }
    }
    let pz = hermite_psi_all_dd(n, z)?;
    let pe = hermite_psi_all_dd(n, e)?;
    let nf = n as f64;
    let v = pe[n - 1] * i_n - pe[n] * i_n1 + pz[n] * pe[n - 1];
    Ok(-(nf.sqrt() / (2.0 * SQRT_2)) * v.to_c64())
}

/// Truncation box for the half-plane integral at size `n` and asymmetry `τ`.
///
/// The integrand decays like `e^{-x²}` past `|x| = √(2n)` and like
/// `e^{-(1+τ)y²/(1-τ)}` in the imaginary direction.
pub fn pfaffian_box(n: usize, one_minus_tau: f64) -> HalfPlaneBox {
    let tau = 1.0 - one_minus_tau;
    let edge = (2.0 * n as f64).sqrt();
    let mut b =
        HalfPlaneBox::from_decay(edge, edge * one_minus_tau, 1.0, (1.0 + tau) / one_minus_tau);
    b.y_max = b.y_max.min(edge + 6.0);
    b.panel_x = (PI / edge).min(1.0);
    b
}

/// `(2/i) ∫_ℍ κ_n(ζ, ζ̄) erfc(2 Im ζ/√(2(1-τ))) d²ζ` over a given box.
pub fn pfaffian2d_integral(
    params: &EnsembleParams,
    bx: &HalfPlaneBox,
    order: usize,
) -> Result<HalfPlaneIntegral> {
    params.validate()?;
    params.require_nonsymmetric()?;
    check_n(params.n, MAX_PFAFFIAN_N)?;
    let n = params.n;
    let scale = 2.0 / (2.0 * params.one_minus_tau()).sqrt();
    let fail = std::sync::Mutex::new(None);
    let r = integrate_upper_halfplane(
        |z| match kappa_sum(n, z, z.conj()) {
            Ok(k) => Complex64::new(0.0, -2.0) * k * erfc(scale * z.im),
            Err(e) => {
                fail.lock()
                    .unwrap_or_else(|p| p.into_inner())
                    .get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        },
        bx,
        order,
    )?;
    if let Some(e) = fail.into_inner().unwrap_or_else(|p| p.into_inner()) {
        return Err(e);
    }
    Ok(r)
}

/// Fourth route to `p_{n,n-2}/p_{n,n}`: the half-plane Pfaffian integral.
pub fn ratio_l1_pfaffian2d(params: &EnsembleParams) -> Result<SignedLog> {
    let bx = pfaffian_box(params.n, params.one_minus_tau());
    let r = pfaffian2d_integral(params, &bx, 16)?;
    if r.value.im.abs() > 1e-6 * r.value.re.abs() {
        return Err(Error::Quality(format!(
            "half-plane integral has imaginary part {:.3e} against real part {:.3e}",
            r.value.im, r.value.re
        )));
    }
    if r.truncated {
        return Err(Error::Truncation(
            "half-plane integrand is not negligible on the box edge".into(),
        ));
    }
    if r.value.re <= 0.0 {
        return Err(Error::Quality(format!(
            "half-plane integral is not positive: {}",
            r.value.re
        )));
    }
    Ok(SignedLog::from_f64(r.value.re))
}

/// `log C`, `c`, `d` of the envelope `C e^{-c y²} e^{-d n |x|√(x²-1)}` fitted by
/// least squares to `log|κ_n(ζ,ζ̄) erfc(…)|` at sample points outside the
/// bulk, with `x` measured in units of `√(2n)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DecayEnvelope {
    pub log_c: f64,
    pub c: f64,
    pub d: f64,
    pub samples: usize,
}

pub fn fit_decay_envelope(params: &EnsembleParams) -> Result<DecayEnvelope> {
    params.validate()?;
    check_n(params.n, MAX_SUM_N)?;
    let n = params.n;
    let edge = (2.0 * n as f64).sqrt();
    let scale = 2.0 / (2.0 * params.one_minus_tau()).sqrt();
    let mut rows = Vec::new();
    for i in 1..=8 {
        let xs = 1.0 + 0.1 * f64::from(i);
        for j in 1..=6 {
            let y = 0.25 * f64::from(j);
            let z = Complex64::new(xs * edge, y);
            let v = (kappa_sum(n, z, z.conj())? * erfc(scale * y)).norm();
            if v > 0.0 && v.is_finite() {
                rows.push((
                    [1.0, -y * y, -(n as f64) * xs * (xs * xs - 1.0).sqrt()],
                    v.ln(),
                ));
            }
        }
    }
    let beta =
        least_squares3(&rows).ok_or_else(|| Error::Quality("envelope fit is singular".into()))?;
    Ok(DecayEnvelope {
        log_c: beta[0],
        c: beta[1],
        d: beta[2],
        samples: rows.len(),
    })
}

fn least_squares3(rows: &[([f64; 3], f64)]) -> Option<[f64; 3]> {
    let mut a = [[0.0; 4]; 3];
    for (x, y) in rows {
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] += x[i] * x[j];
            }
            a[i][3] += x[i] * y;
        }
    }
    for c in 0..3 {
        let p = (c..3).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        a.swap(c, p);
        if a[c][c].abs() < 1e-300 {
            return None;
        }
        for r in 0..3 {
            if r != c {
                let f = a[r][c] / a[c][c];
                for k in c..4 {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
    }
    Some([a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2]])
}

/// `log h_j`, exposed for callers that need the skew norms at large `j`.
pub fn ln_skew_norm(j: usize) -> f64 {
    0.5 * PI.ln() + lgam(2.0 * j as f64 + 1.0) - 2.0 * j as f64 * 2f64.ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactprob::{ratio_l1_laguerre, ratio_l1_s_integral};
    use crate::quadrature::gauss_legendre;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn degrees_and_norms() {
        let s = SkewPolySystem::new(8).unwrap();
        for (k, q) in s.q.iter().enumerate() {
            assert_eq!(q.degree(), Some(k));
        }
        assert!((s.h[0] - PI.sqrt()).abs() < 1e-15);
        assert!((s.h[2] - PI.sqrt() * 24.0 / 16.0).abs() < 1e-14);
        assert!((ln_skew_norm(2) - s.h[2].ln()).abs() < 1e-14);
    }

    #[test]
    fn skew_orthogonality() {
        // <f, g> = ½ ∫∫ e^{-(x²+y²)/2} f(x) g(y) sgn(y - x) dx dy
        let s = SkewPolySystem::new(6).unwrap();
        let rule = gauss_legendre(120).unwrap().mapped(-9.0, 9.0);
        let inner = |f: &PolyCoeffs, g: &PolyCoeffs| {
            let mut total = 0.0;
            for (&x, &wx) in rule.nodes.iter().zip(&rule.weights) {
                // ∫_x^∞ e^{-y²/2} g(y) dy on [x, 9]
                let tail = gauss_legendre(80).unwrap().mapped(x, 9.0);
                let gy: f64 = tail
                    .nodes
                    .iter()
                    .zip(&tail.weights)
                    .map(|(&y, &w)| w * (-y * y / 2.0).exp() * g.eval(y))
                    .sum();
                let head = gauss_legendre(80).unwrap().mapped(-9.0, x);
                let gh: f64 = head
                    .nodes
                    .iter()
                    .zip(&head.weights)
                    .map(|(&y, &w)| w * (-y * y / 2.0).exp() * g.eval(y))
                    .sum();
                total += wx * (-x * x / 2.0).exp() * f.eval(x) * (gy - gh);
            }
            0.5 * total
        };
        for j in 0..3 {
            for k in 0..3 {
                let v = inner(&s.q[2 * j], &s.q[2 * k + 1]);
                let want = if j == k { s.h[j] } else { 0.0 };
                assert!(
                    (v - want).abs() < 1e-8 * s.h[j].max(1.0),
                    "j = {j}, k = {k}: {v}"
                );
                let v = inner(&s.q[2 * j], &s.q[2 * k]);
                assert!(v.abs() < 1e-8 * s.h[j].max(1.0));
            }
        }
    }

    #[test]
    fn psi_form_matches_raw_polynomials() {
        let s = SkewPolySystem::new(8).unwrap();
        let (z, e) = (c(0.3, 0.7), c(-1.1, 0.2));
        assert!(rel(kappa_sum(8, z, e).unwrap(), s.kappa_raw(z, e)) < 1e-12);
    }

    #[test]
    fn n2_at_conjugate_pair() {
        let (z, e) = (c(0.0, 1.0), c(0.0, -1.0));
        assert!(
            rel(
                kappa_sum(2, z, e).unwrap(),
                kappa_rational(2, z, e).unwrap()
            ) < 1e-10
        );
    }

    #[test]
    fn diagonal_vanishes() {
        let z = c(0.4, -1.3);
        assert!(kappa_sum(8, z, z).unwrap().norm() < 1e-15);
        let scale = hermite_psi_all(8, z).unwrap()[8].norm_sqr();
        assert!(kappa_rational(8, z, z).unwrap().norm() < 1e-12 * scale);
    }

    #[test]
    fn near_diagonal_continuity() {
        let z = c(0.9, 0.6);
        let e = z + 1e-7;
        let a = kappa_rational(8, z, e).unwrap();
        let b = kappa_integral(8, z, e, INTEGRAL_ORDER).unwrap();
        assert_eq!(a, b);
        let s = kappa_sum(8, z, e).unwrap();
        assert!((a - s).norm() < 1e-6 * s.norm().max(1e-7));
    }

    #[test]
    fn rejects_bad_n() {
        assert!(kappa_sum(3, c(0.0, 0.0), c(1.0, 0.0)).is_err());
        assert!(kappa_sum(62, c(0.0, 0.0), c(1.0, 0.0)).is_err());
        assert!(SkewPolySystem::new(0).is_err());
    }

    #[test]
    fn pfaffian_route_small_n() {
        let p = EnsembleParams::strong(2, 0.0).unwrap();
        let r = ratio_l1_pfaffian2d(&p).unwrap().to_f64();
        assert!((r - (SQRT_2 - 1.0)).abs() < 1e-10, "{r}");
        let p = EnsembleParams::strong(10, 0.5).unwrap();
        let a = ratio_l1_pfaffian2d(&p).unwrap().to_f64();
        let b = ratio_l1_s_integral(&p).unwrap().to_f64();
        assert!((a / b - 1.0).abs() < 1e-6);
        let p = EnsembleParams::weak(8, 1.0).unwrap();
        let a = ratio_l1_pfaffian2d(&p).unwrap().to_f64();
        let b = ratio_l1_laguerre(&p).unwrap().to_f64();
        assert!((a / b - 1.0).abs() < 1e-6);
    }

    /// Size of the two terms that cancel in the rational form.
    fn rational_scale(n: usize, z: Complex64, e: Complex64) -> f64 {
        let (pz, pe) = (
            hermite_psi_all(n, z).unwrap(),
            hermite_psi_all(n, e).unwrap(),
        );
        let d = (z - e).norm();
        let nf = n as f64;
        let psi1 = (2.0 * nf).sqrt() * (pz[n - 1] * pe[n - 1]).norm()
            + (2.0 * (nf - 1.0)).sqrt() * (pz[n - 2] * pe[n]).norm()
            + (e * pz[n] * pe[n - 1]).norm()
            + (z * pz[n - 1] * pe[n]).norm();
        let psi2 = (pz[n] * pe[n - 1]).norm() + (pz[n - 1] * pe[n]).norm();
        nf.sqrt() / (2.0 * SQRT_2) * (psi1 / d + psi2 / (d * d))
    }

    fn point(n: usize) -> impl Strategy<Value = Complex64> {
        let r = 2.0 * (n as f64).sqrt();
        (-r..r, -3.0f64..3.0).prop_map(|(a, b)| c(a, b))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn representations_agree((n, z, e) in prop::sample::select(vec![2usize, 8, 20]).prop_flat_map(|n| (Just(n), point(n), point(n)))) {
            let s = kappa_sum(n, z, e).unwrap();
            let r = kappa_rational(n, z, e).unwrap();
            let i = kappa_integral(n, z, e, INTEGRAL_ORDER).unwrap();
            let scale = s.norm().max(1e-12);
            prop_assert!((s - r).norm() <= 1e-8 * scale, "sum {s} rational {r}");
            prop_assert!((s - i).norm() <= 1e-8 * scale, "sum {s} integral {i}");
        }

        #[test]
        fn antisymmetric_and_real(z in point(8), e in point(8)) {
            let a = kappa_sum(8, z, e).unwrap();
            let b = kappa_sum(8, e, z).unwrap();
            prop_assert!((a + b).norm() <= 1e-14 * a.norm().max(1e-300));
            let cj = kappa_sum(8, z.conj(), e.conj()).unwrap();
            prop_assert!((cj - a.conj()).norm() <= 1e-13 * a.norm().max(1e-300));
            let r1 = kappa_rational(8, z, e).unwrap();
            let r2 = kappa_rational(8, e, z).unwrap();
            prop_assert!((r1 + r2).norm() <= 1e-14 * rational_scale(8, z, e).max(1e-300));
        }
    }
}
