use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{ComplexDD, DoubleDouble, PI_DD};

const PI_M_QUARTER: f64 = 0.751_125_544_464_942_5;

/// Orthonormal Hermite functions `ψ_0(z), …, ψ_N(z)`,
/// `ψ_k(z) = H_k(z) e^{-z²/2} / √(2^k k! √π)`, by the three-term recurrence.
pub fn hermite_psi_all(n: usize, z: Complex64) -> Result<Vec<Complex64>> {
    if n > 200 {
        return Err(Error::Domain(format!("hermite_psi: index {n} above 200")));
    }
    let mut out = Vec::with_capacity(n + 1);
    let p0 = PI_M_QUARTER * (-0.5 * z * z).exp();
    if !(p0.re.is_finite() && p0.im.is_finite()) {
        return Err(Error::Overflow(format!(
            "hermite_psi: e^(-z²/2) not representable at z = {z}"
        )));
    }
    out.push(p0);
    if n == 0 {
        return Ok(out);
    }
    out.push(std::f64::consts::SQRT_2 * z * p0);
    for k in 1..n {
        let kf = k as f64;
        let next = z * (2.0 / (kf + 1.0)).sqrt() * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        if !(next.re.is_finite() && next.im.is_finite()) {
            return Err(Error::Overflow(format!(
                "hermite_psi: ψ_{} overflowed at z = {z}",
                k + 1
            )));
        }
        out.push(next);
    }
    Ok(out)
}

/// Single orthonormal Hermite function `ψ_N(z)`.
pub fn hermite_psi(n: usize, z: Complex64) -> Result<Complex64> {
    Ok(hermite_psi_all(n, z)?[n])
}

/// [`hermite_psi_all`] carried out in double-double throughout.
pub(crate) fn hermite_psi_all_dd(n: usize, z: ComplexDD) -> Result<Vec<ComplexDD>> {
    if n > 200 {
        return Err(Error::Domain(format!("hermite_psi: index {n} above 200")));
    }
    let half = DoubleDouble::from(-0.5);
    let p0 = (z * z).scale(half).exp().scale(PI_DD.sqrt().sqrt().recip());
    if !(p0.re.is_finite() && p0.im.is_finite()) {
        return Err(Error::Overflow(format!(
            "hermite_psi: e^(-z²/2) not representable at z = {}",
            z.to_c64()
        )));
    }
    let mut out = Vec::with_capacity(n + 1);
    out.push(p0);
    if n == 0 {
        return Ok(out);
    }
    out.push((z * p0).scale(DoubleDouble::from(2.0).sqrt()));
    for k in 1..n {
        let kf = DoubleDouble::from(k as f64);
        let k1 = DoubleDouble::from((k + 1) as f64);
        let a = (DoubleDouble::from(2.0) / k1).sqrt();
        let b = (kf / k1).sqrt();
        out.push((z * out[k]).scale(a) - out[k - 1].scale(b));
    }
    if out.iter().any(|p| !(p.re.is_finite() && p.im.is_finite())) {
        return Err(Error::Overflow(format!(
            "hermite_psi: overflow at z = {}",
            z.to_c64()
        )));
    }
    Ok(out)
}
