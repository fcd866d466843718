use super::SeriesStop;
use crate::error::{Error, Result};

/// Kummer's confluent hypergeometric function `₁F₁(a; b; x)` by its series.
pub fn hyp1f1(a: f64, b: f64, x: f64) -> Result<f64> {
    if b <= 0.0 && b.fract() == 0.0 {
        return Err(Error::Domain(format!(
            "hyp1f1: b = {b} is a nonpositive integer"
        )));
    }
    if x.abs() > 100.0 {
        return Err(Error::Domain(format!(
            "hyp1f1: |x| = {} exceeds 100",
            x.abs()
        )));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut stop = SeriesStop::new();
    for k in 0..20_000 {
        let k = f64::from(k);
        term *= (a + k) / (b + k) * x / (k + 1.0);
        sum += term;
        if term == 0.0 || stop.done(term, sum) {
            return Ok(sum);
        }
    }
    Err(Error::Convergence(format!(
        "hyp1f1({a}, {b}, {x}) series did not settle"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_i;

    #[test]
    fn trivial_cases() {
        assert_eq!(hyp1f1(0.5, 1.0, 0.0).unwrap(), 1.0);
        let e = hyp1f1(2.0, 2.0, 1.0).unwrap();
        assert!((e - std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn bessel_closed_forms() {
        // ₁F₁(-1/2; 1; 2z) = e^z ((1-2z) I_0(z) + 2z I_1(z))
        // ₁F₁(1/2; 2; 2z) = e^z (I_0(z) - I_1(z))
        for &z in &[0.125, 0.5, 2.0] {
            let i0 = bessel_i(0, z).unwrap();
            let i1 = bessel_i(1, z).unwrap();
            let want = z.exp() * ((1.0 - 2.0 * z) * i0 + 2.0 * z * i1);
            assert!((hyp1f1(-0.5, 1.0, 2.0 * z).unwrap() - want).abs() <= 1e-13 * want.abs());
            let want = z.exp() * (i0 - i1);
            assert!((hyp1f1(0.5, 2.0, 2.0 * z).unwrap() - want).abs() <= 1e-13 * want);
        }
        assert!((hyp1f1(-0.5, 1.0, 1.0).unwrap() - 0.425_195_826_890_405_5).abs() < 1e-13);
        assert!((hyp1f1(0.5, 2.0, 1.0).unwrap() - 1.328_191_827_486_684_9).abs() < 1e-13);
    }

    #[test]
    fn rejects_pole_in_b() {
        assert!(hyp1f1(1.0, 0.0, 1.0).is_err());
        assert!(hyp1f1(1.0, -3.0, 1.0).is_err());
    }
}
