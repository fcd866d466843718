use super::{lgam, SeriesStop};
use crate::error::{Error, Result};

/// Modified Bessel function `I_ν(x)` of integer order by its power series.
pub fn bessel_i(nu: u32, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("bessel_i requires x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(if nu == 0 { 1.0 } else { 0.0 });
    }
    let nu_f = f64::from(nu);
    let half = 0.5 * x;
    let q = half * half;
    let mut term = (nu_f * half.ln() - lgam(nu_f + 1.0)).exp();
    let mut sum = term;
    let mut stop = SeriesStop::new();
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + nu_f));
        sum += term;
        if stop.done(term, sum) {
            break;
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_i(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(1, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn direct_series_oracle() {
        // ten-term hand summation of Σ (x/2)^{2k}/(k!)² at x = 0.5
        let mut s = 0.0;
        let mut fact = 1.0;
        for k in 0..10 {
            if k > 0 {
                fact *= f64::from(k);
            }
            s += 0.0625f64.powi(k) / (fact * fact);
        }
        assert!((bessel_i(0, 0.5).unwrap() - s).abs() < 1e-15);
        assert!((s - 1.063_483_370_741_323_5).abs() < 1e-15);
    }

    #[test]
    fn wronskian_like_recurrence() {
        // I_{ν-1}(x) - I_{ν+1}(x) = (2ν/x) I_ν(x)
        for &x in &[0.3, 2.0, 17.0, 50.0] {
            for nu in 1..6u32 {
                let l = bessel_i(nu - 1, x).unwrap() - bessel_i(nu + 1, x).unwrap();
                let r = 2.0 * f64::from(nu) / x * bessel_i(nu, x).unwrap();
                assert!((l - r).abs() <= 1e-12 * r.abs(), "x = {x}, nu = {nu}");
            }
        }
    }

    #[test]
    fn negative_argument_rejected() {
        assert!(bessel_i(0, -1.0).is_err());
    }
}
