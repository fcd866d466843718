use super::SeriesStop;

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Scaled complementary error function `exp(t²) erfc(t)` for `t ≥ 0`.
///
/// Below `t = 1.5` the Maclaurin series of `erf` (all terms positive) is
/// subtracted from `exp(t²)`; above it the Laplace continued fraction is
/// evaluated by the modified Lentz method. Negative arguments fall back to
/// the reflection `erfc(-t) = 2 - erfc(t)`.
pub fn erfcx(t: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t < 0.0 {
        return 2.0 * (t * t).exp() - erfcx(-t);
    }
    if t < 1.5 {
        let t2 = t * t;
        let mut term = t;
        let mut sum = t;
        let mut stop = SeriesStop::new();
        let mut k = 0.0;
        loop {
            k += 1.0;
            term *= 2.0 * t2 / (2.0 * k + 1.0);
            sum += term;
            if stop.done(term, sum) || term == 0.0 {
                break;
            }
        }
        return t2.exp() - FRAC_2_SQRT_PI * sum;
    }
    if t.is_infinite() {
        return 0.0;
    }
    // erfcx(t) = (1/√π) / (t + (1/2)/(t + 1/(t + (3/2)/(t + ...))))
    let tiny = 1e-300;
    let mut f = t;
    let mut c = t;
    let mut d = 0.0;
    for k in 1..5000 {
        let a = 0.5 * f64::from(k);
        d = t + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = t + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    FRAC_1_SQRT_PI / f
}

/// Complementary error function for any real argument.
pub fn erfc(t: f64) -> f64 {
    if t >= 0.0 {
        erfcx(t) * (-t * t).exp()
    } else {
        2.0 - erfc(-t)
    }
}

/// Natural log of `erfc(t)`, finite far into the right tail.
pub fn ln_erfc(t: f64) -> f64 {
    if t >= 0.0 {
        erfcx(t).ln() - t * t
    } else {
        erfc(t).ln()
    }
}
