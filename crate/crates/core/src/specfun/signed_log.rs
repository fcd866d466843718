use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::Serialize;

/// A real number stored as `sign · exp(log_abs)`.
///
/// Zero is represented by `sign == 0` with `log_abs == -inf`; every
/// constructor normalises to that form so equality on zero is structural.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SignedLog {
    log_abs: f64,
    sign: i8,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog {
        log_abs: f64::NEG_INFINITY,
        sign: 0,
    };
    pub const ONE: SignedLog = SignedLog {
        log_abs: 0.0,
        sign: 1,
    };

    /// Builds a value from its natural log magnitude and a sign in {-1, 0, +1}.
    pub fn new(log_abs: f64, sign: i8) -> Self {
        if sign == 0 || log_abs == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        debug_assert!(!log_abs.is_nan(), "NaN log magnitude");
        SignedLog {
            log_abs,
            sign: sign.signum(),
        }
    }

    /// Positive number `exp(log_abs)`.
    pub fn from_log(log_abs: f64) -> Self {
        Self::new(log_abs, 1)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            SignedLog {
                log_abs: x.abs().ln(),
                sign: if x > 0.0 { 1 } else { -1 },
            }
        }
    }

    pub fn to_f64(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_abs.exp(),
        }
    }

    pub fn log_abs(self) -> f64 {
        self.log_abs
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    /// Natural log of the value, `None` unless strictly positive.
    pub fn ln(self) -> Option<f64> {
        (self.sign > 0).then_some(self.log_abs)
    }

    pub fn abs(self) -> Self {
        SignedLog {
            log_abs: self.log_abs,
            sign: self.sign.abs(),
        }
    }

    pub fn powi(self, k: i32) -> Self {
        if k == 0 {
            return Self::ONE;
        }
        if self.is_zero() {
            return Self::ZERO;
        }
        let sign = if self.sign < 0 && k % 2 != 0 { -1 } else { 1 };
        SignedLog::new(self.log_abs * f64::from(k), sign)
    }

    /// Multiplies by `exp(shift)`.
    pub fn scale_log(self, shift: f64) -> Self {
        if self.is_zero() {
            self
        } else {
            SignedLog::new(self.log_abs + shift, self.sign)
        }
    }

    /// Compares magnitudes.
    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        self.log_abs
            .partial_cmp(&other.log_abs)
            .unwrap_or(Ordering::Equal)
    }
}

impl Default for SignedLog {
    fn default() -> Self {
        Self::ZERO
    }
}

impl fmt::Display for SignedLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(f, "{}exp({})", if s < 0 { "-" } else { "" }, self.log_abs),
        }
    }
}

impl From<f64> for SignedLog {
    fn from(x: f64) -> Self {
        SignedLog::from_f64(x)
    }
}

impl Neg for SignedLog {
    type Output = SignedLog;
    fn neg(self) -> SignedLog {
        SignedLog {
            log_abs: self.log_abs,
            sign: -self.sign,
        }
    }
}

impl Mul for SignedLog {
    type Output = SignedLog;
    fn mul(self, rhs: SignedLog) -> SignedLog {
        if self.is_zero() || rhs.is_zero() {
            return SignedLog::ZERO;
        }
        SignedLog::new(self.log_abs + rhs.log_abs, self.sign * rhs.sign)
    }
}

impl Div for SignedLog {
    type Output = SignedLog;
    fn div(self, rhs: SignedLog) -> SignedLog {
        assert!(!rhs.is_zero(), "SignedLog division by zero");
        if self.is_zero() {
            return SignedLog::ZERO;
        }
        SignedLog::new(self.log_abs - rhs.log_abs, self.sign * rhs.sign)
    }
}

impl Add for SignedLog {
    type Output = SignedLog;
    fn add(self, rhs: SignedLog) -> SignedLog {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        if self.log_abs == rhs.log_abs && self.sign == -rhs.sign {
            return SignedLog::ZERO;
        }
        let (big, small) = if self.log_abs >= rhs.log_abs {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let ratio = (small.log_abs - big.log_abs).exp();
        if big.sign == small.sign {
            SignedLog::new(big.log_abs + ratio.ln_1p(), big.sign)
        } else {
            SignedLog::new(big.log_abs + (-ratio).ln_1p(), big.sign)
        }
    }
}

impl Sub for SignedLog {
    type Output = SignedLog;
    fn sub(self, rhs: SignedLog) -> SignedLog {
        self + (-rhs)
    }
}

impl Sum for SignedLog {
    fn sum<I: Iterator<Item = SignedLog>>(iter: I) -> SignedLog {
        let terms: Vec<SignedLog> = iter.collect();
        log_sum(&terms).0
    }
}

/// Max-shifted sum of signed-log terms.
///
/// Returns the sum and the sum of magnitudes (both in log form) so callers
/// can judge how much cancellation took place.
pub fn log_sum(terms: &[SignedLog]) -> (SignedLog, SignedLog) {
    let peak = terms
        .iter()
        .filter(|t| !t.is_zero())
        .map(|t| t.log_abs)
        .fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY {
        return (SignedLog::ZERO, SignedLog::ZERO);
    }
    let mut acc = super::DoubleDouble::ZERO;
    let mut mag = 0.0;
    for t in terms.iter().filter(|t| !t.is_zero()) {
        let v = (t.log_abs - peak).exp();
        mag += v;
        acc = acc + super::DoubleDouble::from(f64::from(t.sign) * v);
    }
    let total = acc.to_f64();
    (
        SignedLog::from_f64(total).scale_log(peak),
        SignedLog::from_log(mag.ln() + peak),
    )
}
