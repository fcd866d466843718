use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::Serialize;

/// Dense real polynomial, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolyCoeffs {
    coeffs: Vec<f64>,
}

impl PolyCoeffs {
    /// Trailing zero coefficients are dropped; the zero polynomial has no coefficients.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        PolyCoeffs { coeffs }
    }

    pub fn zero() -> Self {
        PolyCoeffs { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        PolyCoeffs::new(vec![c])
    }

    /// `(a + b t)`.
    pub fn linear(a: f64, b: f64) -> Self {
        PolyCoeffs::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `t^s`, zero past the degree.
    pub fn coeff(&self, s: usize) -> f64 {
        self.coeffs.get(s).copied().unwrap_or(0.0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn scale(&self, c: f64) -> Self {
        PolyCoeffs::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut out = PolyCoeffs::constant(1.0);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Exact division by `t`; the constant coefficient is discarded.
    pub fn div_t(&self) -> Self {
        PolyCoeffs::new(self.coeffs.iter().skip(1).copied().collect())
    }

    /// Physicists' Hermite polynomial `H_k` from `H_{k+1} = 2t H_k - 2k H_{k-1}`.
    pub fn hermite(k: usize) -> Self {
        let mut prev = PolyCoeffs::constant(1.0);
        if k == 0 {
            return prev;
        }
        let mut cur = PolyCoeffs::linear(0.0, 2.0);
        let two_t = PolyCoeffs::linear(0.0, 2.0);
        for j in 1..k {
            let next = &(&two_t * &cur) - &prev.scale(2.0 * j as f64);
            prev = cur;
            cur = next;
        }
        cur
    }
}

impl<'a> Add for &'a PolyCoeffs {
    type Output = PolyCoeffs;
    fn add(self, rhs: &'a PolyCoeffs) -> PolyCoeffs {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyCoeffs::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a> Sub for &'a PolyCoeffs {
    type Output = PolyCoeffs;
    fn sub(self, rhs: &'a PolyCoeffs) -> PolyCoeffs {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyCoeffs::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a> Mul for &'a PolyCoeffs {
    type Output = PolyCoeffs;
    fn mul(self, rhs: &'a PolyCoeffs) -> PolyCoeffs {
        if self.is_zero() || rhs.is_zero() {
            return PolyCoeffs::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolyCoeffs::new(out)
    }
}
