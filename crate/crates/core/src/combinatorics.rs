//! Compositions, partitions, and the column zonal polynomial `Z_{(1^k)}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{ln_factorial, DoubleDouble, SignedLog};

/// Ordered tuple of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Composition {
    pub parts: Vec<u32>,
}

/// Lexicographic iterator over the compositions of `q` into `k` parts.
pub struct Compositions {
    next: Option<Vec<u32>>,
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let cur = self.next.take()?;
        let k = cur.len();
        // Advance: find the rightmost position (not last) that can grow by
        // taking one unit from the tail, then reset the tail to 1,…,1,rest.
        let mut succ = cur.clone();
        let mut found = false;
        if k >= 2 {
            for i in (0..k - 1).rev() {
                let tail: u32 = succ[i + 1..].iter().sum();
                let tail_len = (k - 1 - i) as u32;
                if tail > tail_len {
                    succ[i] += 1;
                    let rest = tail - 1;
                    for p in succ.iter_mut().take(k - 1).skip(i + 1) {
                        *p = 1;
                    }
                    succ[k - 1] = rest - (tail_len - 1);
                    found = true;
                    break;
                }
            }
        }
        if found {
            self.next = Some(succ);
        }
        Some(Composition { parts: cur })
    }
}

/// Every ordered `k`-tuple of positive integers summing to `q`, in
/// lexicographic order. Empty when `k > q` or either argument is zero.
pub fn compositions(q: u32, k: u32) -> Compositions {
    if k == 0 || q == 0 || k > q {
        return Compositions { next: None };
    }
    let mut first = vec![1u32; k as usize];
    first[k as usize - 1] = q - (k - 1);
    Compositions { next: Some(first) }
}

/// Integer partition in multiplicity form: `multiplicities[j-1]` copies of part `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub multiplicities: Vec<u32>,
}

impl Partition {
    /// `Σ j σ_j`.
    pub fn size(&self) -> u32 {
        self.multiplicities
            .iter()
            .enumerate()
            .map(|(i, &s)| (i as u32 + 1) * s)
            .sum()
    }

    /// Parts in non-increasing order.
    pub fn parts(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for (i, &s) in self.multiplicities.iter().enumerate().rev() {
            out.extend(std::iter::repeat_n(i as u32 + 1, s as usize));
        }
        out
    }
}

pub const MAX_PARTITION: u32 = 40;

/// All partitions of `k`, ordered lexicographically by their non-increasing
/// part lists (largest first part last).
pub fn partitions(k: u32) -> Result<Vec<Partition>> {
    if k > MAX_PARTITION {
        return Err(Error::Resource(format!(
            "partitions of {k} exceed the cap of {MAX_PARTITION}"
        )));
    }
    let mut lists = Vec::new();
    let mut cur = Vec::new();
    descend(k, k.max(1), &mut cur, &mut lists);
    lists.sort();
    Ok(lists
        .into_iter()
        .map(|parts| {
            let mut m = vec![0u32; k as usize];
            for p in parts {
                m[p as usize - 1] += 1;
            }
            Partition { multiplicities: m }
        })
        .collect())
}

fn descend(rest: u32, max_part: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if rest == 0 {
        out.push(cur.clone());
        return;
    }
    for p in (1..=rest.min(max_part)).rev() {
        cur.push(p);
        descend(rest - p, p, cur, out);
        cur.pop();
    }
}

/// `Z_{(1^k)}` with the amount of cancellation it suffered.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ZonalValue {
    pub value: SignedLog,
    /// `log10(Σ|terms| / |sum|)`.
    pub digits_lost: f64,
}

/// Zonal polynomial `Z_{(1^k)}(ξ_1, …, ξ_k) = (-1)^k k! Σ_{|σ|=k} Π_j (1/σ_j!)(-ξ_j/j)^{σ_j}`.
///
/// Inputs may be astronomically large. Each term has weight `k`, so with
/// `S = max_j |ξ_j|^{1/j}` the sum factors as `S^k Z(ξ_j/S^j)`; the scaled
/// sum is accumulated in double-double.
pub fn zonal_1k_with_loss(xi: &[SignedLog]) -> Result<ZonalValue> {
    let log_unit = xi
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(j, x)| x.log_abs() / (j as f64 + 1.0))
        .fold(f64::NEG_INFINITY, f64::max);
    if xi.is_empty() {
        return Err(Error::Domain("zonal_1k needs at least one argument".into()));
    }
    if log_unit == f64::NEG_INFINITY {
        return Ok(ZonalValue {
            value: SignedLog::ZERO,
            digits_lost: 0.0,
        });
    }
    let t: Vec<DoubleDouble> = xi
        .iter()
        .enumerate()
        .map(|(j, x)| DoubleDouble::from(x.scale_log(-log_unit * (j as f64 + 1.0)).to_f64()))
        .collect();
    zonal_1k_scaled(&t, log_unit)
}

/// Zonal polynomial of `ξ_j = t_j e^{j·log_unit}` with the `t_j` already in
/// double-double. Callers that hold their traces to ~31 digits keep them
/// through the alternating sum, which is what makes large cancellations
/// survivable.
pub fn zonal_1k_scaled(t: &[DoubleDouble], log_unit: f64) -> Result<ZonalValue> {
    let k = t.len() as u32;
    if k == 0 {
        return Err(Error::Domain("zonal_1k needs at least one argument".into()));
    }
    // power-of-two rescaling keeps the inputs exact
    let e = t
        .iter()
        .enumerate()
        .filter(|(_, x)| x.hi != 0.0)
        .map(|(j, x)| (x.hi.abs().log2() / (j as f64 + 1.0)).ceil())
        .fold(f64::NEG_INFINITY, f64::max);
    if e == f64::NEG_INFINITY {
        return Ok(ZonalValue {
            value: SignedLog::ZERO,
            digits_lost: 0.0,
        });
    }
    let eta: Vec<DoubleDouble> = t
        .iter()
        .enumerate()
        .map(|(j, x)| x.mul_f64((-e * (j as f64 + 1.0)).exp2()))
        .collect();
    let mut sum = DoubleDouble::ZERO;
    let mut mag = 0.0;
    for part in partitions(k)? {
        let mut term = DoubleDouble::ONE;
        for (j, &s) in part.multiplicities.iter().enumerate() {
            if s == 0 {
                continue;
            }
            let base = -eta[j] / DoubleDouble::from(j as f64 + 1.0);
            for i in 1..=s {
                term = term * base / DoubleDouble::from(f64::from(i));
            }
        }
        mag += term.to_f64().abs();
        sum += term;
    }
    let total = sum.to_f64();
    let sign_k = if k % 2 == 0 { 1.0 } else { -1.0 };
    let digits_lost = if total == 0.0 {
        f64::INFINITY
    } else {
        (mag / total.abs()).log10()
    };
    let value = SignedLog::from_f64(sign_k * total)
        .scale_log(ln_factorial(k) + f64::from(k) * (e * std::f64::consts::LN_2 + log_unit));
    Ok(ZonalValue { value, digits_lost })
}

/// [`zonal_1k_with_loss`], failing when more than 10 digits cancel.
pub fn zonal_1k(xi: &[SignedLog]) -> Result<SignedLog> {
    let z = zonal_1k_with_loss(xi)?;
    if z.digits_lost > 10.0 {
        return Err(Error::Cancellation(format!(
            "zonal sum of order {} lost {:.1} digits",
            xi.len(),
            z.digits_lost
        )));
    }
    Ok(z.value)
}
