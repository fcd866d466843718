//! Monte Carlo sampling of elliptic real Ginibre matrices and exact
//! counting of their real eigenvalues from the real Schur form.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactprob::EnsembleParams;

pub const MAX_TRIALS: u64 = 100_000_000;
const BLOCK: u64 = 1024;

/// Dense row-major square matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealMatrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(n: usize) -> Self {
        RealMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Domain("matrix rows must all have length n".into()));
        }
        Ok(RealMatrix {
            n,
            data: rows.concat(),
        })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Standard normals by the Marsaglia polar method, one spare kept per pair.
pub struct PolarGaussian<R: Rng> {
    rng: R,
    spare: Option<f64>,
}

impl<R: Rng> PolarGaussian<R> {
    pub fn new(rng: R) -> Self {
        PolarGaussian { rng, spare: None }
    }

    pub fn sample(&mut self) -> f64 {
        if let Some(s) = self.spare.take() {
            return s;
        }
        loop {
            let u: f64 = 2.0 * self.rng.gen::<f64>() - 1.0;
            let v: f64 = 2.0 * self.rng.gen::<f64>() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }
}

/// `X = (√(1+τ)/2)(G + Gᵀ) + (√(1-τ)/2)(G - Gᵀ)` with `G` a GinOE matrix.
pub fn sample_matrix<R: Rng>(params: &EnsembleParams, gauss: &mut PolarGaussian<R>) -> RealMatrix {
    let n = params.n;
    let a = (1.0 + params.tau()).sqrt() / 2.0;
    let b = params.one_minus_tau().max(0.0).sqrt() / 2.0;
    let mut g = RealMatrix::zeros(n);
    for v in g.data.iter_mut() {
        *v = gauss.sample();
    }
    let mut x = RealMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let (gij, gji) = (g.get(i, j), g.get(j, i));
            x.set(i, j, a * (gij + gji) + b * (gij - gji));
        }
    }
    x
}

/// Householder reduction to upper Hessenberg form, in place.
fn hessenberg(a: &mut RealMatrix) {
    let n = a.n;
    if n < 3 {
        return;
    }
    let mut v = vec![0.0; n];
    for k in 0..n - 2 {
        let alpha: f64 = (k + 1..n).map(|i| a.get(i, k).powi(2)).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let x0 = a.get(k + 1, k);
        let beta = if x0 >= 0.0 { -alpha } else { alpha };
        for i in k + 1..n {
            v[i] = a.get(i, k);
        }
        v[k + 1] -= beta;
        let vnorm2: f64 = (k + 1..n).map(|i| v[i] * v[i]).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // A ← (I - 2vvᵀ/vᵀv) A (I - 2vvᵀ/vᵀv)
        for j in 0..n {
            let s: f64 = (k + 1..n).map(|i| v[i] * a.get(i, j)).sum::<f64>() * 2.0 / vnorm2;
            for i in k + 1..n {
                a.set(i, j, a.get(i, j) - s * v[i]);
            }
        }
        for i in 0..n {
            let s: f64 = (k + 1..n).map(|j| a.get(i, j) * v[j]).sum::<f64>() * 2.0 / vnorm2;
            for j in k + 1..n {
                a.set(i, j, a.get(i, j) - s * v[j]);
            }
        }
        for i in k + 2..n {
            a.set(i, k, 0.0);
        }
    }
}

/// Real eigenvalue count and full spectrum.
///
/// The matrix is reduced to Hessenberg form and then to real
/// quasi-triangular form by Francis double-shift QR. Each 1×1 block is a
/// real eigenvalue; a converged 2×2 block is a conjugate pair unless its
/// discriminant is nonnegative, in which case it splits into two reals.
pub fn count_real_eigs(a: &RealMatrix) -> Result<(usize, Vec<Complex64>)> {
    if a.data.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("matrix has non-finite entries".into()));
    }
    let n = a.n;
    let mut h = a.clone();
    hessenberg(&mut h);
    let mut eig = vec![Complex64::new(0.0, 0.0); n];
    let mut real = 0usize;
    let max_iter = 30 * n.max(10);
    let mut total_iter = 0usize;
    let anorm: f64 = h.data.iter().map(|v| v.abs()).sum();
    let mut hi = n as isize - 1;
    let mut t = 0.0;
    let mut its = 0usize;
    let g = |h: &RealMatrix, i: isize, j: isize| h.get(i as usize, j as usize);
    while hi >= 0 {
        // find the start of the active unreduced block
        let mut l = hi;
        while l >= 1 {
            let s = g(&h, l - 1, l - 1).abs() + g(&h, l, l).abs();
            let s = if s == 0.0 { anorm } else { s };
            if g(&h, l, l - 1).abs() <= f64::EPSILON * s {
                h.set(l as usize, l as usize - 1, 0.0);
                break;
            }
            l -= 1;
        }
        let x = g(&h, hi, hi);
        if l == hi {
            eig[hi as usize] = Complex64::new(x + t, 0.0);
            real += 1;
            hi -= 1;
            its = 0;
            continue;
        }
        let y = g(&h, hi - 1, hi - 1);
        let w = g(&h, hi, hi - 1) * g(&h, hi - 1, hi);
        if l == hi - 1 {
            let p = 0.5 * (y - x);
            let q = p * p + w;
            let z = q.abs().sqrt();
            let x = x + t;
            if q >= 0.0 {
                let z = p + z.copysign(p);
                let e1 = x + z;
                let e2 = if z != 0.0 { x - w / z } else { e1 };
                eig[hi as usize - 1] = Complex64::new(e1, 0.0);
                eig[hi as usize] = Complex64::new(e2, 0.0);
                real += 2;
            } else {
                eig[hi as usize - 1] = Complex64::new(x + p, z);
                eig[hi as usize] = Complex64::new(x + p, -z);
            }
            hi -= 2;
            its = 0;
            continue;
        }
        if total_iter >= max_iter {
            return Err(Error::Convergence(format!(
                "Francis QR did not converge after {max_iter} iterations; matrix (row-major, n = {n}): {:?}",
                a.data
            )));
        }
        let (mut x, mut y, mut w) = (x, y, w);
        if its > 0 && its % 10 == 0 {
            // exceptional shift, alternating between the two ends of the block
            let (shift, s) = if its % 20 == 10 {
                (
                    g(&h, l, l),
                    g(&h, l + 1, l).abs() + g(&h, l + 2, l + 1).abs(),
                )
            } else {
                (x, g(&h, hi, hi - 1).abs() + g(&h, hi - 1, hi - 2).abs())
            };
            t += shift;
            for i in 0..=hi {
                h.set(i as usize, i as usize, g(&h, i, i) - shift);
            }
            x = 0.75 * s;
            y = x;
            w = -0.4375 * s * s;
        }
        its += 1;
        total_iter += 1;
        // look for two consecutive small subdiagonal elements
        let mut m = hi - 2;
        let (mut p, mut q, mut r);
        loop {
            let z = g(&h, m, m);
            let r0 = x - z;
            let s0 = y - z;
            p = (r0 * s0 - w) / g(&h, m + 1, m) + g(&h, m, m + 1);
            q = g(&h, m + 1, m + 1) - z - r0 - s0;
            r = g(&h, m + 2, m + 1);
            let s = p.abs() + q.abs() + r.abs();
            p /= s;
            q /= s;
            r /= s;
            if m == l {
                break;
            }
            let u = g(&h, m, m - 1).abs() * (q.abs() + r.abs());
            let v = p.abs() * (g(&h, m - 1, m - 1).abs() + z.abs() + g(&h, m + 1, m + 1).abs());
            if u <= f64::EPSILON * v {
                break;
            }
            m -= 1;
        }
        for i in m + 2..=hi {
            h.set(i as usize, i as usize - 2, 0.0);
            if i != m + 2 {
                h.set(i as usize, i as usize - 3, 0.0);
            }
        }
        // double-shift QR sweep on rows/columns l..=hi
        let mut k = m;
        while k <= hi - 1 {
            if k != m {
                p = g(&h, k, k - 1);
                q = g(&h, k + 1, k - 1);
                r = if k != hi - 1 {
                    g(&h, k + 2, k - 1)
                } else {
                    0.0
                };
                x = p.abs() + q.abs() + r.abs();
                if x != 0.0 {
                    p /= x;
                    q /= x;
                    r /= x;
                }
            }
            let s = (p * p + q * q + r * r).sqrt().copysign(p);
            if s != 0.0 {
                if k == m {
                    if l != m {
                        h.set(k as usize, k as usize - 1, -g(&h, k, k - 1));
                    }
                } else {
                    h.set(k as usize, k as usize - 1, -s * x);
                }
                p += s;
                x = p / s;
                y = q / s;
                let z = r / s;
                q /= p;
                r /= p;
                for j in k..=hi {
                    let mut pp = g(&h, k, j) + q * g(&h, k + 1, j);
                    if k != hi - 1 {
                        pp += r * g(&h, k + 2, j);
                        h.set(k as usize + 2, j as usize, g(&h, k + 2, j) - pp * z);
                    }
                    h.set(k as usize + 1, j as usize, g(&h, k + 1, j) - pp * y);
                    h.set(k as usize, j as usize, g(&h, k, j) - pp * x);
                }
                let mmin = if hi < k + 3 { hi } else { k + 3 };
                for i in l..=mmin {
                    let mut pp = x * g(&h, i, k) + y * g(&h, i, k + 1);
                    if k != hi - 1 {
                        pp += z * g(&h, i, k + 2);
                        h.set(i as usize, k as usize + 2, g(&h, i, k + 2) - pp * r);
                    }
                    h.set(i as usize, k as usize + 1, g(&h, i, k + 1) - pp * q);
                    h.set(i as usize, k as usize, g(&h, i, k) - pp);
                }
            }
            k += 1;
        }
    }
    Ok((real, eig))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SampleConfig {
    pub params: EnsembleParams,
    pub trials: u64,
    pub seed: u64,
}

impl SampleConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.trials == 0 || self.trials > MAX_TRIALS {
            return Err(Error::Domain(format!(
                "trials must lie in 1..={MAX_TRIALS}, got {}",
                self.trials
            )));
        }
        Ok(())
    }
}

/// Tally of real-eigenvalue counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountHistogram {
    pub counts: BTreeMap<usize, u64>,
    pub trials: u64,
}

/// Empirical frequency of one count with a binomial standard error and a
/// normal-approximation 95% interval.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Frequency {
    pub m: usize,
    pub freq: f64,
    pub std_err: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct McSummary {
    pub config: SampleConfig,
    pub histogram: CountHistogram,
    pub mean: f64,
    pub variance: f64,
    pub mean_std_err: f64,
    pub frequencies: Vec<Frequency>,
}

/// Per-trial generator: the master seed picks the key, the trial index the stream.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn run_trial(config: &SampleConfig, trial: u64) -> Result<usize> {
    let mut gauss = PolarGaussian::new(trial_rng(config.seed, trial));
    let x = sample_matrix(&config.params, &mut gauss);
    let (m, _) = count_real_eigs(&x)?;
    if m % 2 != config.params.n % 2 {
        return Err(Error::Quality(format!(
            "trial {trial}: {m} real eigenvalues for n = {}",
            config.params.n
        )));
    }
    Ok(m)
}

/// Runs `trials` independent samples in parallel and tallies the counts.
/// The result depends only on the configuration.
pub fn run_mc(config: &SampleConfig) -> Result<McSummary> {
    config.validate()?;
    let n = config.params.n;
    let blocks = config.trials.div_ceil(BLOCK);
    let partial: Vec<Vec<u64>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut tally = vec![0u64; n + 1];
            for t in b * BLOCK..((b + 1) * BLOCK).min(config.trials) {
                tally[run_trial(config, t)?] += 1;
            }
            Ok(tally)
        })
        .collect::<Result<_>>()?;
    let mut tally = vec![0u64; n + 1];
    for p in &partial {
        for (a, b) in tally.iter_mut().zip(p) {
            *a += b;
        }
    }
    let trials = config.trials as f64;
    let counts: BTreeMap<usize, u64> = tally
        .iter()
        .enumerate()
        .filter(|(m, c)| **c > 0 || m % 2 == n % 2)
        .map(|(m, &c)| (m, c))
        .collect();
    let mean = counts
        .iter()
        .map(|(&m, &c)| m as f64 * c as f64)
        .sum::<f64>()
        / trials;
    let second = counts
        .iter()
        .map(|(&m, &c)| (m * m) as f64 * c as f64)
        .sum::<f64>()
        / trials;
    let variance = (second - mean * mean).max(0.0);
    let frequencies = counts
        .iter()
        .map(|(&m, &c)| {
            let f = c as f64 / trials;
            let se = (f * (1.0 - f) / trials).sqrt();
            Frequency {
                m,
                freq: f,
                std_err: se,
                ci_lo: (f - 1.96 * se).max(0.0),
                ci_hi: (f + 1.96 * se).min(1.0),
            }
        })
        .collect();
    Ok(McSummary {
        config: *config,
        histogram: CountHistogram {
            counts,
            trials: config.trials,
        },
        mean,
        variance,
        mean_std_err: (variance / trials).sqrt(),
        frequencies,
    })
}
