use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::DoubleDouble;

pub const MAX_ORDER: usize = 2000;

/// Nodes and weights of an interpolatory rule on `interval`.
#[derive(Clone, Debug, Serialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub interval: (f64, f64),
    pub est_error: f64,
}

impl QuadratureRule {
    /// The same rule moved affinely onto `[lo, hi]`.
    pub fn mapped(&self, lo: f64, hi: f64) -> QuadratureRule {
        let (a, b) = self.interval;
        let scale = (hi - lo) / (b - a);
        QuadratureRule {
            nodes: self.nodes.iter().map(|&x| lo + (x - a) * scale).collect(),
            weights: self.weights.iter().map(|&w| w * scale).collect(),
            interval: (lo, hi),
            est_error: self.est_error,
        }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// `(P_n(x), P'_n(x))` from the three-term recurrence.
fn legendre_p(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn compute(order: usize) -> QuadratureRule {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let nf = order as f64;
    let half = order.div_ceil(2);
    for i in 0..half {
        // i-th largest root
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_p(order, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1e-300) {
                break;
            }
        }
        let (_, dp) = legendre_p(order, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[order - 1 - i] = x;
        nodes[i] = -x;
        weights[order - 1 - i] = w;
        weights[i] = w;
    }
    if order % 2 == 1 {
        nodes[order / 2] = 0.0;
    }
    QuadratureRule {
        nodes,
        weights,
        interval: (-1.0, 1.0),
        est_error: 0.0,
    }
}

/// Nodes and weights of [`gauss_legendre`] on `[-1, 1]` refined to
/// double-double by one Newton step on the recurrence.
pub(crate) fn gauss_legendre_dd(order: usize) -> Result<Vec<(DoubleDouble, DoubleDouble)>> {
    let rule = gauss_legendre(order)?;
    let one = DoubleDouble::ONE;
    let eval = |x: DoubleDouble| {
        let (mut p0, mut p1) = (one, x);
        for k in 2..=order {
            let kf = k as f64;
            let p2 = (x * p1).mul_f64(2.0 * kf - 1.0) - p0.mul_f64(kf - 1.0);
            p0 = p1;
            p1 = p2 / DoubleDouble::from(kf);
        }
        let dp = (x * p1 - p0).mul_f64(order as f64) / (x * x - one);
        (p1, dp)
    };
    Ok(rule
        .nodes
        .iter()
        .map(|&x0| {
            let x = DoubleDouble::from(x0);
            if order == 1 {
                return (x, DoubleDouble::from(2.0));
            }
            let (p, dp) = eval(x);
            let x = x - p / dp;
            let (_, dp) = eval(x);
            (x, DoubleDouble::from(2.0) / ((one - x * x) * dp * dp))
        })
        .collect())
}

/// Gauss–Legendre rule with `order` nodes on `[-1, 1]`.
///
/// Roots of `P_order` are polished by Newton's method on the recurrence and
/// the rule is memoised, so repeated requests are cheap.
pub fn gauss_legendre(order: usize) -> Result<Arc<QuadratureRule>> {
    if order == 0 {
        return Err(Error::Domain(
            "Gauss-Legendre order must be at least 1".into(),
        ));
    }
    if order > MAX_ORDER {
        return Err(Error::Resource(format!(
            "Gauss-Legendre order {order} exceeds the cap of {MAX_ORDER}"
        )));
    }
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<QuadratureRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(r) = cache.read().expect("rule cache poisoned").get(&order) {
        return Ok(Arc::clone(r));
    }
    let rule = Arc::new(compute(order));
    cache
        .write()
        .expect("rule cache poisoned")
        .insert(order, Arc::clone(&rule));
    Ok(rule)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_and_two_points() {
        let r = gauss_legendre(1).unwrap();
        assert_eq!(r.nodes, vec![0.0]);
        assert!((r.weights[0] - 2.0).abs() < 1e-15);
        let r = gauss_legendre(2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((r.nodes[0] + s).abs() < 1e-15 && (r.nodes[1] - s).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-15 && (r.weights[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exact_for_even_monomials() {
        let r = gauss_legendre(10).unwrap();
        for k in 0..10 {
            let got = r.integrate(|x| x.powi(2 * k));
            let want = 2.0 / (2.0 * k as f64 + 1.0);
            assert!((got - want).abs() < 1e-13, "x^{}", 2 * k);
        }
    }

    #[test]
    fn structure_at_high_order() {
        for &n in &[7usize, 64, 501, 2000] {
            let r = gauss_legendre(n).unwrap();
            assert!(r.weights.iter().all(|&w| w > 0.0));
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
            assert!(r.nodes[0] > -1.0 && r.nodes[n - 1] < 1.0);
            let total: f64 = r.weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-13 * n as f64, "n = {n}");
            // |P_n| at a root is bounded by |P'_n| times the spacing of doubles
            for &x in &r.nodes {
                let (p, dp) = legendre_p(n, x);
                let tol = if n <= 10 {
                    1e-14
                } else {
                    4.0 * f64::EPSILON * dp.abs()
                };
                assert!(p.abs() <= tol, "n = {n}, x = {x}");
            }
        }
    }

    #[test]
    fn order_cap() {
        assert!(matches!(gauss_legendre(2001), Err(Error::Resource(_))));
        assert!(gauss_legendre(0).is_err());
    }
}
