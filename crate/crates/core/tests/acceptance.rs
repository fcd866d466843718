//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::f64::consts::{LN_2, PI, SQRT_2};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use eginoe::asymptotics::{
    calA, calA_closed_form, calB, calB_closed_form, f_expansion_error, g_expansion_error,
    l1_series_error, residual,
};
use eginoe::ensemble::{run_mc, SampleConfig};
use eginoe::exactprob::{
    distribution, log_p_nn, ratio_l1_laguerre, ratio_l1_s_integral, rho_traces, EnsembleParams,
    Precision,
};
use eginoe::potential::{find_minimum, PotentialParams};
use eginoe::prekernel::{
    kappa_integral, kappa_rational, kappa_sum, pfaffian2d_integral, pfaffian_box,
    ratio_l1_pfaffian2d, INTEGRAL_ORDER,
};

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if ok {
            self.notes.push(what);
        } else {
            self.failures.push(what);
        }
    }

    fn budget(&mut self, start: Instant, limit: Duration) {
        let t = start.elapsed();
        self.check(
            t < limit,
            format!(
                "runtime {:.1}s (limit {}s)",
                t.as_secs_f64(),
                limit.as_secs()
            ),
        );
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn c1_closed_form() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in (2..=200).step_by(2) {
        for tau in [0.0, 0.25, 0.5, 0.75, 0.9] {
            let p = EnsembleParams::strong(n, tau).unwrap();
            let c = (2.0 / (1.0 + tau)).ln() / 4.0;
            let nf = n as f64;
            worst = worst.max(rel(log_p_nn(&p).ln(), -c * nf * nf + c * nf));
        }
    }
    o.check(
        worst <= 1e-12,
        format!("max relative error of log p_nn {worst:.2e} (tol 1e-12)"),
    );
    let p22 = log_p_nn(&EnsembleParams::strong(2, 0.0).unwrap()).prob();
    let p44 = log_p_nn(&EnsembleParams::strong(4, 0.0).unwrap()).prob();
    o.check(
        rel(p22, 1.0 / SQRT_2) <= 4.0 * f64::EPSILON,
        format!("p_22(0) = {p22:.17e}"),
    );
    o.check(
        rel(p44, 0.125) <= 4.0 * f64::EPSILON,
        format!("p_44(0) = {p44:.17e}"),
    );
    o.budget(start, Duration::from_secs(1));
    o
}

fn c2_route_agreement() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in [2usize, 4, 10, 20, 40] {
        for tau in [0.0, 0.25, 0.5, 0.75] {
            let p = EnsembleParams::strong(n, tau).unwrap();
            let routes = [
                ratio_l1_laguerre(&p).map(|r| r.to_f64()),
                ratio_l1_s_integral(&p).map(|r| r.to_f64()),
                rho_traces(&p, 1, Precision::Auto).map(|t| t.traces[0].to_f64()),
                ratio_l1_pfaffian2d(&p).map(|r| r.to_f64()),
            ];
            let vals: Vec<f64> = match routes.into_iter().collect() {
                Ok(v) => v,
                Err(e) => {
                    o.check(false, format!("n = {n}, tau = {tau}: {e}"));
                    continue;
                }
            };
            for i in 0..4 {
                for j in i + 1..4 {
                    worst = worst.max(rel(vals[i], vals[j]));
                }
            }
            if n == 2 && tau == 0.0 {
                let d = vals
                    .iter()
                    .map(|v| (v - (SQRT_2 - 1.0)).abs())
                    .fold(0.0, f64::max);
                o.check(
                    d <= 1e-10,
                    format!("n=2, tau=0 routes vs sqrt2-1: {d:.2e} (tol 1e-10)"),
                );
            }
        }
    }
    o.check(
        worst <= 1e-6,
        format!("max pairwise relative disagreement {worst:.2e} (tol 1e-6)"),
    );
    o.budget(start, Duration::from_secs(300));
    o
}

fn c3_normalization() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in [2usize, 4, 6, 8, 10] {
        for tau in [0.0, 0.5] {
            let p = EnsembleParams::strong(n, tau).unwrap();
            match distribution(&p, Precision::Auto) {
                Ok(d) => {
                    worst = worst.max((d.iter().map(|(_, lp)| lp.prob()).sum::<f64>() - 1.0).abs())
                }
                Err(e) => o.check(false, format!("n = {n}, tau = {tau}: {e}")),
            }
        }
    }
    o.check(
        worst <= 1e-6,
        format!("max |sum p - 1| {worst:.2e} (tol 1e-6)"),
    );
    o.budget(start, Duration::from_secs(600));
    o
}

fn c4_strong_series_order() -> Outcome {
    let mut o = Outcome::new();
    for tau in [0.0, 0.5] {
        let e40 = l1_series_error(&EnsembleParams::strong(40, tau).unwrap(), 3).unwrap();
        let e80 = l1_series_error(&EnsembleParams::strong(80, tau).unwrap(), 3).unwrap();
        let r = e40 / e80;
        o.check(
            (4.0..=16.0).contains(&r),
            format!("tau = {tau}: M=3 error ratio n=40/n=80 = {r:.2} (8 within factor 2)"),
        );
    }
    let mut worst = 0.0f64;
    for i in 0..=19 {
        let tau = 0.05 * i as f64;
        for r in 0..3 {
            let closed = calA_closed_form(r, tau).unwrap();
            worst = worst.max(rel(calA(r, tau).unwrap(), closed));
        }
    }
    o.check(
        worst <= 1e-10,
        format!("A_0..A_2 general vs printed, tau in 0:0.95:0.05: {worst:.2e} (tol 1e-10)"),
    );
    o
}

fn c5_ginoe_constant() -> Outcome {
    let mut o = Outcome::new();
    let target = (3f64.sqrt() / (8.0 * PI.sqrt())).ln();
    for n in [50usize, 100] {
        let nf = n as f64;
        let p = EnsembleParams::strong(n, 0.0).unwrap();
        let exact = log_p_nn(&p).ln() + ratio_l1_laguerre(&p).unwrap().log_abs();
        let pred = -(LN_2 / 4.0) * nf * nf + (LN_2 / 4.0 + 3f64.ln()) * nf - 0.5 * nf.ln();
        let res = exact - pred;
        let err = (res - target).abs();
        o.check(
            err <= 5.0 / nf,
            format!(
                "n = {n}: residual {res:.5} vs {target:.5}, |error| {err:.4} (tol {:.3})",
                5.0 / nf
            ),
        );
    }
    o
}

fn c6_weak_regime() -> Outcome {
    let mut o = Outcome::new();
    for l in [1usize, 2] {
        let r30 = residual(&EnsembleParams::weak(30, 1.0).unwrap(), l).unwrap();
        let r100 = residual(&EnsembleParams::weak(100, 1.0).unwrap(), l).unwrap();
        o.check(
            r100.abs() <= 0.05,
            format!("l = {l}: |residual(n=100)| = {:.4} (tol 0.05)", r100.abs()),
        );
        o.check(
            r100.abs() < r30.abs(),
            format!(
                "l = {l}: |residual| {:.4} (n=30) -> {:.4} (n=100)",
                r30.abs(),
                r100.abs()
            ),
        );
    }
    for k in 0..3 {
        let mut worst = 0.0f64;
        for alpha in [0.5, 1.0, 2.0] {
            worst = worst.max(rel(
                calB(k, alpha).unwrap(),
                calB_closed_form(k, alpha).unwrap(),
            ));
        }
        o.check(
            worst <= 1e-10,
            format!("B_{k} general vs printed: {worst:.2e} (tol 1e-10)"),
        );
    }
    o
}

fn c7_expansion_truncation() -> Outcome {
    let mut o = Outcome::new();
    let ns = [1e2, 1e3, 1e4];
    let judge = |o: &mut Outcome, label: String, errs: [f64; 3]| {
        let r = [errs[0] / errs[1], errs[1] / errs[2]];
        let ok = r.iter().all(|&x| (500.0..=2000.0).contains(&x));
        o.check(
            ok,
            format!(
                "{label}: decade ratios {:.0}, {:.0} (1000 within factor 2)",
                r[0], r[1]
            ),
        );
    };
    for x in [0.5, 1.0, 2.0] {
        let errs = ns.map(|n| f_expansion_error(x, n, 2).unwrap());
        judge(&mut o, format!("F at x = {x}"), errs);
    }
    let errs = ns.map(|n| g_expansion_error(1.0, 0.3, n, 2).unwrap());
    judge(&mut o, "G at alpha = 1, t = 0.3".into(), errs);
    o
}

fn c8_potential() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    for tau in [0.0, 0.5] {
        let m = find_minimum(&PotentialParams::new(10_000, tau).unwrap()).unwrap();
        let y = (2.0 * (1.0 - tau) * (1.0 - tau) / (3.0 - tau)).sqrt();
        let g = ((3.0 - tau) / (1.0 + tau)).ln();
        o.check(
            (m.y_star_n - y).abs() <= 1e-3,
            format!(
                "tau = {tau}: |y* - limit| {:.2e} (tol 1e-3)",
                (m.y_star_n - y).abs()
            ),
        );
        o.check(
            (m.q_gap - g).abs() <= 1e-2,
            format!(
                "tau = {tau}: |gap - limit| {:.2e} (tol 1e-2)",
                (m.q_gap - g).abs()
            ),
        );
        let want = [[1.0, 0.0], [0.0, 1.0 / (1.0 - tau)]];
        let d = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| (m.hessian[i][j] - want[i][j]).abs())
            .fold(0.0, f64::max);
        o.check(
            d <= 1e-2,
            format!(
                "tau = {tau}: Hessian diag ({:.4}, {:.4}) vs diag(1, {:.4}), max deviation {d:.3} (tol 1e-2)",
                m.hessian[0][0],
                m.hessian[1][1],
                1.0 / (1.0 - tau)
            ),
        );
    }
    o.budget(start, Duration::from_secs(10));
    o
}

fn c9_monte_carlo() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let params = EnsembleParams::strong(4, 0.5).unwrap();
    let cfg = SampleConfig {
        params,
        trials: 200_000,
        seed: 42,
    };
    let exact = distribution(&params, Precision::Auto).unwrap();
    match run_mc(&cfg) {
        Ok(s) => {
            o.check(
                s.histogram.counts.keys().all(|m| m % 2 == 0),
                "parity: every count even",
            );
            for (m, lp) in &exact {
                let p = lp.prob();
                let c = s.histogram.counts.get(m).copied().unwrap_or(0);
                let f = c as f64 / cfg.trials as f64;
                let z = (f - p) / (p * (1.0 - p) / cfg.trials as f64).sqrt();
                o.check(
                    z.abs() <= 4.0,
                    format!("m = {m}: freq {f:.5} vs exact {p:.5}, z = {z:+.2}"),
                );
            }
            let again = run_mc(&cfg).unwrap();
            let same = again.histogram == s.histogram && again.mean.to_bits() == s.mean.to_bits();
            o.check(same, "rerun with the same seed is bit-identical");
        }
        Err(e) => o.check(false, format!("run failed: {e}")),
    }
    o.budget(start, Duration::from_secs(120));
    o
}

fn c10_prekernel() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for n in [2usize, 8, 20] {
        let w = 2.0 * (n as f64).sqrt();
        let mut point = || Complex64::new(rng.gen_range(-w..w), rng.gen_range(-3.0..3.0));
        let (mut worst, mut anti) = (0.0f64, 0.0f64);
        for _ in 0..100 {
            let (z, e) = (point(), point());
            let s = kappa_sum(n, z, e).unwrap();
            let r = kappa_rational(n, z, e).unwrap();
            let i = kappa_integral(n, z, e, INTEGRAL_ORDER).unwrap();
            let scale = s.norm().max(1e-12);
            worst = worst
                .max((s - r).norm() / scale)
                .max((s - i).norm() / scale);
            anti = anti.max((s + kappa_sum(n, e, z).unwrap()).norm() / scale);
        }
        o.check(
            worst <= 1e-8,
            format!("n = {n}: sum/rational/integral max relative gap {worst:.2e} (tol 1e-8)"),
        );
        o.check(
            anti <= 1e-14,
            format!("n = {n}: antisymmetry defect {anti:.2e} (tol 1e-14)"),
        );
    }
    for n in [2usize, 8, 20] {
        for tau in [0.0, 0.5] {
            let p = EnsembleParams::strong(n, tau).unwrap();
            let bx = pfaffian_box(n, p.one_minus_tau());
            let a = pfaffian2d_integral(&p, &bx, 16).unwrap().value;
            let b = pfaffian2d_integral(&p, &bx.doubled(), 16).unwrap().value;
            let d = (a - b).norm() / b.norm();
            o.check(
                d <= 1e-8,
                format!(
                    "n = {n}, tau = {tau}: box doubling changes the integral by {d:.2e} (tol 1e-8)"
                ),
            );
        }
    }
    o
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("closed form of p_nn", c1_closed_form),
        ("four-route agreement for l = 1", c2_route_agreement),
        ("normalization", c3_normalization),
        ("strong-regime series order", c4_strong_series_order),
        ("GinOE constant", c5_ginoe_constant),
        ("weak regime residuals and B_k", c6_weak_regime),
        ("expansion truncation rates", c7_expansion_truncation),
        ("potential minimum", c8_potential),
        ("Monte Carlo", c9_monte_carlo),
        ("prekernel representations", c10_prekernel),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let status = if o.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!(
            "criterion {:>2}: {status}  {name} ({:.1}s)",
            i + 1,
            t.elapsed().as_secs_f64()
        );
        for f in &o.failures {
            println!("      FAIL  {f}");
        }
        for n in &o.notes {
            println!("      ok    {n}");
        }
        failed += usize::from(!o.failures.is_empty());
    }
    println!(
        "\n{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
