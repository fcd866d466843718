use eginoe::asymptotics::residual;
use eginoe::ensemble::{run_mc, SampleConfig};
use eginoe::exactprob::{
    distribution, log_p_nm, log_total_probability, mean_count_exact, EnsembleParams, Precision,
};
use eginoe::potential::{find_minimum, gap_limit, y_star_limit, PotentialParams};
use eginoe::prekernel::ratio_l1_pfaffian2d;

fn strong(n: usize, tau: f64) -> EnsembleParams {
    EnsembleParams::strong(n, tau).unwrap()
}

#[test]
fn distribution_matches_generating_function() {
    for (n, tau) in [(8, 0.3), (12, 0.0), (14, 0.6)] {
        let p = strong(n, tau);
        let total: f64 = distribution(&p, Precision::Auto)
            .unwrap()
            .iter()
            .map(|(_, lp)| lp.prob())
            .sum();
        let gf = log_total_probability(&p).unwrap().exp();
        assert!((total - gf).abs() < 1e-12, "n = {n}, tau = {tau}");
        assert!((gf - 1.0).abs() < 1e-12);
    }
}

#[test]
fn single_pair_probability_from_pfaffian_route() {
    let p = strong(6, 0.4);
    let direct = log_p_nm(&p, 1, true, Precision::Auto).unwrap().ln();
    let pnn = log_p_nm(&p, 0, false, Precision::Auto).unwrap().ln();
    let via_pfaffian = pnn + ratio_l1_pfaffian2d(&p).unwrap().log_abs();
    assert!((direct - via_pfaffian).abs() < 1e-10);
}

#[test]
fn monte_carlo_mean_agrees_with_exact_moments() {
    let p = strong(6, 0.5);
    let exact = mean_count_exact(&p).unwrap();
    let mc = run_mc(&SampleConfig {
        params: p,
        trials: 40_000,
        seed: 11,
    })
    .unwrap();
    assert!((mc.mean - exact.mean).abs() < 5.0 * mc.mean_std_err);
    let se_var = exact.variance * (2.0 / 40_000f64).sqrt();
    assert!((mc.variance - exact.variance).abs() < 5.0 * se_var);
}

#[test]
fn strong_residual_settles_to_a_constant() {
    let r = |n| residual(&strong(n, 0.5), 1).unwrap();
    let (r40, r80, r160) = (r(40), r(80), r(160));
    assert!(
        (r160 - r80).abs() < 0.6 * (r80 - r40).abs(),
        "{r40} {r80} {r160}"
    );
}

#[test]
fn potential_minimum_from_ensemble_parameters() {
    for tau in [0.0, 0.5] {
        let pp = PotentialParams::from_ensemble(&strong(4000, tau)).unwrap();
        let m = find_minimum(&pp).unwrap();
        assert!((m.y_star_n - y_star_limit(tau)).abs() < 2e-3);
        assert!((m.q_gap - gap_limit(tau)).abs() < 2e-2);
    }
}
