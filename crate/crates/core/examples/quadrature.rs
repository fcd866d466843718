//! Gauss–Legendre rules and the panelled log-domain integrators.
use eginoe::quadrature::{
    gauss_legendre, integrate_jacobi_endpoints, integrate_semi_infinite_gaussian,
};
use eginoe::specfun::SignedLog;

fn main() -> eginoe::Result<()> {
    let rule = gauss_legendre(8)?;
    let s: f64 = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(x, w)| w * x.powi(14))
        .sum();
    println!(
        "8-point Gauss-Legendre on x^14: {s:.15e} (exact {:.15e})",
        2.0 / 15.0
    );

    let g = integrate_semi_infinite_gaussian(|y| SignedLog::new(2.0 * y.ln() - y * y, 1), 1.0, 24)?;
    println!(
        "int_0^inf y^2 e^(-y^2) dy = {:.15e} (exact {:.15e}), est. rel. err {:.1e}",
        g.value.to_f64(),
        std::f64::consts::PI.sqrt() / 4.0,
        g.rel_err_estimate
    );

    let j = integrate_jacobi_endpoints(|_, _| SignedLog::ONE, -0.5, -0.5, 24)?;
    println!(
        "int_0^1 s^(-1/2) (1-s)^(-1/2) ds = {:.15e} (exact pi)",
        j.value.to_f64()
    );
    Ok(())
}
