//! The GOE prekernel in its three representations, and the l=1 ratio from
//! the half-plane Pfaffian integral.
use eginoe::exactprob::{ratio_l1_laguerre, EnsembleParams};
use eginoe::prekernel::{
    fit_decay_envelope, kappa_integral, kappa_rational, kappa_sum, ratio_l1_pfaffian2d,
    INTEGRAL_ORDER,
};
use num_complex::Complex64;

fn main() -> eginoe::Result<()> {
    let n = 10;
    for (z, w) in [
        (Complex64::new(0.3, 0.8), Complex64::new(-0.5, 0.2)),
        (Complex64::new(1.5, -0.4), Complex64::new(2.0, 1.0)),
        (Complex64::new(0.7, 0.1), Complex64::new(0.7, 0.1 + 1e-8)),
    ] {
        let s = kappa_sum(n, z, w)?;
        let r = kappa_rational(n, z, w)?;
        let i = kappa_integral(n, z, w, INTEGRAL_ORDER)?;
        println!(
            "kappa_{n}({z}, {w}) = {s:.12e}   |rational - sum| = {:.1e}, |integral - sum| = {:.1e}",
            (r - s).norm(),
            (i - s).norm()
        );
    }

    for &(n, tau) in &[(4usize, 0.0), (10, 0.5)] {
        let p = EnsembleParams::strong(n, tau)?;
        let pf = ratio_l1_pfaffian2d(&p)?.to_f64();
        let lag = ratio_l1_laguerre(&p)?.to_f64();
        println!("n = {n}, tau = {tau}: pfaffian {pf:.15e}, laguerre {lag:.15e}");
    }

    let env = fit_decay_envelope(&EnsembleParams::strong(10, 0.5)?)?;
    println!(
        "decay envelope: |integrand| <= {:.3e} exp(-{:.3} dist^2)",
        env.c, env.d
    );
    Ok(())
}
