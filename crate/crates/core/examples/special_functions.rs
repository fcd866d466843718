//! Special functions used by the exact and asymptotic routes.
use eginoe::specfun::{
    bessel_i, erfc, erfcx, hermite_psi, hyp1f1, laguerre_general, ln_gamma, DoubleDouble,
};
use num_complex::Complex64;

fn main() -> eginoe::Result<()> {
    for t in [0.5, 5.0, 30.0] {
        println!(
            "erfc({t}) = {:.15e}, erfcx({t}) = {:.15e}",
            erfc(t),
            erfcx(t)
        );
    }
    println!("1F1(1/2; 2; 1) = {:.15e}", hyp1f1(0.5, 2.0, 1.0)?);
    println!(
        "I_0(1/2) = {:.15e}, I_1(1/2) = {:.15e}",
        bessel_i(0, 0.5)?,
        bessel_i(1, 0.5)?
    );
    println!("ln Gamma(100.5) = {:.15e}", ln_gamma(100.5)?);
    let l = laguerre_general(40, 7, -50.0)?;
    println!(
        "L_40^(7)(-50) = exp({:.12}) (sign {})",
        l.log_abs(),
        l.sign()
    );
    println!(
        "psi_8(0.5 + 0.3i) = {:.15e}",
        hermite_psi(8, Complex64::new(0.5, 0.3))?
    );

    let big = DoubleDouble::from(1e16);
    let dd = (big + DoubleDouble::ONE) - big;
    let plain = std::hint::black_box(1e16f64);
    println!(
        "(1e16 + 1) - 1e16: double-double {}, f64 {}",
        dd.to_f64(),
        (plain + 1.0) - plain
    );
    Ok(())
}
