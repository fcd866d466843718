//! Large-n coefficients and the convergence of the single-pair series.
use eginoe::asymptotics::{calA, calB, l1_series_error, strong_coeffs, weak_coeffs};
use eginoe::exactprob::EnsembleParams;

fn main() -> eginoe::Result<()> {
    for tau in [0.0, 0.5] {
        let c = strong_coeffs(tau, 1)?;
        println!(
            "strong tau = {tau}: a1 = {:.6}, a2 = {:.6}, a3 = {:.6}",
            c.a1, c.a2, c.a3
        );
        let a: Vec<String> = (0..4)
            .map(|r| calA(r, tau).map(|v| format!("{v:.6e}")))
            .collect::<Result<_, _>>()?;
        println!("  A_0..A_3 = {}", a.join(", "));
    }
    for alpha in [0.5, 1.0, 2.0] {
        let c = weak_coeffs(alpha, 1)?;
        println!(
            "weak alpha = {alpha}: b1 = {:.6}, b2 = {:.6}, b3 = {:.6}",
            c.b1, c.b2, c.b3
        );
        let b: Vec<String> = (0..4)
            .map(|k| calB(k, alpha).map(|v| format!("{v:.6e}")))
            .collect::<Result<_, _>>()?;
        println!("  B_0..B_3 = {}", b.join(", "));
    }

    println!("\nrelative error of the M-term series for p_(n,n-2), strong tau = 0.5");
    for n in [20usize, 40, 80] {
        let p = EnsembleParams::strong(n, 0.5)?;
        let errs: Vec<String> = (1..=4)
            .map(|m| l1_series_error(&p, m).map(|e| format!("{e:.2e}")))
            .collect::<Result<_, _>>()?;
        println!("  n = {n:>3}: M = 1..4 -> {}", errs.join("  "));
    }
    Ok(())
}
