//! Exact distribution of the number of real eigenvalues for a few sizes,
//! with the normalization defect.
use eginoe::exactprob::{distribution, EnsembleParams, Precision};

fn main() -> eginoe::Result<()> {
    for &(n, tau) in &[(4usize, 0.0), (6, 0.5), (10, 0.0), (10, 0.5)] {
        let params = EnsembleParams::strong(n, tau)?;
        let dist = distribution(&params, Precision::Auto)?;
        println!("n = {n}, tau = {tau}");
        for (m, lp) in &dist {
            println!(
                "  m = {m:>2}  log p = {:>22.15e}  p = {:.12e}",
                lp.ln(),
                lp.prob()
            );
        }
        let total: f64 = dist.iter().map(|(_, lp)| lp.prob()).sum();
        println!("  sum - 1 = {:.3e}", total - 1.0);
    }
    Ok(())
}
