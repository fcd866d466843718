//! Seeded Monte Carlo counts of real eigenvalues against the exact distribution.
use eginoe::ensemble::{run_mc, SampleConfig};
use eginoe::exactprob::{distribution, EnsembleParams, Precision};

fn main() -> eginoe::Result<()> {
    let params = EnsembleParams::strong(6, 0.5)?;
    let summary = run_mc(&SampleConfig {
        params,
        trials: 100_000,
        seed: 7,
    })?;
    let exact = distribution(&params, Precision::Auto)?;
    println!("n = 6, tau = 0.5, {} trials", summary.histogram.trials);
    for f in &summary.frequencies {
        let p = exact
            .iter()
            .find(|(m, _)| *m == f.m)
            .map_or(0.0, |(_, lp)| lp.prob());
        println!(
            "  m = {}: mc {:.5} ± {:.5}, exact {:.5}, z = {:+.2}",
            f.m,
            f.freq,
            f.std_err,
            p,
            (f.freq - p) / f.std_err
        );
    }
    println!("  mean {:.4} ± {:.4}", summary.mean, summary.mean_std_err);
    Ok(())
}
