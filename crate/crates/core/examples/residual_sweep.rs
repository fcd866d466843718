//! Exact log p_{n,n-2} minus the three-term prediction across tau, next to
//! the limiting constant it approaches.
use eginoe::asymptotics::residual;
use eginoe::exactprob::EnsembleParams;

fn limit(tau: f64) -> f64 {
    ((3.0 - tau).sqrt() * (1.0 + tau).powf(1.5)
        / (8.0 * std::f64::consts::PI.sqrt() * (1.0 - tau).powf(1.5)))
    .ln()
}

fn main() -> eginoe::Result<()> {
    println!(
        "{:>5} {:>10} {:>10} {:>10} {:>10}",
        "tau", "n=10", "n=30", "n=100", "limit"
    );
    for i in 0..=9 {
        let tau = 0.1 * i as f64;
        print!("{tau:>5.2}");
        for n in [10usize, 30, 100] {
            print!(" {:>10.5}", residual(&EnsembleParams::strong(n, tau)?, 1)?);
        }
        println!(" {:>10.5}", limit(tau));
    }
    Ok(())
}
