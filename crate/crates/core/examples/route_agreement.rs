//! The single-pair ratio p_{n,n-2}/p_{n,n} by four independent routes.
use eginoe::exactprob::{
    ratio_l1_laguerre, ratio_l1_s_integral, rho_traces, EnsembleParams, Precision,
};
use eginoe::prekernel::ratio_l1_pfaffian2d;

fn main() -> eginoe::Result<()> {
    println!(
        "{:>3} {:>5} {:>22} {:>10} {:>10} {:>10}",
        "n", "tau", "laguerre", "s-int", "trace", "pfaffian"
    );
    for &(n, tau) in &[(2usize, 0.0), (6, 0.25), (12, 0.5), (20, 0.75)] {
        let p = EnsembleParams::strong(n, tau)?;
        let lag = ratio_l1_laguerre(&p)?.to_f64();
        let others = [
            ratio_l1_s_integral(&p)?.to_f64(),
            rho_traces(&p, 1, Precision::Auto)?.traces[0].to_f64(),
            ratio_l1_pfaffian2d(&p)?.to_f64(),
        ];
        print!("{n:>3} {tau:>5} {lag:>22.15e}");
        for v in others {
            print!(" {:>10.2e}", v / lag - 1.0);
        }
        println!();
    }
    Ok(())
}
