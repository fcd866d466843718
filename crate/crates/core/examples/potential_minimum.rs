//! Minimum of the effective potential on the imaginary axis approaching its
//! large-n limit.
use eginoe::potential::{find_minimum, gap_limit, hessian_limit, y_star_limit, PotentialParams};

fn main() -> eginoe::Result<()> {
    for tau in [0.0, 0.5] {
        let h = hessian_limit(tau);
        println!(
            "tau = {tau}: limits y* = {:.6}, gap = {:.6}, hessian diag = ({:.4}, {:.4})",
            y_star_limit(tau),
            gap_limit(tau),
            h[0][0],
            h[1][1]
        );
        for n in [100usize, 1000, 10000] {
            let m = find_minimum(&PotentialParams::new(n, tau)?)?;
            println!(
                "  n = {n:>5}: y* = {:.6}, gap = {:.6}, hessian diag = ({:.4}, {:.4})",
                m.y_star_n, m.q_gap, m.hessian[0][0], m.hessian[1][1]
            );
        }
    }
    Ok(())
}
