//! Column zonal polynomials turning power sums into elementary symmetric
//! functions, as used to go from traces of the pair matrix to p_{n,n-2l}.
use eginoe::combinatorics::{partitions, zonal_1k};
use eginoe::exactprob::{log_total_probability, EnsembleParams};
use eginoe::specfun::{ln_factorial, SignedLog};

fn main() -> eginoe::Result<()> {
    for k in 1..=6 {
        println!("partitions of {k}: {}", partitions(k)?.len());
    }

    let lambda = [0.5, 2.0, 3.0, 7.0];
    let xi: Vec<SignedLog> = (1..=4)
        .map(|j| SignedLog::from_f64(lambda.iter().map(|x: &f64| x.powi(j)).sum()))
        .collect();
    for k in 1..=4usize {
        let z = zonal_1k(&xi[..k])?.to_f64() / ln_factorial(k as u32).exp();
        let e: f64 = subsets(&lambda, k)
            .iter()
            .map(|s| s.iter().product::<f64>())
            .sum();
        println!("Z_(1^{k})/{k}! = {z:.12}, e_{k} = {e:.12}");
    }

    for &(n, tau) in &[(10usize, 0.0), (20, 0.5)] {
        let t = log_total_probability(&EnsembleParams::strong(n, tau)?)?;
        println!(
            "n = {n}, tau = {tau}: sum_l p_(n,n-2l) - 1 = {:.2e}",
            t.exp_m1()
        );
    }
    Ok(())
}

fn subsets(xs: &[f64], k: usize) -> Vec<Vec<f64>> {
    if k == 0 {
        return vec![vec![]];
    }
    if xs.len() < k {
        return vec![];
    }
    let mut with: Vec<Vec<f64>> = subsets(&xs[1..], k - 1);
    for s in &mut with {
        s.push(xs[0]);
    }
    with.extend(subsets(&xs[1..], k));
    with
}
