//! The five divergences on a qubit pair, in bits.

use std::f64::consts::LN_2;

use oneshot_qit::divergence::{d_2_star, d_h, d_s, rel_entropy_with_variance, DivergencePair, DEFAULT_DS_GRID};
use oneshot_qit::linalg::HermitianOperator;

fn main() -> oneshot_qit::Result<()> {
    let rho = HermitianOperator::from_real(2, &[0.8, 0.2, 0.2, 0.2])?;
    let sigma = HermitianOperator::diagonal(&[0.5, 0.5])?;
    let pair = DivergencePair::new(rho, sigma)?;

    let (d, v) = rel_entropy_with_variance(&pair)?;
    println!("D(rho||sigma) = {:.6} bits, V = {:.6} bits^2", d / LN_2, v / (LN_2 * LN_2));
    println!("D_2*(rho||sigma) = {:.6} bits", d_2_star(&pair)? / LN_2);
    println!("{:>6} {:>10} {:>22}", "eps", "D_h", "D_s bracket");
    for eps in [0.05, 0.2, 0.5, 0.8] {
        let s = d_s(&pair, eps, DEFAULT_DS_GRID)?;
        println!("{:>6} {:>10.6} [{:.6}, {:.6}]", eps, d_h(&pair, eps)? / LN_2, s.bracket.0 / LN_2, s.bracket.1 / LN_2);
    }

    // scaling the second argument shifts every divergence by log(lambda)
    let scaled = pair.scaled_sigma(2.0)?;
    println!("D_h^0.2 shift under sigma -> 2 sigma: {:.6} bits", (d_h(&scaled, 0.2)? - d_h(&pair, 0.2)?) / LN_2);
    Ok(())
}
