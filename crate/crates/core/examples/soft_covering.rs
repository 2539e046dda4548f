//! Soft covering with i.i.d. random codebooks: the covering distance as a
//! function of the codebook size, and the smallest size meeting a target.

use oneshot_qit::bounds::{covering_direct_bound, covering_theorem_bounds};
use oneshot_qit::cq::CQState;
use oneshot_qit::linalg::HermitianOperator;
use oneshot_qit::sim::{min_codebook_search, simulate_covering, Method, Sampling};

fn main() -> oneshot_qit::Result<()> {
    let zero = HermitianOperator::diagonal(&[0.9, 0.1])?;
    let one = HermitianOperator::diagonal(&[0.2, 0.8])?;
    let mixed = HermitianOperator::from_real(2, &[0.5, 0.3, 0.3, 0.5])?;
    let s = CQState::new(vec![0.5, 0.3, 0.2], vec![zero, one, mixed])?;

    println!("{:>4} {:>10} {:>12}", "M", "exact", "bound c=1");
    for m in [1, 2, 4, 8, 12] {
        let e = simulate_covering(&s, m, Method::Exact, Sampling::default())?;
        println!("{:>4} {:>10.6} {:>12.6}", m, e.value, covering_direct_bound(&s, 1.0, m)?);
    }
    let big = simulate_covering(&s, 4096, Method::MonteCarlo, Sampling { samples: 2_000, seed: 5, workers: 0 })?;
    println!("M=4096 sampled: {:.5} +- {:.5}", big.value, big.half_width);

    let eps = 0.3;
    let search = min_codebook_search(&s, eps, 12, 0)?;
    let report = covering_theorem_bounds(&s, eps, 0.09, 0.04)?;
    match search.m {
        Some(m) => println!("eps={eps}: smallest M = {m}, log2 = {:.3}", (m as f64).log2()),
        None => println!("eps={eps}: no M up to 12"),
    }
    println!("theorem bounds [{:.3}, {:.3}] bits", report.lower_bits, report.upper_bits);
    Ok(())
}
