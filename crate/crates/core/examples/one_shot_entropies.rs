//! Hypothesis-testing mutual information and conditional entropy of a c-q
//! state, next to the second-order expansions they feed.

use std::f64::consts::LN_2;

use oneshot_qit::cq::CQState;
use oneshot_qit::entropic::{
    cond_entropy_with_variance, covering_second_order, h_h_cond, i_h, mutual_info_with_variance, pa_second_order,
};
use oneshot_qit::linalg::HermitianOperator;

fn main() -> oneshot_qit::Result<()> {
    // |0> and |+> sent with equal probability
    let zero = HermitianOperator::diagonal(&[1.0, 0.0])?;
    let plus = HermitianOperator::from_real(2, &[0.5, 0.5, 0.5, 0.5])?;
    let s = CQState::new(vec![0.5, 0.5], vec![zero, plus])?;

    println!("{:>6} {:>12} {:>12}", "eps", "I_h (bits)", "H_h (bits)");
    for eps in [0.05, 0.1, 0.3, 0.5, 0.9] {
        println!("{:>6} {:>12.6} {:>12.6}", eps, i_h(&s, eps)? / LN_2, h_h_cond(&s, eps)? / LN_2);
    }

    let (i, vi) = mutual_info_with_variance(&s)?;
    let (h, vh) = cond_entropy_with_variance(&s)?;
    println!(
        "I(X:B) = {:.6}, V = {:.6}; H(X|B) = {:.6}, V = {:.6} (bits)",
        i / LN_2,
        vi / LN_2 / LN_2,
        h / LN_2,
        vh / LN_2 / LN_2
    );
    for n in [100, 1000, 10000] {
        let pa = pa_second_order(h / LN_2, vh / LN_2 / LN_2, 0.1, n)?;
        let cov = covering_second_order(i / LN_2, vi / LN_2 / LN_2, 0.1, n)?;
        println!("n={n:>5}: extractable ~ {:.2} bits, codebook ~ {:.2} bits", pa.value_at_n, cov.value_at_n);
    }
    Ok(())
}
