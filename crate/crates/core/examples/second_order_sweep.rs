//! Exact i.i.d. hypothesis testing against the second-order expansion.
//!
//! For p = (1/3, 2/3) vs q = (1/2, 1/2) the exact `D_h^ε(p^⊗n‖q^⊗n)` comes
//! from type classes; the prediction is `nD + √(nV)Φ⁻¹(ε)`.

use std::f64::consts::LN_2;

use oneshot_qit::rates::second_order_sweep;

fn main() -> oneshot_qit::Result<()> {
    let p = [1.0 / 3.0, 2.0 / 3.0];
    let q = [0.5, 0.5];
    let eps = 0.2;
    let rows = second_order_sweep(&p, &q, eps, &[25, 100, 400, 1600, 6400])?;
    println!("{:>6} {:>12} {:>12} {:>12} {:>14}", "n", "exact", "predicted", "residual", "residual/sqrt(n)");
    for r in rows {
        let nats = r.residual_bits * LN_2;
        println!(
            "{:>6} {:>12.5} {:>12.5} {:>12.5} {:>14.6}",
            r.n,
            r.exact_bits,
            r.prediction_bits,
            r.residual_bits,
            nats.abs() / (r.n as f64).sqrt()
        );
    }
    println!("(bits; last column in nats)");
    Ok(())
}
