//! Per-copy hypothesis testing at moderately decaying error levels.
//!
//! With `a_n = n^{-1/3}` and `ε_n = e^{-n a_n²}`, the exact per-copy value
//! at `ε_n` approaches `D − √(2V)a_n` and at `1 − ε_n` approaches
//! `D + √(2V)a_n`; the residual divided by `a_n` shrinks with `n`.

use oneshot_qit::entropic::Direction;
use oneshot_qit::rates::moderate_sweep;

fn main() -> oneshot_qit::Result<()> {
    let p = [1.0 / 3.0, 2.0 / 3.0];
    let q = [0.5, 0.5];
    for dir in [Direction::Minus, Direction::Plus] {
        println!("direction {dir:?}");
        for r in moderate_sweep(&p, &q, 1.0 / 3.0, &[64, 512, 4096], dir)? {
            let a = r.a_n.unwrap_or(f64::NAN);
            println!(
                "  n={:>5} eps={:.3e} exact={:.6} predicted={:.6} |residual|/a_n={:.6}",
                r.n,
                r.eps,
                r.exact_bits,
                r.prediction_bits,
                r.residual_bits.abs() / a
            );
        }
    }
    Ok(())
}
