//! Privacy amplification against quantum side information: exact and
//! sampled leaked distance, the direct bound, and the extractable length.

use oneshot_qit::bounds::{pa_direct_bound, pa_theorem_bounds};
use oneshot_qit::random::random_cq_state;
use oneshot_qit::sim::{max_extractable_search, simulate_pa, Method, Sampling};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> oneshot_qit::Result<()> {
    let s = random_cq_state(4, 2, &mut ChaCha8Rng::seed_from_u64(11));

    println!("{:>4} {:>10} {:>22} {:>12}", "|Z|", "exact", "Monte Carlo (95%)", "bound c=0.1");
    for z in 1..=4 {
        let exact = simulate_pa(&s, z, Method::Exact, Sampling::default())?;
        let mc = simulate_pa(&s, z, Method::MonteCarlo, Sampling { samples: 20_000, seed: 1, workers: 0 })?;
        let bound = pa_direct_bound(&s, 0.1, z)?;
        println!("{:>4} {:>10.6} {:>12.6} +- {:.4} {:>12.6}", z, exact.value, mc.value, mc.half_width, bound);
    }

    let eps = 0.4;
    let search = max_extractable_search(&s, eps, 8, 0)?;
    let report = pa_theorem_bounds(&s, eps, 0.1, 0.05)?;
    println!(
        "eps={eps}: largest |Z| = {}{}, log2 = {:.3}; theorem bounds [{:.3}, {:.3}] bits",
        search.ell,
        if search.saturated { " (cap reached)" } else { "" },
        (search.ell as f64).log2(),
        report.lower_bits,
        report.upper_bits
    );
    Ok(())
}
