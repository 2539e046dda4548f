//! Sample `i` uses stream `i` of a ChaCha8 generator seeded once, so the
//! estimate does not depend on how many threads share the work.

use oneshot_qit::random::random_cq_state;
use oneshot_qit::sim::{simulate_pa, Method, Sampling};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> oneshot_qit::Result<()> {
    let s = random_cq_state(3, 2, &mut ChaCha8Rng::seed_from_u64(1010));
    let exact = simulate_pa(&s, 2, Method::Exact, Sampling::default())?;
    for workers in [1, 2, 4, 8] {
        let e = simulate_pa(&s, 2, Method::MonteCarlo, Sampling { samples: 100_000, seed: 42, workers })?;
        println!("workers={workers}: {:.12} +- {:.3e} (bits {:016x})", e.value, e.half_width, e.value.to_bits());
    }
    println!("exact: {:.12}", exact.value);
    Ok(())
}
