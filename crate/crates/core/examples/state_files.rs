//! Writing and reading c-q state documents, as used by the command line.

use oneshot_qit::cq::{load_state, CQState};
use oneshot_qit::random::random_cq_state;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> oneshot_qit::Result<()> {
    let doc = CQState::antipodal_bit().to_document();
    println!("{}", serde_json::to_string(&doc).expect("serializable"));

    let s = random_cq_state(2, 2, &mut ChaCha8Rng::seed_from_u64(8));
    let text = s.to_json();
    let back = load_state(&text)?;
    let same = back.p() == s.p() && back.rhos().iter().zip(s.rhos()).all(|(a, b)| (a - b).max_abs_entry() == 0.0);
    println!("random state round-trips exactly: {same}");

    let e = back.embed();
    println!("joint dimension {}, Tr rho_XB = {:.15}", e.rho_xb.dim(), e.rho_xb.trace());

    match load_state(r#"{"alphabet_size": 2, "dim_b": 1, "p": [0.5, 0.6], "rhos": [[[[1, 0]]], [[[1, 0]]]]}"#) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(err) => println!("rejected: {err}"),
    }
    Ok(())
}
