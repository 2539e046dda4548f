//! Jacobi eigendecomposition, spectrum clusters and the pinching map.

use oneshot_qit::linalg::{eig_herm, mat_func, pinch, spec_count, HermitianOperator};
use oneshot_qit::random::{random_density, random_hermitian};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> oneshot_qit::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    // a reference operator with a doubly degenerate eigenvalue
    let basis = eig_herm(&random_hermitian(3, &mut rng))?;
    let h = basis.compose(&[0.25, 0.25, 0.5]);
    let es = h.eig()?;
    println!("eigenvalues of H: {:?}", es.eigenvalues);
    println!("clusters: {:?}, spec count {}", es.clusters(), spec_count(&h)?);

    let rho = random_density(3, &mut rng);
    let pinched = pinch(&h, &rho)?;
    println!("[P_H(rho), H] = {:.2e}", pinched.commutator_norm(&h));
    let residual = &pinched - &rho.scale(1.0 / spec_count(&h)? as f64);
    println!("min eigenvalue of P_H(rho) - rho/nu = {:.4} (nonnegative)", residual.min_eigenvalue()?);

    let sqrt = mat_func(&rho, f64::sqrt, false)?;
    let back = HermitianOperator::new(sqrt.matrix() * sqrt.matrix())?;
    println!("|sqrt(rho)^2 - rho| = {:.2e}", (&back - &rho).max_abs_entry());

    let mut power = h.clone();
    for n in 2..=4 {
        power = power.kron(&h);
        println!("spec count of H^(x{n}) = {} <= {}", spec_count(&power)?, (n + 1) * (n + 1));
    }
    Ok(())
}
