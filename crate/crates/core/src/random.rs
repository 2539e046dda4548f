//! Random operators and states for corpora, examples and tests.

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::cq::CQState;
use crate::linalg::{HermitianOperator, C64};

fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// Hermitian matrix with i.i.d. complex Gaussian entries (GUE-like).
pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianOperator {
    let entries: Vec<C64> = (0..dim * dim).map(|_| gaussian_c64(rng)).collect();
    HermitianOperator::from_fn(dim, |i, j| entries[i * dim + j]).expect("dim >= 1")
}

/// Full-rank density operator `G G† / Tr[G G†]` from a complex Ginibre matrix.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianOperator {
    random_psd(dim, rng).normalized()
}

/// Unnormalized PSD operator `G G†`.
pub fn random_psd<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianOperator {
    let g = crate::linalg::CMatrix::from_fn(dim, dim, |_, _| gaussian_c64(rng));
    HermitianOperator::new(&g * g.adjoint()).expect("finite")
}

/// Random pure state `|ψ⟩⟨ψ|`.
pub fn random_pure<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianOperator {
    let v: Vec<C64> = (0..dim).map(|_| gaussian_c64(rng)).collect();
    HermitianOperator::outer(&v).expect("dim >= 1").normalized()
}

/// Orthogonal projector onto a random subspace of the given rank.
pub fn random_projector<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> HermitianOperator {
    let es = random_hermitian(dim, rng).eig().expect("jacobi converges");
    let mask: Vec<f64> = (0..dim).map(|k| if k < rank { 1.0 } else { 0.0 }).collect();
    es.compose(&mask)
}

/// Flat-Dirichlet probability vector.
pub fn random_probability<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Random c-q state with full-rank blocks.
pub fn random_cq_state<R: Rng + ?Sized>(alphabet: usize, dim_b: usize, rng: &mut R) -> CQState {
    let p = random_probability(alphabet, rng);
    let rhos = (0..alphabet).map(|_| random_density(dim_b, rng)).collect();
    CQState::new(p, rhos).expect("valid by construction")
}

/// Random c-q state whose blocks are all diagonal in the computational basis.
pub fn random_classical_cq_state<R: Rng + ?Sized>(alphabet: usize, dim_b: usize, rng: &mut R) -> CQState {
    let p = random_probability(alphabet, rng);
    let rhos = (0..alphabet)
        .map(|_| HermitianOperator::diagonal(&random_probability(dim_b, rng)).expect("dim >= 1"))
        .collect();
    CQState::new(p, rhos).expect("valid by construction")
}
