#![allow(dead_code)]

use nalgebra::SymmetricEigen;
use oneshot_qit::cq::CQState;
use oneshot_qit::linalg::{CMatrix, HermitianOperator};
use oneshot_qit::random::{random_classical_cq_state, random_cq_state, random_hermitian, random_probability};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `‖A‖₁` through nalgebra's own Hermitian eigensolver.
pub fn oracle_trace_norm(m: &CMatrix) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.iter().map(|l| l.abs()).sum()
}

fn block_diag(blocks: &[CMatrix]) -> CMatrix {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMatrix::zeros(n, n);
    let mut at = 0;
    for b in blocks {
        out.view_mut((at, at), (b.nrows(), b.nrows())).copy_from(b);
        at += b.nrows();
    }
    out
}

/// Average of `½‖ρ_{f(X)E} − 1/|Z| ⊗ ρ_E‖₁` over every function `X → Z`.
pub fn oracle_pa(s: &CQState, z: usize) -> f64 {
    let nx = s.alphabet_size();
    let d = s.dim_b();
    let rho_e = s.marginal().matrix().clone() / oneshot_qit::linalg::C64::from(z as f64);
    let count = z.pow(nx as u32);
    let mut total = 0.0;
    for idx in 0..count {
        let mut table = Vec::with_capacity(nx);
        let mut r = idx;
        for _ in 0..nx {
            table.push(r % z);
            r /= z;
        }
        let blocks: Vec<CMatrix> = (0..z)
            .map(|k| {
                let mut b = -rho_e.clone();
                for x in (0..nx).filter(|&x| table[x] == k) {
                    b += s.weighted_block(x).matrix();
                }
                b
            })
            .collect();
        debug_assert_eq!(blocks[0].nrows(), d);
        total += 0.5 * oracle_trace_norm(&block_diag(&blocks));
    }
    total / count as f64
}

/// `E_C ½‖(1/M)Σ_m ρ^{x_m} − ρ_B‖₁` over all i.i.d. codebooks.
pub fn oracle_covering(s: &CQState, m: usize) -> f64 {
    let nx = s.alphabet_size();
    let rho_b = s.marginal().matrix().clone();
    let mut total = 0.0;
    for idx in 0..nx.pow(m as u32) {
        let mut r = idx;
        let mut prob = 1.0;
        let mut avg = CMatrix::zeros(s.dim_b(), s.dim_b());
        for _ in 0..m {
            let x = r % nx;
            r /= nx;
            prob *= s.p()[x];
            avg += s.rhos()[x].matrix();
        }
        let diff = avg / oneshot_qit::linalg::C64::from(m as f64) - &rho_b;
        total += prob * 0.5 * oracle_trace_norm(&diff);
    }
    total
}

/// Seeded corpus mixing quantum and classical c-q states with `|X| ≤ 4`, `d ≤ 3`.
pub fn corpus(len: usize, seed: u64) -> Vec<CQState> {
    let mut g = rng(seed);
    (0..len)
        .map(|k| {
            let nx = 2 + k % 3;
            let d = 1 + (k / 3) % 3;
            if k % 2 == 0 {
                random_cq_state(nx, d, &mut g)
            } else {
                random_classical_cq_state(nx, d, &mut g)
            }
        })
        .collect()
}

/// Hermitian operator with a prescribed spectrum in a random eigenbasis.
pub fn with_spectrum<R: Rng + ?Sized>(values: &[f64], rng: &mut R) -> HermitianOperator {
    random_hermitian(values.len(), rng).eig().unwrap().compose(values)
}

/// Commuting pair: a density and an unnormalized PSD operator sharing a random eigenbasis.
/// The second argument gets a repeated eigenvalue half of the time.
pub fn commuting_pair<R: Rng + ?Sized>(d: usize, rng: &mut R) -> (HermitianOperator, HermitianOperator) {
    let basis = random_hermitian(d, rng).eig().unwrap();
    let p = random_probability(d, rng);
    let scale = rng.random_range(0.5..3.0);
    let mut q: Vec<f64> = random_probability(d, rng).into_iter().map(|x| x * scale).collect();
    if d > 2 && rng.random_bool(0.5) {
        q[1] = q[0];
    }
    (basis.compose(&p), basis.compose(&q))
}

pub fn max_eigenvalue(a: &HermitianOperator) -> f64 {
    -a.scale(-1.0).min_eigenvalue().unwrap()
}

/// Collects named checks and prints one verdict line per criterion.
pub struct Criterion {
    pub number: usize,
    pub title: &'static str,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    pub checks: usize,
}

impl Criterion {
    pub fn new(number: usize, title: &'static str) -> Self {
        Self { number, title, failures: Vec::new(), notes: Vec::new(), checks: 0 }
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn print(&self) {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        println!(
            "{verdict} criterion {}: {} ({} checks, {} failed)",
            self.number,
            self.title,
            self.checks,
            self.failures.len()
        );
        for n in &self.notes {
            println!("    {n}");
        }
        for f in self.failures.iter().take(5) {
            println!("    failed: {f}");
        }
        if self.failures.len() > 5 {
            println!("    ... {} more", self.failures.len() - 5);
        }
    }
}
