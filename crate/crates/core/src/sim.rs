//! Exact and Monte-Carlo evaluation of the hashed and covering trace
//! distances, and the operational searches built on them.
//!
//! Monte-Carlo sample `i` draws from `ChaCha8Rng::seed_from_u64(seed)` on
//! stream `i`, and per-sample values are reduced by a fixed pairwise tree,
//! so estimates are bit-identical for any worker count.

use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cq::{checked_pow, CQState, Codebook, HashFamily, ENUMERATION_LIMIT};
use crate::error::{domain, Error, Result};
use crate::linalg::{trace_norm, HermitianOperator};
use crate::numeric::{ln_multinomial_mass, pairwise_sum};

/// Largest alphabet for which subset norms are memoized in a dense table.
const MEMO_ALPHABET_LIMIT: usize = 20;
/// Exact enumeration is split into fixed-size chunks (independent of workers).
const CHUNK: u64 = 4096;
/// Two-sided 95% normal quantile.
const Z95: f64 = 1.96;

pub const PA_FAMILY: &str = "uniform-function";
pub const COVERING_FAMILY: &str = "iid-random-codebook";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    #[value(name = "mc", alias = "monte-carlo")]
    #[serde(rename = "monte-carlo")]
    MonteCarlo,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationEstimate {
    pub value: f64,
    pub method: Method,
    pub samples: u64,
    pub seed: u64,
    pub half_width: f64,
    pub family: String,
}

/// Monte-Carlo settings; `workers = 0` uses the global rayon pool.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sampling {
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl Default for Sampling {
    fn default() -> Self {
        Self { samples: 100_000, seed: 0, workers: 0 }
    }
}

fn run_in_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Numerical(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn monte_carlo(
    sampling: Sampling,
    family: &str,
    draw: impl Fn(&mut ChaCha8Rng) -> f64 + Sync,
) -> Result<SimulationEstimate> {
    let n = sampling.samples;
    if n < 2 {
        return domain("Monte Carlo needs at least 2 samples");
    }
    let values: Vec<f64> = run_in_pool(sampling.workers, || {
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
                rng.set_stream(i);
                draw(&mut rng)
            })
            .collect()
    })?;
    let nf = n as f64;
    let mean = pairwise_sum(&values) / nf;
    let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let sd = (pairwise_sum(&sq) / (nf - 1.0)).sqrt();
    Ok(SimulationEstimate {
        value: mean,
        method: Method::MonteCarlo,
        samples: n,
        seed: sampling.seed,
        half_width: Z95 * sd / nf.sqrt(),
        family: family.to_string(),
    })
}

/// Order-fixed parallel sum of `f(0) + … + f(n−1)`.
fn chunked_sum(n: u64, workers: usize, f: impl Fn(u64) -> f64 + Sync) -> Result<f64> {
    let chunks = n.div_ceil(CHUNK);
    let partial: Vec<f64> = run_in_pool(workers, || {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let hi = ((c + 1) * CHUNK).min(n);
                let vals: Vec<f64> = (c * CHUNK..hi).map(&f).collect();
                pairwise_sum(&vals)
            })
            .collect()
    })?;
    Ok(pairwise_sum(&partial))
}

/// Half trace distance of one z-block, `½‖Σ_{x∈S} p(x)ρ^x − ρ_E/|Z|‖₁`,
/// memoized by the preimage bitmask.
struct PreimageNorms<'a> {
    s: &'a CQState,
    target: HermitianOperator,
    memo: Option<Vec<OnceLock<f64>>>,
}

impl<'a> PreimageNorms<'a> {
    fn new(s: &'a CQState, z_size: usize) -> Self {
        let target = s.marginal().scale(1.0 / z_size as f64);
        let memo = (s.alphabet_size() <= MEMO_ALPHABET_LIMIT)
            .then(|| (0..1usize << s.alphabet_size()).map(|_| OnceLock::new()).collect());
        Self { s, target, memo }
    }

    fn compute(&self, members: impl Iterator<Item = usize>) -> Result<f64> {
        let mut acc = self.target.scale(-1.0);
        for x in members {
            acc = &acc + &self.s.weighted_block(x);
        }
        Ok(0.5 * trace_norm(&acc)?)
    }

    fn mask_value(&self, mask: usize) -> Result<f64> {
        let members = (0..self.s.alphabet_size()).filter(move |x| mask >> x & 1 == 1);
        match &self.memo {
            Some(memo) => {
                if let Some(v) = memo[mask].get() {
                    return Ok(*v);
                }
                let v = self.compute(members)?;
                Ok(*memo[mask].get_or_init(|| v))
            }
            None => self.compute(members),
        }
    }

    fn table_value(&self, table: &[usize], z_size: usize) -> Result<f64> {
        if self.memo.is_some() {
            let mut masks = vec![0usize; z_size];
            for (x, &z) in table.iter().enumerate() {
                masks[z] |= 1 << x;
            }
            masks.iter().map(|&m| self.mask_value(m)).sum()
        } else {
            (0..z_size).map(|z| self.compute(table.iter().enumerate().filter(|(_, &t)| t == z).map(|(x, _)| x))).sum()
        }
    }
}

/// `½‖R^h(ρ_XE) − U(ρ_XE)‖₁` for one hash table, computed blockwise over `z`.
pub fn pa_trace_distance(s: &CQState, table: &[usize], z_size: usize) -> Result<f64> {
    if table.len() != s.alphabet_size() || table.iter().any(|&z| z >= z_size) {
        return domain("hash table does not map the alphabet into the output range");
    }
    PreimageNorms { s, target: s.marginal().scale(1.0 / z_size as f64), memo: None }.table_value(table, z_size)
}

/// `½‖(1/M) Σ_{x∈C} ρ^x − ρ_B‖₁` for one codebook.
pub fn covering_trace_distance(s: &CQState, codebook: &Codebook) -> Result<f64> {
    let diff = &codebook.average_state(s) - &s.marginal();
    Ok(0.5 * trace_norm(&diff)?)
}

/// `Δ(X|E)` under the uniform random-function family with output size `z_size`.
pub fn simulate_pa(s: &CQState, z_size: usize, method: Method, sampling: Sampling) -> Result<SimulationEstimate> {
    let family = HashFamily::new(s.alphabet_size(), z_size)?;
    let norms = PreimageNorms::new(s, z_size);
    match method {
        Method::Exact => {
            let n = family.enumerable_size()?;
            let first_err = OnceLock::new();
            let total = chunked_sum(n, sampling.workers, |i| {
                norms.table_value(&family.function(i), z_size).unwrap_or_else(|e| {
                    let _ = first_err.set(e);
                    f64::NAN
                })
            })?;
            if let Some(e) = first_err.into_inner() {
                return Err(e);
            }
            Ok(exact_estimate(total / n as f64, n, sampling.seed, PA_FAMILY))
        }
        Method::MonteCarlo => {
            let first_err = OnceLock::new();
            let est = monte_carlo(sampling, PA_FAMILY, |rng| {
                norms.table_value(&family.sample(rng), z_size).unwrap_or_else(|e| {
                    let _ = first_err.set(e);
                    f64::NAN
                })
            })?;
            match first_err.into_inner() {
                Some(e) => Err(e),
                None => Ok(est),
            }
        }
    }
}

fn exact_estimate(value: f64, count: u64, seed: u64, family: &str) -> SimulationEstimate {
    SimulationEstimate {
        value,
        method: Method::Exact,
        samples: count,
        seed,
        half_width: 0.0,
        family: family.to_string(),
    }
}

fn counts_value(s: &CQState, counts: &[usize], m: usize) -> Result<f64> {
    let mut acc = s.marginal().scale(-1.0);
    for (x, &k) in counts.iter().enumerate() {
        if k > 0 {
            acc = &acc + &s.rhos()[x].scale(k as f64 / m as f64);
        }
    }
    Ok(0.5 * trace_norm(&acc)?)
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in (0..=left).rev() {
            cur.push(k);
            rec(left - k, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// `Δ(X:B)` for an i.i.d. random codebook of size `m`.
///
/// The exact mode groups codebooks by their codeword counts, which fix the
/// average state, and weights each group by its multinomial probability.
pub fn simulate_covering(s: &CQState, m: usize, method: Method, sampling: Sampling) -> Result<SimulationEstimate> {
    if m == 0 {
        return domain("codebook size must be at least 1");
    }
    match method {
        Method::Exact => {
            let n = match checked_pow(s.alphabet_size(), m) {
                Some(n) if n <= ENUMERATION_LIMIT => n,
                _ => {
                    return domain(format!(
                        "{}^{m} codebooks exceed the enumeration limit {ENUMERATION_LIMIT}; use Monte Carlo",
                        s.alphabet_size()
                    ))
                }
            };
            let classes = compositions(m, s.alphabet_size());
            let terms: Vec<f64> = run_in_pool(sampling.workers, || {
                classes
                    .par_iter()
                    .map(|k| {
                        let w = ln_multinomial_mass(k, s.p()).exp();
                        if w == 0.0 {
                            Ok(0.0)
                        } else {
                            Ok(w * counts_value(s, k, m)?)
                        }
                    })
                    .collect::<Result<Vec<f64>>>()
            })??;
            Ok(exact_estimate(pairwise_sum(&terms), n, sampling.seed, COVERING_FAMILY))
        }
        Method::MonteCarlo => {
            let first_err = OnceLock::new();
            let est = monte_carlo(sampling, COVERING_FAMILY, |rng| {
                let cb = Codebook::sample(s.p(), m, rng);
                let mut counts = vec![0usize; s.alphabet_size()];
                cb.codewords.iter().for_each(|&c| counts[c] += 1);
                counts_value(s, &counts, m).unwrap_or_else(|e| {
                    let _ = first_err.set(e);
                    f64::NAN
                })
            })?;
            match first_err.into_inner() {
                Some(e) => Err(e),
                None => Ok(est),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtractableSearch {
    /// Largest `|Z| ≤ cap` with `Δ(X|E) ≤ ε`.
    pub ell: usize,
    /// `Δ(cap) ≤ ε`: the true maximum may lie beyond the cap.
    pub saturated: bool,
    pub curve: Vec<(usize, SimulationEstimate)>,
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        domain(format!("eps must lie in (0,1), got {eps}"))
    }
}

/// Exact search for the maximal extractable output size.
pub fn max_extractable_search(s: &CQState, eps: f64, z_cap: usize, workers: usize) -> Result<ExtractableSearch> {
    check_eps(eps)?;
    if z_cap == 0 {
        return domain("search cap must be at least 1");
    }
    let sampling = Sampling { samples: 0, seed: 0, workers };
    let mut curve = Vec::with_capacity(z_cap);
    for z in 1..=z_cap {
        curve.push((z, simulate_pa(s, z, Method::Exact, sampling)?));
    }
    let ell = curve.iter().filter(|(_, e)| e.value <= eps).map(|(z, _)| *z).max().unwrap_or(1);
    let saturated = curve.last().is_some_and(|(_, e)| e.value <= eps);
    Ok(ExtractableSearch { ell, saturated, curve })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CodebookSearch {
    /// Smallest `M ≤ cap` with `Δ(X:B) ≤ ε`, if any.
    pub m: Option<usize>,
    pub curve: Vec<(usize, SimulationEstimate)>,
    /// Sizes `M` at which `Δ(M+1) > Δ(M)`.
    pub monotonicity_violations: Vec<usize>,
}

/// Exact search for the minimal random codebook size.
pub fn min_codebook_search(s: &CQState, eps: f64, m_cap: usize, workers: usize) -> Result<CodebookSearch> {
    check_eps(eps)?;
    if m_cap == 0 {
        return domain("search cap must be at least 1");
    }
    let sampling = Sampling { samples: 0, seed: 0, workers };
    let mut curve = Vec::with_capacity(m_cap);
    for m in 1..=m_cap {
        curve.push((m, simulate_covering(s, m, Method::Exact, sampling)?));
    }
    let m = curve.iter().find(|(_, e)| e.value <= eps).map(|(m, _)| *m);
    let monotonicity_violations =
        curve.windows(2).filter(|w| w[1].1.value > w[0].1.value + 1e-12).map(|w| w[0].0).collect();
    Ok(CodebookSearch { m, curve, monotonicity_violations })
}
