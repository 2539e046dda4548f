//! Classical-quantum states, their joint embeddings, hash families and codebooks.

use std::io::Read;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::linalg::{HermitianOperator, C64};
use crate::numeric::ln_multinomial_mass;

/// Largest function table or codebook count enumerated exactly.
pub const ENUMERATION_LIMIT: u64 = 2_000_000;

const PROB_SUM_TOL: f64 = 1e-9;
const BLOCK_PSD_TOL: f64 = 1e-10;
const BLOCK_TRACE_TOL: f64 = 1e-10;

/// `ρ_XB = Σ_x p(x) |x⟩⟨x| ⊗ ρ^x`.
#[derive(Clone, Debug)]
pub struct CQState {
    p: Vec<f64>,
    rhos: Vec<HermitianOperator>,
}

impl CQState {
    /// Validates and builds a c-q state.
    ///
    /// Probabilities within 1e-9 of summing to one are renormalized; every
    /// block must be PSD (down to -1e-10) with unit trace (within 1e-10).
    pub fn new(p: Vec<f64>, rhos: Vec<HermitianOperator>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::Format("alphabet must be non-empty".into()));
        }
        if p.len() != rhos.len() {
            return Err(Error::Format(format!("{} probabilities but {} blocks", p.len(), rhos.len())));
        }
        if let Some((x, v)) = p.iter().enumerate().find(|(_, v)| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::Format(format!("probability p[{x}] = {v} is negative or not finite")));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::Format(format!("probability sum {total} differs from 1")));
        }
        // leave rounding-level sums alone so documents round-trip bit-exactly
        let p = if (total - 1.0).abs() > 4.0 * f64::EPSILON { p.into_iter().map(|v| v / total).collect() } else { p };
        let dim = rhos[0].dim();
        for (x, rho) in rhos.iter().enumerate() {
            if rho.dim() != dim {
                return Err(Error::Format(format!("block {x} has dimension {} (expected {dim})", rho.dim())));
            }
            let min = rho.min_eigenvalue()?;
            if min < -BLOCK_PSD_TOL {
                return Err(Error::Format(format!("block {x} is not PSD: eigenvalue {min:.6e}")));
            }
            let tr = rho.trace();
            if (tr - 1.0).abs() > BLOCK_TRACE_TOL {
                return Err(Error::Format(format!("block {x} has trace {tr} (expected 1)")));
            }
        }
        Ok(Self { p, rhos })
    }

    pub fn alphabet_size(&self) -> usize {
        self.p.len()
    }

    pub fn dim_b(&self) -> usize {
        self.rhos[0].dim()
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn rhos(&self) -> &[HermitianOperator] {
        &self.rhos
    }

    /// `ρ_B = Σ_x p(x) ρ^x`.
    pub fn marginal(&self) -> HermitianOperator {
        let mut acc = HermitianOperator::zeros(self.dim_b());
        for (px, rho) in self.p.iter().zip(&self.rhos) {
            acc = &acc + &rho.scale(*px);
        }
        acc
    }

    /// `p(x) ρ^x`.
    pub fn weighted_block(&self, x: usize) -> HermitianOperator {
        self.rhos[x].scale(self.p[x])
    }

    pub fn is_classical(&self) -> bool {
        self.rhos.iter().all(|r| {
            let d = r.dim();
            (0..d).all(|i| (0..d).all(|j| i == j || r.entry(i, j).norm() <= 1e-14))
        })
    }

    /// Mixes every block with the maximally mixed state:
    /// `ρ^x ↦ (1−ε) ρ^x + ε 1/d`. `p` is unchanged.
    pub fn regularize(&self, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return domain(format!("regularization eps must lie in (0,1), got {eps}"));
        }
        let d = self.dim_b();
        let mixed = HermitianOperator::identity(d).scale(eps / d as f64);
        let rhos = self.rhos.iter().map(|r| &r.scale(1.0 - eps) + &mixed).collect();
        Ok(Self { p: self.p.clone(), rhos })
    }

    pub fn embed(&self) -> JointEmbedding {
        joint_embed(self)
    }

    pub fn to_document(&self) -> StateDocument {
        let rhos = self
            .rhos
            .iter()
            .map(|r| {
                (0..r.dim()).map(|i| (0..r.dim()).map(|j| [r.entry(i, j).re, r.entry(i, j).im]).collect()).collect()
            })
            .collect();
        StateDocument { alphabet_size: self.alphabet_size(), dim_b: self.dim_b(), p: self.p.clone(), rhos }
    }

    pub fn to_json(&self) -> String {
        // f64 Display is shortest-roundtrip, so all significant digits survive
        serde_json::to_string_pretty(&self.to_document()).expect("plain data serializes")
    }

    /// The classical bit with no side information: `p = (1/2, 1/2)`, `dim_b = 1`.
    pub fn uniform_bit() -> Self {
        Self::uniform_classical(2)
    }

    /// Uniform `X` on `m` symbols with trivial side information.
    pub fn uniform_classical(m: usize) -> Self {
        let p = vec![1.0 / m as f64; m];
        Self::new(p, vec![HermitianOperator::identity(1); m]).expect("valid")
    }

    /// `p = (1/2, 1/2)` with `ρ^0 = |0⟩⟨0|`, `ρ^1 = |1⟩⟨1|`.
    pub fn antipodal_bit() -> Self {
        Self::new(
            vec![0.5, 0.5],
            vec![HermitianOperator::basis_projector(2, 0), HermitianOperator::basis_projector(2, 1)],
        )
        .expect("valid")
    }
}

/// Serialized form of a [`CQState`]; `rhos[x][i][j] = [re, im]`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StateDocument {
    pub alphabet_size: usize,
    pub dim_b: usize,
    pub p: Vec<f64>,
    pub rhos: Vec<Vec<Vec<[f64; 2]>>>,
}

impl StateDocument {
    pub fn into_state(self) -> Result<CQState> {
        if self.alphabet_size == 0 || self.dim_b == 0 {
            return Err(Error::Format("alphabet_size and dim_b must be positive".into()));
        }
        if self.p.len() != self.alphabet_size || self.rhos.len() != self.alphabet_size {
            return Err(Error::Format(format!(
                "alphabet_size is {} but p has {} entries and rhos has {} blocks",
                self.alphabet_size,
                self.p.len(),
                self.rhos.len()
            )));
        }
        let d = self.dim_b;
        let mut blocks = Vec::with_capacity(self.alphabet_size);
        for (x, rows) in self.rhos.iter().enumerate() {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(Error::Format(format!("block {x} is not {d}x{d}")));
            }
            let op = HermitianOperator::from_fn(d, |i, j| C64::new(rows[i][j][0], rows[i][j][1]))
                .map_err(|e| Error::Format(format!("block {x}: {e}")))?;
            blocks.push(op);
        }
        CQState::new(self.p, blocks)
    }
}

/// Parses and validates a JSON state document.
pub fn load_state(document: &str) -> Result<CQState> {
    let doc: StateDocument =
        serde_json::from_str(document).map_err(|e| Error::Format(format!("malformed document: {e}")))?;
    doc.into_state()
}

pub fn read_state(mut reader: impl Read) -> Result<CQState> {
    let mut s = String::new();
    reader.read_to_string(&mut s).map_err(|e| Error::Format(format!("unreadable state: {e}")))?;
    load_state(&s)
}

/// The operators of a c-q state on the joint `X ⊗ B` space (dimension `|X|·d`).
#[derive(Clone, Debug)]
pub struct JointEmbedding {
    pub rho_xb: HermitianOperator,
    pub rho_x_tensor_rho_b: HermitianOperator,
    pub one_x_tensor_rho_b: HermitianOperator,
    pub rho_b: HermitianOperator,
    pub dim_b: usize,
}

impl JointEmbedding {
    pub fn block(&self, x: usize) -> HermitianOperator {
        self.rho_xb.block(x * self.dim_b, self.dim_b)
    }

    /// `Tr_X ρ_XB`.
    pub fn partial_trace_x(&self) -> HermitianOperator {
        let n = self.rho_xb.dim() / self.dim_b;
        (0..n).fold(HermitianOperator::zeros(self.dim_b), |acc, x| &acc + &self.block(x))
    }
}

pub fn joint_embed(s: &CQState) -> JointEmbedding {
    let rho_b = s.marginal();
    let joint: Vec<_> = (0..s.alphabet_size()).map(|x| s.weighted_block(x)).collect();
    let product: Vec<_> = s.p.iter().map(|px| rho_b.scale(*px)).collect();
    let one: Vec<_> = (0..s.alphabet_size()).map(|_| rho_b.clone()).collect();
    JointEmbedding {
        rho_xb: HermitianOperator::direct_sum(&joint).expect("non-empty"),
        rho_x_tensor_rho_b: HermitianOperator::direct_sum(&product).expect("non-empty"),
        one_x_tensor_rho_b: HermitianOperator::direct_sum(&one).expect("non-empty"),
        rho_b,
        dim_b: s.dim_b(),
    }
}

/// The uniform random-function family `h : X → Z` (all `|Z|^|X|` tables
/// equiprobable), which is strongly 2-universal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HashFamily {
    pub domain_size: usize,
    pub range_size: usize,
    pub kind: FamilyKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    ExhaustiveUniformFunction,
    SampledUniformFunction,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::ExhaustiveUniformFunction => "exhaustive-uniform-function",
            FamilyKind::SampledUniformFunction => "sampled-uniform-function",
        }
    }
}

impl HashFamily {
    /// Picks exhaustive enumeration when `|Z|^|X|` is within [`ENUMERATION_LIMIT`].
    pub fn new(domain_size: usize, range_size: usize) -> Result<Self> {
        if domain_size == 0 || range_size == 0 {
            return domain("hash domain and range sizes must be positive");
        }
        let kind = match checked_pow(range_size, domain_size) {
            Some(n) if n <= ENUMERATION_LIMIT => FamilyKind::ExhaustiveUniformFunction,
            _ => FamilyKind::SampledUniformFunction,
        };
        Ok(Self { domain_size, range_size, kind })
    }

    /// Number of function tables, if it fits in `u64`.
    pub fn size(&self) -> Option<u64> {
        checked_pow(self.range_size, self.domain_size)
    }

    /// The `index`-th table in mixed-radix order (`table[x] = h(x)`).
    pub fn function(&self, index: u64) -> Vec<usize> {
        decode_mixed_radix(index, self.range_size, self.domain_size)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        (0..self.domain_size).map(|_| rng.random_range(0..self.range_size)).collect()
    }

    /// `Pr[h(x) = z ∧ h(x') = z']` by enumerating the family.
    pub fn pair_probability(&self, x: usize, x2: usize, z: usize, z2: usize) -> Result<f64> {
        let n = self.enumerable_size()?;
        let hits = (0..n)
            .filter(|&i| {
                let t = self.function(i);
                t[x] == z && t[x2] == z2
            })
            .count();
        Ok(hits as f64 / n as f64)
    }

    pub fn enumerable_size(&self) -> Result<u64> {
        match self.size() {
            Some(n) if n <= ENUMERATION_LIMIT => Ok(n),
            _ => domain(format!(
                "{}^{} hash functions exceed the enumeration limit {ENUMERATION_LIMIT}; use Monte Carlo",
                self.range_size, self.domain_size
            )),
        }
    }
}

/// A random codebook: `M` codewords drawn i.i.d. from `p_X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codebook {
    pub codewords: Vec<usize>,
}

impl Codebook {
    pub fn new(codewords: Vec<usize>, alphabet_size: usize) -> Result<Self> {
        if codewords.is_empty() {
            return domain("codebook must contain at least one codeword");
        }
        if let Some(c) = codewords.iter().find(|&&c| c >= alphabet_size) {
            return domain(format!("codeword {c} outside alphabet of size {alphabet_size}"));
        }
        Ok(Self { codewords })
    }

    pub fn size(&self) -> usize {
        self.codewords.len()
    }

    /// The `index`-th codebook of size `m` in mixed-radix order.
    pub fn enumerate(index: u64, alphabet_size: usize, m: usize) -> Self {
        Self { codewords: decode_mixed_radix(index, alphabet_size, m) }
    }

    /// `Π_i p(c_i)`.
    pub fn probability(&self, p: &[f64]) -> f64 {
        self.codewords.iter().map(|&c| p[c]).product()
    }

    /// Draws each codeword from `p` by inverse-CDF sampling.
    pub fn sample<R: Rng + ?Sized>(p: &[f64], m: usize, rng: &mut R) -> Self {
        let codewords = (0..m).map(|_| sample_index(p, rng.random::<f64>())).collect();
        Self { codewords }
    }

    /// `(1/M) Σ_{x ∈ C} ρ^x`.
    pub fn average_state(&self, s: &CQState) -> HermitianOperator {
        let mut acc = HermitianOperator::zeros(s.dim_b());
        for &c in &self.codewords {
            acc = &acc + &s.rhos()[c];
        }
        acc.scale(1.0 / self.size() as f64)
    }
}

fn sample_index(p: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, &v) in p.iter().enumerate() {
        acc += v;
        if u < acc {
            return i;
        }
    }
    // u landed in the rounding gap above the cumulative sum
    p.iter().rposition(|&v| v > 0.0).unwrap_or(p.len() - 1)
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base as u64)?;
    }
    Some(acc)
}

fn decode_mixed_radix(mut index: u64, radix: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut() {
        *slot = (index % radix as u64) as usize;
        index /= radix as u64;
    }
    out
}

/// One type class of `p^⊗n` versus `q^⊗n`.
#[derive(Clone, Debug)]
pub struct TypeClass {
    pub counts: Vec<usize>,
    /// `ln` of the total `p^⊗n`-mass of the class.
    pub ln_p_mass: f64,
    /// `ln` of the total `q^⊗n`-mass of the class.
    pub ln_q_mass: f64,
    /// Per-sequence log-likelihood ratio `ln p^n(x^n) − ln q^n(x^n)`.
    pub llr: f64,
}

impl TypeClass {
    pub fn p_mass(&self) -> f64 {
        self.ln_p_mass.exp()
    }

    pub fn q_mass(&self) -> f64 {
        self.ln_q_mass.exp()
    }

    /// Number of sequences in the class (may overflow to `inf` for large `n`).
    pub fn multiplicity(&self, q: &[f64]) -> f64 {
        let ln_seq: f64 = self.counts.iter().zip(q).map(|(&k, v)| k as f64 * v.ln()).sum();
        (self.ln_q_mass - ln_seq).exp()
    }
}

/// Largest blocklength accepted by [`iid_extend_classical`].
pub const MAX_IID_BLOCKLENGTH: usize = 10_000;

/// Enumerates the type classes of `p^⊗n` vs `q^⊗n` without materializing
/// the `|X|^n` outcomes.
pub fn iid_extend_classical(p: &[f64], q: &[f64], n: usize) -> Result<Vec<TypeClass>> {
    if p.len() != q.len() || p.is_empty() {
        return domain("p and q must be non-empty and of equal length");
    }
    if let Some(v) = q.iter().find(|&&v| !(v > 0.0)) {
        return domain(format!("q must be strictly positive, found {v}"));
    }
    if p.iter().any(|&v| !(v >= 0.0)) {
        return domain("p must be non-negative");
    }
    if n == 0 || n > MAX_IID_BLOCKLENGTH {
        return domain(format!("blocklength must lie in 1..={MAX_IID_BLOCKLENGTH}, got {n}"));
    }
    let ratio: Vec<f64> = p.iter().zip(q).map(|(a, b)| (a / b).ln()).collect();
    let mut out = Vec::new();
    let mut counts = vec![0usize; p.len()];
    compositions(n, 0, &mut counts, &mut |c| {
        let llr = c.iter().zip(&ratio).filter(|(&k, _)| k > 0).map(|(&k, r)| k as f64 * r).sum();
        out.push(TypeClass {
            counts: c.to_vec(),
            ln_p_mass: ln_multinomial_mass(c, p),
            ln_q_mass: ln_multinomial_mass(c, q),
            llr,
        });
    });
    Ok(out)
}

fn compositions(remaining: usize, pos: usize, counts: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if pos + 1 == counts.len() {
        counts[pos] = remaining;
        f(counts);
        return;
    }
    for k in (0..=remaining).rev() {
        counts[pos] = k;
        compositions(remaining - k, pos + 1, counts, f);
    }
}
