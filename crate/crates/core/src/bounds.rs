//! One-shot bounds for privacy amplification and soft covering.
//!
//! Direct bounds are trace-distance upper bounds as functions of a threshold
//! `c`. Theorem bounds sandwich `log ℓ^ε` and `log M^ε` (reported in bits).

use std::collections::BTreeMap;
use std::f64::consts::LN_2;

use serde::Serialize;

use crate::cq::CQState;
use crate::entropic::{h_h_cond, i_h};
use crate::error::{domain, Result};
use crate::linalg::{order_projectors, pinch_eig, spec_count, HermitianOperator};

/// Smoothing used when reporting the spectrum count of the regularized marginal.
pub const REPORT_REGULARIZATION: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Pa,
    Covering,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Pa => "pa",
            Task::Covering => "covering",
        }
    }
}

/// Checks `0 < c < δ < min(ε/3, (1−ε)/2)`, naming the first failed inequality.
pub fn validate_parameters(eps: f64, delta: f64, c: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return domain(format!("eps must lie in (0,1), got {eps}"));
    }
    if !(c > 0.0) {
        return domain(format!("c must be > 0, got {c}"));
    }
    if !(c < delta) {
        return domain(format!("c must be < delta (c = {c}, delta = {delta})"));
    }
    if !(delta < eps / 3.0) {
        return domain(format!("delta must be < eps/3 (delta = {delta}, eps/3 = {})", eps / 3.0));
    }
    if !(delta < (1.0 - eps) / 2.0) {
        return domain(format!("delta must be < (1-eps)/2 (delta = {delta}, (1-eps)/2 = {})", (1.0 - eps) / 2.0));
    }
    Ok(())
}

/// `Tr[w {𝒫_ref[w] > t·ref}]`, with the pinching taken in the spectral
/// decomposition of `reference`.
fn pinched_tail(w: &HermitianOperator, reference: &HermitianOperator, t: f64) -> Result<f64> {
    let es = reference.eig()?;
    let pinched = pinch_eig(&es, w);
    let (_, gt) = order_projectors(&pinched, &reference.scale(t))?;
    Ok(w.trace_product(&gt))
}

/// `Tr[ρ_XE {𝒫_{ρ_E}[ρ_XE] > c·1_X⊗ρ_E}] + √(c·ν·|Z|)`, upper-bounding the
/// hashed trace distance for any strongly 2-universal family.
pub fn pa_direct_bound(s: &CQState, c: f64, z_size: usize) -> Result<f64> {
    if !(c > 0.0) {
        return domain(format!("c must be > 0, got {c}"));
    }
    if z_size == 0 {
        return domain("output size must be at least 1");
    }
    let rho_e = s.marginal();
    let nu = spec_count(&rho_e)?;
    let mut tail = 0.0;
    for x in 0..s.alphabet_size() {
        if s.p()[x] > 0.0 {
            tail += pinched_tail(&s.weighted_block(x), &rho_e, c)?;
        }
    }
    Ok(tail + (c * nu as f64 * z_size as f64).sqrt())
}

/// `Tr[ρ_XB {𝒫_{ρ_B}[ρ_XB] > c·ρ_X⊗ρ_B}] + √(ν·c/M)`, upper-bounding the
/// covering trace distance of an i.i.d. random codebook of size `M`.
pub fn covering_direct_bound(s: &CQState, c: f64, m: usize) -> Result<f64> {
    if !(c > 0.0) {
        return domain(format!("c must be > 0, got {c}"));
    }
    if m == 0 {
        return domain("codebook size must be at least 1");
    }
    let rho_b = s.marginal();
    let nu = spec_count(&rho_b)?;
    let mut tail = 0.0;
    for x in 0..s.alphabet_size() {
        let px = s.p()[x];
        if px > 0.0 {
            tail += px * pinched_tail(&s.rhos()[x], &rho_b, c)?;
        }
    }
    Ok(tail + (nu as f64 * c / m as f64).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub task: Task,
    pub eps: f64,
    pub delta: f64,
    pub c: f64,
    pub nu: usize,
    pub nu_regularized: usize,
    pub lower_bits: f64,
    pub upper_bits: f64,
    pub intermediate: BTreeMap<String, f64>,
    pub family: String,
}

fn log2_corrections(delta: f64, c: f64, eps: f64, nu: usize) -> (f64, f64, f64) {
    let nu = nu as f64;
    let pinch = (nu * nu / delta.powi(4)).log2();
    let threshold = ((1.0 + c) / (c * delta)).log2();
    let gap = ((eps + c) / (delta - c)).log2();
    (pinch, threshold, gap)
}

fn nu_pair(s: &CQState) -> Result<(usize, usize)> {
    let nu = spec_count(&s.marginal())?;
    let reg = spec_count(&s.regularize(REPORT_REGULARIZATION)?.marginal())?;
    Ok((nu, reg))
}

/// `H_h^{1−ε+3δ}(X|E) − log(ν²/δ⁴) ≤ log ℓ^ε ≤ H_h^{1−ε−2δ}(X|E) + log((1+c)/(cδ)) + log((ε+c)/(δ−c))`.
pub fn pa_theorem_bounds(s: &CQState, eps: f64, delta: f64, c: f64) -> Result<BoundReport> {
    validate_parameters(eps, delta, c)?;
    let (nu, nu_regularized) = nu_pair(s)?;
    let (eps_lo, eps_hi) = (1.0 - eps + 3.0 * delta, 1.0 - eps - 2.0 * delta);
    let h_lo = h_h_cond(s, eps_lo)? / LN_2;
    let h_hi = h_h_cond(s, eps_hi)? / LN_2;
    let (pinch, threshold, gap) = log2_corrections(delta, c, eps, nu);
    let intermediate = BTreeMap::from([
        ("h_h_lower_eps".to_string(), eps_lo),
        ("h_h_lower_bits".to_string(), h_lo),
        ("h_h_upper_eps".to_string(), eps_hi),
        ("h_h_upper_bits".to_string(), h_hi),
        ("log_nu2_over_delta4_bits".to_string(), pinch),
        ("log_1pc_over_c_delta_bits".to_string(), threshold),
        ("log_eps_pc_over_delta_mc_bits".to_string(), gap),
    ]);
    Ok(BoundReport {
        task: Task::Pa,
        eps,
        delta,
        c,
        nu,
        nu_regularized,
        lower_bits: h_lo - pinch,
        upper_bits: h_hi + threshold + gap,
        intermediate,
        family: "uniform-function".to_string(),
    })
}

/// `I_h^{1−ε−2δ}(X:B) − log((1+c)/(cδ)) − log((ε+c)/(δ−c)) ≤ log M^ε ≤ I_h^{1−ε+3δ}(X:B) + log(ν²/δ⁴)`.
pub fn covering_theorem_bounds(s: &CQState, eps: f64, delta: f64, c: f64) -> Result<BoundReport> {
    validate_parameters(eps, delta, c)?;
    let (nu, nu_regularized) = nu_pair(s)?;
    let (eps_lo, eps_hi) = (1.0 - eps - 2.0 * delta, 1.0 - eps + 3.0 * delta);
    let i_lo = i_h(s, eps_lo)? / LN_2;
    let i_hi = i_h(s, eps_hi)? / LN_2;
    let (pinch, threshold, gap) = log2_corrections(delta, c, eps, nu);
    let intermediate = BTreeMap::from([
        ("i_h_lower_eps".to_string(), eps_lo),
        ("i_h_lower_bits".to_string(), i_lo),
        ("i_h_upper_eps".to_string(), eps_hi),
        ("i_h_upper_bits".to_string(), i_hi),
        ("log_nu2_over_delta4_bits".to_string(), pinch),
        ("log_1pc_over_c_delta_bits".to_string(), threshold),
        ("log_eps_pc_over_delta_mc_bits".to_string(), gap),
    ]);
    Ok(BoundReport {
        task: Task::Covering,
        eps,
        delta,
        c,
        nu,
        nu_regularized,
        lower_bits: i_lo - threshold - gap,
        upper_bits: i_hi + pinch,
        intermediate,
        family: "iid-random-codebook".to_string(),
    })
}
