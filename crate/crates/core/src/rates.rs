//! Finite-blocklength studies on classical i.i.d. pairs: exact hypothesis
//! testing via type classes against the second-order and moderate-deviation
//! predictions.

use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::Serialize;

use crate::cq::iid_extend_classical;
use crate::entropic::{inv_gaussian_cdf, moderate_rate, Direction};
use crate::error::{domain, Result};
use crate::numeric::{log_sum_exp, NeumaierSum};

/// Largest number of type classes enumerated by [`classical_dh_iid`].
pub const MAX_TYPE_CLASSES: usize = 2_000_000;

/// Which normalization of the hypothesis-testing divergence to report.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DhConvention {
    /// `−ln β`.
    #[default]
    Standard,
    /// `−ln(β/(1−ε))`, the variant carrying an extra `ln(1−ε)`.
    NormalizedByAcceptance,
}

fn type_class_count(k: usize, n: usize) -> Option<usize> {
    // C(n + k − 1, k − 1), stopping once it passes the limit
    let mut c: u128 = 1;
    for i in 1..k {
        c = c * (n + i) as u128 / i as u128;
        if c > MAX_TYPE_CLASSES as u128 {
            return None;
        }
    }
    Some(c as usize)
}

fn check_blocklength(k: usize, n: usize) -> Result<()> {
    let cap = if k <= 2 { 10_000 } else { 1_000 };
    if n == 0 || n > cap {
        return domain(format!("blocklength {n} outside 1..={cap} for alphabet size {k}"));
    }
    if type_class_count(k, n).is_none() {
        return domain(format!("alphabet size {k} at blocklength {n} exceeds {MAX_TYPE_CLASSES} type classes"));
    }
    Ok(())
}

/// The optimal (randomized) Neyman-Pearson test at blocklength `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NeymanPearson {
    /// `ln` of the accepted `q^⊗n`-mass.
    pub ln_beta: f64,
    /// Accepted `p^⊗n`-mass, equal to the requested level up to rounding.
    pub accepted: f64,
}

/// Accepts `p`-mass `accept` with classes sorted by decreasing likelihood
/// ratio, taking the boundary class fractionally.
pub fn neyman_pearson_iid(p: &[f64], q: &[f64], n: usize, accept: f64) -> Result<NeymanPearson> {
    if !(accept > 0.0 && accept <= 1.0) {
        return domain(format!("acceptance level must lie in (0,1], got {accept}"));
    }
    check_blocklength(p.len(), n)?;
    let mut classes = iid_extend_classical(p, q, n)?;
    classes.sort_by(|a, b| b.llr.total_cmp(&a.llr).then_with(|| a.counts.cmp(&b.counts)));
    let mut taken = NeumaierSum::default();
    let mut terms = Vec::new();
    for t in &classes {
        let mass = t.p_mass();
        if mass == 0.0 {
            continue;
        }
        let left = accept - taken.value();
        if left <= 0.0 {
            break;
        }
        if mass >= left {
            terms.push((left / mass).ln() + t.ln_q_mass);
            taken.add(left);
            break;
        }
        terms.push(t.ln_q_mass);
        taken.add(mass);
    }
    Ok(NeymanPearson { ln_beta: log_sum_exp(terms.iter().copied()), accepted: taken.value() })
}

fn dh_from_accept(p: &[f64], q: &[f64], n: usize, accept: f64) -> Result<f64> {
    Ok(-neyman_pearson_iid(p, q, n, accept)?.ln_beta)
}

/// Exact `D_h^ε(p^⊗n ‖ q^⊗n)` in nats.
pub fn classical_dh_iid(p: &[f64], q: &[f64], n: usize, eps: f64) -> Result<f64> {
    classical_dh_iid_with(p, q, n, eps, DhConvention::Standard)
}

pub fn classical_dh_iid_with(p: &[f64], q: &[f64], n: usize, eps: f64, convention: DhConvention) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return domain(format!("eps must lie in (0,1), got {eps}"));
    }
    let v = dh_from_accept(p, q, n, 1.0 - eps)?;
    Ok(match convention {
        DhConvention::Standard => v,
        DhConvention::NormalizedByAcceptance => v + (1.0 - eps).ln(),
    })
}

/// `(D(p‖q), V(p‖q))` in nats.
pub fn classical_rel_entropy_with_variance(p: &[f64], q: &[f64]) -> Result<(f64, f64)> {
    if p.len() != q.len() {
        return domain("p and q must have the same length");
    }
    let mut d = NeumaierSum::default();
    let mut m2 = NeumaierSum::default();
    for (&a, &b) in p.iter().zip(q) {
        if a > 0.0 {
            if !(b > 0.0) {
                return domain("support of p is not contained in the support of q");
            }
            let l = (a / b).ln();
            d.add(a * l);
            m2.add(a * l * l);
        }
    }
    let d = d.value();
    Ok((d, (m2.value() - d * d).max(0.0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    SecondOrder,
    Moderate,
}

/// One blocklength of a sweep. Bits throughout; moderate rows are per copy.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub regime: Regime,
    /// The error level at which the exact value was evaluated.
    pub eps: f64,
    /// `a_n` for moderate rows.
    pub a_n: Option<f64>,
    pub exact_bits: f64,
    pub prediction_bits: f64,
    pub residual_bits: f64,
}

fn sorted_unique(n_list: &[usize]) -> Vec<usize> {
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    ns
}

/// Rows pairing the exact `D_h^ε` with `nD + √(nV)Φ⁻¹(ε)`.
pub fn second_order_sweep(p: &[f64], q: &[f64], eps: f64, n_list: &[usize]) -> Result<Vec<SweepRow>> {
    let (d, v) = classical_rel_entropy_with_variance(p, q)?;
    let quantile = inv_gaussian_cdf(eps)?;
    sorted_unique(n_list)
        .into_par_iter()
        .map(|n| {
            let exact = classical_dh_iid(p, q, n, eps)?;
            let nf = n as f64;
            let pred = nf * d + (nf * v).sqrt() * quantile;
            Ok(SweepRow {
                n,
                regime: Regime::SecondOrder,
                eps,
                a_n: None,
                exact_bits: exact / LN_2,
                prediction_bits: pred / LN_2,
                residual_bits: (exact - pred) / LN_2,
            })
        })
        .collect()
}

/// Rows pairing the exact per-copy `(1/n)D_h` at `ε_n = e^{−n a_n²}`
/// (`Minus`) or at `1 − ε_n` (`Plus`) with `D ∓ √(2V)a_n`, for `a_n = n^{−t}`.
pub fn moderate_sweep(p: &[f64], q: &[f64], t: f64, n_list: &[usize], direction: Direction) -> Result<Vec<SweepRow>> {
    if !(t > 0.0 && t < 0.5) {
        return domain(format!("moderate exponent t must lie in (0, 1/2), got {t}"));
    }
    let (d, v) = classical_rel_entropy_with_variance(p, q)?;
    sorted_unique(n_list)
        .into_par_iter()
        .map(|n| {
            let nf = n as f64;
            let a_n = nf.powf(-t);
            let eps_n = (-nf * a_n * a_n).exp();
            // accept 1 − ε at ε = ε_n, or ε_n itself at ε = 1 − ε_n
            let (eps, accept) = match direction {
                Direction::Minus => (eps_n, 1.0 - eps_n),
                Direction::Plus => (1.0 - eps_n, eps_n),
            };
            let exact = dh_from_accept(p, q, n, accept)? / nf;
            let pred = moderate_rate(d, v, a_n, direction)?;
            Ok(SweepRow {
                n,
                regime: Regime::Moderate,
                eps,
                a_n: Some(a_n),
                exact_bits: exact / LN_2,
                prediction_bits: pred / LN_2,
                residual_bits: (exact - pred) / LN_2,
            })
        })
        .collect()
}
