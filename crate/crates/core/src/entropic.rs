//! Entropic quantities of c-q states and the asymptotic rate formulas built
//! from them.

use std::f64::consts::{PI, SQRT_2};

use crate::cq::CQState;
use crate::divergence::{d_h, rel_entropy_with_variance, DivergencePair};
use crate::error::{domain, Result};

/// `(ρ_XB, ρ_X⊗ρ_B)`.
pub fn mutual_info_pair(s: &CQState) -> Result<DivergencePair> {
    let e = s.embed();
    DivergencePair::new(e.rho_xb, e.rho_x_tensor_rho_b)
}

/// `(ρ_XB, 1_X⊗ρ_B)`.
pub fn conditional_pair(s: &CQState) -> Result<DivergencePair> {
    let e = s.embed();
    DivergencePair::new(e.rho_xb, e.one_x_tensor_rho_b)
}

/// Hypothesis-testing information `D_h^ε(ρ_XB ‖ ρ_X⊗ρ_B)` (nats).
pub fn i_h(s: &CQState, eps: f64) -> Result<f64> {
    d_h(&mutual_info_pair(s)?, eps)
}

/// Conditional hypothesis-testing entropy `−D_h^ε(ρ_XB ‖ 1_X⊗ρ_B)` (nats).
pub fn h_h_cond(s: &CQState, eps: f64) -> Result<f64> {
    Ok(-d_h(&conditional_pair(s)?, eps)?)
}

/// `(I(X:B), V(X:B))` in nats and nats².
pub fn mutual_info_with_variance(s: &CQState) -> Result<(f64, f64)> {
    rel_entropy_with_variance(&mutual_info_pair(s)?)
}

/// `(H(X|B), V(X|B))` in nats and nats².
pub fn cond_entropy_with_variance(s: &CQState) -> Result<(f64, f64)> {
    let (d, v) = rel_entropy_with_variance(&conditional_pair(s)?)?;
    Ok((-d, v))
}

/// Standard normal CDF.
pub fn gaussian_cdf(u: f64) -> f64 {
    0.5 * libm::erfc(-u / SQRT_2)
}

fn gaussian_pdf(u: f64) -> f64 {
    (-0.5 * u * u).exp() / (2.0 * PI).sqrt()
}

/// Acklam's rational approximation (relative error about 1e-9).
fn acklam(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e1,
        2.209460984245205e2,
        -2.759285104469687e2,
        1.38357751867269e2,
        -3.066479806614716e1,
        2.506628277459239,
    ];
    const B: [f64; 5] =
        [-5.447609879822406e1, 1.615858368580409e2, -1.556989798598866e2, 6.680131188771972e1, -1.328068155288572e1];
    const C: [f64; 6] = [
        -7.784894002430293e-3,
        -3.223964580411365e-1,
        -2.400758277161838,
        -2.549732539343734,
        4.374664141464968,
        2.938163982698783,
    ];
    const D: [f64; 4] = [7.784695709041462e-3, 3.224671290700398e-1, 2.445134137142996, 3.754408661907416];
    const LOW: f64 = 0.02425;

    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    if p < LOW {
        tail((-2.0 * p.ln()).sqrt())
    } else if p > 1.0 - LOW {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

/// `Φ⁻¹(ε)`, refined by Newton steps on `Φ` until `|Φ(u) − ε| ≤ 1e-12`.
pub fn inv_gaussian_cdf(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return domain(format!("quantile level must lie in (0,1), got {eps}"));
    }
    if eps == 0.5 {
        return Ok(0.0);
    }
    let mut u = acklam(eps);
    for _ in 0..50 {
        let r = gaussian_cdf(u) - eps;
        if r.abs() <= 1e-12 * eps.min(1.0 - eps).max(1e-300) || r == 0.0 {
            break;
        }
        u -= r / gaussian_pdf(u);
    }
    Ok(u)
}

/// `nD + √(nV)·Φ⁻¹(ε)` together with its ingredients.
///
/// Units follow the inputs: pass `D` in bits and `V` in bits² to get bits.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct RateExpansion {
    pub first_order: f64,
    pub second_order_coeff: f64,
    pub epsilon: f64,
    pub n: u64,
    pub value_at_n: f64,
}

pub fn second_order_value(d: f64, v: f64, eps: f64, n: u64) -> Result<RateExpansion> {
    if !(v >= 0.0) {
        return domain(format!("variance must be nonnegative, got {v}"));
    }
    if n == 0 {
        return domain("blocklength must be positive");
    }
    let coeff = v.sqrt() * inv_gaussian_cdf(eps)?;
    let nf = n as f64;
    Ok(RateExpansion {
        first_order: d,
        second_order_coeff: coeff,
        epsilon: eps,
        n,
        value_at_n: nf * d + nf.sqrt() * coeff,
    })
}

/// The privacy-amplification expansion `nH + √(nV)Φ⁻¹(ε)`.
pub fn pa_second_order(h: f64, v: f64, eps: f64, n: u64) -> Result<RateExpansion> {
    second_order_value(h, v, eps, n)
}

/// The soft-covering expansion `nI − √(nV)Φ⁻¹(ε)`, written as the generic
/// expansion at `1 − ε`.
pub fn covering_second_order(i: f64, v: f64, eps: f64, n: u64) -> Result<RateExpansion> {
    let mut r = second_order_value(i, v, 1.0 - eps, n)?;
    r.epsilon = eps;
    Ok(r)
}

/// Sign of the moderate-deviation correction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Plus,
    Minus,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Plus => 1.0,
            Direction::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Direction::Plus => Direction::Minus,
            Direction::Minus => Direction::Plus,
        }
    }
}

/// Per-copy moderate-deviation rate `D ± √(2V)·a_n`.
pub fn moderate_rate(d: f64, v: f64, a_n: f64, direction: Direction) -> Result<f64> {
    if !(a_n > 0.0) {
        return domain(format!("moderate sequence value must be positive, got {a_n}"));
    }
    if !(v >= 0.0) {
        return domain(format!("variance must be nonnegative, got {v}"));
    }
    Ok(d + direction.sign() * (2.0 * v).sqrt() * a_n)
}
