//! Divergences between a state `ρ` and a PSD operator `σ`.
//!
//! All values are in nats. `σ` need not be normalized, so scaling identities
//! such as `D(ρ‖λσ) = D(ρ‖σ) − ln λ` hold exactly.

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::linalg::{order_projectors, positive_part_trace, EigenSystem, HermitianOperator};

const DENSITY_TOL: f64 = 1e-10;
const SUPPORT_TOL: f64 = 1e-8;
const COMMUTING_TOL: f64 = 1e-10;

/// Default number of log-spaced grid points for non-commuting `D_s`.
pub const DEFAULT_DS_GRID: usize = 2048;

/// An ordered pair `(ρ, σ)` with cached spectral data.
#[derive(Clone, Debug)]
pub struct DivergencePair {
    rho: HermitianOperator,
    sigma: HermitianOperator,
    rho_eig: EigenSystem,
    sigma_eig: EigenSystem,
    commuting: bool,
}

impl DivergencePair {
    /// `ρ` must be a density operator and `σ` PSD.
    pub fn new(rho: HermitianOperator, sigma: HermitianOperator) -> Result<Self> {
        let pair = Self::psd(rho, sigma)?;
        let tr = pair.rho.trace();
        if (tr - 1.0).abs() > DENSITY_TOL {
            return domain(format!("first argument must have unit trace, got {tr}"));
        }
        Ok(pair)
    }

    /// Like [`Self::new`] but allows any PSD first argument (used by `D_2*`).
    pub fn psd(rho: HermitianOperator, sigma: HermitianOperator) -> Result<Self> {
        if rho.dim() != sigma.dim() {
            return domain(format!("dimension mismatch: {} vs {}", rho.dim(), sigma.dim()));
        }
        let rho_eig = rho.eig()?;
        let sigma_eig = sigma.eig()?;
        for (name, es) in [("rho", &rho_eig), ("sigma", &sigma_eig)] {
            let min = es.eigenvalues[0];
            if min < -DENSITY_TOL * es.spectral_radius().max(1.0) {
                return domain(format!("{name} is not PSD: eigenvalue {min:.3e}"));
            }
        }
        let commuting = rho.commutator_norm(&sigma) <= COMMUTING_TOL;
        Ok(Self { rho, sigma, rho_eig, sigma_eig, commuting })
    }

    pub fn rho(&self) -> &HermitianOperator {
        &self.rho
    }

    pub fn sigma(&self) -> &HermitianOperator {
        &self.sigma
    }

    pub fn commuting(&self) -> bool {
        self.commuting
    }

    /// Same `ρ`, second argument scaled by `lambda`.
    pub fn scaled_sigma(&self, lambda: f64) -> Result<Self> {
        Self::psd(self.rho.clone(), self.sigma.scale(lambda))
    }

    /// Whether `supp ρ ⊆ supp σ` (checked as `‖(1 − P_σ) P_ρ‖ ≤ 1e-8`).
    pub fn support_contained(&self) -> bool {
        let p_rho = support_projector(&self.rho_eig);
        let p_sigma = support_projector(&self.sigma_eig);
        let leak = (&HermitianOperator::identity(self.rho.dim()) - &p_sigma).matrix() * p_rho.matrix();
        leak.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() <= SUPPORT_TOL
    }

    fn require_support(&self) -> Result<()> {
        if self.support_contained() {
            Ok(())
        } else {
            domain("support of rho is not contained in the support of sigma")
        }
    }

    /// Eigenvalue pairs `(r_i, s_i)` in a common eigenbasis. `None` unless
    /// the pair commutes.
    pub fn joint_spectrum(&self) -> Option<Vec<(f64, f64)>> {
        if !self.commuting {
            return None;
        }
        let u = &self.sigma_eig.eigenvectors;
        let inner = u.adjoint() * self.rho.matrix() * u;
        let values = self.sigma_eig.cluster_values();
        let mut out = Vec::with_capacity(self.rho.dim());
        for (range, s) in self.sigma_eig.clusters().into_iter().zip(values) {
            let k = range.len();
            let sub = HermitianOperator::from_fn(k, |i, j| inner[(range.start + i, range.start + j)]).ok()?;
            for r in sub.eig().ok()?.eigenvalues {
                out.push((r, s));
            }
        }
        Some(out)
    }
}

fn support_projector(es: &EigenSystem) -> HermitianOperator {
    let cut = es.abs_tol();
    es.projector_where(|l| l > cut)
}

/// Result of an information-spectrum evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumDivergence {
    /// `sup log c` in nats; `-inf` when no `c > 0` is feasible.
    pub value: f64,
    /// Certified bracket `[lo, hi]` on the supremum; degenerate when exact.
    pub bracket: (f64, f64),
    pub exact: bool,
    pub feasible: bool,
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        domain(format!("eps must lie in (0,1), got {eps}"))
    }
}

/// Information-spectrum divergence `sup { ln c : Tr[ρ {ρ ≤ cσ}] ≤ ε }`.
///
/// Exact on commuting pairs (step function over sorted eigenvalue ratios,
/// returning the left-limit at the critical ratio). Otherwise a scan over
/// the pencil's generalized eigenvalues plus `grid` log-spaced points,
/// refined by bisection.
pub fn d_s(pair: &DivergencePair, eps: f64, grid: usize) -> Result<SpectrumDivergence> {
    check_eps(eps)?;
    pair.require_support()?;
    match pair.joint_spectrum() {
        Some(js) => Ok(d_s_commuting(&js, eps)),
        None => d_s_scan(pair, eps, grid.max(2)),
    }
}

fn d_s_commuting(js: &[(f64, f64)], eps: f64) -> SpectrumDivergence {
    // ρ is PSD and supported inside σ, so r > 0 implies s > 0
    let mut ratios: Vec<(f64, f64)> =
        js.iter().filter(|(r, s)| *r > 0.0 && *s > 0.0).map(|(r, s)| (r / s, *r)).collect();
    ratios.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut cum = 0.0;
    for (t, mass) in ratios {
        cum += mass;
        if cum > eps {
            let v = t.ln();
            return SpectrumDivergence { value: v, bracket: (v, v), exact: true, feasible: true };
        }
    }
    // all retained mass fits under ε: every c is feasible
    SpectrumDivergence { value: f64::INFINITY, bracket: (f64::INFINITY, f64::INFINITY), exact: true, feasible: true }
}

/// `Tr[ρ {ρ ≤ cσ}]`.
pub fn spectrum_mass(pair: &DivergencePair, c: f64) -> Result<f64> {
    let (le, _) = order_projectors(&pair.rho, &pair.sigma.scale(c))?;
    Ok(pair.rho.trace_product(&le))
}

fn d_s_scan(pair: &DivergencePair, eps: f64, grid: usize) -> Result<SpectrumDivergence> {
    let s = crate::linalg::mat_func_eig(&pair.sigma_eig, |x| 1.0 / x.sqrt(), true)?;
    let pencil = pair.rho.sandwich(&s).eig()?;
    let cut = pencil.abs_tol();
    let gen: Vec<f64> = pencil.eigenvalues.iter().copied().filter(|&l| l > cut).collect();
    let (lo, hi) = match (gen.first(), gen.last()) {
        (Some(a), Some(b)) => (a / 4.0, b * 4.0),
        _ => return domain("first argument has no weight on the support of sigma"),
    };
    let (llo, lhi) = (lo.ln(), hi.ln());
    let mut points: Vec<f64> = (0..grid).map(|k| (llo + (lhi - llo) * k as f64 / (grid - 1) as f64).exp()).collect();
    for &g in &gen {
        points.extend([g * (1.0 - 1e-9), g, g * (1.0 + 1e-9)]);
    }
    points.sort_by(f64::total_cmp);
    points.dedup();

    let masses: Vec<f64> = points.par_iter().map(|&c| spectrum_mass(pair, c)).collect::<Result<_>>()?;
    let Some(best) = masses.iter().rposition(|&m| m <= eps) else {
        return Ok(SpectrumDivergence {
            value: f64::NEG_INFINITY,
            bracket: (f64::NEG_INFINITY, llo),
            exact: false,
            feasible: false,
        });
    };
    if best + 1 == points.len() {
        return Err(Error::Numerical("information-spectrum scan never became infeasible".into()));
    }
    let (mut a, mut b) = (points[best].ln(), points[best + 1].ln());
    for _ in 0..60 {
        let mid = 0.5 * (a + b);
        if spectrum_mass(pair, mid.exp())? <= eps {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(SpectrumDivergence { value: a, bracket: (a, b), exact: false, feasible: true })
}

/// The Lagrange dual `g(μ) = μ(1−ε) − Tr[(μρ − σ)₊]` of the hypothesis test.
pub fn hypothesis_dual(pair: &DivergencePair, eps: f64, mu: f64) -> Result<f64> {
    let diff = &pair.rho.scale(mu) - &pair.sigma;
    Ok(mu * (1.0 - eps) - positive_part_trace(&diff)?)
}

const MAX_DOUBLINGS: usize = 60;
const MAX_HALVINGS: usize = 200;

/// Hypothesis-testing divergence
/// `−ln min { Tr[σT] : Tr[ρT] ≥ 1−ε, 0 ≤ T ≤ 1 }`,
/// evaluated as `−ln max_μ g(μ)` by golden-section search on the concave dual.
pub fn d_h(pair: &DivergencePair, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let g = |mu: f64| hypothesis_dual(pair, eps, mu);
    let beta = maximize_concave(g)?;
    if beta <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(-beta.ln())
}

fn maximize_concave(g: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let mut mu = 1.0;
    let mut gm = g(mu)?;
    let up = g(2.0 * mu)?;
    let (mut a, mut b);
    if up > gm {
        let mut prev = (mu, gm);
        let mut cur = (2.0 * mu, up);
        let mut steps = 1;
        loop {
            let next = (cur.0 * 2.0, g(cur.0 * 2.0)?);
            if next.1 <= cur.1 {
                a = prev.0;
                b = next.0;
                break;
            }
            steps += 1;
            if steps > MAX_DOUBLINGS {
                return Err(Error::Numerical(format!(
                    "hypothesis-test dual bracket not found after {MAX_DOUBLINGS} doublings"
                )));
            }
            prev = cur;
            cur = next;
        }
    } else {
        let mut halvings = 0;
        loop {
            let lower = g(mu / 2.0)?;
            if lower <= gm {
                a = mu / 2.0;
                b = 2.0 * mu;
                break;
            }
            halvings += 1;
            if halvings > MAX_HALVINGS {
                // the dual keeps improving towards μ = 0, where g(0) = 0
                return Ok(lower.max(0.0));
            }
            mu /= 2.0;
            gm = lower;
        }
    }

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut g1 = g(x1)?;
    let mut g2 = g(x2)?;
    let mut best = g1.max(g2).max(gm);
    for _ in 0..200 {
        if b - a <= 1e-15 * b {
            break;
        }
        if g1 < g2 {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + inv_phi * (b - a);
            g2 = g(x2)?;
        } else {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - inv_phi * (b - a);
            g1 = g(x1)?;
        }
        best = best.max(g1).max(g2);
    }
    Ok(best)
}

/// Collision divergence `ln Tr[(σ^{-1/4} ρ σ^{-1/4})²]`.
pub fn d_2_star(pair: &DivergencePair) -> Result<f64> {
    pair.require_support()?;
    let s = crate::linalg::mat_func_eig(&pair.sigma_eig, |x| x.powf(-0.25), true)?;
    let x = pair.rho.sandwich(&s);
    Ok(x.frobenius_norm().powi(2).ln())
}

struct LogTerms {
    /// `Σ λ ln λ`
    entropy_term: f64,
    /// `Σ λ ln² λ`
    entropy_sq_term: f64,
    /// `Tr[ρ ln σ]`
    cross: f64,
    /// `Tr[(ρ ln ρ) ln σ]`
    cross_mixed: f64,
    /// `Tr[ρ ln² σ]`
    cross_sq: f64,
}

fn log_terms(pair: &DivergencePair) -> Result<LogTerms> {
    pair.require_support()?;
    let rho_vals = &pair.rho_eig.eigenvalues;
    let xlogx = |l: f64| if l > 0.0 { l * l.ln() } else { 0.0 };
    let entropy_term = rho_vals.iter().map(|&l| xlogx(l)).sum();
    let entropy_sq_term = rho_vals.iter().map(|&l| if l > 0.0 { l * l.ln().powi(2) } else { 0.0 }).sum();
    let rho_log_rho = pair.rho_eig.compose(&rho_vals.iter().map(|&l| xlogx(l)).collect::<Vec<_>>());
    let log_sigma = crate::linalg::mat_func_eig(&pair.sigma_eig, f64::ln, true)?;
    let log_sigma_sq = crate::linalg::mat_func_eig(&pair.sigma_eig, |x| x.ln().powi(2), true)?;
    Ok(LogTerms {
        entropy_term,
        entropy_sq_term,
        cross: pair.rho.trace_product(&log_sigma),
        cross_mixed: rho_log_rho.trace_product(&log_sigma),
        cross_sq: pair.rho.trace_product(&log_sigma_sq),
    })
}

/// Relative entropy `Tr[ρ (ln ρ − ln σ)]`.
pub fn rel_entropy(pair: &DivergencePair) -> Result<f64> {
    let t = log_terms(pair)?;
    Ok(t.entropy_term - t.cross)
}

/// Relative entropy variance `Tr[ρ (ln ρ − ln σ)²] − D(ρ‖σ)²`.
pub fn rel_entropy_variance(pair: &DivergencePair) -> Result<f64> {
    let t = log_terms(pair)?;
    let d = t.entropy_term - t.cross;
    let second = t.entropy_sq_term - 2.0 * t.cross_mixed + t.cross_sq;
    Ok((second - d * d).max(0.0))
}

/// Relative entropy together with its variance, sharing one decomposition.
pub fn rel_entropy_with_variance(pair: &DivergencePair) -> Result<(f64, f64)> {
    let t = log_terms(pair)?;
    let d = t.entropy_term - t.cross;
    let second = t.entropy_sq_term - 2.0 * t.cross_mixed + t.cross_sq;
    Ok((d, (second - d * d).max(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_density, random_psd};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag(v: &[f64]) -> HermitianOperator {
        HermitianOperator::diagonal(v).unwrap()
    }

    fn classical(p: &[f64], q: &[f64]) -> DivergencePair {
        DivergencePair::new(diag(p), diag(q)).unwrap()
    }

    #[test]
    fn d_s_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = random_density(3, &mut rng);
        let pair = DivergencePair::new(rho.clone(), rho).unwrap();
        for eps in [0.1, 0.5, 0.9] {
            assert!(d_s(&pair, eps, DEFAULT_DS_GRID).unwrap().value.abs() < 1e-9);
        }

        // feasible set excludes the mass-2/3 ratio
        let pair = classical(&[1.0 / 3.0, 2.0 / 3.0], &[0.5, 0.5]);
        let v = d_s(&pair, 0.4, DEFAULT_DS_GRID).unwrap();
        assert!(v.exact);
        assert!((v.value - (4.0f64 / 3.0).ln()).abs() < 1e-12);

        let scaled = pair.scaled_sigma(2.0).unwrap();
        let w = d_s(&scaled, 0.4, DEFAULT_DS_GRID).unwrap();
        assert!((w.value - (v.value - 2f64.ln())).abs() < 1e-9);
    }

    #[test]
    fn d_s_brute_force_thresholds() {
        // enumerate every threshold position of a 3-outcome pair
        let p = [0.2, 0.5, 0.3];
        let q = [0.4, 0.25, 0.35];
        let pair = classical(&p, &q);
        for eps in [0.05, 0.2, 0.45, 0.7, 0.95] {
            let mut best = f64::NEG_INFINITY;
            let mut cands: Vec<f64> = p.iter().zip(&q).map(|(a, b)| a / b).collect();
            cands.sort_by(f64::total_cmp);
            for &c in &cands {
                // just below c the event excludes ratio c itself
                let below: f64 = p.iter().zip(&q).filter(|(a, b)| *a / *b < c).map(|(a, _)| a).sum();
                if below <= eps {
                    best = best.max(c.ln());
                }
            }
            let v = d_s(&pair, eps, DEFAULT_DS_GRID).unwrap().value;
            assert!((v - best).abs() < 1e-12, "eps={eps}: {v} vs {best}");
        }
    }

    #[test]
    fn d_s_scan_brackets_commuting_value() {
        // rotate a commuting pair slightly off-basis to force the scan path,
        // then compare with the exact value of the unrotated pair
        let pair = classical(&[0.2, 0.5, 0.3], &[0.4, 0.25, 0.35]);
        let exact = d_s(&pair, 0.3, DEFAULT_DS_GRID).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let noise = random_density(3, &mut rng).scale(1e-7);
        let rho = (&pair.rho + &noise).normalized();
        let noisy = DivergencePair::new(rho, pair.sigma.clone()).unwrap();
        assert!(!noisy.commuting());
        let v = d_s(&noisy, 0.3, DEFAULT_DS_GRID).unwrap();
        assert!(!v.exact);
        assert!(v.bracket.1 - v.bracket.0 < 1e-9);
        assert!((v.value - exact.value).abs() < 1e-5, "{} vs {}", v.value, exact.value);
    }

    #[test]
    fn d_h_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = random_density(3, &mut rng);
        let pair = DivergencePair::new(rho.clone(), rho).unwrap();
        for eps in [0.1, 0.3, 0.7] {
            assert!((d_h(&pair, eps).unwrap() + (1.0 - eps).ln()).abs() < 1e-9);
        }

        let pure = HermitianOperator::basis_projector(2, 0);
        let pair = DivergencePair::new(pure, HermitianOperator::identity(2).scale(0.5)).unwrap();
        assert!((d_h(&pair, 0.5).unwrap() - 2.0 * 2f64.ln()).abs() < 1e-9);

        let orth =
            DivergencePair::new(HermitianOperator::basis_projector(2, 0), HermitianOperator::basis_projector(2, 1))
                .unwrap();
        assert_eq!(d_h(&orth, 0.2).unwrap(), f64::INFINITY);
        assert!(d_h(&orth, 1.0).is_err());
    }

    // Neyman-Pearson primal oracle for qubits: the lower boundary of the
    // achievable (Tr ρT, Tr σT) region is traced by projectors {μρ − σ > 0}
    // and their linear interpolation (randomized boundary tests).
    fn qubit_primal_oracle(rho: &HermitianOperator, sigma: &HermitianOperator, eps: f64) -> f64 {
        let target = 1.0 - eps;
        let mut pts = vec![(0.0, 0.0)];
        let n = 200_000;
        for k in 0..=n {
            let mu = (-12.0 + 24.0 * k as f64 / n as f64).exp();
            let es = (&rho.scale(mu) - sigma).eig().unwrap();
            let p = es.projector_where(|l| l > 0.0);
            pts.push((rho.trace_product(&p), sigma.trace_product(&p)));
        }
        pts.push((1.0, sigma.trace()));
        pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut best = f64::INFINITY;
        for w in pts.windows(2) {
            let ((a0, b0), (a1, b1)) = (w[0], w[1]);
            if a0 <= target && target <= a1 {
                let beta = if a1 > a0 { b0 + (b1 - b0) * (target - a0) / (a1 - a0) } else { b0.min(b1) };
                best = best.min(beta);
            }
        }
        -best.ln()
    }

    #[test]
    fn d_h_matches_primal_oracle_on_noncommuting_qubits() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..3 {
            let rho = random_density(2, &mut rng);
            let sigma = random_density(2, &mut rng);
            let pair = DivergencePair::new(rho.clone(), sigma.clone()).unwrap();
            assert!(!pair.commuting());
            let ours = d_h(&pair, 0.3).unwrap();
            let oracle = qubit_primal_oracle(&rho, &sigma, 0.3);
            assert!((ours - oracle).abs() < 1e-6, "{ours} vs {oracle}");
        }
    }

    #[test]
    fn d_2_star_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rho = random_density(3, &mut rng);
        let pair = DivergencePair::new(rho.clone(), rho.clone()).unwrap();
        assert!(d_2_star(&pair).unwrap().abs() < 1e-10);

        let pair = classical(&[0.5, 0.5], &[0.25, 0.75]);
        assert!((d_2_star(&pair).unwrap() - (4.0f64 / 3.0).ln()).abs() < 1e-12);

        let a = random_psd(3, &mut rng);
        let s = random_density(3, &mut rng);
        let base = d_2_star(&DivergencePair::psd(a.clone(), s.clone()).unwrap()).unwrap();
        let scaled = d_2_star(&DivergencePair::psd(a.scale(3.0), s).unwrap()).unwrap();
        assert!((scaled - base - 2.0 * 3f64.ln()).abs() < 1e-10);

        let bad = DivergencePair::new(HermitianOperator::basis_projector(2, 0), diag(&[0.0, 1.0])).unwrap();
        assert!(d_2_star(&bad).is_err());
    }

    #[test]
    fn relative_entropy_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = random_density(3, &mut rng);
        let same = DivergencePair::new(rho.clone(), rho.clone()).unwrap();
        assert!(rel_entropy(&same).unwrap().abs() < 1e-12);
        assert!(rel_entropy_variance(&same).unwrap().abs() < 1e-12);

        let pair = classical(&[0.5, 0.5], &[0.25, 0.75]);
        let expected = 0.5 * 2f64.ln() + 0.5 * (2.0f64 / 3.0).ln();
        assert!((rel_entropy(&pair).unwrap() - expected).abs() < 1e-14);
        let llr = [2f64.ln(), (2.0f64 / 3.0).ln()];
        let second = 0.5 * llr[0].powi(2) + 0.5 * llr[1].powi(2);
        assert!((rel_entropy_variance(&pair).unwrap() - (second - expected * expected)).abs() < 1e-14);

        let sigma = random_density(3, &mut rng);
        let pair = DivergencePair::new(rho, sigma).unwrap();
        let scaled = pair.scaled_sigma(3.0).unwrap();
        assert!((rel_entropy(&scaled).unwrap() - rel_entropy(&pair).unwrap() + 3f64.ln()).abs() < 1e-10);
        assert!((rel_entropy_variance(&scaled).unwrap() - rel_entropy_variance(&pair).unwrap()).abs() < 1e-9);

        let bad = DivergencePair::new(diag(&[0.5, 0.5]), diag(&[1.0, 0.0])).unwrap();
        assert!(rel_entropy(&bad).is_err());
    }

    #[test]
    fn dual_is_midpoint_concave() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let pair = DivergencePair::new(random_density(3, &mut rng), random_density(3, &mut rng)).unwrap();
        for (a, b) in [(0.1, 0.9), (0.5, 3.0), (2.0, 7.0)] {
            let ga = hypothesis_dual(&pair, 0.2, a).unwrap();
            let gb = hypothesis_dual(&pair, 0.2, b).unwrap();
            let gm = hypothesis_dual(&pair, 0.2, 0.5 * (a + b)).unwrap();
            assert!(gm >= 0.5 * (ga + gb) - 1e-9);
        }
    }
}
