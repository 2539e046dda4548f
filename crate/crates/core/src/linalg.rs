//! Dense Hermitian linear algebra for small dimensions.
//!
//! Everything downstream (states, divergences, protocol simulation) is built
//! on [`HermitianOperator`] and the cyclic Jacobi eigensolver in
//! [`eig_herm`]. Dimensions are expected to stay below roughly 64.

use std::ops::{Add, Mul, Range, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{domain, Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Default eigenvalue merge tolerance, relative to the spectral radius.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-9;

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-13;

/// A finite-dimensional complex Hermitian matrix.
///
/// Construction symmetrizes the input as `(A + A†)/2`, so the stored entries
/// are exactly Hermitian.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    m: CMatrix,
}

impl HermitianOperator {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() == 0 || m.nrows() != m.ncols() {
            return domain(format!("operator must be square with dim >= 1, got {}x{}", m.nrows(), m.ncols()));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return domain("operator has non-finite entries");
        }
        Ok(Self::symmetrized(m))
    }

    fn symmetrized(m: CMatrix) -> Self {
        let h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        Self { m: h }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        Self::new(CMatrix::from_fn(dim, dim, f))
    }

    /// Builds an operator from row-major real entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return domain(format!("expected {} entries, got {}", dim * dim, entries.len()));
        }
        Self::from_fn(dim, |i, j| C64::new(entries[i * dim + j], 0.0))
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let d = values.len();
        Self::from_fn(d, |i, j| if i == j { C64::new(values[i], 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn identity(dim: usize) -> Self {
        Self { m: CMatrix::identity(dim, dim) }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { m: CMatrix::zeros(dim, dim) }
    }

    /// `|v⟩⟨v|` for the given (not renormalized) vector.
    pub fn outer(v: &[C64]) -> Result<Self> {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    /// `|k⟩⟨k|` in dimension `dim`.
    pub fn basis_projector(dim: usize, k: usize) -> Self {
        let mut m = CMatrix::zeros(dim, dim);
        m[(k, k)] = C64::new(1.0, 0.0);
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.m[(i, i)].re).sum()
    }

    /// `Re Tr[self · other]`, exact for Hermitian pairs.
    pub fn trace_product(&self, other: &Self) -> f64 {
        let d = self.dim();
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                acc += (self.m[(i, j)] * other.m[(j, i)]).re;
            }
        }
        acc
    }

    pub fn scale(&self, t: f64) -> Self {
        Self { m: &self.m * C64::new(t, 0.0) }
    }

    /// Rescales to unit trace.
    pub fn normalized(&self) -> Self {
        self.scale(1.0 / self.trace())
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self { m: self.m.kronecker(&other.m) }
    }

    /// `B · self · B` for Hermitian `B`.
    pub fn sandwich(&self, outer: &Self) -> Self {
        Self::symmetrized(&outer.m * &self.m * &outer.m)
    }

    /// `U · self · U†` for any square `U` of matching size.
    pub fn conjugate(&self, u: &CMatrix) -> Self {
        Self::symmetrized(u * &self.m * u.adjoint())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm of `[self, other]`.
    pub fn commutator_norm(&self, other: &Self) -> f64 {
        let c = &self.m * &other.m - &other.m * &self.m;
        c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Extracts the `dim`-sized diagonal block starting at `offset`.
    pub fn block(&self, offset: usize, dim: usize) -> Self {
        Self { m: self.m.view((offset, offset), (dim, dim)).into_owned() }
    }

    /// Direct sum of the given blocks.
    pub fn direct_sum(blocks: &[Self]) -> Result<Self> {
        let total: usize = blocks.iter().map(Self::dim).sum();
        if total == 0 {
            return domain("direct sum of no blocks");
        }
        let mut m = CMatrix::zeros(total, total);
        let mut off = 0;
        for b in blocks {
            m.view_mut((off, off), (b.dim(), b.dim())).copy_from(&b.m);
            off += b.dim();
        }
        Ok(Self { m })
    }

    pub fn eig(&self) -> Result<EigenSystem> {
        eig_herm(self)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eig()?.eigenvalues[0])
    }
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: Self) -> HermitianOperator {
        HermitianOperator { m: &self.m + &rhs.m }
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: Self) -> HermitianOperator {
        HermitianOperator { m: &self.m - &rhs.m }
    }
}

impl Mul<f64> for &HermitianOperator {
    type Output = HermitianOperator;
    fn mul(self, t: f64) -> HermitianOperator {
        self.scale(t)
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian operator.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    /// Columns are eigenvectors, in the order of `eigenvalues`.
    pub eigenvectors: CMatrix,
    pub cluster_tol: f64,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn with_cluster_tol(mut self, tol: f64) -> Self {
        self.cluster_tol = tol;
        self
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0_f64, |m, l| m.max(l.abs()))
    }

    /// Absolute cutoff derived from the relative cluster tolerance.
    pub fn abs_tol(&self) -> f64 {
        self.cluster_tol * self.spectral_radius()
    }

    /// Index ranges of eigenvalue clusters: consecutive eigenvalues whose
    /// gap is at most `cluster_tol` times the spectral radius are merged.
    pub fn clusters(&self) -> Vec<Range<usize>> {
        let tol = self.abs_tol();
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..self.dim() {
            if self.eigenvalues[i] - self.eigenvalues[i - 1] > tol {
                out.push(start..i);
                start = i;
            }
        }
        out.push(start..self.dim());
        out
    }

    /// Mean eigenvalue of each cluster, aligned with [`Self::clusters`].
    pub fn cluster_values(&self) -> Vec<f64> {
        self.clusters()
            .into_iter()
            .map(|r| {
                let n = r.len() as f64;
                self.eigenvalues[r].iter().sum::<f64>() / n
            })
            .collect()
    }

    /// `U diag(values) U†`.
    pub fn compose(&self, values: &[f64]) -> HermitianOperator {
        let mut ud = self.eigenvectors.clone();
        for (k, &v) in values.iter().enumerate() {
            ud.column_mut(k).scale_mut(v);
        }
        HermitianOperator::symmetrized(ud * self.eigenvectors.adjoint())
    }

    pub fn reconstruct(&self) -> HermitianOperator {
        self.compose(&self.eigenvalues)
    }

    /// Projector onto the span of eigenvectors whose eigenvalue satisfies `keep`.
    pub fn projector_where(&self, keep: impl Fn(f64) -> bool) -> HermitianOperator {
        let mask: Vec<f64> = self.eigenvalues.iter().map(|&l| if keep(l) { 1.0 } else { 0.0 }).collect();
        self.compose(&mask)
    }

    pub fn cluster_projector(&self, range: Range<usize>) -> HermitianOperator {
        let mask: Vec<f64> = (0..self.dim()).map(|k| if range.contains(&k) { 1.0 } else { 0.0 }).collect();
        self.compose(&mask)
    }
}

/// Eigendecomposition by cyclic complex Jacobi rotations.
///
/// Returns ascending eigenvalues. Fails with [`Error::Numerical`] if the
/// off-diagonal mass does not drop below the threshold within the sweep cap.
pub fn eig_herm(a: &HermitianOperator) -> Result<EigenSystem> {
    let n = a.dim();
    let mut m = a.m.clone();
    let mut v = CMatrix::identity(n, n);
    let scale = a.frobenius_norm();
    let mut converged = n == 1 || scale == 0.0;

    for sweep in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let abs = apq.norm();
                if abs == 0.0 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                if sweep > 4 && abs < f64::EPSILON * 1e-2 * app.abs().min(aqq.abs()) {
                    m[(p, q)] = C64::new(0.0, 0.0);
                    m[(q, p)] = C64::new(0.0, 0.0);
                    continue;
                }
                rotate(&mut m, &mut v, p, q, apq / abs, abs, app, aqq);
            }
        }
        converged = off_diagonal_norm(&m) <= OFF_DIAGONAL_TOL * scale;
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps (off-diagonal residual {:.3e})",
            off_diagonal_norm(&m)
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| m[(i, i)].re).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(EigenSystem { eigenvalues, eigenvectors, cluster_tol: DEFAULT_CLUSTER_TOL })
}

// Annihilates m[p][q] with G = diag(1, e^{-iφ}) · [[c, s], [-s, c]] acting on (p, q).
#[allow(clippy::too_many_arguments)]
fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, phase: C64, abs: f64, app: f64, aqq: f64) {
    let n = m.nrows();
    let tau = (aqq - app) / (2.0 * abs);
    let t = if tau >= 0.0 { 1.0 / (tau + (1.0 + tau * tau).sqrt()) } else { -1.0 / (-tau + (1.0 + tau * tau).sqrt()) };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let e_minus = phase.conj();
    let g_qp = -e_minus * s;
    let g_qq = e_minus * c;

    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * c + akq * g_qp;
        m[(k, q)] = akp * s + akq * g_qq;
    }
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = apk * c + aqk * g_qp.conj();
        m[(q, k)] = apk * s + aqk * g_qq.conj();
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * g_qp;
        v[(k, q)] = vkp * s + vkq * g_qq;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
}

fn off_diagonal_norm(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Applies `f` to the spectrum of `a`.
///
/// With `support_only`, eigenvalues at or below the cluster cutoff map to 0
/// and `f` is never evaluated there; use this for inverses and logarithms.
pub fn mat_func(a: &HermitianOperator, f: impl Fn(f64) -> f64, support_only: bool) -> Result<HermitianOperator> {
    let es = a.eig()?;
    mat_func_eig(&es, f, support_only)
}

pub fn mat_func_eig(es: &EigenSystem, f: impl Fn(f64) -> f64, support_only: bool) -> Result<HermitianOperator> {
    let cut = es.abs_tol();
    let mut vals = Vec::with_capacity(es.dim());
    for &l in &es.eigenvalues {
        if support_only && l <= cut {
            vals.push(0.0);
            continue;
        }
        let y = f(l);
        if !y.is_finite() {
            return domain(format!("matrix function undefined at eigenvalue {l:.6e}; restrict to the support"));
        }
        vals.push(y);
    }
    Ok(es.compose(&vals))
}

/// `Σ_{λ > 0} λ`.
pub fn positive_part_trace(a: &HermitianOperator) -> Result<f64> {
    Ok(a.eig()?.eigenvalues.iter().filter(|&&l| l > 0.0).sum())
}

/// Schatten-1 norm `Σ |λ|`.
pub fn trace_norm(a: &HermitianOperator) -> Result<f64> {
    Ok(a.eig()?.eigenvalues.iter().map(|l| l.abs()).sum())
}

/// Number of distinct eigenvalues under the cluster tolerance.
pub fn spec_count(h: &HermitianOperator) -> Result<usize> {
    Ok(h.eig()?.clusters().len())
}

/// Pinching of `l` by the spectral projectors of `h`: `Σ_i e_i l e_i`.
pub fn pinch(h: &HermitianOperator, l: &HermitianOperator) -> Result<HermitianOperator> {
    if h.dim() != l.dim() {
        return domain(format!("pinch: dimension mismatch {} vs {}", h.dim(), l.dim()));
    }
    Ok(pinch_eig(&h.eig()?, l))
}

/// Pinching with a precomputed eigensystem of the reference operator.
pub fn pinch_eig(es: &EigenSystem, l: &HermitianOperator) -> HermitianOperator {
    let u = &es.eigenvectors;
    let mut inner = u.adjoint() * &l.m * u;
    let mut label = vec![0usize; es.dim()];
    for (c, r) in es.clusters().into_iter().enumerate() {
        for k in r {
            label[k] = c;
        }
    }
    for i in 0..es.dim() {
        for j in 0..es.dim() {
            if label[i] != label[j] {
                inner[(i, j)] = C64::new(0.0, 0.0);
            }
        }
    }
    HermitianOperator::symmetrized(u * inner * u.adjoint())
}

/// Noncommutative quotient `L^{-1/2} K L^{-1/2}`.
pub fn quotient(k: &HermitianOperator, l: &HermitianOperator) -> Result<HermitianOperator> {
    if k.dim() != l.dim() {
        return domain(format!("quotient: dimension mismatch {} vs {}", k.dim(), l.dim()));
    }
    let ke = k.eig()?;
    if ke.eigenvalues[0] < -1e-10 * ke.spectral_radius().max(1.0) {
        return domain(format!("quotient numerator is not PSD (eigenvalue {:.3e})", ke.eigenvalues[0]));
    }
    let le = l.eig()?;
    let lmin = le.eigenvalues[0];
    if lmin <= le.abs_tol() || lmin <= 0.0 {
        return domain(format!(
            "quotient denominator is singular (min eigenvalue {lmin:.3e}); regularize the state first"
        ));
    }
    let inv_sqrt = mat_func_eig(&le, |x| 1.0 / x.sqrt(), false)?;
    Ok(k.sandwich(&inv_sqrt))
}

/// The projector pair `({A ≤ B}, {A > B})`.
///
/// `{A ≤ B}` keeps eigenvalues of `B − A` that are at least `-tol`, with
/// `tol` the cluster tolerance scaled by the larger Frobenius norm of the
/// two operands; `{A > B}` is its orthocomplement.
pub fn order_projectors(
    a: &HermitianOperator,
    b: &HermitianOperator,
) -> Result<(HermitianOperator, HermitianOperator)> {
    order_projectors_tol(a, b, DEFAULT_CLUSTER_TOL)
}

pub fn order_projectors_tol(
    a: &HermitianOperator,
    b: &HermitianOperator,
    cluster_tol: f64,
) -> Result<(HermitianOperator, HermitianOperator)> {
    if a.dim() != b.dim() {
        return domain(format!("projector: dimension mismatch {} vs {}", a.dim(), b.dim()));
    }
    let tol = cluster_tol * a.frobenius_norm().max(b.frobenius_norm());
    let es = (b - a).eig()?;
    let le = es.projector_where(|l| l >= -tol);
    let gt = es.projector_where(|l| l < -tol);
    Ok((le, gt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_density, random_hermitian};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn max_diff(a: &HermitianOperator, b: &HermitianOperator) -> f64 {
        (a - b).max_abs_entry()
    }

    #[test]
    fn identity_and_pauli_x_spectra() {
        let es = eig_herm(&HermitianOperator::identity(3)).unwrap();
        assert_eq!(es.eigenvalues, vec![1.0, 1.0, 1.0]);
        let x = HermitianOperator::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let es = eig_herm(&x).unwrap();
        assert!((es.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((es.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [2, 3, 6, 12] {
            let a = random_hermitian(d, &mut rng);
            let es = eig_herm(&a).unwrap();
            assert!(max_diff(&es.reconstruct(), &a) < 1e-10);
            let u = &es.eigenvectors;
            let gram = u.adjoint() * u;
            let id = CMatrix::identity(d, d);
            assert!((gram - id).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-10);
            assert!(es.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn jacobi_agrees_with_nalgebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_hermitian(7, &mut rng);
        let mut reference: Vec<f64> = a.matrix().clone().symmetric_eigenvalues().iter().copied().collect();
        reference.sort_by(f64::total_cmp);
        let ours = eig_herm(&a).unwrap().eigenvalues;
        for (x, y) in ours.iter().zip(&reference) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn matrix_functions() {
        let a = HermitianOperator::diagonal(&[1.0, 4.0]).unwrap();
        let r = mat_func(&a, f64::sqrt, false).unwrap();
        assert!(max_diff(&r, &HermitianOperator::diagonal(&[1.0, 2.0]).unwrap()) < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = random_density(4, &mut rng);
        assert!(max_diff(&mat_func(&rho, |x| x, false).unwrap(), &rho) < 1e-12);

        let s = HermitianOperator::diagonal(&[2.0, 0.0]).unwrap();
        let inv = mat_func(&s, |x| 1.0 / x, true).unwrap();
        assert!(max_diff(&inv, &HermitianOperator::diagonal(&[0.5, 0.0]).unwrap()) < 1e-14);

        assert!(matches!(mat_func(&s, |x| 1.0 / x, false), Err(Error::Domain(_))));
    }

    #[test]
    fn square_is_idempotent_on_projectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let es = random_hermitian(5, &mut rng).eig().unwrap();
        let p = es.projector_where(|l| l > 0.0);
        let p2 = mat_func(&p, |x| x * x, false).unwrap();
        assert!(max_diff(&p, &p2) < 1e-12);
    }

    #[test]
    fn positive_part_and_trace_norm() {
        let a = HermitianOperator::diagonal(&[1.0, -2.0]).unwrap();
        assert!((positive_part_trace(&a).unwrap() - 1.0).abs() < 1e-15);
        assert!((trace_norm(&a).unwrap() - 3.0).abs() < 1e-15);
        assert_eq!(positive_part_trace(&(&a - &a)).unwrap(), 0.0);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = random_density(3, &mut rng);
        assert!((trace_norm(&rho).unwrap() - 1.0).abs() < 1e-12);
        let h = random_hermitian(4, &mut rng);
        let direct: f64 = h.eig().unwrap().eigenvalues.iter().filter(|l| **l > 0.0).sum();
        assert!((positive_part_trace(&h).unwrap() - direct).abs() < 1e-10);

        let d = &HermitianOperator::basis_projector(2, 0) - &HermitianOperator::basis_projector(2, 1);
        assert!((trace_norm(&d).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn pinching_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let l = random_density(3, &mut rng);
        let out = pinch(&HermitianOperator::identity(3), &l).unwrap();
        assert!(max_diff(&out, &l) < 1e-12);

        let h = HermitianOperator::diagonal(&[1.0, 2.0]).unwrap();
        let ones = HermitianOperator::from_real(2, &[1.0; 4]).unwrap();
        let out = pinch(&h, &ones).unwrap();
        assert!(max_diff(&out, &HermitianOperator::identity(2)) < 1e-14);

        // commuting case: a function of h commutes with h
        let h = random_hermitian(4, &mut rng);
        let l = mat_func(&h, |x| x * x + 1.0, false).unwrap();
        let out = pinch(&h, &l).unwrap();
        assert!(max_diff(&out, &l) < 1e-12);

        let l = random_density(4, &mut rng);
        let out = pinch(&h, &l).unwrap();
        assert!(out.commutator_norm(&h) < 1e-10);
        assert!((out.trace() - l.trace()).abs() < 1e-12);
    }

    #[test]
    fn spec_count_examples() {
        assert_eq!(spec_count(&HermitianOperator::identity(5)).unwrap(), 1);
        assert_eq!(spec_count(&HermitianOperator::diagonal(&[1.0, 2.0, 2.0]).unwrap()).unwrap(), 2);
        let h = HermitianOperator::diagonal(&[1.0, 2.0]).unwrap();
        let h3 = h.kron(&h).kron(&h);
        let nu = spec_count(&h3).unwrap();
        assert_eq!(nu, 4);
        assert!(nu <= 4usize.pow(1));
    }

    #[test]
    fn quotient_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = random_density(3, &mut rng);
        let q = quotient(&a, &HermitianOperator::identity(3)).unwrap();
        assert!(max_diff(&q, &a) < 1e-12);

        let b = random_density(3, &mut rng);
        let q = quotient(&a, &(&a + &b)).unwrap();
        assert!(q.eig().unwrap().eigenvalues[2] <= 1.0 + 1e-10);

        let singular = HermitianOperator::diagonal(&[1.0, 0.0, 0.5]).unwrap();
        assert!(matches!(quotient(&a, &singular), Err(Error::Domain(_))));
    }

    #[test]
    fn order_projectors_are_complementary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_density(3, &mut rng);
        let b = random_density(3, &mut rng);
        let (le, gt) = order_projectors(&a, &b).unwrap();
        assert!(max_diff(&(&le + &gt), &HermitianOperator::identity(3)) < 1e-12);
        // equal operators: everything is in {A <= B}
        let (le, gt) = order_projectors(&a, &a).unwrap();
        assert!((le.trace() - 3.0).abs() < 1e-12);
        assert!(gt.trace().abs() < 1e-12);
    }
}
