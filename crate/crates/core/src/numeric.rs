//! Scalar numerics: compensated and order-fixed summation, and accurate
//! log-probabilities for type classes.

use std::f64::consts::PI;

/// Neumaier's compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::default();
        iter.into_iter().for_each(|x| s.add(x));
        s
    }
}

/// Pairwise summation with a fixed split, so the result depends only on the
/// order of `xs`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if xs.len() <= LEAF {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// `ln Σ exp(x_i)` over finite and `-∞` entries.
pub fn log_sum_exp(xs: impl IntoIterator<Item = f64> + Clone) -> f64 {
    let m = xs.clone().into_iter().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    let s: NeumaierSum = xs.into_iter().map(|x| (x - m).exp()).collect();
    m + s.value().ln()
}

/// `ln n! − (n ln n − n + ½ ln 2πn)`.
pub fn stirling_error(n: usize) -> f64 {
    if n <= 15 {
        let lnfact: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
        let x = n as f64;
        return lnfact - (x * x.ln() - x + 0.5 * (2.0 * PI * x).ln());
    }
    let x = n as f64;
    let x2 = x * x;
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    (S0 - (S1 - (S2 - (S3 - S4 / x2) / x2) / x2) / x2) / x
}

/// Deviance term `x ln(x/m) + m − x`, evaluated without cancellation.
pub fn bd0(x: f64, m: f64) -> f64 {
    if x == 0.0 {
        return m;
    }
    if (x - m).abs() < 0.1 * (x + m) {
        let v = (x - m) / (x + m);
        let mut s = (x - m) * v;
        let mut ej = 2.0 * x * v;
        let v2 = v * v;
        for j in 1..1000 {
            ej *= v2;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / m).ln() + m - x
    }
}

/// `ln` of the multinomial probability of `counts` under `probs`,
/// accurate to a few ulps of the (small) result via the saddle-point form.
pub fn ln_multinomial_mass(counts: &[usize], probs: &[f64]) -> f64 {
    let n: usize = counts.iter().sum();
    let nf = n as f64;
    let mut dev = NeumaierSum::default();
    let mut corr = NeumaierSum::default();
    for (&k, &p) in counts.iter().zip(probs) {
        if p == 0.0 {
            if k > 0 {
                return f64::NEG_INFINITY;
            }
            continue;
        }
        dev.add(bd0(k as f64, nf * p));
        if k > 0 {
            corr.add(0.5 * (2.0 * PI * k as f64).ln() + stirling_error(k));
        }
    }
    0.5 * (2.0 * PI * nf).ln() + stirling_error(n) - corr.value() - dev.value()
}
