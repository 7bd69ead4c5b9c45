use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 12;

/// The Daubechies polynomial `R_N(y) = sum_{j<N} binom(N+j-1, j) y^j`
/// together with its zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct DaubechiesPoly {
    pub order: usize,
    /// Ascending coefficients, `coeffs[j] = binom(N+j-1, j)`.
    pub coeffs: Vec<f64>,
    /// The `N - 1` zeros. Conjugate pairs are stored adjacent, positive
    /// imaginary part first; real zeros have an exactly zero imaginary part.
    pub roots: Vec<Complex64>,
    /// Leading coefficient `(2N-2)! / ((N-1)!)^2`.
    pub leading: f64,
}

impl DaubechiesPoly {
    pub fn eval(&self, y: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * y + c)
    }

    pub fn eval_complex(&self, y: Complex64) -> Complex64 {
        horner(&self.coeffs, y)
    }

    /// `leading * prod (y - c_j)`.
    pub fn eval_product(&self, y: Complex64) -> Complex64 {
        self.roots
            .iter()
            .fold(Complex64::new(self.leading, 0.0), |acc, &r| acc * (y - r))
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn horner_derivative(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, (j, &c)| {
            acc * z + c * j as f64
        })
}

/// Zeros of a real polynomial with ascending coefficients, via the
/// eigenvalues of its companion matrix followed by one Newton step.
pub fn polynomial_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 {
        return Vec::new();
    }
    let lead = coeffs[degree];
    let mut roots: Vec<Complex64> = if degree == 1 {
        vec![Complex64::new(-coeffs[0] / lead, 0.0)]
    } else {
        let mut companion = DMatrix::<f64>::zeros(degree, degree);
        for i in 1..degree {
            companion[(i, i - 1)] = 1.0;
        }
        for i in 0..degree {
            companion[(i, degree - 1)] = -coeffs[i] / lead;
        }
        companion
            .complex_eigenvalues()
            .iter()
            .map(|c| Complex64::new(c.re, c.im))
            .collect()
    };
    for r in roots.iter_mut() {
        let d = horner_derivative(coeffs, *r);
        if d.norm() > 0.0 {
            *r -= horner(coeffs, *r) / d;
        }
    }
    pair_conjugates(roots)
}

/// Orders roots as (real..., then conjugate pairs) and makes each pair
/// exactly conjugate so products of paired linear factors are real.
fn pair_conjugates(mut roots: Vec<Complex64>) -> Vec<Complex64> {
    const REAL_TOL: f64 = 1e-10;
    let mut real = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for r in roots.drain(..) {
        if r.im.abs() <= REAL_TOL * (1.0 + r.re.abs()) {
            real.push(Complex64::new(r.re, 0.0));
        } else if r.im > 0.0 {
            upper.push(r);
        } else {
            lower.push(r);
        }
    }
    real.sort_by(|a, b| a.re.total_cmp(&b.re));
    upper.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut out = real;
    for u in upper {
        // nearest conjugate partner
        let (idx, _) = lower
            .iter()
            .enumerate()
            .map(|(i, l)| (i, (l.conj() - u).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("complex roots of a real polynomial come in pairs");
        let l = lower.swap_remove(idx);
        let avg = Complex64::new(0.5 * (u.re + l.re), 0.5 * (u.im - l.im));
        out.push(avg);
        out.push(avg.conj());
    }
    debug_assert!(lower.is_empty());
    out
}

pub fn make_rn(order: usize) -> Result<DaubechiesPoly> {
    if !(1..=MAX_ORDER).contains(&order) {
        return Err(Error::OrderOutOfRange(order));
    }
    let coeffs: Vec<f64> = (0..order).map(|j| binomial(order + j - 1, j)).collect();
    let roots = polynomial_roots(&coeffs);
    let leading = coeffs[order - 1];
    Ok(DaubechiesPoly {
        order,
        coeffs,
        roots,
        leading,
    })
}
