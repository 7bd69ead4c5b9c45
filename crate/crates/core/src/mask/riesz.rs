use num_complex::Complex64;

use super::key::KeyPoly;
use super::level::LevelParams;
use super::poly::binomial;
use crate::error::{Error, Result};

/// Refinement mask `M = M1 * M2` of one level. All coefficient vectors are
/// indexed by the power of `z^{-1}`, i.e. `M(z) = sum_n m[n] z^{-n}` up to a
/// pure delay, which is the usual filter-tap order.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    pub params: LevelParams,
    /// `(1 + x0 z^{-1})^N / (1 + x0)^N`, `N + 1` taps.
    pub m1: Vec<f64>,
    /// Minimum-phase Riesz factor of `Q/2`, `N` taps.
    pub m2: Vec<f64>,
    /// Linear convolution of `m1` and `m2`, `2N` taps.
    pub m: Vec<f64>,
    /// Low-pass analysis filter `h = 2 m`.
    pub h: Vec<f64>,
    /// Largest imaginary part discarded while expanding the root product.
    pub imag_residual: f64,
}

pub fn first_factor(params: &LevelParams, order: usize) -> Vec<f64> {
    let x0 = params.x0;
    let norm = (1.0 + x0).powi(-(order as i32));
    (0..=order)
        .map(|j| binomial(order, j) * x0.powi(j as i32) * norm)
        .collect()
}

/// The root of `z^2 - 2 c z + 1` inside the unit disk.
fn inner_root(c: Complex64) -> Complex64 {
    // sqrt(c-1) sqrt(c+1) instead of sqrt(c^2-1): no overflow for huge c and
    // a consistent branch for real c < -1.
    let s = (c - 1.0).sqrt() * (c + 1.0).sqrt();
    let a = c + s;
    let b = c - s;
    let big = if a.norm() >= b.norm() { a } else { b };
    1.0 / big
}

pub(crate) fn riesz_with_residual(key: &KeyPoly) -> Result<(Vec<f64>, f64)> {
    let cos_roots = &key.roots_cos;
    let mut inner = Vec::with_capacity(cos_roots.len());
    let mut i = 0;
    while i < cos_roots.len() {
        let c = cos_roots[i];
        if c.im == 0.0 {
            inner.push(inner_root(c));
            i += 1;
        } else {
            // conjugate pairs are adjacent; keep the inner roots exactly paired
            let r = inner_root(c);
            inner.push(r);
            inner.push(r.conj());
            i += 2;
        }
    }
    for (index, r) in inner.iter().enumerate() {
        let modulus = r.norm();
        if (1.0 - modulus).abs() <= 1e-12 {
            return Err(Error::DegenerateFactor { index, modulus });
        }
    }

    // prod (1 - r z^{-1}), ascending powers of z^{-1}
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for &r in &inner {
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
        for (j, &p) in poly.iter().enumerate() {
            next[j] += p;
            next[j + 1] -= r * p;
        }
        poly = next;
    }
    let at_one: Complex64 = poly.iter().sum();
    let q0 = key.eval(0.0);
    let constant = (0.5 * q0).sqrt() / at_one.re;
    let residual = poly
        .iter()
        .map(|p| (p.im * constant).abs())
        .fold(0.0, f64::max);
    Ok((poly.iter().map(|p| p.re * constant).collect(), residual))
}

/// Minimum-phase factor `M2` with `|M2(e^{iw})|^2 = Q(sin^2(w/2)) / 2` and
/// `M2(1) > 0`.
pub fn riesz_factorize(key: &KeyPoly) -> Result<Vec<f64>> {
    riesz_with_residual(key).map(|(m2, _)| m2)
}

pub fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn make_mask(key: &KeyPoly) -> Result<Mask> {
    let (m2, imag_residual) = riesz_with_residual(key)?;
    let m1 = first_factor(&key.params, key.order);
    let m = convolve(&m1, &m2);
    let h = m.iter().map(|v| 2.0 * v).collect();
    Ok(Mask {
        params: key.params,
        m1,
        m2,
        m,
        h,
        imag_residual,
    })
}

/// `sum_n c[n] e^{-i omega n}`.
pub fn frequency_response(taps: &[f64], omega: f64) -> Complex64 {
    taps.iter()
        .enumerate()
        .map(|(n, &c)| Complex64::from_polar(c, -omega * n as f64))
        .sum()
}
