//! Mixed Fourier x wavelet transform of an image.
//!
//! Each row of the image (the horizontal axis is the periodic one) is
//! transformed with a unitary DFT. For every frequency index `eta` the
//! resulting complex column `v_eta(t)` is analyzed with the non-stationary
//! plan of `xi = |eta| * xi_scale`. Real input makes `v_{-eta}` the conjugate
//! of `v_eta`, so only `eta = 0 ..= n/2` is stored.

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::image::ImageGrid;
use crate::mask::FilterCache;
use crate::scatter::{CoefficientKind, ScatterRow};
use crate::wavelet1d::{analyze, synthesize, Boundary, CoefficientPyramid, WaveletPlan};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhOptions {
    pub order: usize,
    pub coarse_level: u32,
    pub boundary: Boundary,
    /// Multiplier from frequency index to `xi`.
    pub xi_scale: f64,
    /// Run the Fourier transform along the vertical axis instead.
    pub transpose: bool,
}

impl Default for PhOptions {
    fn default() -> Self {
        PhOptions {
            order: 2,
            coarse_level: 3,
            boundary: Boundary::Periodic,
            xi_scale: 1.0,
            transpose: false,
        }
    }
}

impl PhOptions {
    pub fn new(order: usize, coarse_level: u32, boundary: Boundary) -> Self {
        PhOptions {
            order,
            coarse_level,
            boundary,
            ..Self::default()
        }
    }
}

/// Half-spectrum coefficients `pyramids[eta]` for `eta = 0 ..= n/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhCoefficients {
    pub width: usize,
    pub height: usize,
    pub options: PhOptions,
    pub pyramids: Vec<CoefficientPyramid>,
}

fn filter_cache() -> &'static FilterCache {
    static CACHE: OnceLock<FilterCache> = OnceLock::new();
    CACHE.get_or_init(FilterCache::new)
}

/// Number of stored frequencies for a Fourier axis of length `n`.
pub fn stored_frequencies(n: usize) -> usize {
    n / 2 + 1
}

/// Whether frequency `eta` equals its own negative modulo `n`.
pub fn is_self_conjugate(eta: usize, n: usize) -> bool {
    eta == 0 || 2 * eta == n
}

/// Axis lengths `(fourier, wavelet)` for an image of the given size.
pub fn axis_lengths(width: usize, height: usize, transpose: bool) -> (usize, usize) {
    if transpose {
        (height, width)
    } else {
        (width, height)
    }
}

/// One plan per stored frequency.
pub fn build_plans(
    options: &PhOptions,
    fourier_len: usize,
    wavelet_len: usize,
) -> Result<Vec<WaveletPlan>> {
    if !wavelet_len.is_power_of_two() || wavelet_len < 2 {
        return Err(Error::InvalidParameter(format!(
            "wavelet axis length {wavelet_len} must be a power of two >= 2"
        )));
    }
    if !(options.xi_scale.is_finite() && options.xi_scale >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "xi scale must be finite and nonnegative, got {}",
            options.xi_scale
        )));
    }
    let levels = wavelet_len.trailing_zeros();
    (0..stored_frequencies(fourier_len))
        .into_par_iter()
        .map(|eta| {
            WaveletPlan::with_cache(
                filter_cache(),
                options.order,
                eta as f64 * options.xi_scale,
                levels,
                options.coarse_level,
                options.boundary,
            )
        })
        .collect()
}

fn fft(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut planner = FftPlanner::new();
    if inverse {
        planner.plan_fft_inverse(len)
    } else {
        planner.plan_fft_forward(len)
    }
}

pub fn forward(image: &ImageGrid, options: &PhOptions) -> Result<PhCoefficients> {
    let oriented = if options.transpose {
        image.transposed()
    } else {
        image.clone()
    };
    let (n_f, n_w) = (oriented.width(), oriented.height());
    let plans = build_plans(options, n_f, n_w)?;
    let fft = fft(n_f, false);
    let norm = 1.0 / (n_f as f64).sqrt();
    let spectra: Vec<Vec<Complex64>> = (0..n_w)
        .into_par_iter()
        .map(|t| {
            let mut buf: Vec<Complex64> = oriented
                .row(t)
                .iter()
                .map(|&p| Complex64::new(p, 0.0))
                .collect();
            fft.process(&mut buf);
            buf.iter_mut().for_each(|c| *c *= norm);
            buf
        })
        .collect();
    let pyramids = plans
        .par_iter()
        .enumerate()
        .map(|(eta, plan)| {
            let column: Vec<Complex64> = spectra.iter().map(|row| row[eta]).collect();
            analyze(&column, plan)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhCoefficients {
        width: image.width(),
        height: image.height(),
        options: *options,
        pyramids,
    })
}

/// Largest imaginary part tolerated in the inverse DFT output, relative to
/// `max(1, max |pixel|)`.
pub const IMAG_TOLERANCE: f64 = 1e-9;

pub fn inverse(coeffs: &PhCoefficients) -> Result<ImageGrid> {
    let (n_f, n_w) = axis_lengths(coeffs.width, coeffs.height, coeffs.options.transpose);
    let plans = build_plans(&coeffs.options, n_f, n_w)?;
    if coeffs.pyramids.len() != plans.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} frequency pyramids, expected {}",
            coeffs.pyramids.len(),
            plans.len()
        )));
    }
    let columns = coeffs
        .pyramids
        .par_iter()
        .zip(plans.par_iter())
        .map(|(pyr, plan)| synthesize(pyr, plan))
        .collect::<Result<Vec<_>>>()?;
    let ifft = fft(n_f, true);
    let norm = 1.0 / (n_f as f64).sqrt();
    let rows: Vec<Vec<Complex64>> = (0..n_w)
        .into_par_iter()
        .map(|t| {
            let mut buf = vec![Complex64::new(0.0, 0.0); n_f];
            for (eta, col) in columns.iter().enumerate() {
                buf[eta] = col[t];
                if !is_self_conjugate(eta, n_f) {
                    buf[n_f - eta] = col[t].conj();
                }
            }
            ifft.process(&mut buf);
            buf.iter_mut().for_each(|c| *c *= norm);
            buf
        })
        .collect();
    let peak = rows
        .iter()
        .flatten()
        .map(|c| c.re.abs())
        .fold(1.0, f64::max);
    let residue = rows
        .iter()
        .flatten()
        .map(|c| c.im.abs())
        .fold(0.0, f64::max);
    if residue > IMAG_TOLERANCE * peak {
        return Err(Error::NonRealResult(residue));
    }
    let pixels = rows.into_iter().flatten().map(|c| c.re).collect();
    let oriented = ImageGrid::new(n_f, n_w, pixels)?;
    Ok(if coeffs.options.transpose {
        oriented.transposed()
    } else {
        oriented
    })
}

impl PhCoefficients {
    pub fn fourier_len(&self) -> usize {
        axis_lengths(self.width, self.height, self.options.transpose).0
    }

    pub fn plans(&self) -> Result<Vec<WaveletPlan>> {
        let (n_f, n_w) = axis_lengths(self.width, self.height, self.options.transpose);
        build_plans(&self.options, n_f, n_w)
    }

    /// Pyramid of a signed frequency; negative ones are conjugates.
    pub fn pyramid(&self, eta: i64) -> Option<CoefficientPyramid> {
        let p = self.pyramids.get(eta.unsigned_abs() as usize)?;
        Some(if eta < 0 { p.conj() } else { p.clone() })
    }

    /// Signed frequencies covering the full spectrum, ascending.
    pub fn signed_frequencies(&self) -> std::ops::RangeInclusive<i64> {
        let n = self.fourier_len() as i64;
        let top = n / 2;
        (top - n + 1)..=top
    }

    /// Coefficient count over the full spectrum.
    pub fn full_spectrum_len(&self) -> usize {
        let n = self.fourier_len();
        self.pyramids
            .iter()
            .enumerate()
            .map(|(eta, p)| {
                if is_self_conjugate(eta, n) {
                    p.len()
                } else {
                    2 * p.len()
                }
            })
            .sum()
    }

    /// Energy over the full spectrum.
    pub fn energy(&self) -> f64 {
        let n = self.fourier_len();
        self.pyramids
            .iter()
            .enumerate()
            .map(|(eta, p)| {
                let e = p.energy();
                if is_self_conjugate(eta, n) {
                    e
                } else {
                    2.0 * e
                }
            })
            .sum()
    }
}

/// One row per coefficient of the full spectrum, ordered by frequency,
/// then level (finest first, approximation last), then translate.
pub fn scatter_export(coeffs: &PhCoefficients) -> Result<Vec<ScatterRow>> {
    let plans = coeffs.plans()?;
    let mut rows = Vec::with_capacity(coeffs.full_spectrum_len());
    for eta in coeffs.signed_frequencies() {
        let idx = eta.unsigned_abs() as usize;
        let pyr = &coeffs.pyramids[idx];
        let plan = &plans[idx];
        let sign = if eta < 0 { -1.0 } else { 1.0 };
        for (s, detail) in pyr.details.iter().enumerate() {
            let level = plan.stages[s].k;
            rows.extend(detail.iter().enumerate().map(|(j, c)| ScatterRow {
                eta: Some(eta),
                level,
                j,
                re: c.re,
                im: sign * c.im,
                kind: CoefficientKind::Detail,
            }));
        }
        rows.extend(pyr.approx.iter().enumerate().map(|(j, c)| ScatterRow {
            eta: Some(eta),
            level: plan.coarse_level,
            j,
            re: c.re,
            im: sign * c.im,
            kind: CoefficientKind::Approx,
        }));
    }
    Ok(rows)
}
