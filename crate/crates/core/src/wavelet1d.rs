//! Non-stationary 1D wavelet analysis and synthesis.
//!
//! A [`WaveletPlan`] holds one filter pair per stage. For a signal of length
//! `2^J` the finest stage uses level `k = J - 1` and each further stage
//! decreases `k` by one, down to the coarse level `m0`.
//!
//! Index convention: stage outputs are correlations anchored at even
//! positions, `a[i] = sum_k h[k] x[2i + k - shift]`, with `shift = 0` in
//! periodic mode and `shift = L - 1` (L the filter length) in
//! symmetric-expansive mode, where every output whose window touches the
//! signal is kept. Synthesis is the transpose; in expansive mode it is
//! evaluated only on the original support, which recovers the signal
//! exactly because the stored coefficients are those of the symmetrically
//! extended signal under an orthonormal filter bank.

use std::ops::{Add, AddAssign, Mul};
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::mask::{make_filter_pair_from, make_rn, FilterCache, FilterPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Boundary {
    #[default]
    Periodic,
    SymmetricExpansive,
}

impl Boundary {
    /// Output length of one stage for an input of length `n`.
    pub fn stage_output_len(self, n: usize, filter_len: usize) -> usize {
        match self {
            Boundary::Periodic => n / 2,
            // ceil((n + L - 1) / 2)
            Boundary::SymmetricExpansive => (n + filter_len) / 2,
        }
    }
}

/// Filter schedule for one `xi`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletPlan {
    pub xi: f64,
    pub order: usize,
    /// `J`, log2 of the signal length.
    pub levels: u32,
    /// `m0`, the coarsest level kept.
    pub coarse_level: u32,
    pub boundary: Boundary,
    pub stages: Vec<Arc<FilterPair>>,
}

fn validate_levels(levels: u32, coarse_level: u32) -> Result<()> {
    if levels == 0 || levels > 30 {
        return Err(Error::InvalidParameter(format!(
            "signal length exponent must be in 1..=30, got {levels}"
        )));
    }
    if coarse_level >= levels {
        return Err(Error::InvalidParameter(format!(
            "coarse level {coarse_level} must be below {levels}"
        )));
    }
    Ok(())
}

impl WaveletPlan {
    pub fn new(
        order: usize,
        xi: f64,
        levels: u32,
        coarse_level: u32,
        boundary: Boundary,
    ) -> Result<Self> {
        validate_levels(levels, coarse_level)?;
        let rn = make_rn(order)?;
        let stages = (0..levels - coarse_level)
            .map(|s| make_filter_pair_from(&rn, xi, levels - 1 - s).map(Arc::new))
            .collect::<Result<_>>()?;
        Ok(WaveletPlan {
            xi,
            order,
            levels,
            coarse_level,
            boundary,
            stages,
        })
    }

    /// Same schedule drawing filters from a shared cache.
    pub fn with_cache(
        cache: &FilterCache,
        order: usize,
        xi: f64,
        levels: u32,
        coarse_level: u32,
        boundary: Boundary,
    ) -> Result<Self> {
        validate_levels(levels, coarse_level)?;
        let stages = (0..levels - coarse_level)
            .map(|s| cache.get(order, xi, levels - 1 - s))
            .collect::<Result<_>>()?;
        Ok(WaveletPlan {
            xi,
            order,
            levels,
            coarse_level,
            boundary,
            stages,
        })
    }

    /// Plan with an explicit level index per stage, finest first.
    pub fn with_stage_levels(
        order: usize,
        xi: f64,
        levels: u32,
        stage_levels: &[u32],
        boundary: Boundary,
    ) -> Result<Self> {
        let count = stage_levels.len() as u32;
        if count == 0 || count > levels {
            return Err(Error::InvalidParameter(format!(
                "need between 1 and {levels} stages, got {count}"
            )));
        }
        validate_levels(levels, levels - count)?;
        let rn = make_rn(order)?;
        let stages = stage_levels
            .iter()
            .map(|&k| make_filter_pair_from(&rn, xi, k).map(Arc::new))
            .collect::<Result<_>>()?;
        Ok(WaveletPlan {
            xi,
            order,
            levels,
            coarse_level: levels - count,
            boundary,
            stages,
        })
    }

    pub fn signal_len(&self) -> usize {
        1usize << self.levels
    }

    pub fn stage_count(&self) -> usize {
        self.stages.len()
    }

    /// Input length of every stage, followed by the approximation length.
    pub fn stage_lengths(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.stages.len() + 1);
        let mut n = self.signal_len();
        out.push(n);
        for pair in &self.stages {
            n = self.boundary.stage_output_len(n, pair.len());
            out.push(n);
        }
        out
    }

    /// Total number of coefficients an analysis produces.
    pub fn coefficient_count(&self) -> usize {
        let lens = self.stage_lengths();
        lens[1..].iter().sum::<usize>() + lens[lens.len() - 1]
    }
}

/// Approximation and detail coefficients of one signal.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoefficientPyramid {
    /// Father-wavelet coefficients at the coarse level.
    pub approx: Vec<Complex64>,
    /// Mother-wavelet coefficients, finest stage first.
    pub details: Vec<Vec<Complex64>>,
}

impl CoefficientPyramid {
    pub fn zeros_for(plan: &WaveletPlan) -> Self {
        let lens = plan.stage_lengths();
        CoefficientPyramid {
            approx: vec![Complex64::zero(); lens[lens.len() - 1]],
            details: lens[1..]
                .iter()
                .map(|&n| vec![Complex64::zero(); n])
                .collect(),
        }
    }

    /// Lengths of the detail vectors (finest first) and then of `approx`.
    pub fn lengths(&self) -> Vec<usize> {
        self.details
            .iter()
            .map(Vec::len)
            .chain(std::iter::once(self.approx.len()))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.lengths().iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn energy(&self) -> f64 {
        self.iter().map(|c| c.norm_sqr()).sum()
    }

    /// All coefficients: details finest first, then the approximation.
    pub fn iter(&self) -> impl Iterator<Item = &Complex64> {
        self.details.iter().flatten().chain(self.approx.iter())
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = &mut Complex64> {
        self.details
            .iter_mut()
            .flatten()
            .chain(self.approx.iter_mut())
    }

    pub fn conj(&self) -> Self {
        CoefficientPyramid {
            approx: self.approx.iter().map(|c| c.conj()).collect(),
            details: self
                .details
                .iter()
                .map(|d| d.iter().map(|c| c.conj()).collect())
                .collect(),
        }
    }

    /// Check the shape against what `plan` produces.
    pub fn check_shape(&self, plan: &WaveletPlan) -> Result<()> {
        let lens = plan.stage_lengths();
        if self.details.len() != plan.stage_count() {
            return Err(Error::ShapeMismatch(format!(
                "pyramid has {} detail levels, plan has {}",
                self.details.len(),
                plan.stage_count()
            )));
        }
        for (s, d) in self.details.iter().enumerate() {
            if d.len() != lens[s + 1] {
                return Err(Error::ShapeMismatch(format!(
                    "detail level {s} has {} coefficients, expected {}",
                    d.len(),
                    lens[s + 1]
                )));
            }
        }
        let approx_len = lens[lens.len() - 1];
        if self.approx.len() != approx_len {
            return Err(Error::ShapeMismatch(format!(
                "approximation has {} coefficients, expected {approx_len}",
                self.approx.len()
            )));
        }
        Ok(())
    }
}

fn reflect(p: isize, n: usize) -> usize {
    let n = n as isize;
    let m = p.rem_euclid(2 * n);
    (if m < n { m } else { 2 * n - 1 - m }) as usize
}

/// One analysis stage: returns `(approx, detail)`.
pub(crate) fn analysis_stage<T>(x: &[T], pair: &FilterPair, boundary: Boundary) -> (Vec<T>, Vec<T>)
where
    T: Copy + Zero + Add<Output = T> + Mul<f64, Output = T>,
{
    let n = x.len();
    let taps = pair.len();
    let out_len = boundary.stage_output_len(n, taps);
    let mut approx = Vec::with_capacity(out_len);
    let mut detail = Vec::with_capacity(out_len);
    let shift = match boundary {
        Boundary::Periodic => 0,
        Boundary::SymmetricExpansive => taps as isize - 1,
    };
    for i in 0..out_len {
        let mut a = T::zero();
        let mut d = T::zero();
        for k in 0..taps {
            let p = 2 * i as isize + k as isize - shift;
            let idx = match boundary {
                Boundary::Periodic => p.rem_euclid(n as isize) as usize,
                Boundary::SymmetricExpansive => reflect(p, n),
            };
            a = a + x[idx] * pair.lowpass[k];
            d = d + x[idx] * pair.highpass[k];
        }
        approx.push(a);
        detail.push(d);
    }
    (approx, detail)
}

/// Transpose of [`analysis_stage`], producing `out_len` samples.
pub(crate) fn synthesis_stage<T>(
    approx: &[T],
    detail: &[T],
    pair: &FilterPair,
    boundary: Boundary,
    out_len: usize,
) -> Vec<T>
where
    T: Copy + Zero + Add<Output = T> + AddAssign + Mul<f64, Output = T>,
{
    let taps = pair.len();
    let mut y = vec![T::zero(); out_len];
    match boundary {
        Boundary::Periodic => {
            for (i, (&a, &d)) in approx.iter().zip(detail).enumerate() {
                for k in 0..taps {
                    let p = (2 * i + k) % out_len;
                    y[p] += a * pair.lowpass[k] + d * pair.highpass[k];
                }
            }
        }
        Boundary::SymmetricExpansive => {
            let shift = taps as isize - 1;
            for (i, (&a, &d)) in approx.iter().zip(detail).enumerate() {
                for k in 0..taps {
                    let p = 2 * i as isize + k as isize - shift;
                    if p >= 0 && (p as usize) < out_len {
                        y[p as usize] += a * pair.lowpass[k] + d * pair.highpass[k];
                    }
                }
            }
        }
    }
    y
}

pub fn analyze(signal: &[Complex64], plan: &WaveletPlan) -> Result<CoefficientPyramid> {
    if signal.len() != plan.signal_len() {
        return Err(Error::LengthMismatch {
            expected: plan.signal_len(),
            actual: signal.len(),
        });
    }
    if plan.stages.is_empty() {
        return Err(Error::InvalidParameter("plan has no stages".into()));
    }
    let mut current = signal.to_vec();
    let mut details = Vec::with_capacity(plan.stage_count());
    for pair in &plan.stages {
        let (a, d) = analysis_stage(&current, pair, plan.boundary);
        details.push(d);
        current = a;
    }
    Ok(CoefficientPyramid {
        approx: current,
        details,
    })
}

pub fn synthesize(pyramid: &CoefficientPyramid, plan: &WaveletPlan) -> Result<Vec<Complex64>> {
    pyramid.check_shape(plan)?;
    let lens = plan.stage_lengths();
    let mut current = pyramid.approx.clone();
    for s in (0..plan.stage_count()).rev() {
        current = synthesis_stage(
            &current,
            &pyramid.details[s],
            &plan.stages[s],
            plan.boundary,
            lens[s],
        );
    }
    Ok(current)
}
