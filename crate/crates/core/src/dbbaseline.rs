//! Separable 2D Daubechies transform, the classical baseline.
//!
//! Uses the `xi = 0` filters of the mask factory with periodic boundaries.
//! Each stage filters the rows of the current LL band, then its columns.
//! Subband names give the horizontal filter first: `LH` is horizontally
//! low-pass and vertically high-pass.

use crate::error::{Error, Result};
use crate::image::ImageGrid;
use crate::mask::{make_filter_pair, FilterPair};
use crate::scatter::{CoefficientKind, ScatterRow};
use crate::wavelet1d::{analysis_stage, synthesis_stage, Boundary};

/// Row-major real band.
#[derive(Debug, Clone, PartialEq)]
pub struct Band {
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
}

impl Band {
    fn zeros(width: usize, height: usize) -> Self {
        Band {
            width,
            height,
            values: vec![0.0; width * height],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DbLevel {
    /// Level index of the stage (`J - 1` for the finest).
    pub level: u32,
    pub lh: Band,
    pub hl: Band,
    pub hh: Band,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DbCoefficients {
    pub width: usize,
    pub height: usize,
    pub order: usize,
    pub coarse_level: u32,
    pub ll: Band,
    /// Finest first.
    pub levels: Vec<DbLevel>,
}

/// Number of stages for an image, given the coarse level.
pub fn stage_count(width: usize, height: usize, coarse_level: u32) -> Result<u32> {
    for d in [width, height] {
        if !d.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(d));
        }
    }
    let levels = width.min(height).trailing_zeros();
    if coarse_level >= levels {
        return Err(Error::InvalidParameter(format!(
            "coarse level {coarse_level} must be below {levels}"
        )));
    }
    Ok(levels - coarse_level)
}

fn split_rows(band: &Band, pair: &FilterPair) -> (Band, Band) {
    let half = band.width / 2;
    let mut lo = Band::zeros(half, band.height);
    let mut hi = Band::zeros(half, band.height);
    for y in 0..band.height {
        let row = &band.values[y * band.width..(y + 1) * band.width];
        let (a, d) = analysis_stage(row, pair, Boundary::Periodic);
        lo.values[y * half..(y + 1) * half].copy_from_slice(&a);
        hi.values[y * half..(y + 1) * half].copy_from_slice(&d);
    }
    (lo, hi)
}

fn split_columns(band: &Band, pair: &FilterPair) -> (Band, Band) {
    let half = band.height / 2;
    let mut lo = Band::zeros(band.width, half);
    let mut hi = Band::zeros(band.width, half);
    for x in 0..band.width {
        let col: Vec<f64> = (0..band.height)
            .map(|y| band.values[y * band.width + x])
            .collect();
        let (a, d) = analysis_stage(&col, pair, Boundary::Periodic);
        for y in 0..half {
            lo.values[y * band.width + x] = a[y];
            hi.values[y * band.width + x] = d[y];
        }
    }
    (lo, hi)
}

fn merge_columns(lo: &Band, hi: &Band, pair: &FilterPair) -> Band {
    let height = lo.height * 2;
    let mut out = Band::zeros(lo.width, height);
    for x in 0..lo.width {
        let a: Vec<f64> = (0..lo.height)
            .map(|y| lo.values[y * lo.width + x])
            .collect();
        let d: Vec<f64> = (0..hi.height)
            .map(|y| hi.values[y * hi.width + x])
            .collect();
        let col = synthesis_stage(&a, &d, pair, Boundary::Periodic, height);
        for (y, v) in col.into_iter().enumerate() {
            out.values[y * lo.width + x] = v;
        }
    }
    out
}

fn merge_rows(lo: &Band, hi: &Band, pair: &FilterPair) -> Band {
    let width = lo.width * 2;
    let mut out = Band::zeros(width, lo.height);
    for y in 0..lo.height {
        let a = &lo.values[y * lo.width..(y + 1) * lo.width];
        let d = &hi.values[y * hi.width..(y + 1) * hi.width];
        let row = synthesis_stage(a, d, pair, Boundary::Periodic, width);
        out.values[y * width..(y + 1) * width].copy_from_slice(&row);
    }
    out
}

pub fn db_forward(image: &ImageGrid, order: usize, coarse_level: u32) -> Result<DbCoefficients> {
    let (w, h) = (image.width(), image.height());
    let stages = stage_count(w, h, coarse_level)?;
    let pair = make_filter_pair(order, 0.0, 0)?;
    let finest = w.min(h).trailing_zeros() - 1;
    let mut ll = Band {
        width: w,
        height: h,
        values: image.pixels().to_vec(),
    };
    let mut levels = Vec::with_capacity(stages as usize);
    for s in 0..stages {
        let (lo, hi) = split_rows(&ll, &pair);
        let (lo_lo, lo_hi) = split_columns(&lo, &pair);
        let (hi_lo, hi_hi) = split_columns(&hi, &pair);
        levels.push(DbLevel {
            level: finest - s,
            lh: lo_hi,
            hl: hi_lo,
            hh: hi_hi,
        });
        ll = lo_lo;
    }
    Ok(DbCoefficients {
        width: w,
        height: h,
        order,
        coarse_level,
        ll,
        levels,
    })
}

pub fn db_inverse(coeffs: &DbCoefficients) -> Result<ImageGrid> {
    let stages = stage_count(coeffs.width, coeffs.height, coeffs.coarse_level)?;
    if coeffs.levels.len() != stages as usize {
        return Err(Error::ShapeMismatch(format!(
            "{} levels, expected {stages}",
            coeffs.levels.len()
        )));
    }
    let pair = make_filter_pair(coeffs.order, 0.0, 0)?;
    let (w_ll, h_ll) = (coeffs.width >> stages, coeffs.height >> stages);
    let check = |b: &Band, w: usize, h: usize, name: &str| -> Result<()> {
        if b.width != w || b.height != h || b.values.len() != w * h {
            return Err(Error::ShapeMismatch(format!(
                "{name} band is {}x{}, expected {w}x{h}",
                b.width, b.height
            )));
        }
        Ok(())
    };
    check(&coeffs.ll, w_ll, h_ll, "LL")?;
    let mut ll = coeffs.ll.clone();
    for (s, lvl) in coeffs.levels.iter().enumerate().rev() {
        let (bw, bh) = (coeffs.width >> (s + 1), coeffs.height >> (s + 1));
        check(&lvl.lh, bw, bh, "LH")?;
        check(&lvl.hl, bw, bh, "HL")?;
        check(&lvl.hh, bw, bh, "HH")?;
        let lo = merge_columns(&ll, &lvl.lh, &pair);
        let hi = merge_columns(&lvl.hl, &lvl.hh, &pair);
        ll = merge_rows(&lo, &hi, &pair);
    }
    ImageGrid::new(coeffs.width, coeffs.height, ll.values)
}

impl DbCoefficients {
    pub fn zeros(width: usize, height: usize, order: usize, coarse_level: u32) -> Result<Self> {
        let stages = stage_count(width, height, coarse_level)?;
        let finest = width.min(height).trailing_zeros() - 1;
        let levels = (0..stages)
            .map(|s| {
                let (bw, bh) = (width >> (s + 1), height >> (s + 1));
                DbLevel {
                    level: finest - s,
                    lh: Band::zeros(bw, bh),
                    hl: Band::zeros(bw, bh),
                    hh: Band::zeros(bw, bh),
                }
            })
            .collect();
        Ok(DbCoefficients {
            width,
            height,
            order,
            coarse_level,
            ll: Band::zeros(width >> stages, height >> stages),
            levels,
        })
    }

    /// Coefficients in stream order: per level (finest first) LH, HL, HH,
    /// then LL.
    pub fn values(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.width * self.height);
        for lvl in &self.levels {
            out.extend(&lvl.lh.values);
            out.extend(&lvl.hl.values);
            out.extend(&lvl.hh.values);
        }
        out.extend(&self.ll.values);
        out
    }

    /// Overwrite coefficients from a stream in [`values`](Self::values) order.
    pub fn set_values(&mut self, stream: &[f64]) -> Result<()> {
        if stream.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: stream.len(),
            });
        }
        let mut it = stream.iter().copied();
        for lvl in &mut self.levels {
            for band in [&mut lvl.lh, &mut lvl.hl, &mut lvl.hh] {
                band.values.iter_mut().for_each(|v| *v = it.next().unwrap());
            }
        }
        self.ll
            .values
            .iter_mut()
            .for_each(|v| *v = it.next().unwrap());
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.ll.values.len()
            + self
                .levels
                .iter()
                .map(|l| l.lh.values.len() + l.hl.values.len() + l.hh.values.len())
                .sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn energy(&self) -> f64 {
        self.values().iter().map(|v| v * v).sum()
    }
}

/// Scatter rows with an empty frequency column and subband kinds; `j` is the
/// row-major index inside the band.
pub fn db_scatter_export(coeffs: &DbCoefficients) -> Vec<ScatterRow> {
    let mut rows = Vec::with_capacity(coeffs.len());
    let mut push = |band: &Band, level: u32, kind: CoefficientKind| {
        rows.extend(band.values.iter().enumerate().map(|(j, &v)| ScatterRow {
            eta: None,
            level,
            j,
            re: v,
            im: 0.0,
            kind,
        }));
    };
    for lvl in &coeffs.levels {
        push(&lvl.lh, lvl.level, CoefficientKind::LH);
        push(&lvl.hl, lvl.level, CoefficientKind::HL);
        push(&lvl.hh, lvl.level, CoefficientKind::HH);
    }
    push(&coeffs.ll, coeffs.coarse_level, CoefficientKind::LL);
    rows
}
