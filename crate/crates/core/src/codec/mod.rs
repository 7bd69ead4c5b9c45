//! Lossy coefficient coding: uniform quantizer, zero-run Huffman layer and
//! the `PHW1` container.
//!
//! Coefficient stream order. PH: the real parts of every stored frequency
//! `eta = 0 ..= n/2` (each pyramid details finest first, then the
//! approximation), followed by the imaginary parts of the frequencies that
//! are not self-conjugate. DB: per level LH, HL, HH, then LL. The real and
//! imaginary planes are quantized with separate amplitudes; both symbol
//! planes share one entropy stream.

mod bitio;
pub mod container;
pub mod entropy;
pub mod metrics;
pub mod quantizer;

use num_complex::Complex64;

pub use container::{CompressedImage, ContainerHeader, Transform};
pub use entropy::{entropy_decode, entropy_encode};
pub use metrics::{coefficient_stats, compression_ratio, measure, psnr, CoefficientStats, Metrics};
pub use quantizer::{dequantize, quantize, QuantizerConfig, DEFAULT_BITS};

use crate::dbbaseline::{db_forward, db_inverse, DbCoefficients};
use crate::error::{Error, Result};
use crate::image::ImageGrid;
use crate::phtransform::{self, axis_lengths, is_self_conjugate, PhCoefficients, PhOptions};
use crate::wavelet1d::{Boundary, CoefficientPyramid};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodecSettings {
    pub transform: Transform,
    pub order: usize,
    pub coarse_level: u32,
    pub bits: u8,
    pub boundary: Boundary,
    pub xi_scale: f64,
    pub transpose: bool,
    /// Subtract the rounded image mean before transforming. Without it the
    /// DC coefficient sets the quantizer amplitude of the real plane.
    pub level_shift: bool,
}

impl CodecSettings {
    pub fn new(transform: Transform, order: usize, coarse_level: u32, bits: u8) -> Self {
        CodecSettings {
            transform,
            order,
            coarse_level,
            bits,
            boundary: Boundary::Periodic,
            xi_scale: 1.0,
            transpose: false,
            level_shift: true,
        }
    }

    fn ph_options(&self) -> PhOptions {
        PhOptions {
            order: self.order,
            coarse_level: self.coarse_level,
            boundary: self.boundary,
            xi_scale: self.xi_scale,
            transpose: self.transpose,
        }
    }
}

/// Split PH coefficients into `(real plane, imaginary plane)`.
fn ph_planes(coeffs: &PhCoefficients) -> (Vec<f64>, Vec<f64>) {
    let n = coeffs.fourier_len();
    let re = coeffs
        .pyramids
        .iter()
        .flat_map(|p| p.iter().map(|c| c.re))
        .collect();
    let im = coeffs
        .pyramids
        .iter()
        .enumerate()
        .filter(|(eta, _)| !is_self_conjugate(*eta, n))
        .flat_map(|(_, p)| p.iter().map(|c| c.im))
        .collect();
    (re, im)
}

fn ph_skeleton(header: &ContainerHeader) -> Result<(PhCoefficients, usize, usize)> {
    let options = PhOptions {
        order: header.order as usize,
        coarse_level: header.coarse_level as u32,
        boundary: header.boundary,
        xi_scale: header.xi_scale,
        transpose: header.transpose,
    };
    let (w, h) = (header.width as usize, header.height as usize);
    let (n_f, n_w) = axis_lengths(w, h, options.transpose);
    let plans = phtransform::build_plans(&options, n_f, n_w)?;
    let pyramids: Vec<CoefficientPyramid> =
        plans.iter().map(CoefficientPyramid::zeros_for).collect();
    let re_len = pyramids.iter().map(|p| p.len()).sum();
    let im_len = pyramids
        .iter()
        .enumerate()
        .filter(|(eta, _)| !is_self_conjugate(*eta, n_f))
        .map(|(_, p)| p.len())
        .sum();
    Ok((
        PhCoefficients {
            width: w,
            height: h,
            options,
            pyramids,
        },
        re_len,
        im_len,
    ))
}

/// Rounded mean pixel value, clamped to the 8-bit range.
fn level_shift_of(image: &ImageGrid) -> u8 {
    let mean = image.pixels().iter().sum::<f64>() / image.pixels().len() as f64;
    mean.round().clamp(0.0, 255.0) as u8
}

fn add_constant(image: &ImageGrid, c: f64) -> Result<ImageGrid> {
    ImageGrid::new(
        image.width(),
        image.height(),
        image.pixels().iter().map(|p| p + c).collect(),
    )
}

pub fn compress(image: &ImageGrid, settings: &CodecSettings) -> Result<CompressedImage> {
    let shift = if settings.level_shift {
        level_shift_of(image)
    } else {
        0
    };
    let shifted;
    let image = if shift == 0 {
        image
    } else {
        shifted = add_constant(image, -(shift as f64))?;
        &shifted
    };
    let (re, im) = match settings.transform {
        Transform::Ph => ph_planes(&phtransform::forward(image, &settings.ph_options())?),
        Transform::Db => {
            if settings.boundary != Boundary::Periodic || settings.transpose {
                return Err(Error::InvalidParameter(
                    "the DB baseline is periodic and untransposed".into(),
                ));
            }
            (
                db_forward(image, settings.order, settings.coarse_level)?.values(),
                Vec::new(),
            )
        }
    };
    let cfg_re = QuantizerConfig::for_stream(settings.bits, &re)?;
    let cfg_im = QuantizerConfig::for_stream(settings.bits, &im)?;
    let mut symbols = quantize(&re, &cfg_re)?;
    symbols.extend(quantize(&im, &cfg_im)?);
    let header = ContainerHeader {
        transform: settings.transform,
        boundary: settings.boundary,
        transpose: settings.transpose,
        width: image.width() as u32,
        height: image.height() as u32,
        order: u8::try_from(settings.order).map_err(|_| Error::OrderOutOfRange(settings.order))?,
        coarse_level: u8::try_from(settings.coarse_level)
            .map_err(|_| Error::InvalidParameter("coarse level too large".into()))?,
        bits: settings.bits,
        level_shift: shift,
        xi_scale: settings.xi_scale,
        amplitude_re: cfg_re.amplitude,
        amplitude_im: cfg_im.amplitude,
    };
    header.validate()?;
    Ok(CompressedImage {
        header,
        payload: entropy_encode(&symbols)?,
    })
}

/// Symbols and dequantized values of a container, in stream order, plus
/// the length of the real plane.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodedStream {
    pub symbols: Vec<i32>,
    pub values: Vec<f64>,
    pub real_len: usize,
}

fn expected_lengths(header: &ContainerHeader) -> Result<(usize, usize)> {
    match header.transform {
        Transform::Ph => ph_skeleton(header).map(|(_, re, im)| (re, im)),
        Transform::Db => Ok((
            DbCoefficients::zeros(
                header.width as usize,
                header.height as usize,
                header.order as usize,
                header.coarse_level as u32,
            )?
            .len(),
            0,
        )),
    }
}

pub fn decode_stream(container: &CompressedImage) -> Result<DecodedStream> {
    let h = &container.header;
    h.validate()?;
    let (re_len, im_len) = expected_lengths(h)?;
    let symbols = entropy_decode(&container.payload)?;
    if symbols.len() != re_len + im_len {
        return Err(Error::Container(format!(
            "payload holds {} symbols, header implies {}",
            symbols.len(),
            re_len + im_len
        )));
    }
    let mut values = dequantize(
        &symbols[..re_len],
        &QuantizerConfig::new(h.bits, h.amplitude_re)?,
    )?;
    values.extend(dequantize(
        &symbols[re_len..],
        &QuantizerConfig::new(h.bits, h.amplitude_im)?,
    )?);
    Ok(DecodedStream {
        symbols,
        values,
        real_len: re_len,
    })
}

/// Floating-point reconstruction (level shift restored), before rounding to
/// 8 bits.
pub fn reconstruct(container: &CompressedImage) -> Result<ImageGrid> {
    let h = &container.header;
    let decoded = decode_stream(container)?;
    let (re, im) = decoded.values.split_at(decoded.real_len);
    let image = match h.transform {
        Transform::Ph => {
            let (mut coeffs, _, _) = ph_skeleton(h)?;
            let n_f = coeffs.fourier_len();
            let mut re_it = re.iter();
            let mut im_it = im.iter();
            for (eta, pyr) in coeffs.pyramids.iter_mut().enumerate() {
                let real_only = is_self_conjugate(eta, n_f);
                for c in pyr.iter_mut() {
                    let r = *re_it.next().expect("length checked");
                    let i = if real_only {
                        0.0
                    } else {
                        *im_it.next().expect("length checked")
                    };
                    *c = Complex64::new(r, i);
                }
            }
            phtransform::inverse(&coeffs)
        }
        Transform::Db => {
            let mut coeffs = DbCoefficients::zeros(
                h.width as usize,
                h.height as usize,
                h.order as usize,
                h.coarse_level as u32,
            )?;
            coeffs.set_values(re)?;
            db_inverse(&coeffs)
        }
    }?;
    if h.level_shift == 0 {
        Ok(image)
    } else {
        add_constant(&image, h.level_shift as f64)
    }
}

/// Decoded 8-bit image: the reconstruction rounded and clamped to `0..=255`.
pub fn decompress(container: &CompressedImage) -> Result<ImageGrid> {
    Ok(reconstruct(container)?.quantized_8bit())
}
