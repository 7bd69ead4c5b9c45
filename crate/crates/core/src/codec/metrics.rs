use serde::{Serialize, Serializer};

use super::container::CompressedImage;
use super::{decode_stream, DecodedStream};
use crate::error::{Error, Result};
use crate::image::ImageGrid;

pub const PEAK: f64 = 255.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoefficientStats {
    pub count: usize,
    pub max_abs: f64,
    pub p50: f64,
    pub p90: f64,
    pub p99: f64,
    /// Fraction of quantized symbols equal to zero.
    pub zero_fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrics {
    /// `+inf` when the images are identical (serialized as `"inf"`).
    #[serde(serialize_with = "finite_or_inf")]
    pub psnr: f64,
    pub mse: f64,
    pub compression_ratio: f64,
    pub container_bytes: usize,
    pub coefficients: CoefficientStats,
}

fn finite_or_inf<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
    }
}

pub fn mse(original: &ImageGrid, reconstructed: &ImageGrid) -> Result<f64> {
    if original.width() != reconstructed.width() || original.height() != reconstructed.height() {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} vs {}x{}",
            original.width(),
            original.height(),
            reconstructed.width(),
            reconstructed.height()
        )));
    }
    let sum: f64 = original
        .pixels()
        .iter()
        .zip(reconstructed.pixels())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(sum / original.pixels().len() as f64)
}

/// `10 log10(255^2 / MSE)`, `+inf` for identical images.
pub fn psnr(original: &ImageGrid, reconstructed: &ImageGrid) -> Result<f64> {
    let m = mse(original, reconstructed)?;
    Ok(if m == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (PEAK * PEAK / m).log10()
    })
}

/// Raw 8-bit image size over container size.
pub fn compression_ratio(width: usize, height: usize, container_bytes: usize) -> f64 {
    (8 * width * height) as f64 / (8 * container_bytes) as f64
}

/// Nearest-rank percentile of an ascending slice.
fn percentile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let rank = ((p / 100.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

pub fn coefficient_stats(decoded: &DecodedStream) -> CoefficientStats {
    let mut mags: Vec<f64> = decoded.values.iter().map(|v| v.abs()).collect();
    mags.sort_by(f64::total_cmp);
    let zeros = decoded.symbols.iter().filter(|&&s| s == 0).count();
    CoefficientStats {
        count: mags.len(),
        max_abs: mags.last().copied().unwrap_or(0.0),
        p50: percentile(&mags, 50.0),
        p90: percentile(&mags, 90.0),
        p99: percentile(&mags, 99.0),
        zero_fraction: if decoded.symbols.is_empty() {
            0.0
        } else {
            zeros as f64 / decoded.symbols.len() as f64
        },
    }
}

pub fn measure(
    original: &ImageGrid,
    reconstructed: &ImageGrid,
    container: &CompressedImage,
) -> Result<Metrics> {
    let m = mse(original, reconstructed)?;
    let p = psnr(original, reconstructed)?;
    let bytes = container.byte_len();
    Ok(Metrics {
        psnr: p,
        mse: m,
        compression_ratio: compression_ratio(original.width(), original.height(), bytes),
        container_bytes: bytes,
        coefficients: coefficient_stats(&decode_stream(container)?),
    })
}
