use crate::error::{Error, Result};

/// Uniform midtread quantizer with step `2A / (2^bits - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizerConfig {
    pub bits: u8,
    pub amplitude: f64,
}

pub const MIN_BITS: u8 = 2;
pub const MAX_BITS: u8 = 16;
pub const DEFAULT_BITS: u8 = 9;

impl QuantizerConfig {
    pub fn new(bits: u8, amplitude: f64) -> Result<Self> {
        if !(MIN_BITS..=MAX_BITS).contains(&bits) {
            return Err(Error::InvalidParameter(format!(
                "quantizer bits must be in {MIN_BITS}..={MAX_BITS}, got {bits}"
            )));
        }
        if !(amplitude.is_finite() && amplitude > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "quantizer amplitude must be positive, got {amplitude}"
            )));
        }
        Ok(QuantizerConfig { bits, amplitude })
    }

    /// Amplitude taken from the stream; an all-zero stream gets `A = 1`.
    pub fn for_stream(bits: u8, stream: &[f64]) -> Result<Self> {
        let mut amp = 0.0f64;
        for &x in stream {
            if !x.is_finite() {
                return Err(Error::NonFinite);
            }
            amp = amp.max(x.abs());
        }
        Self::new(bits, if amp > 0.0 { amp } else { 1.0 })
    }

    pub fn step(&self) -> f64 {
        2.0 * self.amplitude / ((1u32 << self.bits) - 1) as f64
    }

    /// Largest symbol magnitude, `round((2^bits - 1) / 2) = 2^(bits-1)`.
    pub fn max_symbol(&self) -> i32 {
        1 << (self.bits - 1)
    }
}

pub fn quantize(stream: &[f64], cfg: &QuantizerConfig) -> Result<Vec<i32>> {
    let step = cfg.step();
    stream
        .iter()
        .map(|&x| {
            if !x.is_finite() {
                return Err(Error::NonFinite);
            }
            if x.abs() > cfg.amplitude {
                return Err(Error::OutOfRange {
                    value: x,
                    amplitude: cfg.amplitude,
                });
            }
            Ok(((x / step).round() as i32).clamp(-cfg.max_symbol(), cfg.max_symbol()))
        })
        .collect()
}

/// `q * step`, clamped to `[-A, A]`.
pub fn dequantize(symbols: &[i32], cfg: &QuantizerConfig) -> Result<Vec<f64>> {
    let step = cfg.step();
    let limit = cfg.max_symbol();
    symbols
        .iter()
        .map(|&q| {
            if q.abs() > limit {
                return Err(Error::SymbolOutOfRange {
                    symbol: q as i64,
                    limit: limit as i64,
                });
            }
            Ok((q as f64 * step).clamp(-cfg.amplitude, cfg.amplitude))
        })
        .collect()
}
