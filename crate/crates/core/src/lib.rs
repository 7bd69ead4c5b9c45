//! Polyharmonic subdivision wavelets.
//!
//! Non-stationary Daubechies-type filter banks whose taps depend on a
//! frequency `xi` and the level, a mixed Fourier x wavelet transform for
//! images built from them, a classical separable Daubechies baseline and a
//! small lossy codec used to compare the two.

pub mod codec;
pub mod dbbaseline;
pub mod error;
pub mod image;
pub mod mask;
pub mod phtransform;
pub mod scatter;
pub mod wavelet1d;

pub use error::{Error, Result};
