//! Level-dependent refinement masks and two-channel filter pairs.
//!
//! For a frequency `xi >= 0` and level `k`, the low-pass mask is
//! `M = M1 * M2` where `M1` carries `N` zeros at `-x0` and `M2` is the
//! minimum-phase spectral factor of the deformed Daubechies polynomial
//! `Q`. The pair satisfies the Bezout identity
//! `d(w) Q(sin^2(w/2)) + d(w+pi) Q(cos^2(w/2)) = 1`, which makes the scaled
//! filter `h = 2 M` orthonormal. At `xi = 0` everything reduces to the
//! extremal-phase Daubechies filters.

mod filter;
mod key;
mod level;
mod poly;
mod riesz;

pub use filter::{make_filter_pair, make_filter_pair_from, FilterCache, FilterPair};
pub use key::{eval_b, make_key_poly, KeyPoly};
pub use level::{eval_d, make_level_params, LevelParams};
pub use poly::{make_rn, polynomial_roots, DaubechiesPoly, MAX_ORDER};
pub use riesz::{convolve, first_factor, frequency_response, make_mask, riesz_factorize, Mask};
