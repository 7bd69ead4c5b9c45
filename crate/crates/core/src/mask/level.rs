use crate::error::{Error, Result};

/// Per-level scalars of the non-stationary construction.
///
/// `x0 = exp(-xi / 2^(k+1))` is the zero of the first mask factor (up to
/// sign) and `eta = 4 x0 / (1 + x0)^2` is the damping factor that deforms
/// the Daubechies polynomial. At `xi = 0` both collapse to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelParams {
    pub xi: f64,
    pub k: u32,
    pub x0: f64,
    pub eta: f64,
}

impl LevelParams {
    /// `xi / 2^(k+1)`, the exponent that appears in both closed forms.
    pub fn scaled_xi(&self) -> f64 {
        scaled(self.xi, self.k)
    }

    /// Damping factor through the hyperbolic form `2 / (1 + cosh(xi / 2^(k+1)))`.
    pub fn eta_cosh(&self) -> f64 {
        2.0 / (1.0 + self.scaled_xi().cosh())
    }
}

fn scaled(xi: f64, k: u32) -> f64 {
    // 2^(k+1) overflows i32 shifts for large k; powi is exact for powers of two.
    xi / 2f64.powi(k as i32 + 1)
}

pub fn make_level_params(xi: f64, k: u32) -> Result<LevelParams> {
    if !xi.is_finite() || xi < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "xi must be finite and nonnegative, got {xi}"
        )));
    }
    let s = scaled(xi, k);
    let x0 = (-s).exp();
    // eta = 4 x0 / (1 + x0)^2 = 1 / cosh^2(s/2); the sech form keeps full
    // relative precision when x0 is close to 1.
    let c = (0.5 * s).cosh();
    let eta = 1.0 / (c * c);
    if eta.is_nan() || eta < f64::MIN_POSITIVE || x0 < f64::MIN_POSITIVE {
        return Err(Error::DampingUnderflow { xi, k });
    }
    Ok(LevelParams { xi, k, x0, eta })
}

/// `d(e^{i omega}) = |e^{i omega} + x0|^{2N} / (1 + x0)^{2N}`.
pub fn eval_d(params: &LevelParams, order: usize, omega: f64) -> f64 {
    let x0 = params.x0;
    // |e^{iw} + x0|^2 = 1 + 2 x0 cos w + x0^2
    let num = 1.0 + 2.0 * x0 * omega.cos() + x0 * x0;
    let den = (1.0 + x0) * (1.0 + x0);
    (num.max(0.0) / den).powi(order as i32)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn xi_zero_is_stationary() {
        let p = make_level_params(0.0, 5).unwrap();
        assert_eq!(p.x0, 1.0);
        assert_eq!(p.eta, 1.0);
    }

    #[test]
    fn xi_two_level_zero() {
        // mpmath, 40 digits
        let p = make_level_params(2.0, 0).unwrap();
        assert!((p.x0 - 0.367_879_441_171_442_32).abs() < 1e-15);
        assert!((p.eta - 0.786_447_732_965_927_41).abs() < 1e-15);
        let alt = 4.0 * p.x0 / ((1.0 + p.x0) * (1.0 + p.x0));
        assert!((alt - p.eta).abs() <= 1e-12 * p.eta);
        assert!((p.eta_cosh() - p.eta).abs() <= 1e-12 * p.eta);
    }

    #[test]
    fn deep_levels_approach_one() {
        let p = make_level_params(16.0, 40).unwrap();
        assert!((p.x0 - 1.0).abs() < 1e-10);
        assert!((p.eta - 1.0).abs() < 1e-10);
    }

    #[test]
    fn eta_is_one_only_at_zero() {
        for &xi in &[1e-3, 0.5, 1.0, 4.0, 16.0, 100.0] {
            for k in 0..8 {
                let p = make_level_params(xi, k).unwrap();
                assert!(p.eta < 1.0 && p.eta > 0.0, "xi={xi} k={k}");
                let alt = 4.0 * p.x0 / ((1.0 + p.x0) * (1.0 + p.x0));
                assert!((alt - p.eta).abs() <= 1e-12 * p.eta);
                assert!((p.eta_cosh() - p.eta).abs() <= 1e-12 * p.eta);
            }
        }
    }

    #[test]
    fn rejects_bad_xi() {
        assert!(make_level_params(-1.0, 0).is_err());
        assert!(make_level_params(f64::NAN, 0).is_err());
        assert!(make_level_params(f64::INFINITY, 0).is_err());
        assert!(matches!(
            make_level_params(1e6, 0),
            Err(Error::DampingUnderflow { .. })
        ));
    }

    #[test]
    fn d_examples() {
        let p0 = make_level_params(0.0, 0).unwrap();
        assert!((eval_d(&p0, 1, 0.0) - 1.0).abs() < 1e-15);
        assert!(eval_d(&p0, 1, PI).abs() < 1e-15);
        let p = make_level_params(2.0, 0).unwrap();
        assert!((eval_d(&p, 1, PI) - 0.213_552_267_034_072_59).abs() < 1e-14);
    }
}
