use num_complex::Complex64;

use super::level::LevelParams;
use super::poly::DaubechiesPoly;

/// The key polynomial `Q(x) = (2 - eta)^{-N} R_N((1 - eta (1 - x)) / (2 - eta))`
/// of one level, held through its zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyPoly {
    pub params: LevelParams,
    pub order: usize,
    /// Zeros `C_j` in the `x = sin^2(omega/2)` variable.
    pub roots: Vec<Complex64>,
    /// Zeros `c_j = 1 - 2 C_j` in the `cos(omega)` variable.
    pub roots_cos: Vec<Complex64>,
    /// `(2-eta)^{-2N+1} eta^{N-1} (2N-2)!/((N-1)!)^2`. Underflows for very
    /// small `eta`; evaluation does not go through it.
    pub scale: f64,
    rn: DaubechiesPoly,
}

pub fn make_key_poly(rn: &DaubechiesPoly, params: LevelParams) -> KeyPoly {
    let eta = params.eta;
    let n = rn.order;
    let roots: Vec<Complex64> = rn
        .roots
        .iter()
        .map(|&c| (c * (2.0 - eta) + (eta - 1.0)) / eta)
        .collect();
    let roots_cos = roots.iter().map(|&c| 1.0 - 2.0 * c).collect();
    let scale = (2.0 - eta).powi(1 - 2 * n as i32) * eta.powi(n as i32 - 1) * rn.leading;
    KeyPoly {
        params,
        order: n,
        roots,
        roots_cos,
        scale,
        rn: rn.clone(),
    }
}

impl KeyPoly {
    /// `Q(x)` from the root product. The prefactor `eta/(2-eta)` is folded
    /// into each factor so that tiny `eta` neither underflows the scale nor
    /// overflows the product.
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_complex(Complex64::new(x, 0.0)).re
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        let eta = self.params.eta;
        let ratio = eta / (2.0 - eta);
        let front = self.rn.leading * (2.0 - eta).powi(-(self.order as i32));
        self.roots
            .iter()
            .fold(Complex64::new(front, 0.0), |acc, &c| {
                acc * ((x - c) * ratio)
            })
    }

    /// `Q(x)` by direct substitution into `R_N`; cross-check only.
    pub fn eval_direct(&self, x: f64) -> f64 {
        let eta = self.params.eta;
        let y = (1.0 - eta * (1.0 - x)) / (2.0 - eta);
        (2.0 - eta).powi(-(self.order as i32)) * self.rn.eval(y)
    }

    pub fn daubechies(&self) -> &DaubechiesPoly {
        &self.rn
    }
}

/// The trigonometric polynomial `b(e^{i omega}) = Q(sin^2(omega/2))`.
pub fn eval_b(key: &KeyPoly, omega: f64) -> f64 {
    let s = (0.5 * omega).sin();
    key.eval(s * s)
}
