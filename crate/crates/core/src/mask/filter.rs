use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::key::make_key_poly;
use super::level::make_level_params;
use super::poly::{make_rn, DaubechiesPoly};
use super::riesz::{frequency_response, make_mask};
use crate::error::Result;

/// Real two-channel analysis filters for one transform stage.
///
/// `highpass[j] = (-1)^j lowpass[2N-1-j]`. The analytic rule
/// `g_j = (-1)^j h_{1-j}` lives on indices `2-2N ..= 1`; `g_offset = 2 - 2N` is
/// the analytic index of storage slot 0, so `g_{j + g_offset} = highpass[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterPair {
    pub order: usize,
    pub xi: f64,
    pub k: u32,
    pub lowpass: Vec<f64>,
    pub highpass: Vec<f64>,
    pub g_offset: i32,
}

impl FilterPair {
    pub fn len(&self) -> usize {
        self.lowpass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lowpass.is_empty()
    }

    /// `|H(w)|^2 + |H(w + pi)|^2 - 2`.
    pub fn qmf_defect(&self, omega: f64) -> f64 {
        let a = frequency_response(&self.lowpass, omega).norm_sqr();
        let b = frequency_response(&self.lowpass, omega + std::f64::consts::PI).norm_sqr();
        a + b - 2.0
    }

    /// Analytic high-pass coefficient `g_j`, zero outside the support.
    pub fn highpass_at(&self, j: i32) -> f64 {
        let slot = j - self.g_offset;
        if slot < 0 || slot as usize >= self.highpass.len() {
            0.0
        } else {
            self.highpass[slot as usize]
        }
    }

    fn from_lowpass(order: usize, xi: f64, k: u32, lowpass: Vec<f64>) -> Self {
        let len = lowpass.len();
        let highpass = (0..len)
            .map(|j| {
                let v = lowpass[len - 1 - j];
                if j % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .collect();
        FilterPair {
            order,
            xi,
            k,
            lowpass,
            highpass,
            g_offset: 2 - len as i32,
        }
    }
}

pub fn make_filter_pair(order: usize, xi: f64, k: u32) -> Result<FilterPair> {
    let rn = make_rn(order)?;
    make_filter_pair_from(&rn, xi, k)
}

/// As [`make_filter_pair`], reusing already computed Daubechies zeros.
pub fn make_filter_pair_from(rn: &DaubechiesPoly, xi: f64, k: u32) -> Result<FilterPair> {
    let params = make_level_params(xi, k)?;
    let key = make_key_poly(rn, params);
    let mask = make_mask(&key)?;
    Ok(FilterPair::from_lowpass(rn.order, xi, k, mask.h))
}

type CacheKey = (usize, u64, u32);

/// Shared memo of filter pairs keyed by `(N, xi, k)`.
#[derive(Debug, Default)]
pub struct FilterCache {
    polys: RwLock<HashMap<usize, Arc<DaubechiesPoly>>>,
    pairs: RwLock<HashMap<CacheKey, Arc<FilterPair>>>,
}

impl FilterCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, order: usize, xi: f64, k: u32) -> Result<Arc<FilterPair>> {
        // +0.0 and -0.0 must share an entry
        let key = (order, (xi + 0.0).to_bits(), k);
        if let Some(p) = self.pairs.read().unwrap().get(&key) {
            return Ok(Arc::clone(p));
        }
        let rn = self.daubechies(order)?;
        let pair = Arc::new(make_filter_pair_from(&rn, xi, k)?);
        let mut pairs = self.pairs.write().unwrap();
        Ok(Arc::clone(pairs.entry(key).or_insert(pair)))
    }

    fn daubechies(&self, order: usize) -> Result<Arc<DaubechiesPoly>> {
        if let Some(p) = self.polys.read().unwrap().get(&order) {
            return Ok(Arc::clone(p));
        }
        let rn = Arc::new(make_rn(order)?);
        let mut polys = self.polys.write().unwrap();
        Ok(Arc::clone(polys.entry(order).or_insert(rn)))
    }

    pub fn len(&self) -> usize {
        self.pairs.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
