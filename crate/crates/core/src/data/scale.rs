use serde::{Deserialize, Serialize};

use super::Series;
use crate::error::{Error, Result};

/// Min–max scaling parameters; maps `[lo, hi]` onto `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    pub lo: f64,
    pub hi: f64,
}

impl ScalerParams {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::NonFinite("scaler bounds"));
        }
        if hi <= lo {
            return Err(Error::DegenerateScale { value: lo });
        }
        Ok(Self { lo, hi })
    }

    /// Fit to the extremes of `values`.
    pub fn fit(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self::new(lo, hi)
    }

    pub fn scale(&self, v: f64) -> f64 {
        (v - self.lo) / (self.hi - self.lo)
    }

    pub fn inverse_scale(&self, s: f64) -> f64 {
        self.lo + s * (self.hi - self.lo)
    }
}

/// Fit on the target column of the training series only.
pub fn fit_scaler(train: &Series) -> Result<ScalerParams> {
    ScalerParams::fit(&train.values())
}
