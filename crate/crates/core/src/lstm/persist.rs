//! JSON model files.
//!
//! ```json
//! { "format": "galstm-model", "version": 1,
//!   "lookback": 20, "scaler": { "lo": ..., "hi": ... },
//!   "params": { "meta": {...}, "layers": [...], "w_out": [...], "b_out": ... },
//!   "mae_history": [...] }
//! ```
//!
//! Matrices are stored as `{ "rows", "cols", "data" }` with `data` in
//! row-major order. Floats round-trip exactly.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::params::LstmParams;
use super::train::TrainedModel;
use crate::data::ScalerParams;
use crate::error::{Error, Result};

pub const MODEL_FORMAT: &str = "galstm-model";
const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    version: u32,
    lookback: usize,
    scaler: ScalerParams,
    params: LstmParams,
    mae_history: Vec<f64>,
}

impl TrainedModel {
    pub fn to_json(&self) -> Result<String> {
        let file = ModelFile {
            format: MODEL_FORMAT.into(),
            version: VERSION,
            lookback: self.lookback,
            scaler: self.scaler,
            params: self.params.clone(),
            mae_history: self.mae_history.clone(),
        };
        let mut s = serde_json::to_string_pretty(&file)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        if file.format != MODEL_FORMAT || file.version != VERSION {
            return Err(Error::Invalid(format!(
                "unsupported model file {} v{}",
                file.format, file.version
            )));
        }
        file.params.validate()?;
        if file.params.meta.input_size != 1 || file.lookback == 0 {
            return Err(Error::Invalid(
                "model must be univariate with positive lookback".into(),
            ));
        }
        let scaler = ScalerParams::new(file.scaler.lo, file.scaler.hi)?;
        Ok(Self {
            params: file.params,
            scaler,
            lookback: file.lookback,
            mae_history: file.mae_history,
        })
    }
}

pub fn save_model(model: &TrainedModel, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, model.to_json()?)?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<TrainedModel> {
    TrainedModel::from_json(&std::fs::read_to_string(path)?)
}
