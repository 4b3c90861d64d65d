use serde::{Deserialize, Serialize};

use super::network::{accumulate_backward, forward_batch};
use super::params::{init_params, LstmParams};
use crate::data::{ScalerParams, WindowedDataset};
use crate::error::{Error, Result};
use crate::numerics::{derive_seed, Rng};

/// Gradients are accumulated over slices of this many windows so a full
/// batch never needs every step cache in memory at once.
const CHUNK: usize = 160;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Optimizer {
    Sgd,
    Adam { beta1: f64, beta2: f64, eps: f64 },
}

impl Default for Optimizer {
    fn default() -> Self {
        Optimizer::Adam {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Batch {
    #[default]
    Full,
    Size(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub optimizer: Optimizer,
    pub batch: Batch,
    /// Global-norm clipping threshold.
    pub gradient_clip: Option<f64>,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 100,
            learning_rate: 0.01,
            optimizer: Optimizer::default(),
            batch: Batch::Full,
            gradient_clip: Some(5.0),
            seed: 0,
        }
    }
}

impl TrainConfig {
    /// Every violated constraint, not just the first.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.epochs == 0 {
            out.push("epochs must be at least 1".into());
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            out.push(format!(
                "learning_rate must be positive, got {}",
                self.learning_rate
            ));
        }
        if let Batch::Size(0) = self.batch {
            out.push("batch size must be positive".into());
        }
        if let Some(c) = self.gradient_clip {
            if !(c.is_finite() && c > 0.0) {
                out.push(format!("gradient_clip must be positive, got {c}"));
            }
        }
        if let Optimizer::Adam { beta1, beta2, eps } = self.optimizer {
            if !(0.0..1.0).contains(&beta1)
                || !(0.0..1.0).contains(&beta2)
                || eps.is_nan()
                || eps <= 0.0
            {
                out.push("adam needs 0 <= beta1, beta2 < 1 and eps > 0".into());
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.problems().as_slice() {
            [] => Ok(()),
            ps => Err(Error::Invalid(ps.join("; "))),
        }
    }
}

/// A fitted forecaster plus everything needed to use it on raw prices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub params: LstmParams,
    pub scaler: ScalerParams,
    pub lookback: usize,
    /// Training-set MAE in scaled units after each epoch.
    pub mae_history: Vec<f64>,
}

impl TrainedModel {
    /// Scaled predictions for scaled windows.
    pub fn predict_scaled(&self, windows: &[Vec<f64>]) -> Result<Vec<f64>> {
        if let Some(w) = windows.iter().find(|w| w.len() != self.lookback) {
            return Err(Error::Shape(format!(
                "window of length {} for a model with lookback {}",
                w.len(),
                self.lookback
            )));
        }
        predict_params(&self.params, windows)
    }

    /// Predictions in price units.
    pub fn predict(&self, windows: &[Vec<f64>]) -> Result<Vec<f64>> {
        Ok(self
            .predict_scaled(windows)?
            .into_iter()
            .map(|s| self.scaler.inverse_scale(s))
            .collect())
    }
}

pub(crate) fn predict_params(params: &LstmParams, windows: &[Vec<f64>]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(windows.len());
    for chunk in windows.chunks(CHUNK) {
        let refs: Vec<&[f64]> = chunk.iter().map(Vec::as_slice).collect();
        out.extend(forward_batch(params, &refs, false)?.0);
    }
    Ok(out)
}

/// Mean-squared-error gradient over `indices`, accumulated chunk by chunk.
fn batch_gradient(
    params: &LstmParams,
    data: &WindowedDataset,
    indices: &[usize],
) -> Result<(f64, LstmParams)> {
    let mut grads = params.zeros_like();
    let mut loss = 0.0;
    let scale = 1.0 / indices.len() as f64;
    for chunk in indices.chunks(CHUNK) {
        let refs: Vec<&[f64]> = chunk.iter().map(|&i| data.windows[i].as_slice()).collect();
        let (preds, cache) = forward_batch(params, &refs, true)?;
        let d_pred: Vec<f64> = preds
            .iter()
            .zip(chunk)
            .map(|(p, &i)| {
                let e = p - data.targets[i];
                loss += e * e * scale;
                2.0 * e * scale
            })
            .collect();
        accumulate_backward(
            params,
            &cache.expect("cache requested"),
            &d_pred,
            &mut grads,
        )?;
    }
    Ok((loss, grads))
}

fn clip_global_norm(grads: &mut LstmParams, max_norm: f64) {
    let norm = grads
        .tensors()
        .iter()
        .flat_map(|t| t.iter())
        .map(|g| g * g)
        .sum::<f64>()
        .sqrt();
    if norm > max_norm {
        let k = max_norm / norm;
        for t in grads.tensors_mut() {
            for g in t.iter_mut() {
                *g *= k;
            }
        }
    }
}

struct OptimizerState {
    kind: Optimizer,
    lr: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    step: i32,
}

impl OptimizerState {
    fn new(kind: Optimizer, lr: f64, n: usize) -> Self {
        let (m, v) = match kind {
            Optimizer::Sgd => (Vec::new(), Vec::new()),
            Optimizer::Adam { .. } => (vec![0.0; n], vec![0.0; n]),
        };
        Self {
            kind,
            lr,
            m,
            v,
            step: 0,
        }
    }

    fn apply(&mut self, params: &mut LstmParams, grads: &LstmParams) {
        self.step += 1;
        let grad_tensors = grads.tensors();
        let mut offset = 0;
        match self.kind {
            Optimizer::Sgd => {
                for (p, g) in params.tensors_mut().into_iter().zip(grad_tensors) {
                    for (pv, gv) in p.iter_mut().zip(g) {
                        *pv -= self.lr * gv;
                    }
                }
            }
            Optimizer::Adam { beta1, beta2, eps } => {
                let bc1 = 1.0 - beta1.powi(self.step);
                let bc2 = 1.0 - beta2.powi(self.step);
                for (p, g) in params.tensors_mut().into_iter().zip(grad_tensors) {
                    for (k, (pv, gv)) in p.iter_mut().zip(g).enumerate() {
                        let m = &mut self.m[offset + k];
                        let v = &mut self.v[offset + k];
                        *m = beta1 * *m + (1.0 - beta1) * gv;
                        *v = beta2 * *v + (1.0 - beta2) * gv * gv;
                        let m_hat = *m / bc1;
                        let v_hat = *v / bc2;
                        *pv -= self.lr * m_hat / (v_hat.sqrt() + eps);
                    }
                    offset += p.len();
                }
            }
        }
    }
}

fn mean_abs_error(preds: &[f64], targets: &[f64]) -> f64 {
    preds
        .iter()
        .zip(targets)
        .map(|(p, t)| (p - t).abs())
        .sum::<f64>()
        / targets.len() as f64
}

/// Fit a univariate stacked LSTM by minimizing MSE on scaled targets,
/// recording training MAE after every epoch.
pub fn train(
    dataset: &WindowedDataset,
    hidden_size: usize,
    num_layers: usize,
    cfg: &TrainConfig,
) -> Result<TrainedModel> {
    fit(dataset, hidden_size, num_layers, cfg, true)
}

/// Same optimization as [`train`] without the per-epoch MAE pass; the
/// returned `mae_history` is empty. Used for GA budget evaluations.
pub(crate) fn train_unrecorded(
    dataset: &WindowedDataset,
    hidden_size: usize,
    num_layers: usize,
    cfg: &TrainConfig,
) -> Result<TrainedModel> {
    fit(dataset, hidden_size, num_layers, cfg, false)
}

fn fit(
    dataset: &WindowedDataset,
    hidden_size: usize,
    num_layers: usize,
    cfg: &TrainConfig,
    record: bool,
) -> Result<TrainedModel> {
    cfg.validate()?;
    if dataset.is_empty() {
        return Err(Error::EmptySeries);
    }
    let mut params = init_params(1, hidden_size, num_layers, derive_seed(cfg.seed, &[0]))?;
    let mut shuffle_rng = Rng::new(derive_seed(cfg.seed, &[1]));
    let mut opt = OptimizerState::new(cfg.optimizer, cfg.learning_rate, params.num_params());

    let n = dataset.len();
    let batch_size = match cfg.batch {
        Batch::Full => n,
        Batch::Size(k) => k.min(n),
    };
    let mut order: Vec<usize> = (0..n).collect();
    let mut mae_history = Vec::with_capacity(cfg.epochs);

    for epoch in 1..=cfg.epochs {
        if batch_size < n {
            shuffle_rng.shuffle(&mut order);
        }
        for batch in order.chunks(batch_size) {
            let (loss, mut grads) = match batch_gradient(&params, dataset, batch) {
                Ok(r) => r,
                Err(Error::NonFinite(_)) => return Err(Error::Diverged { epoch }),
                Err(e) => return Err(e),
            };
            if !loss.is_finite() || !grads.is_finite() {
                return Err(Error::Diverged { epoch });
            }
            if let Some(clip) = cfg.gradient_clip {
                clip_global_norm(&mut grads, clip);
            }
            opt.apply(&mut params, &grads);
            if !params.is_finite() {
                return Err(Error::Diverged { epoch });
            }
        }
        if !record {
            continue;
        }
        let preds = match predict_params(&params, &dataset.windows) {
            Ok(p) => p,
            Err(Error::NonFinite(_)) => return Err(Error::Diverged { epoch }),
            Err(e) => return Err(e),
        };
        let mae = mean_abs_error(&preds, &dataset.targets);
        if !mae.is_finite() {
            return Err(Error::Diverged { epoch });
        }
        log::debug!("epoch {epoch}: mae {mae:.6}");
        mae_history.push(mae);
    }

    Ok(TrainedModel {
        params,
        scaler: dataset.scaler,
        lookback: dataset.lookback,
        mae_history,
    })
}
