//! Forward pass over whole windows and backpropagation through time.

use super::cell::{layer_step, StackedLayer, StepCache};
use super::params::LstmParams;
use crate::error::{Error, Result};
use crate::numerics::{dot, gemm, Matrix, Op};

/// Step caches indexed `[time][layer]` for one batch.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    pub steps: Vec<Vec<StepCache>>,
}

impl ForwardCache {
    pub fn batch_size(&self) -> usize {
        self.steps
            .last()
            .and_then(|s| s.last())
            .map_or(0, |c| c.h.rows())
    }
}

/// Pack univariate windows into per-time-step `batch × 1` inputs.
fn pack_windows(windows: &[&[f64]]) -> Result<Vec<Matrix>> {
    let lookback = windows.first().map_or(0, |w| w.len());
    if lookback == 0 {
        return Err(Error::Shape("empty window".into()));
    }
    if windows.iter().any(|w| w.len() != lookback) {
        return Err(Error::Shape("windows of unequal length".into()));
    }
    (0..lookback)
        .map(|t| Matrix::from_vec(windows.len(), 1, windows.iter().map(|w| w[t]).collect()))
        .collect()
}

/// Run the stack over a sequence of `batch × input` matrices from zero state
/// and apply the linear head to the top layer's final hidden state.
pub fn forward_sequence(
    params: &LstmParams,
    inputs: &[Matrix],
    keep_cache: bool,
) -> Result<(Vec<f64>, Option<ForwardCache>)> {
    let meta = params.meta;
    let batch = inputs.first().map_or(0, Matrix::rows);
    if inputs.is_empty() || batch == 0 {
        return Err(Error::Shape("empty input sequence".into()));
    }
    if inputs.iter().any(|x| x.shape() != (batch, meta.input_size)) {
        return Err(Error::Shape(format!(
            "inputs must be {batch}x{} at every step",
            meta.input_size
        )));
    }
    let stacked: Vec<StackedLayer> = params.layers.iter().map(StackedLayer::new).collect();
    let zero = Matrix::zeros(batch, meta.hidden_size);
    let mut h: Vec<Matrix> = vec![zero.clone(); meta.num_layers];
    let mut c: Vec<Matrix> = vec![zero; meta.num_layers];
    let mut steps = Vec::with_capacity(if keep_cache { inputs.len() } else { 0 });

    for x in inputs {
        let mut layer_in = x.clone();
        let mut at_t = Vec::with_capacity(meta.num_layers);
        for (l, layer) in stacked.iter().enumerate() {
            let h_prev = std::mem::replace(&mut h[l], Matrix::zeros(0, 0));
            let c_prev = std::mem::replace(&mut c[l], Matrix::zeros(0, 0));
            let step = layer_step(layer, layer_in, h_prev, c_prev)?;
            h[l] = step.h.clone();
            c[l] = step.c.clone();
            layer_in = step.h.clone();
            if keep_cache {
                at_t.push(step);
            }
        }
        if keep_cache {
            steps.push(at_t);
        }
    }

    let top = &h[meta.num_layers - 1];
    let preds: Vec<f64> = (0..batch)
        .map(|b| dot(top.row(b), &params.w_out) + params.b_out)
        .collect();
    if preds.iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite("output head"));
    }
    Ok((preds, keep_cache.then_some(ForwardCache { steps })))
}

/// Forward a batch of univariate windows; all windows must share one length.
pub fn forward_batch(
    params: &LstmParams,
    windows: &[&[f64]],
    keep_cache: bool,
) -> Result<(Vec<f64>, Option<ForwardCache>)> {
    if params.meta.input_size != 1 {
        return Err(Error::Shape(format!(
            "windows are univariate but the model expects {} inputs",
            params.meta.input_size
        )));
    }
    forward_sequence(params, &pack_windows(windows)?, keep_cache)
}

/// Scaled one-step-ahead prediction for a single window.
pub fn forward_window(window: &[f64], params: &LstmParams) -> Result<(f64, ForwardCache)> {
    let (preds, cache) = forward_batch(params, &[window], true)?;
    Ok((preds[0], cache.expect("cache requested")))
}

/// Exact gradients of a scalar loss given `d_loss/d_prediction` for every
/// row of the batch that produced `cache`.
pub fn backward(params: &LstmParams, cache: &ForwardCache, d_pred: &[f64]) -> Result<LstmParams> {
    let mut grads = params.zeros_like();
    accumulate_backward(params, cache, d_pred, &mut grads)?;
    Ok(grads)
}

/// Like [`backward`] but adds into an existing gradient.
pub fn accumulate_backward(
    params: &LstmParams,
    cache: &ForwardCache,
    d_pred: &[f64],
    grads: &mut LstmParams,
) -> Result<()> {
    let meta = params.meta;
    let batch = cache.batch_size();
    let steps = cache.steps.len();
    if d_pred.len() != batch || steps == 0 {
        return Err(Error::Shape(format!(
            "{} output gradients for a batch of {batch}",
            d_pred.len()
        )));
    }
    let hidden = meta.hidden_size;
    let top = meta.num_layers - 1;

    // head: pred_b = w_out · h_b + b_out
    let h_last = &cache.steps[steps - 1][top].h;
    for (b, &dp) in d_pred.iter().enumerate() {
        for (gw, hv) in grads.w_out.iter_mut().zip(h_last.row(b)) {
            *gw += dp * hv;
        }
        grads.b_out += dp;
    }

    let mut dh_next: Vec<Matrix> = vec![Matrix::zeros(batch, hidden); meta.num_layers];
    let mut dc_next: Vec<Matrix> = vec![Matrix::zeros(batch, hidden); meta.num_layers];
    {
        let seed = &mut dh_next[top];
        for (b, &dp) in d_pred.iter().enumerate() {
            for (d, w) in seed.row_mut(b).iter_mut().zip(&params.w_out) {
                *d += dp * w;
            }
        }
    }

    let stacked: Vec<StackedLayer> = params.layers.iter().map(StackedLayer::new).collect();
    let mut stacked_grads: Vec<StackedLayer> = stacked
        .iter()
        .map(|s| StackedLayer {
            w: Matrix::zeros(s.w.rows(), s.w.cols()),
            u: Matrix::zeros(s.u.rows(), s.u.cols()),
            b: vec![0.0; s.b.len()],
            hidden,
        })
        .collect();

    let mut dz = Matrix::zeros(batch, 4 * hidden);
    for t in (0..steps).rev() {
        // gradient flowing into layer l's output from layer l+1's input
        let mut from_above: Option<Matrix> = None;
        for l in (0..meta.num_layers).rev() {
            let s = &cache.steps[t][l];
            let mut dh = std::mem::replace(&mut dh_next[l], Matrix::zeros(0, 0));
            if let Some(extra) = from_above.take() {
                dh.axpy(1.0, &extra)?;
            }
            let mut dc_prev = std::mem::replace(&mut dc_next[l], Matrix::zeros(0, 0));

            // dc_prev holds the incoming dc until it is overwritten below
            for b in 0..batch {
                let (dh, dcp) = (dh.row(b), dc_prev.row_mut(b));
                let (iv, fv, ov, gv) = (s.i.row(b), s.f.row(b), s.o.row(b), s.g.row(b));
                let (tc, cp) = (s.tanh_c.row(b), s.c_prev.row(b));
                let dzr = dz.row_mut(b);
                for k in 0..hidden {
                    let dc = dcp[k] + dh[k] * ov[k] * (1.0 - tc[k] * tc[k]);
                    dzr[k] = dc * gv[k] * iv[k] * (1.0 - iv[k]);
                    dzr[hidden + k] = dc * cp[k] * fv[k] * (1.0 - fv[k]);
                    dzr[2 * hidden + k] = dh[k] * tc[k] * ov[k] * (1.0 - ov[k]);
                    dzr[3 * hidden + k] = dc * iv[k] * (1.0 - gv[k] * gv[k]);
                    dcp[k] = dc * fv[k];
                }
            }

            let (w, gw) = (&stacked[l], &mut stacked_grads[l]);
            gemm(1.0, &dz, Op::T, &s.x, Op::N, 1.0, &mut gw.w)?;
            gemm(1.0, &dz, Op::T, &s.h_prev, Op::N, 1.0, &mut gw.u)?;
            for b in 0..batch {
                for (gb, d) in gw.b.iter_mut().zip(dz.row(b)) {
                    *gb += d;
                }
            }
            let mut dh_prev = Matrix::zeros(batch, hidden);
            gemm(1.0, &dz, Op::N, &w.u, Op::N, 0.0, &mut dh_prev)?;
            if l > 0 {
                let mut dx = Matrix::zeros(batch, s.x.cols());
                gemm(1.0, &dz, Op::N, &w.w, Op::N, 0.0, &mut dx)?;
                from_above = Some(dx);
            }
            dh_next[l] = dh_prev;
            dc_next[l] = dc_prev;
        }
    }
    for (sg, layer) in stacked_grads.iter().zip(&mut grads.layers) {
        sg.scatter_add(layer);
    }
    Ok(())
}
