use super::params::{Gate, LayerParams, LstmMeta, LstmParams};
use crate::error::{Error, Result};
use crate::numerics::{gemm, sigmoid, tanh_act, Matrix, Op};

/// Hidden and cell state for every layer.
#[derive(Debug, Clone, PartialEq)]
pub struct CellState {
    pub h: Vec<Vec<f64>>,
    pub c: Vec<Vec<f64>>,
}

impl CellState {
    pub fn zeros(meta: LstmMeta) -> Self {
        Self {
            h: vec![vec![0.0; meta.hidden_size]; meta.num_layers],
            c: vec![vec![0.0; meta.hidden_size]; meta.num_layers],
        }
    }
}

/// Intermediates of one layer at one time step, for a batch of rows.
///
/// Every matrix is `batch × hidden` except `x`, which is `batch × input`.
#[derive(Debug, Clone)]
pub struct StepCache {
    pub x: Matrix,
    pub h_prev: Matrix,
    pub c_prev: Matrix,
    pub i: Matrix,
    pub f: Matrix,
    pub o: Matrix,
    pub g: Matrix,
    pub c: Matrix,
    pub tanh_c: Matrix,
    pub h: Matrix,
}

/// The four gates of one layer stacked row-wise (input, forget, output,
/// candidate) so a step needs one product per operand instead of four.
#[derive(Debug, Clone)]
pub(crate) struct StackedLayer {
    /// `4·hidden × input`
    pub w: Matrix,
    /// `4·hidden × hidden`
    pub u: Matrix,
    pub b: Vec<f64>,
    pub hidden: usize,
}

impl StackedLayer {
    pub fn new(layer: &LayerParams) -> Self {
        let hidden = layer.input.b.len();
        let inp = layer.input.w.cols();
        let mut w = Matrix::zeros(4 * hidden, inp);
        let mut u = Matrix::zeros(4 * hidden, hidden);
        let mut b = Vec::with_capacity(4 * hidden);
        for (k, g) in Gate::ALL.into_iter().enumerate() {
            let gw = layer.gate(g);
            let rows = k * hidden..(k + 1) * hidden;
            w.as_mut_slice()[rows.start * inp..rows.end * inp].copy_from_slice(gw.w.as_slice());
            u.as_mut_slice()[rows.start * hidden..rows.end * hidden]
                .copy_from_slice(gw.u.as_slice());
            b.extend_from_slice(&gw.b);
        }
        Self { w, u, b, hidden }
    }

    /// Add stacked gradients into per-gate gradient storage.
    pub fn scatter_add(&self, into: &mut LayerParams) {
        let (h, inp) = (self.hidden, self.w.cols());
        for (k, g) in Gate::ALL.into_iter().enumerate() {
            let gw = into.gate_mut(g);
            let w_src = &self.w.as_slice()[k * h * inp..(k + 1) * h * inp];
            let u_src = &self.u.as_slice()[k * h * h..(k + 1) * h * h];
            for (d, s) in gw.w.as_mut_slice().iter_mut().zip(w_src) {
                *d += s;
            }
            for (d, s) in gw.u.as_mut_slice().iter_mut().zip(u_src) {
                *d += s;
            }
            for (d, s) in gw.b.iter_mut().zip(&self.b[k * h..(k + 1) * h]) {
                *d += s;
            }
        }
    }
}

fn column_block(z: &Matrix, block: usize, width: usize, f: impl Fn(f64) -> f64) -> Matrix {
    Matrix::from_fn(z.rows(), width, |r, c| f(z.get(r, block * width + c)))
}

/// One gated step over a batch:
///
/// ```text
/// i = σ(W_i x + U_i h + b_i)    f = σ(W_f x + U_f h + b_f)
/// o = σ(W_o x + U_o h + b_o)    g = tanh(W_g x + U_g h + b_g)
/// c' = f ⊙ c + i ⊙ g            h' = o ⊙ tanh(c')
/// ```
pub(crate) fn layer_step(
    layer: &StackedLayer,
    x: Matrix,
    h_prev: Matrix,
    c_prev: Matrix,
) -> Result<StepCache> {
    let hidden = layer.hidden;
    let mut z = Matrix::zeros(x.rows(), 4 * hidden);
    gemm(1.0, &x, Op::N, &layer.w, Op::T, 0.0, &mut z)?;
    gemm(1.0, &h_prev, Op::N, &layer.u, Op::T, 1.0, &mut z)?;
    for r in 0..z.rows() {
        for (zv, b) in z.row_mut(r).iter_mut().zip(&layer.b) {
            *zv += b;
        }
    }
    if !z.is_finite() {
        for (k, g) in Gate::ALL.into_iter().enumerate() {
            if !column_block(&z, k, hidden, |v| v).is_finite() {
                return Err(Error::NonFinite(g.name()));
            }
        }
    }
    let i = column_block(&z, 0, hidden, sigmoid);
    let f = column_block(&z, 1, hidden, sigmoid);
    let o = column_block(&z, 2, hidden, sigmoid);
    let g = column_block(&z, 3, hidden, tanh_act);

    let mut c = Matrix::zeros(i.rows(), i.cols());
    let mut tanh_c = c.clone();
    let mut h = c.clone();
    let n = c.as_slice().len();
    let (cs, ts, hs) = (c.as_mut_slice(), tanh_c.as_mut_slice(), h.as_mut_slice());
    let (iv, fv, ov, gv, cp) = (
        i.as_slice(),
        f.as_slice(),
        o.as_slice(),
        g.as_slice(),
        c_prev.as_slice(),
    );
    for k in 0..n {
        cs[k] = fv[k] * cp[k] + iv[k] * gv[k];
        ts[k] = tanh_act(cs[k]);
        hs[k] = ov[k] * ts[k];
    }
    if !c.is_finite() {
        return Err(Error::NonFinite("cell state"));
    }
    Ok(StepCache {
        x,
        h_prev,
        c_prev,
        i,
        f,
        o,
        g,
        c,
        tanh_c,
        h,
    })
}

/// Single-sample step of layer `layer` from `state`.
///
/// Returns the new hidden and cell vectors plus the step cache.
pub fn cell_forward(
    x: &[f64],
    state: &CellState,
    params: &LstmParams,
    layer: usize,
) -> Result<(Vec<f64>, Vec<f64>, StepCache)> {
    let meta = params.meta;
    if layer >= meta.num_layers {
        return Err(Error::Shape(format!(
            "layer {layer} of a {}-layer network",
            meta.num_layers
        )));
    }
    let (hp, cp) = (&state.h[layer], &state.c[layer]);
    if x.len() != meta.layer_input_size(layer)
        || hp.len() != meta.hidden_size
        || cp.len() != meta.hidden_size
    {
        return Err(Error::Shape(format!(
            "layer {layer}: input {} / state {} / {}",
            x.len(),
            hp.len(),
            cp.len()
        )));
    }
    let row = |v: &[f64]| Matrix::from_vec(1, v.len(), v.to_vec());
    let stacked = StackedLayer::new(&params.layers[layer]);
    let cache = layer_step(&stacked, row(x)?, row(hp)?, row(cp)?)?;
    Ok((cache.h.row(0).to_vec(), cache.c.row(0).to_vec(), cache))
}
