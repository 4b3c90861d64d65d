use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{Matrix, Rng};

/// The four gated transforms of a cell, in storage order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    Input,
    Forget,
    Output,
    Candidate,
}

impl Gate {
    pub const ALL: [Gate; 4] = [Gate::Input, Gate::Forget, Gate::Output, Gate::Candidate];

    pub fn name(self) -> &'static str {
        match self {
            Gate::Input => "input gate",
            Gate::Forget => "forget gate",
            Gate::Output => "output gate",
            Gate::Candidate => "candidate",
        }
    }
}

/// `w` maps the layer input (hidden × input), `u` the previous hidden state
/// (hidden × hidden).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateWeights {
    pub w: Matrix,
    pub u: Matrix,
    pub b: Vec<f64>,
}

impl GateWeights {
    fn zeros(hidden: usize, input: usize) -> Self {
        Self {
            w: Matrix::zeros(hidden, input),
            u: Matrix::zeros(hidden, hidden),
            b: vec![0.0; hidden],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerParams {
    pub input: GateWeights,
    pub forget: GateWeights,
    pub output: GateWeights,
    pub candidate: GateWeights,
}

impl LayerParams {
    pub fn gate(&self, g: Gate) -> &GateWeights {
        match g {
            Gate::Input => &self.input,
            Gate::Forget => &self.forget,
            Gate::Output => &self.output,
            Gate::Candidate => &self.candidate,
        }
    }

    pub fn gate_mut(&mut self, g: Gate) -> &mut GateWeights {
        match g {
            Gate::Input => &mut self.input,
            Gate::Forget => &mut self.forget,
            Gate::Output => &mut self.output,
            Gate::Candidate => &mut self.candidate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LstmMeta {
    pub input_size: usize,
    pub hidden_size: usize,
    pub num_layers: usize,
}

impl LstmMeta {
    pub fn layer_input_size(&self, layer: usize) -> usize {
        if layer == 0 {
            self.input_size
        } else {
            self.hidden_size
        }
    }
}

/// Weights of a stacked LSTM with a single linear output unit on the top
/// layer's last hidden state. Gradients use the same type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LstmParams {
    pub meta: LstmMeta,
    pub layers: Vec<LayerParams>,
    pub w_out: Vec<f64>,
    pub b_out: f64,
}

impl LstmParams {
    pub fn zeros(input_size: usize, hidden_size: usize, num_layers: usize) -> Self {
        let meta = LstmMeta {
            input_size,
            hidden_size,
            num_layers,
        };
        let layers = (0..num_layers)
            .map(|l| {
                let inp = meta.layer_input_size(l);
                LayerParams {
                    input: GateWeights::zeros(hidden_size, inp),
                    forget: GateWeights::zeros(hidden_size, inp),
                    output: GateWeights::zeros(hidden_size, inp),
                    candidate: GateWeights::zeros(hidden_size, inp),
                }
            })
            .collect();
        Self {
            meta,
            layers,
            w_out: vec![0.0; hidden_size],
            b_out: 0.0,
        }
    }

    pub fn zeros_like(&self) -> Self {
        Self::zeros(
            self.meta.input_size,
            self.meta.hidden_size,
            self.meta.num_layers,
        )
    }

    /// Every parameter tensor in a fixed order. The output bias is last.
    pub fn tensors(&self) -> Vec<&[f64]> {
        let mut out = Vec::with_capacity(12 * self.layers.len() + 2);
        for layer in &self.layers {
            for g in Gate::ALL {
                let gw = layer.gate(g);
                out.push(gw.w.as_slice());
                out.push(gw.u.as_slice());
                out.push(gw.b.as_slice());
            }
        }
        out.push(&self.w_out);
        out.push(std::slice::from_ref(&self.b_out));
        out
    }

    pub fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        let mut out = Vec::with_capacity(12 * self.layers.len() + 2);
        for layer in &mut self.layers {
            let LayerParams {
                input,
                forget,
                output,
                candidate,
            } = layer;
            for gw in [input, forget, output, candidate] {
                out.push(gw.w.as_mut_slice());
                out.push(gw.u.as_mut_slice());
                out.push(gw.b.as_mut_slice());
            }
        }
        out.push(&mut self.w_out);
        out.push(std::slice::from_mut(&mut self.b_out));
        out
    }

    pub fn num_params(&self) -> usize {
        self.tensors().iter().map(|t| t.len()).sum()
    }

    pub fn flatten(&self) -> Vec<f64> {
        self.tensors().concat()
    }

    pub fn is_finite(&self) -> bool {
        self.tensors()
            .iter()
            .all(|t| t.iter().all(|x| x.is_finite()))
    }

    /// Checks that every tensor matches `meta` and holds finite values.
    pub fn validate(&self) -> Result<()> {
        let m = self.meta;
        if m.input_size == 0 || m.hidden_size == 0 || m.num_layers == 0 {
            return Err(Error::Invalid("LSTM sizes must be positive".into()));
        }
        if self.layers.len() != m.num_layers || self.w_out.len() != m.hidden_size {
            return Err(Error::Shape(
                "layer count or head size disagrees with meta".into(),
            ));
        }
        for (l, layer) in self.layers.iter().enumerate() {
            for g in Gate::ALL {
                let gw = layer.gate(g);
                if gw.w.shape() != (m.hidden_size, m.layer_input_size(l))
                    || gw.u.shape() != (m.hidden_size, m.hidden_size)
                    || gw.b.len() != m.hidden_size
                {
                    return Err(Error::Shape(format!(
                        "layer {l} {} has wrong shape",
                        g.name()
                    )));
                }
            }
        }
        if !self.is_finite() {
            return Err(Error::NonFinite("LSTM parameters"));
        }
        Ok(())
    }
}

fn glorot(rng: &mut Rng, rows: usize, cols: usize, fan_in: usize, fan_out: usize) -> Matrix {
    let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
    Matrix::from_fn(rows, cols, |_, _| rng.uniform(-limit, limit))
}

/// Glorot-uniform weights, zero biases except the forget gate (1.0).
pub fn init_params(
    input_size: usize,
    hidden_size: usize,
    num_layers: usize,
    seed: u64,
) -> Result<LstmParams> {
    if input_size == 0 || hidden_size == 0 || num_layers == 0 {
        return Err(Error::Invalid("LSTM sizes must be positive".into()));
    }
    let mut rng = Rng::new(seed);
    let mut p = LstmParams::zeros(input_size, hidden_size, num_layers);
    for l in 0..num_layers {
        let inp = p.meta.layer_input_size(l);
        for g in Gate::ALL {
            let gw = p.layers[l].gate_mut(g);
            gw.w = glorot(&mut rng, hidden_size, inp, inp, hidden_size);
            gw.u = glorot(&mut rng, hidden_size, hidden_size, hidden_size, hidden_size);
            if g == Gate::Forget {
                gw.b.fill(1.0);
            }
        }
    }
    let limit = (6.0 / (hidden_size + 1) as f64).sqrt();
    p.w_out = (0..hidden_size)
        .map(|_| rng.uniform(-limit, limit))
        .collect();
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_is_deterministic_with_expected_shapes() {
        let a = init_params(3, 4, 2, 7).unwrap();
        assert_eq!(a, init_params(3, 4, 2, 7).unwrap());
        assert_ne!(a, init_params(3, 4, 2, 8).unwrap());
        assert_eq!(a.layers[0].input.w.shape(), (4, 3));
        assert_eq!(a.layers[0].input.u.shape(), (4, 4));
        assert_eq!(a.layers[1].candidate.w.shape(), (4, 4));
        a.validate().unwrap();
    }

    #[test]
    fn biases() {
        let p = init_params(1, 5, 3, 1).unwrap();
        for layer in &p.layers {
            assert!(layer.forget.b.iter().all(|&b| b == 1.0));
            for g in [Gate::Input, Gate::Output, Gate::Candidate] {
                assert!(layer.gate(g).b.iter().all(|&b| b == 0.0));
            }
        }
        assert_eq!(p.b_out, 0.0);
    }

    #[test]
    fn weights_within_glorot_limit() {
        let p = init_params(1, 8, 2, 3).unwrap();
        let lim_w0 = (6.0f64 / 9.0).sqrt();
        let lim_u = (6.0f64 / 16.0).sqrt();
        assert!(p.layers[0]
            .input
            .w
            .as_slice()
            .iter()
            .all(|x| x.abs() <= lim_w0));
        assert!(p.layers[1]
            .output
            .u
            .as_slice()
            .iter()
            .all(|x| x.abs() <= lim_u));
    }

    #[test]
    fn tensor_views_agree() {
        let mut p = init_params(2, 3, 2, 0).unwrap();
        let n = p.num_params();
        // per layer: 4 gates × (3·in + 3·3 + 3), plus head 3 + 1
        assert_eq!(n, 4 * (6 + 9 + 3) + 4 * (9 + 9 + 3) + 4);
        assert_eq!(p.flatten().len(), n);
        let before = p.flatten();
        for t in p.tensors_mut() {
            for x in t.iter_mut() {
                *x *= 2.0;
            }
        }
        let after = p.flatten();
        assert!(before.iter().zip(&after).all(|(a, b)| 2.0 * a == *b));
    }
}
