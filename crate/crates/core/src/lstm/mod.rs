//! Stacked LSTM regressor trained by backpropagation through time.

mod cell;
mod network;
mod params;
mod persist;
mod train;

pub use cell::{cell_forward, CellState, StepCache};
pub use network::{
    accumulate_backward, backward, forward_batch, forward_sequence, forward_window, ForwardCache,
};
pub use params::{init_params, Gate, GateWeights, LayerParams, LstmMeta, LstmParams};
pub use persist::{load_model, save_model, MODEL_FORMAT};
pub(crate) use train::train_unrecorded;
pub use train::{train, Batch, Optimizer, TrainConfig, TrainedModel};
