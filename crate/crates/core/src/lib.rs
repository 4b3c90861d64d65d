//! Univariate price forecasting with a from-scratch stacked LSTM whose
//! hyperparameters are tuned by a genetic algorithm.
//!
//! The pipeline runs ingestion ([`data`]), min–max scaling and sliding
//! windows, GA search ([`ga`]) over learning rate, hidden units, layer count
//! and lookback, full training ([`lstm`]) and evaluation ([`metrics`]).
//! The `galstm` binary wires these together; see [`cli`].

pub mod cli;
pub mod data;
pub mod error;
pub mod ga;
pub mod lstm;
pub mod metrics;
pub mod numerics;

pub use error::{Error, Result};

// The guide's snippets run as doc-tests so they cannot drift from the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/data.md")]
    mod data {}
    #[doc = include_str!("../../../book/src/lstm.md")]
    mod lstm {}
    #[doc = include_str!("../../../book/src/ga.md")]
    mod ga {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
