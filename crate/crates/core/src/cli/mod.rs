//! End-to-end commands behind the `galstm` binary.
//!
//! Each command validates its whole configuration before touching data and
//! writes its artifacts into the configured output directory.

mod commands;
mod config;

pub use commands::{
    evaluate, search, stats, train_fixed, BestGenome, Evaluation, SearchOutcome, BEST_GENOME_FILE,
    GA_HISTORY_FILE, MAE_HISTORY_FILE, METRICS_FILE, MODEL_FILE, PREDICTIONS_FILE,
};
pub use config::RunConfig;
