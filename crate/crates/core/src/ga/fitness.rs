use super::evolve::FITNESS_SENTINEL;
use super::genome::{Genome, Hyperparams};
use crate::data::{ScalerParams, WindowedDataset};
use crate::lstm::{train_unrecorded, TrainConfig};

/// Negative validation MAE (scaled units) of an LSTM trained for the
/// `budget` epochs with the genome's hyperparameters.
///
/// `train_values` and `val_values` are consecutive, already-scaled segments.
/// Validation windows reach back into the tail of the training segment, so
/// every validation value is predicted. Any failure, including divergence or
/// a lookback that does not fit the data, yields [`FITNESS_SENTINEL`].
pub fn evaluate_fitness(
    genome: &Genome,
    train_values: &[f64],
    val_values: &[f64],
    scaler: ScalerParams,
    budget: &TrainConfig,
) -> f64 {
    let hp = Hyperparams::from_genome(genome);
    let run = || -> crate::Result<f64> {
        let fit = WindowedDataset::from_scaled(train_values, hp.lookback, scaler)?;
        if val_values.is_empty() || hp.lookback > train_values.len() {
            return Err(crate::Error::InsufficientData {
                needed: hp.lookback,
                got: train_values.len(),
            });
        }
        let mut joined = train_values[train_values.len() - hp.lookback..].to_vec();
        joined.extend_from_slice(val_values);
        let val = WindowedDataset::from_scaled(&joined, hp.lookback, scaler)?;
        let cfg = TrainConfig {
            learning_rate: hp.learning_rate,
            ..budget.clone()
        };
        let model = train_unrecorded(&fit, hp.hidden_units, hp.num_layers, &cfg)?;
        let preds = model.predict_scaled(&val.windows)?;
        let mae = preds
            .iter()
            .zip(&val.targets)
            .map(|(p, t)| (p - t).abs())
            .sum::<f64>()
            / val.len() as f64;
        Ok(-mae)
    };
    match run() {
        Ok(f) if f.is_finite() => f,
        Ok(_) => FITNESS_SENTINEL,
        Err(e) => {
            log::debug!("genome {:?} rejected: {e}", genome.values);
            FITNESS_SENTINEL
        }
    }
}
