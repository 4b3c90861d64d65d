use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::RunConfig;
use crate::data::{chronological_split, describe, fit_scaler, load_csv, make_windows, Series};
use crate::error::{Error, Result};
use crate::ga::{evaluate_fitness, evolve, GaHistory, GenomeSpec, Hyperparams};
use crate::lstm::{load_model, save_model, train, TrainedModel};
use crate::metrics::{compute_metrics, MetricsReport};

pub const MODEL_FILE: &str = "model.json";
pub const MAE_HISTORY_FILE: &str = "mae_history.csv";
pub const GA_HISTORY_FILE: &str = "ga_history.csv";
pub const BEST_GENOME_FILE: &str = "best_genome.json";
pub const PREDICTIONS_FILE: &str = "predictions.csv";
pub const METRICS_FILE: &str = "metrics.json";

fn load_series(cfg: &RunConfig) -> Result<Series> {
    let path = cfg
        .data
        .as_ref()
        .ok_or_else(|| Error::Invalid("--data is required".into()))?;
    let series = load_csv(path)?.with_target(cfg.column);
    for w in series.sanity_warnings() {
        log::warn!("{}: {w}", path.display());
    }
    Ok(series)
}

fn split(cfg: &RunConfig, series: &Series) -> Result<(Series, Series)> {
    let boundary = cfg
        .train_end
        .ok_or_else(|| Error::Invalid("--train-end is required".into()))?;
    chronological_split(series, boundary)
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    std::fs::create_dir_all(dir)?;
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn write_mae_history(model: &TrainedModel, dir: &Path) -> Result<PathBuf> {
    let mut w = create(dir, MAE_HISTORY_FILE)?;
    writeln!(w, "epoch,mae")?;
    for (epoch, mae) in model.mae_history.iter().enumerate() {
        writeln!(w, "{},{mae}", epoch + 1)?;
    }
    w.flush()?;
    Ok(dir.join(MAE_HISTORY_FILE))
}

/// Descriptive statistics table for every price column.
pub fn stats(data: &Path) -> Result<String> {
    Ok(describe(&load_csv(data)?).to_table())
}

/// Train with fixed hyperparameters; writes `model.json` and
/// `mae_history.csv` into `cfg.out`.
pub fn train_fixed(cfg: &RunConfig) -> Result<TrainedModel> {
    cfg.validate(true, false)?;
    let series = load_series(cfg)?;
    let (train_part, _) = split(cfg, &series)?;
    let scaler = fit_scaler(&train_part)?;
    let dataset = make_windows(&train_part, cfg.lookback, scaler)?;
    let model = train(
        &dataset,
        cfg.hidden_units,
        cfg.num_layers,
        &cfg.train_config(),
    )?;
    std::fs::create_dir_all(&cfg.out)?;
    save_model(&model, cfg.out.join(MODEL_FILE))?;
    write_mae_history(&model, &cfg.out)?;
    Ok(model)
}

#[derive(Debug, Clone, Serialize)]
pub struct BestGenome {
    pub hyperparams: Hyperparams,
    pub fitness: f64,
    pub genes: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub best: BestGenome,
    pub history: GaHistory,
    pub model: TrainedModel,
}

/// GA search over LSTM hyperparameters followed by a full-length retrain of
/// the winner. Writes `ga_history.csv`, `best_genome.json`, `model.json`
/// and `mae_history.csv`.
pub fn search(cfg: &RunConfig) -> Result<SearchOutcome> {
    cfg.validate(true, true)?;
    let series = load_series(cfg)?;
    let (train_part, _) = split(cfg, &series)?;

    // hold out the tail of the training period for fitness
    let n = train_part.len();
    let n_val = ((n as f64) * cfg.validation_fraction).round() as usize;
    if n_val == 0 || n_val >= n {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let values = train_part.values();
    let fit_scaler_params = crate::data::ScalerParams::fit(&values[..n - n_val])?;
    let scaled: Vec<f64> = values.iter().map(|&v| fit_scaler_params.scale(v)).collect();
    let (fit_values, val_values) = scaled.split_at(n - n_val);

    let spec = GenomeSpec::lstm();
    let budget = cfg.eval_budget();
    let (best, history) = evolve(&cfg.ga_config(), &spec, |genome, seed| {
        let budget = crate::lstm::TrainConfig {
            seed,
            ..budget.clone()
        };
        evaluate_fitness(genome, fit_values, val_values, fit_scaler_params, &budget)
    })?;

    let hp = Hyperparams::from_genome(&best.genome);
    log::info!("best genome {hp:?} fitness {:?}", best.fitness);
    let scaler = fit_scaler(&train_part)?;
    let dataset = make_windows(&train_part, hp.lookback, scaler)?;
    let final_cfg = crate::lstm::TrainConfig {
        learning_rate: hp.learning_rate,
        ..cfg.train_config()
    };
    let model = train(&dataset, hp.hidden_units, hp.num_layers, &final_cfg)?;

    let best = BestGenome {
        hyperparams: hp,
        fitness: best.score(),
        genes: best.genome.values.clone(),
    };
    let mut w = create(&cfg.out, GA_HISTORY_FILE)?;
    history.write_csv(&spec, &mut w)?;
    w.flush()?;
    let mut w = create(&cfg.out, BEST_GENOME_FILE)?;
    serde_json::to_writer_pretty(&mut w, &best)?;
    writeln!(w)?;
    w.flush()?;
    save_model(&model, cfg.out.join(MODEL_FILE))?;
    write_mae_history(&model, &cfg.out)?;
    Ok(SearchOutcome {
        best,
        history,
        model,
    })
}

#[derive(Debug, Clone)]
pub struct Evaluation {
    pub report: MetricsReport,
    pub rows: usize,
}

/// Score `model` on the records after `cfg.train_end`; writes
/// `predictions.csv` and `metrics.json`.
pub fn evaluate(cfg: &RunConfig, model_path: &Path) -> Result<Evaluation> {
    cfg.validate(true, false)?;
    let model = load_model(model_path)?;
    let series = load_series(cfg)?;
    let (_, test) = split(cfg, &series)?;
    let dataset = make_windows(&test, model.lookback, model.scaler)?;
    let predicted = model.predict(&dataset.windows)?;
    let actual = &test.values()[model.lookback..];
    let dates = &test.dates()[model.lookback..];
    let report = compute_metrics(actual, &predicted)?;

    let mut w = create(&cfg.out, PREDICTIONS_FILE)?;
    writeln!(w, "date,actual,predicted")?;
    for ((d, a), p) in dates.iter().zip(actual).zip(&predicted) {
        writeln!(w, "{},{a},{p}", d.format("%Y-%m-%d"))?;
    }
    w.flush()?;
    let mut w = create(&cfg.out, METRICS_FILE)?;
    serde_json::to_writer_pretty(&mut w, &report)?;
    writeln!(w)?;
    w.flush()?;
    Ok(Evaluation {
        report,
        rows: predicted.len(),
    })
}
