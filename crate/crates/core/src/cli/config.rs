use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::data::{parse_date, Column};
use crate::error::{Error, Result};
use crate::ga::{CrossoverMode, GaConfig, Selection};
use crate::lstm::{Batch, Optimizer, TrainConfig};
use crate::numerics::derive_seed;

// Seed derivation tags: every module seed comes from the master seed.
const SEED_TRAIN: u64 = 1;
const SEED_GA: u64 = 2;

/// Everything a run needs. Every field has a default; a JSON config file
/// may set any subset, and command-line flags override the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub data: Option<PathBuf>,
    pub column: Column,
    /// Last date of the training period (inclusive).
    #[serde(with = "opt_date")]
    pub train_end: Option<NaiveDate>,
    pub out: PathBuf,
    pub seed: u64,
    pub jobs: usize,

    // fixed-hyperparameter training
    pub lookback: usize,
    pub hidden_units: usize,
    pub num_layers: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub optimizer: Optimizer,
    pub batch: Batch,
    pub gradient_clip: Option<f64>,

    // search
    pub population_size: usize,
    pub max_generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub selection: Selection,
    pub crossover: CrossoverMode,
    pub elite_count: usize,
    pub stagnation_patience: Option<usize>,
    /// Epochs per fitness evaluation.
    pub eval_epochs: usize,
    /// Trailing share of the training period held out to score genomes.
    pub validation_fraction: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let train = TrainConfig::default();
        let ga = GaConfig::default();
        Self {
            data: None,
            column: Column::Close,
            train_end: None,
            out: PathBuf::from("out"),
            seed: 0,
            jobs: 1,
            lookback: 20,
            hidden_units: 16,
            num_layers: 1,
            epochs: train.epochs,
            learning_rate: train.learning_rate,
            optimizer: train.optimizer,
            batch: train.batch,
            gradient_clip: train.gradient_clip,
            population_size: ga.population_size,
            max_generations: ga.max_generations,
            crossover_rate: ga.crossover_rate,
            mutation_rate: ga.mutation_rate,
            selection: ga.selection,
            crossover: ga.crossover,
            elite_count: ga.elite_count,
            stagnation_patience: ga.stagnation_patience,
            eval_epochs: 15,
            validation_fraction: 0.2,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            epochs: self.epochs,
            learning_rate: self.learning_rate,
            optimizer: self.optimizer,
            batch: self.batch,
            gradient_clip: self.gradient_clip,
            seed: derive_seed(self.seed, &[SEED_TRAIN]),
        }
    }

    /// Budget for one fitness evaluation; the seed is replaced per genome.
    pub fn eval_budget(&self) -> TrainConfig {
        TrainConfig {
            epochs: self.eval_epochs,
            ..self.train_config()
        }
    }

    pub fn ga_config(&self) -> GaConfig {
        GaConfig {
            population_size: self.population_size,
            max_generations: self.max_generations,
            crossover_rate: self.crossover_rate,
            mutation_rate: self.mutation_rate,
            selection: self.selection,
            crossover: self.crossover,
            elite_count: self.elite_count,
            stagnation_patience: self.stagnation_patience,
            seed: derive_seed(self.seed, &[SEED_GA]),
            jobs: self.jobs,
        }
    }

    /// Every problem with the configuration, for the given command.
    pub fn problems(&self, needs_split: bool, needs_search: bool) -> Vec<String> {
        let mut out = Vec::new();
        match &self.data {
            None => out.push("--data is required".to_string()),
            Some(p) if !p.is_file() => {
                out.push(format!("data file {} does not exist", p.display()))
            }
            _ => {}
        }
        if needs_split && self.train_end.is_none() {
            out.push("--train-end is required".into());
        }
        if self.jobs == 0 {
            out.push("jobs must be at least 1".into());
        }
        if self.lookback == 0 || self.hidden_units == 0 || self.num_layers == 0 {
            out.push("lookback, hidden_units and num_layers must be positive".into());
        }
        out.extend(self.train_config().problems());
        if needs_search {
            out.extend(self.ga_config().problems());
            if self.eval_epochs == 0 {
                out.push("eval_epochs must be at least 1".into());
            }
            if !(self.validation_fraction > 0.0 && self.validation_fraction < 1.0) {
                out.push(format!(
                    "validation_fraction must lie in (0, 1), got {}",
                    self.validation_fraction
                ));
            }
        }
        out
    }

    pub fn validate(&self, needs_split: bool, needs_search: bool) -> Result<()> {
        match self.problems(needs_split, needs_search).as_slice() {
            [] => Ok(()),
            ps => Err(Error::Invalid(format!(
                "invalid configuration:\n  {}",
                ps.join("\n  ")
            ))),
        }
    }
}

mod opt_date {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Option<NaiveDate>, s: S) -> Result<S::Ok, S::Error> {
        match d {
            Some(d) => s.serialize_some(&d.format("%Y-%m-%d").to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<NaiveDate>, D::Error> {
        let raw: Option<String> = Option::deserialize(d)?;
        raw.map(|r| {
            parse_date(&r).ok_or_else(|| serde::de::Error::custom(format!("bad date {r:?}")))
        })
        .transpose()
    }
}
