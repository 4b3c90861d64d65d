use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use galstm::cli::{self, RunConfig};
use galstm::data::{parse_date, Column};

#[derive(Parser)]
#[command(name = "galstm", version, about = "GA-tuned LSTM price forecasting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print count/mean/std/min/quartiles/max for every price column.
    Stats {
        #[arg(long)]
        data: PathBuf,
    },
    /// Train with fixed hyperparameters.
    Train(Common),
    /// Genetic search over hyperparameters, then retrain the best genome.
    Search(Common),
    /// Score a saved model on the records after --train-end.
    Evaluate {
        #[command(flatten)]
        common: Common,
        /// Defaults to <out>/model.json.
        #[arg(long)]
        model: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    column: Option<Column>,
    /// Last training date, YYYY-MM-DD or YYYY/M/D.
    #[arg(long, value_parser = parse_date_arg)]
    train_end: Option<chrono::NaiveDate>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    lookback: Option<usize>,
    #[arg(long)]
    hidden_units: Option<usize>,
    #[arg(long)]
    num_layers: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    population_size: Option<usize>,
    #[arg(long)]
    max_generations: Option<usize>,
    #[arg(long)]
    eval_epochs: Option<usize>,
}

fn parse_date_arg(s: &str) -> Result<chrono::NaiveDate, String> {
    parse_date(s).ok_or_else(|| format!("expected YYYY-MM-DD, got {s:?}"))
}

impl Common {
    fn resolve(self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_file(p)
                .with_context(|| format!("reading config {}", p.display()))?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field {
                    cfg.$field = v;
                }
            )*};
        }
        set!(
            column,
            epochs,
            seed,
            jobs,
            out,
            lookback,
            hidden_units,
            num_layers
        );
        set!(learning_rate, population_size, max_generations, eval_epochs);
        if self.data.is_some() {
            cfg.data = self.data;
        }
        if self.train_end.is_some() {
            cfg.train_end = self.train_end;
        }
        Ok(cfg)
    }
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Stats { data } => {
            print!("{}", cli::stats(&data)?);
        }
        Command::Train(common) => {
            let cfg = common.resolve()?;
            let model = cli::train_fixed(&cfg)?;
            println!(
                "trained {} epochs, final training MAE {:.6} (scaled); wrote {}",
                model.mae_history.len(),
                model.mae_history.last().copied().unwrap_or(f64::NAN),
                cfg.out.display()
            );
        }
        Command::Search(common) => {
            let cfg = common.resolve()?;
            let outcome = cli::search(&cfg)?;
            let hp = outcome.best.hyperparams;
            println!(
                "best genome: learning_rate={} hidden_units={} num_layers={} lookback={} (fitness {:.6})",
                hp.learning_rate, hp.hidden_units, hp.num_layers, hp.lookback, outcome.best.fitness
            );
            println!("wrote {}", cfg.out.display());
        }
        Command::Evaluate { common, model } => {
            let cfg = common.resolve()?;
            let model = model.unwrap_or_else(|| cfg.out.join(cli::MODEL_FILE));
            let eval = cli::evaluate(&cfg, &model)?;
            print!("{}", eval.report);
        }
    }
    Ok(())
}
