use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::genome::{init_population, Genome, GenomeSpec, Individual};
use super::operators::{crossover, mutate, select, CrossoverMode, Selection};
use crate::error::{Error, Result};
use crate::numerics::{derive_seed, Rng};

/// Fitness assigned to genomes whose evaluation failed or diverged.
pub const FITNESS_SENTINEL: f64 = -1e9;

/// Smallest best-fitness gain that resets the stagnation counter.
const IMPROVEMENT_FLOOR: f64 = 1e-9;

// Stream tags for seed derivation.
const STREAM_INIT: u64 = 0;
const STREAM_BREED: u64 = 1;
const STREAM_EVAL: u64 = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaConfig {
    pub population_size: usize,
    pub max_generations: usize,
    pub crossover_rate: f64,
    /// Per-gene mutation probability.
    pub mutation_rate: f64,
    pub selection: Selection,
    pub crossover: CrossoverMode,
    pub elite_count: usize,
    /// Stop after this many generations without improvement.
    pub stagnation_patience: Option<usize>,
    pub seed: u64,
    /// Worker threads for fitness evaluation. Results do not depend on it.
    pub jobs: usize,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 10,
            max_generations: 8,
            crossover_rate: 0.8,
            mutation_rate: 0.2,
            selection: Selection::Tournament(3),
            crossover: CrossoverMode::Uniform,
            elite_count: 1,
            stagnation_patience: None,
            seed: 0,
            jobs: 1,
        }
    }
}

impl GaConfig {
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.population_size < 2 {
            out.push("population_size must be at least 2".into());
        }
        if self.max_generations == 0 {
            out.push("max_generations must be at least 1".into());
        }
        for (name, r) in [
            ("crossover_rate", self.crossover_rate),
            ("mutation_rate", self.mutation_rate),
        ] {
            if !(0.0..=1.0).contains(&r) {
                out.push(format!("{name} must lie in [0, 1], got {r}"));
            }
        }
        if self.elite_count >= self.population_size {
            out.push("elite_count must be smaller than population_size".into());
        }
        // Larger tournaments are capped at the population size by `select`.
        if self.selection == Selection::Tournament(0) {
            out.push("tournament size must be at least 1".into());
        }
        if let CrossoverMode::MultiPoint(0) = self.crossover {
            out.push("multi_point needs at least one cut".into());
        }
        if self.stagnation_patience == Some(0) {
            out.push("stagnation_patience must be positive".into());
        }
        if self.jobs == 0 {
            out.push("jobs must be at least 1".into());
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.problems().as_slice() {
            [] => Ok(()),
            ps => Err(Error::Invalid(ps.join("; "))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    pub best_genome: Genome,
    /// Fitness of every individual, in population order.
    pub population_fitness: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GaHistory {
    pub generations: Vec<GenerationRecord>,
}

impl GaHistory {
    pub fn len(&self) -> usize {
        self.generations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generations.is_empty()
    }

    pub fn best_fitness(&self) -> Vec<f64> {
        self.generations.iter().map(|g| g.best_fitness).collect()
    }

    /// `generation,best_fitness,mean_fitness,<gene names...>`
    pub fn write_csv(&self, spec: &GenomeSpec, mut out: impl Write) -> Result<()> {
        write!(out, "generation,best_fitness,mean_fitness")?;
        for name in spec.names() {
            write!(out, ",{name}")?;
        }
        writeln!(out)?;
        for g in &self.generations {
            write!(
                out,
                "{},{},{}",
                g.generation, g.best_fitness, g.mean_fitness
            )?;
            for v in &g.best_genome.values {
                write!(out, ",{v}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Seed handed to the fitness function for individual `index` of
/// `generation`. Independent of evaluation order and thread count.
pub fn evaluation_seed(master: u64, generation: usize, index: usize) -> u64 {
    derive_seed(master, &[STREAM_EVAL, generation as u64, index as u64])
}

fn evaluate_pending<F>(
    population: &mut [Individual],
    generation: usize,
    cfg: &GaConfig,
    fitness_fn: &F,
    pool: Option<&rayon::ThreadPool>,
) where
    F: Fn(&Genome, u64) -> f64 + Sync,
{
    let score = |(index, ind): (usize, &Individual)| {
        let f = fitness_fn(&ind.genome, evaluation_seed(cfg.seed, generation, index));
        if f.is_finite() {
            f
        } else {
            FITNESS_SENTINEL
        }
    };
    let pending: Vec<(usize, &Individual)> = population
        .iter()
        .enumerate()
        .filter(|(_, ind)| ind.fitness.is_none())
        .collect();
    let scores: Vec<(usize, f64)> = match pool {
        Some(pool) => pool.install(|| {
            pending
                .par_iter()
                .map(|&(i, ind)| (i, score((i, ind))))
                .collect()
        }),
        None => pending
            .iter()
            .map(|&(i, ind)| (i, score((i, ind))))
            .collect(),
    };
    for (i, f) in scores {
        population[i].fitness = Some(f);
    }
}

/// Indices sorted best-first; ties keep the lower index first.
fn ranking(population: &[Individual]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..population.len()).collect();
    order.sort_by(|&a, &b| population[b].score().total_cmp(&population[a].score()));
    order
}

/// Generational GA with elitism.
///
/// Each generation evaluates new individuals, records statistics, then keeps
/// the `elite_count` best unchanged and fills the rest by
/// select → crossover (or clone) → mutate. Elites keep their fitness, so
/// with `elite_count >= 1` the best fitness never decreases.
pub fn evolve<F>(
    cfg: &GaConfig,
    spec: &GenomeSpec,
    fitness_fn: F,
) -> Result<(Individual, GaHistory)>
where
    F: Fn(&Genome, u64) -> f64 + Sync,
{
    cfg.validate()?;
    let pool = if cfg.jobs > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.jobs)
                .build()
                .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };

    let mut init_rng = Rng::new(derive_seed(cfg.seed, &[STREAM_INIT]));
    let mut population = init_population(spec, cfg.population_size, &mut init_rng);
    let mut history = GaHistory::default();
    let mut best_overall: Option<Individual> = None;
    let mut stale = 0usize;

    for generation in 0..cfg.max_generations {
        evaluate_pending(&mut population, generation, cfg, &fitness_fn, pool.as_ref());
        let order = ranking(&population);
        let best = &population[order[0]];
        let mean = population.iter().map(Individual::score).sum::<f64>() / population.len() as f64;
        history.generations.push(GenerationRecord {
            generation,
            best_fitness: best.score(),
            mean_fitness: mean,
            best_genome: best.genome.clone(),
            population_fitness: population.iter().map(Individual::score).collect(),
        });
        log::info!(
            "generation {generation}: best {:.6} mean {:.6}",
            best.score(),
            mean
        );

        match &best_overall {
            Some(b) if best.score() <= b.score() + IMPROVEMENT_FLOOR => stale += 1,
            _ => stale = 0,
        }
        if best_overall
            .as_ref()
            .is_none_or(|b| best.score() > b.score())
        {
            best_overall = Some(best.clone());
        }
        if generation + 1 == cfg.max_generations
            || cfg.stagnation_patience.is_some_and(|p| stale >= p)
        {
            break;
        }

        let mut rng = Rng::new(derive_seed(cfg.seed, &[STREAM_BREED, generation as u64]));
        let mut next: Vec<Individual> = order[..cfg.elite_count]
            .iter()
            .map(|&i| population[i].clone())
            .collect();
        while next.len() < cfg.population_size {
            let a = &population[select(&population, cfg.selection, &mut rng)].genome;
            let b = &population[select(&population, cfg.selection, &mut rng)].genome;
            let (c1, c2) = if rng.chance(cfg.crossover_rate) {
                crossover(a, b, cfg.crossover, &mut rng)
            } else {
                (a.clone(), b.clone())
            };
            for child in [c1, c2] {
                if next.len() < cfg.population_size {
                    next.push(Individual::new(mutate(
                        &child,
                        spec,
                        cfg.mutation_rate,
                        &mut rng,
                    )));
                }
            }
        }
        population = next;
    }

    Ok((best_overall.expect("at least one generation"), history))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ga::genome::GeneSpec;

    fn one_gene() -> GenomeSpec {
        GenomeSpec::new(vec![GeneSpec::real("x", 0.0, 1.0)])
    }

    fn parabola(g: &Genome, _seed: u64) -> f64 {
        -(g.values[0] - 0.5).powi(2)
    }

    #[test]
    fn finds_analytic_optimum() {
        let cfg = GaConfig {
            population_size: 20,
            max_generations: 30,
            seed: 5,
            ..Default::default()
        };
        let (best, history) = evolve(&cfg, &one_gene(), parabola).unwrap();
        assert!((best.genome.values[0] - 0.5).abs() < 0.05);
        assert_eq!(history.len(), 30);
    }

    #[test]
    fn single_generation_history() {
        let cfg = GaConfig {
            population_size: 2,
            max_generations: 1,
            elite_count: 1,
            selection: Selection::Tournament(2),
            ..Default::default()
        };
        let (_, history) = evolve(&cfg, &one_gene(), parabola).unwrap();
        assert_eq!(history.len(), 1);
    }

    #[test]
    fn stagnation_stops_early() {
        let cfg = GaConfig {
            population_size: 4,
            max_generations: 50,
            stagnation_patience: Some(3),
            ..Default::default()
        };
        let (_, history) = evolve(&cfg, &one_gene(), |_, _| -1.0).unwrap();
        // generation 0 sets the baseline, then three stale generations
        assert_eq!(history.len(), 4);
    }

    #[test]
    fn non_finite_fitness_becomes_sentinel() {
        let cfg = GaConfig {
            population_size: 3,
            max_generations: 1,
            ..Default::default()
        };
        let (best, _) = evolve(&cfg, &one_gene(), |_, _| f64::NAN).unwrap();
        assert_eq!(best.fitness, Some(FITNESS_SENTINEL));
    }

    #[test]
    fn parallel_matches_serial() {
        let noisy = |g: &Genome, seed: u64| {
            let mut r = Rng::new(seed);
            -(g.values[0] - 0.3).abs() + 0.01 * r.normal(0.0, 1.0)
        };
        let serial = GaConfig {
            population_size: 12,
            max_generations: 6,
            seed: 77,
            ..Default::default()
        };
        let parallel = GaConfig {
            jobs: 4,
            ..serial.clone()
        };
        assert_eq!(
            evolve(&serial, &one_gene(), noisy).unwrap(),
            evolve(&parallel, &one_gene(), noisy).unwrap()
        );
    }

    #[test]
    fn invalid_config_lists_every_problem() {
        let cfg = GaConfig {
            population_size: 1,
            max_generations: 0,
            crossover_rate: 1.5,
            elite_count: 1,
            jobs: 0,
            ..Default::default()
        };
        assert!(cfg.problems().len() >= 5, "{:?}", cfg.problems());
        assert!(evolve(&cfg, &one_gene(), parabola).is_err());
    }

    #[test]
    fn history_csv_layout() {
        let h = GaHistory {
            generations: vec![GenerationRecord {
                generation: 0,
                best_fitness: -0.5,
                mean_fitness: -1.25,
                best_genome: Genome::new(vec![0.01, 16.0, 2.0, 20.0]),
                population_fitness: vec![-0.5, -2.0],
            }],
        };
        let mut buf = Vec::new();
        h.write_csv(&GenomeSpec::lstm(), &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "generation,best_fitness,mean_fitness,learning_rate,hidden_units,num_layers,lookback\n\
             0,-0.5,-1.25,0.01,16,2,20\n"
        );
    }
}
