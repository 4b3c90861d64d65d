//! Genetic algorithm over bounded hyperparameter genomes.

mod evolve;
mod fitness;
mod genome;
mod operators;

pub use evolve::{
    evaluation_seed, evolve, GaConfig, GaHistory, GenerationRecord, FITNESS_SENTINEL,
};
pub use fitness::evaluate_fitness;
pub use genome::{
    init_population, GeneKind, GeneScale, GeneSpec, Genome, GenomeSpec, Hyperparams, Individual,
};
pub use operators::{
    crossover, crossover_at, crossover_masked, mutate, rank_weights, select, select_roulette,
    select_tournament, CrossoverMode, Selection,
};
