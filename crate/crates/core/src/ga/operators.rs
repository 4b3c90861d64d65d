use serde::{Deserialize, Serialize};

use super::genome::{Genome, GenomeSpec, Individual};
use crate::numerics::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossoverMode {
    SinglePoint,
    MultiPoint(usize),
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    Roulette,
    Tournament(usize),
}

/// Swap alternating segments at the given sorted cut indices. A cut at `k`
/// starts a new segment at gene `k`; segments after an odd number of cuts
/// are exchanged.
pub fn crossover_at(a: &Genome, b: &Genome, cuts: &[usize]) -> (Genome, Genome) {
    debug_assert!(cuts.windows(2).all(|w| w[0] < w[1]));
    let mut c1 = a.clone();
    let mut c2 = b.clone();
    let mut swapped = false;
    let mut next_cut = cuts.iter().peekable();
    for k in 0..a.values.len() {
        while next_cut.next_if(|&&c| c == k).is_some() {
            swapped = !swapped;
        }
        if swapped {
            c1.values[k] = b.values[k];
            c2.values[k] = a.values[k];
        }
    }
    (c1, c2)
}

/// Exchange gene `k` wherever `mask[k]` is set.
pub fn crossover_masked(a: &Genome, b: &Genome, mask: &[bool]) -> (Genome, Genome) {
    let mut c1 = a.clone();
    let mut c2 = b.clone();
    for (k, &swap) in mask.iter().enumerate() {
        if swap {
            c1.values[k] = b.values[k];
            c2.values[k] = a.values[k];
        }
    }
    (c1, c2)
}

/// Whole-gene crossover; children inherit parent values only, so they are
/// always within bounds.
pub fn crossover(a: &Genome, b: &Genome, mode: CrossoverMode, rng: &mut Rng) -> (Genome, Genome) {
    assert_eq!(
        a.values.len(),
        b.values.len(),
        "parents from different specs"
    );
    let n = a.values.len();
    match mode {
        CrossoverMode::Uniform => {
            let mask: Vec<bool> = (0..n).map(|_| rng.chance(0.5)).collect();
            crossover_masked(a, b, &mask)
        }
        CrossoverMode::SinglePoint | CrossoverMode::MultiPoint(_) if n < 2 => {
            (a.clone(), b.clone())
        }
        CrossoverMode::SinglePoint => crossover_at(a, b, &[1 + rng.index(n - 1)]),
        CrossoverMode::MultiPoint(points) => {
            let points = points.clamp(1, n - 1);
            let mut cuts: Vec<usize> = rng
                .sample_distinct(n - 1, points)
                .into_iter()
                .map(|c| c + 1)
                .collect();
            cuts.sort_unstable();
            crossover_at(a, b, &cuts)
        }
    }
}

/// Perturb each gene independently with probability `rate`.
pub fn mutate(genome: &Genome, spec: &GenomeSpec, rate: f64, rng: &mut Rng) -> Genome {
    Genome::new(
        genome
            .values
            .iter()
            .zip(&spec.genes)
            .map(|(&v, g)| {
                if rng.chance(rate) {
                    g.perturb(v, rng)
                } else {
                    v
                }
            })
            .collect(),
    )
}

/// Rank weights for roulette selection: worst gets 1, best gets N; tied
/// fitnesses share the average of their ranks.
pub fn rank_weights(population: &[Individual]) -> Vec<f64> {
    let n = population.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| population[i].score().total_cmp(&population[j].score()));
    let mut weights = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let f = population[order[start]].score();
        let mut end = start + 1;
        while end < n && population[order[end]].score() == f {
            end += 1;
        }
        // ranks start+1 ..= end share their mean
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            weights[i] = avg;
        }
        start = end;
    }
    weights
}

/// Index of the selected individual, with probability proportional to its
/// rank weight.
pub fn select_roulette(population: &[Individual], rng: &mut Rng) -> usize {
    assert!(!population.is_empty());
    let weights = rank_weights(population);
    let total: f64 = weights.iter().sum();
    let mut spin = rng.uniform(0.0, total);
    for (i, w) in weights.iter().enumerate() {
        if spin < *w {
            return i;
        }
        spin -= w;
    }
    population.len() - 1
}

/// Best of `k` distinct uniformly drawn individuals; ties go to the lowest
/// index.
pub fn select_tournament(population: &[Individual], k: usize, rng: &mut Rng) -> usize {
    assert!(
        k >= 1 && k <= population.len(),
        "tournament size {k} out of range"
    );
    let mut entrants = rng.sample_distinct(population.len(), k);
    entrants.sort_unstable();
    let mut best = entrants[0];
    for &i in &entrants[1..] {
        if population[i].score() > population[best].score() {
            best = i;
        }
    }
    best
}

pub fn select(population: &[Individual], how: Selection, rng: &mut Rng) -> usize {
    match how {
        Selection::Roulette => select_roulette(population, rng),
        Selection::Tournament(k) => select_tournament(population, k.min(population.len()), rng),
    }
}
