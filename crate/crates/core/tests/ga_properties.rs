use galstm::ga::{
    crossover, crossover_at, evolve, init_population, mutate, select_roulette, select_tournament,
    CrossoverMode, GaConfig, GeneSpec, Genome, GenomeSpec, Individual, Selection,
};
use galstm::numerics::Rng;
use proptest::prelude::*;

const DRAWS: usize = 10_000;
const TOL: f64 = 0.02;

fn pop(fitness: &[f64]) -> Vec<Individual> {
    fitness
        .iter()
        .map(|&f| Individual::evaluated(Genome::new(vec![0.0]), f))
        .collect()
}

fn frequencies(n: usize, mut draw: impl FnMut() -> usize) -> Vec<f64> {
    let mut counts = vec![0usize; n];
    for _ in 0..DRAWS {
        counts[draw()] += 1;
    }
    counts
        .into_iter()
        .map(|c| c as f64 / DRAWS as f64)
        .collect()
}

/// Closed form: weight = 1 + number of strictly worse individuals
/// + half the number of ties (average rank).
fn roulette_oracle(fitness: &[f64]) -> Vec<f64> {
    let w: Vec<f64> = fitness
        .iter()
        .map(|&f| {
            let worse = fitness.iter().filter(|&&g| g < f).count() as f64;
            let ties = fitness.iter().filter(|&&g| g == f).count() as f64;
            worse + (ties + 1.0) / 2.0
        })
        .collect();
    let total: f64 = w.iter().sum();
    w.iter().map(|x| x / total).collect()
}

/// Enumerate every k-subset; winner is the best score, lowest index on ties.
fn tournament_oracle(fitness: &[f64], k: usize) -> Vec<f64> {
    fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            subsets(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    subsets(fitness.len(), k, 0, &mut Vec::new(), &mut all);
    let mut p = vec![0.0; fitness.len()];
    for s in &all {
        let mut best = s[0];
        for &i in &s[1..] {
            if fitness[i] > fitness[best] {
                best = i;
            }
        }
        p[best] += 1.0 / all.len() as f64;
    }
    p
}

fn assert_close(got: &[f64], want: &[f64]) {
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() <= TOL, "frequencies {got:?} vs {want:?}");
    }
}

#[test]
fn roulette_two_individuals() {
    let fitness = [-2.0, -1.0];
    let want = roulette_oracle(&fitness);
    assert!((want[0] - 1.0 / 3.0).abs() < 1e-15 && (want[1] - 2.0 / 3.0).abs() < 1e-15);
    let p = pop(&fitness);
    let mut rng = Rng::new(11);
    assert_close(&frequencies(2, || select_roulette(&p, &mut rng)), &want);
}

#[test]
fn roulette_equal_fitness_is_uniform() {
    let p = pop(&[-0.3; 5]);
    let mut rng = Rng::new(12);
    assert_close(&frequencies(5, || select_roulette(&p, &mut rng)), &[0.2; 5]);
}

#[test]
fn roulette_with_ties_matches_closed_form() {
    let fitness = [-1.0, -0.5, -1.0, 0.0, -3.0];
    let p = pop(&fitness);
    let mut rng = Rng::new(13);
    assert_close(
        &frequencies(5, || select_roulette(&p, &mut rng)),
        &roulette_oracle(&fitness),
    );
}

#[test]
fn roulette_single_individual() {
    let p = pop(&[-4.0]);
    let mut rng = Rng::new(14);
    assert!((0..100).all(|_| select_roulette(&p, &mut rng) == 0));
}

#[test]
fn tournament_k2_over_three() {
    let fitness = [0.0, -1.0, -2.0];
    let want = tournament_oracle(&fitness, 2);
    assert_eq!(
        want.iter().map(|p| (p * 3.0).round()).collect::<Vec<_>>(),
        [2.0, 1.0, 0.0]
    );
    let p = pop(&fitness);
    let mut rng = Rng::new(21);
    assert_close(
        &frequencies(3, || select_tournament(&p, 2, &mut rng)),
        &want,
    );
}

#[test]
fn tournament_matches_enumeration_with_ties() {
    let fitness = [-1.0, -0.2, -1.0, -0.2, -5.0, -0.7];
    for k in 1..=fitness.len() {
        let p = pop(&fitness);
        let mut rng = Rng::new(30 + k as u64);
        let want = tournament_oracle(&fitness, k);
        assert_close(
            &frequencies(fitness.len(), || select_tournament(&p, k, &mut rng)),
            &want,
        );
    }
}

#[test]
fn tournament_full_size_returns_best() {
    let p = pop(&[-3.0, -0.1, -0.1, -2.0]);
    let mut rng = Rng::new(40);
    assert!((0..100).all(|_| select_tournament(&p, 4, &mut rng) == 1));
}

#[test]
fn mutation_frequency_per_gene() {
    let spec = GenomeSpec::lstm();
    let mut rng = Rng::new(50);
    let parent = Genome::new(vec![1e-2, 64.0, 2.0, 30.0]);
    let mut changed = vec![0usize; spec.len()];
    for _ in 0..DRAWS {
        let child = mutate(&parent, &spec, 0.3, &mut rng);
        for (i, (a, b)) in parent.values.iter().zip(&child.values).enumerate() {
            if a != b {
                changed[i] += 1;
            }
        }
    }
    for (i, c) in changed.iter().enumerate() {
        let f = *c as f64 / DRAWS as f64;
        assert!((f - 0.3).abs() <= TOL, "gene {i}: {f}");
    }
}

#[test]
fn crossover_examples() {
    let a = Genome::new(vec![1.0, 2.0, 3.0, 4.0]);
    let b = Genome::new(vec![5.0, 6.0, 7.0, 8.0]);
    let (c1, c2) = crossover_at(&a, &b, &[2]);
    assert_eq!(c1.values, [1.0, 2.0, 7.0, 8.0]);
    assert_eq!(c2.values, [5.0, 6.0, 3.0, 4.0]);
    let mut rng = Rng::new(60);
    for mode in [
        CrossoverMode::SinglePoint,
        CrossoverMode::MultiPoint(2),
        CrossoverMode::Uniform,
    ] {
        let (x, y) = crossover(&a, &a, mode, &mut rng);
        assert_eq!((x, y), (a.clone(), a.clone()));
    }
}

#[test]
fn num_layers_sampling_covers_every_value() {
    let spec = GenomeSpec::lstm();
    let mut rng = Rng::new(70);
    let mut seen = [false; 3];
    for ind in init_population(&spec, 1000, &mut rng) {
        seen[ind.genome.values[2] as usize - 1] = true;
    }
    assert_eq!(seen, [true; 3]);
}

fn arb_mode() -> impl Strategy<Value = CrossoverMode> {
    prop_oneof![
        Just(CrossoverMode::SinglePoint),
        (1usize..4).prop_map(CrossoverMode::MultiPoint),
        Just(CrossoverMode::Uniform),
    ]
}

fn arb_selection() -> impl Strategy<Value = Selection> {
    prop_oneof![
        Just(Selection::Roulette),
        (1usize..4).prop_map(Selection::Tournament)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn operators_stay_in_bounds(seed in any::<u64>(), mode in arb_mode(), rate in 0.0f64..=1.0) {
        let spec = GenomeSpec::lstm();
        let mut rng = Rng::new(seed);
        let a = spec.sample(&mut rng);
        let b = spec.sample(&mut rng);
        prop_assert!(spec.contains(&a) && spec.contains(&b));
        let (c1, c2) = crossover(&a, &b, mode, &mut rng);
        for (i, (x, y)) in c1.values.iter().zip(&c2.values).enumerate() {
            // crossover only exchanges whole genes
            let pair = (a.values[i], b.values[i]);
            prop_assert!((*x, *y) == pair || (*y, *x) == pair);
        }
        for child in [c1, c2] {
            prop_assert!(spec.contains(&mutate(&child, &spec, rate, &mut rng)));
        }
    }

    #[test]
    fn mutation_rate_zero_is_identity(seed in any::<u64>()) {
        let spec = GenomeSpec::lstm();
        let mut rng = Rng::new(seed);
        let g = spec.sample(&mut rng);
        prop_assert_eq!(mutate(&g, &spec, 0.0, &mut rng), g);
    }

    #[test]
    fn elitism_keeps_best_fitness_monotone(
        seed in any::<u64>(),
        selection in arb_selection(),
        crossover in arb_mode(),
        elite_count in 1usize..3,
        mutation_rate in 0.0f64..=1.0,
    ) {
        let spec = GenomeSpec::new(vec![
            GeneSpec::real("x", -2.0, 2.0),
            GeneSpec::integer("n", 0, 20),
        ]);
        let cfg = GaConfig {
            population_size: 6,
            max_generations: 12,
            selection,
            crossover,
            elite_count,
            mutation_rate,
            seed,
            ..Default::default()
        };
        // rugged, noisy landscape: the noise depends on the evaluation seed
        let fitness = |g: &Genome, s: u64| {
            let noise = Rng::new(s).uniform(-0.1, 0.1);
            -(g.values[0] * 3.0).sin().abs() - (g.values[1] - 7.0).abs() * 0.05 + noise
        };
        let seen = std::sync::Mutex::new(Vec::new());
        let (best, history) = evolve(&cfg, &spec, |g: &Genome, s| {
            seen.lock().unwrap().push(g.clone());
            fitness(g, s)
        }).unwrap();
        prop_assert_eq!(history.len(), 12);
        let series = history.best_fitness();
        prop_assert!(series.windows(2).all(|w| w[1] >= w[0]), "{:?}", series);
        prop_assert_eq!(best.score(), *series.last().unwrap());
        prop_assert!(seen.into_inner().unwrap().iter().all(|g| spec.contains(g)));
    }
}
