use serde::{Deserialize, Serialize};

use crate::numerics::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneKind {
    Real,
    Integer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneScale {
    Linear,
    Log,
}

/// Bounds and encoding of one gene.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneSpec {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub kind: GeneKind,
    pub scale: GeneScale,
}

impl GeneSpec {
    pub fn real(name: &str, lo: f64, hi: f64) -> Self {
        Self::new(name, lo, hi, GeneKind::Real, GeneScale::Linear)
    }

    pub fn log_real(name: &str, lo: f64, hi: f64) -> Self {
        Self::new(name, lo, hi, GeneKind::Real, GeneScale::Log)
    }

    pub fn integer(name: &str, lo: i64, hi: i64) -> Self {
        Self::new(
            name,
            lo as f64,
            hi as f64,
            GeneKind::Integer,
            GeneScale::Linear,
        )
    }

    fn new(name: &str, lo: f64, hi: f64, kind: GeneKind, scale: GeneScale) -> Self {
        assert!(lo <= hi, "gene {name}: lo > hi");
        assert!(
            scale == GeneScale::Linear || lo > 0.0,
            "log gene {name} needs lo > 0"
        );
        Self {
            name: name.into(),
            lo,
            hi,
            kind,
            scale,
        }
    }

    /// Map into the space where sampling and mutation are uniform/Gaussian.
    fn to_search(&self, v: f64) -> f64 {
        match self.scale {
            GeneScale::Linear => v,
            GeneScale::Log => v.ln(),
        }
    }

    fn to_value(&self, s: f64) -> f64 {
        match self.scale {
            GeneScale::Linear => s,
            GeneScale::Log => s.exp(),
        }
    }

    /// Clamp into bounds and round integer genes.
    pub fn repair(&self, v: f64) -> f64 {
        let v = v.clamp(self.lo, self.hi);
        match self.kind {
            GeneKind::Real => v,
            GeneKind::Integer => v.round().clamp(self.lo, self.hi),
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.lo && v <= self.hi && (self.kind == GeneKind::Real || v.fract() == 0.0)
    }

    pub fn sample(&self, rng: &mut Rng) -> f64 {
        match self.kind {
            GeneKind::Integer if self.scale == GeneScale::Linear => {
                let n = (self.hi - self.lo) as usize + 1;
                self.lo + rng.index(n) as f64
            }
            _ => {
                let (a, b) = (self.to_search(self.lo), self.to_search(self.hi));
                if a == b {
                    return self.lo;
                }
                self.repair(self.to_value(rng.uniform(a, b)))
            }
        }
    }

    /// Real genes: Gaussian step with std 10% of the (search-space) span.
    /// Integer genes: uniform redraw of a different value within ±20% of
    /// the span, never leaving the bounds.
    pub fn perturb(&self, v: f64, rng: &mut Rng) -> f64 {
        match self.kind {
            GeneKind::Real => {
                let span = self.to_search(self.hi) - self.to_search(self.lo);
                let s = rng.normal(self.to_search(v), 0.1 * span);
                self.repair(self.to_value(s))
            }
            GeneKind::Integer => {
                let reach = (0.2 * (self.hi - self.lo)).round().max(1.0);
                let lo = (v - reach).max(self.lo);
                let hi = (v + reach).min(self.hi);
                let choices = (hi - lo) as usize; // excludes v itself
                if choices == 0 {
                    return v;
                }
                let k = lo + rng.index(choices) as f64;
                if k >= v {
                    k + 1.0
                } else {
                    k
                }
            }
        }
    }
}

/// Ordered list of gene specs. Crossover cuts depend on this order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenomeSpec {
    pub genes: Vec<GeneSpec>,
}

impl GenomeSpec {
    pub fn new(genes: Vec<GeneSpec>) -> Self {
        assert!(!genes.is_empty(), "genome needs at least one gene");
        Self { genes }
    }

    /// `learning_rate, hidden_units, num_layers, lookback`, in that order.
    pub fn lstm() -> Self {
        Self::new(vec![
            GeneSpec::log_real("learning_rate", 1e-4, 1e-1),
            GeneSpec::integer("hidden_units", 4, 128),
            GeneSpec::integer("num_layers", 1, 3),
            GeneSpec::integer("lookback", 5, 60),
        ])
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    pub fn contains(&self, genome: &Genome) -> bool {
        genome.values.len() == self.genes.len()
            && self
                .genes
                .iter()
                .zip(&genome.values)
                .all(|(s, &v)| s.contains(v))
    }

    pub fn sample(&self, rng: &mut Rng) -> Genome {
        Genome {
            values: self.genes.iter().map(|g| g.sample(rng)).collect(),
        }
    }

    pub fn names(&self) -> Vec<&str> {
        self.genes.iter().map(|g| g.name.as_str()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Genome {
    pub values: Vec<f64>,
}

impl Genome {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }
}

/// Fitness values are always finite once set; higher is better.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub genome: Genome,
    pub fitness: Option<f64>,
}

impl Individual {
    pub fn new(genome: Genome) -> Self {
        Self {
            genome,
            fitness: None,
        }
    }

    pub fn evaluated(genome: Genome, fitness: f64) -> Self {
        Self {
            genome,
            fitness: Some(fitness),
        }
    }

    /// Panics on an unevaluated individual; selection requires fitness.
    pub fn score(&self) -> f64 {
        self.fitness.expect("individual has not been evaluated")
    }
}

/// Typed view of a genome drawn from [`GenomeSpec::lstm`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperparams {
    pub learning_rate: f64,
    pub hidden_units: usize,
    pub num_layers: usize,
    pub lookback: usize,
}

impl Hyperparams {
    pub fn from_genome(g: &Genome) -> Self {
        assert_eq!(g.values.len(), 4, "LSTM genome has four genes");
        Self {
            learning_rate: g.values[0],
            hidden_units: g.values[1] as usize,
            num_layers: g.values[2] as usize,
            lookback: g.values[3] as usize,
        }
    }

    pub fn to_genome(self) -> Genome {
        Genome::new(vec![
            self.learning_rate,
            self.hidden_units as f64,
            self.num_layers as f64,
            self.lookback as f64,
        ])
    }
}

pub fn init_population(spec: &GenomeSpec, size: usize, rng: &mut Rng) -> Vec<Individual> {
    assert!(size >= 2, "population needs at least two individuals");
    (0..size)
        .map(|_| Individual::new(spec.sample(rng)))
        .collect()
}
