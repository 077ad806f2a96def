//! Real-valued generational genetic algorithm.
//!
//! Genomes are the raw coordinate vectors. Parents come from size-k
//! tournaments sampled with replacement; arithmetic crossover produces
//! `λ·p1 + (1−λ)·p2` and `(1−λ)·p1 + λ·p2`; each gene mutates with a
//! Gaussian step of σ = 10% of its range. The best `elitism_count`
//! individuals are copied unchanged into the next generation.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{
    check_dimension, rng_from_seed, Evaluator, Objective, OptimizationResult, SearchSpace,
    DEFAULT_ITERATIONS, DEFAULT_POPULATION,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaConfig {
    pub iterations: usize,
    pub population: usize,
    pub tournament_size: usize,
    pub crossover_probability: f64,
    /// Per-gene mutation probability.
    pub mutation_probability: f64,
    /// Mutation standard deviation as a fraction of each dimension's range.
    pub mutation_scale: f64,
    pub elitism_count: usize,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            iterations: DEFAULT_ITERATIONS,
            population: DEFAULT_POPULATION,
            tournament_size: 2,
            crossover_probability: 0.80,
            mutation_probability: 0.05,
            mutation_scale: 0.10,
            elitism_count: 1,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(format!("ga: {msg}")));
        if self.iterations < 1 {
            return bad("iterations must be >= 1");
        }
        if self.population < 1 {
            return bad("population must be >= 1");
        }
        if self.tournament_size < 1 {
            return bad("tournament size must be >= 1");
        }
        if !(0.0..=1.0).contains(&self.crossover_probability) {
            return bad("crossover probability must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.mutation_probability) {
            return bad("mutation probability must lie in [0, 1]");
        }
        if !(self.mutation_scale.is_finite() && self.mutation_scale >= 0.0) {
            return bad("mutation scale must be >= 0");
        }
        if self.elitism_count >= self.population {
            return bad("elitism count must be smaller than the population");
        }
        Ok(())
    }
}

pub fn optimize_ga<O: Objective + ?Sized>(
    objective: &O,
    space: &SearchSpace,
    cfg: &GaConfig,
    seed: u64,
) -> Result<OptimizationResult> {
    check_dimension(objective, space)?;
    cfg.validate()?;

    let mut rng = rng_from_seed(seed);
    let mut ev = Evaluator::new(objective);
    let sigma: Vec<f64> = space
        .widths()
        .iter()
        .map(|w| w * cfg.mutation_scale)
        .collect();
    let n = cfg.population;

    let mut genomes: Vec<Vec<f64>> = (0..n).map(|_| space.sample(&mut rng)).collect();
    let mut scores: Vec<f64> = genomes.iter().map(|g| ev.eval(g)).collect();
    let mut trace = Vec::with_capacity(cfg.iterations);

    for _ in 0..cfg.iterations {
        let mut next: Vec<Vec<f64>> = Vec::with_capacity(n + 1);

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
        next.extend(
            order[..cfg.elitism_count]
                .iter()
                .map(|&k| genomes[k].clone()),
        );

        while next.len() < n {
            let p1 = &genomes[tournament(&scores, cfg.tournament_size, &mut rng)];
            let p2 = &genomes[tournament(&scores, cfg.tournament_size, &mut rng)];
            let (mut c1, mut c2) = if rng.random::<f64>() < cfg.crossover_probability {
                let lambda: f64 = rng.random();
                let mix = |w: f64| -> Vec<f64> {
                    p1.iter()
                        .zip(p2)
                        .map(|(a, b)| w * a + (1.0 - w) * b)
                        .collect()
                };
                (mix(lambda), mix(1.0 - lambda))
            } else {
                (p1.clone(), p2.clone())
            };
            for child in [&mut c1, &mut c2] {
                for (gene, s) in child.iter_mut().zip(&sigma) {
                    if rng.random::<f64>() < cfg.mutation_probability {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        *gene += s * z;
                    }
                }
                space.clamp(child);
            }
            next.push(c1);
            if next.len() < n {
                next.push(c2);
            }
        }

        scores = next.iter().map(|g| ev.eval(g)).collect();
        genomes = next;
        trace.push(ev.best_score);
    }

    Ok(ev.finish(trace))
}

/// Index of the best of `size` individuals drawn with replacement.
fn tournament<R: Rng + ?Sized>(scores: &[f64], size: usize, rng: &mut R) -> usize {
    let mut best = rng.random_range(0..scores.len());
    for _ in 1..size {
        let k = rng.random_range(0..scores.len());
        if scores[k] < scores[best] {
            best = k;
        }
    }
    best
}
