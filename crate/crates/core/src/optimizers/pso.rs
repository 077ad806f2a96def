//! Global-best particle swarm with a linearly decreasing inertia weight.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    check_dimension, rng_from_seed, Evaluator, Objective, OptimizationResult, SearchSpace,
    DEFAULT_ITERATIONS, DEFAULT_POPULATION,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PsoConfig {
    pub iterations: usize,
    pub population: usize,
    /// Cognitive acceleration (pull towards the particle's own best).
    pub c1: f64,
    /// Social acceleration (pull towards the swarm best).
    pub c2: f64,
    pub inertia_start: f64,
    pub inertia_end: f64,
    /// Velocity cap; each component is further capped by its box width.
    pub max_velocity: f64,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self {
            iterations: DEFAULT_ITERATIONS,
            population: DEFAULT_POPULATION,
            c1: 2.1,
            c2: 2.1,
            inertia_start: 0.9,
            inertia_end: 0.6,
            max_velocity: 100.0,
        }
    }
}

impl PsoConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(format!("pso: {msg}")));
        if self.iterations < 1 {
            return bad("iterations must be >= 1");
        }
        if self.population < 1 {
            return bad("population must be >= 1");
        }
        if !(self.c1 > 0.0 && self.c2 > 0.0 && self.c1.is_finite() && self.c2.is_finite()) {
            return bad("acceleration constants must be > 0");
        }
        if !(self.inertia_start.is_finite() && self.inertia_end.is_finite())
            || self.inertia_start < self.inertia_end
        {
            return bad("inertia_start must be >= inertia_end");
        }
        if self.max_velocity.is_nan() || self.max_velocity <= 0.0 {
            return bad("max_velocity must be > 0");
        }
        Ok(())
    }

    /// Inertia weight at iteration `t` (0-based), moving linearly from
    /// `inertia_start` at the first iteration to `inertia_end` at the last.
    pub fn inertia(&self, t: usize) -> f64 {
        if self.iterations <= 1 {
            return self.inertia_start;
        }
        let frac = t as f64 / (self.iterations - 1) as f64;
        self.inertia_start + (self.inertia_end - self.inertia_start) * frac
    }
}

pub fn optimize_pso<O: Objective + ?Sized>(
    objective: &O,
    space: &SearchSpace,
    cfg: &PsoConfig,
    seed: u64,
) -> Result<OptimizationResult> {
    check_dimension(objective, space)?;
    cfg.validate()?;

    let mut rng = rng_from_seed(seed);
    let mut ev = Evaluator::new(objective);
    let dim = space.dimension();
    let vmax: Vec<f64> = space
        .widths()
        .iter()
        .map(|w| w.min(cfg.max_velocity))
        .collect();

    let mut positions: Vec<Vec<f64>> = (0..cfg.population)
        .map(|_| space.sample(&mut rng))
        .collect();
    let mut velocities = vec![vec![0.0; dim]; cfg.population];
    let mut best_scores: Vec<f64> = positions.iter().map(|x| ev.eval(x)).collect();
    let mut best_positions = positions.clone();
    let mut swarm_best = ev.best_position.clone();
    let mut swarm_score = ev.best_score;

    let mut trace = Vec::with_capacity(cfg.iterations);
    for t in 0..cfg.iterations {
        let w = cfg.inertia(t);
        for i in 0..cfg.population {
            let x = &mut positions[i];
            let v = &mut velocities[i];
            let pbest = &best_positions[i];
            for k in 0..dim {
                let r1: f64 = rng.random();
                let r2: f64 = rng.random();
                let vk = w * v[k]
                    + cfg.c1 * r1 * (pbest[k] - x[k])
                    + cfg.c2 * r2 * (swarm_best[k] - x[k]);
                v[k] = vk.clamp(-vmax[k], vmax[k]);
                x[k] += v[k];
            }
            space.clamp(x);
            let score = ev.eval(x);
            if score < best_scores[i] {
                best_scores[i] = score;
                best_positions[i].copy_from_slice(x);
                if score < swarm_score {
                    swarm_score = score;
                    swarm_best.copy_from_slice(x);
                }
            }
        }
        trace.push(ev.best_score);
    }

    Ok(ev.finish(trace))
}
