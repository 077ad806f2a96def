//! Population-based minimizers over a bounded box: Firefly, a real-valued
//! genetic algorithm, and global-best particle swarm.
//!
//! All three share the same contract. The objective is minimized, every
//! candidate is clamped into the box before it is evaluated, non-finite
//! scores are treated as `+∞`, and the convergence trace records the
//! best-so-far score after each iteration. A run is a pure function of
//! `(objective, space, config, seed)`.

mod firefly;
mod ga;
mod pso;
mod space;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use firefly::{attractiveness, optimize_firefly, FireflyConfig, Kernel, PairScan};
pub use ga::{optimize_ga, GaConfig};
pub use pso::{optimize_pso, PsoConfig};
pub use space::SearchSpace;

/// Default iteration budget shared by all three algorithms.
pub const DEFAULT_ITERATIONS: usize = 500;
/// Default number of fireflies, chromosomes or particles.
pub const DEFAULT_POPULATION: usize = 100;

/// A score to minimize over real vectors.
pub trait Objective {
    fn dimension(&self) -> usize;

    /// Must be deterministic for a fixed input.
    fn evaluate(&self, x: &[f64]) -> f64;
}

impl<O: Objective + ?Sized> Objective for &O {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        (**self).evaluate(x)
    }
}

/// Adapts a closure to [`Objective`].
pub struct FnObjective<F> {
    dimension: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> f64> FnObjective<F> {
    pub fn new(dimension: usize, f: F) -> Self {
        Self { dimension, f }
    }
}

impl<F: Fn(&[f64]) -> f64> Objective for FnObjective<F> {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}

/// Outcome of one optimizer run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub best_position: Vec<f64>,
    pub best_score: f64,
    /// Best-so-far score after each iteration; non-increasing.
    pub trace: Vec<f64>,
    /// Number of objective calls, including the initial population.
    pub evaluations: u64,
}

/// Which metaheuristic to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Firefly,
    Ga,
    Pso,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Firefly, Algorithm::Ga, Algorithm::Pso];

    pub const fn name(self) -> &'static str {
        match self {
            Algorithm::Firefly => "firefly",
            Algorithm::Ga => "ga",
            Algorithm::Pso => "pso",
        }
    }

    pub const fn title(self) -> &'static str {
        match self {
            Algorithm::Firefly => "Firefly",
            Algorithm::Ga => "GA",
            Algorithm::Pso => "PSO",
        }
    }

    pub fn default_config(self) -> OptimizerConfig {
        match self {
            Algorithm::Firefly => OptimizerConfig::Firefly(FireflyConfig::default()),
            Algorithm::Ga => OptimizerConfig::Ga(GaConfig::default()),
            Algorithm::Pso => OptimizerConfig::Pso(PsoConfig::default()),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "firefly" | "fa" => Ok(Algorithm::Firefly),
            "ga" | "genetic" => Ok(Algorithm::Ga),
            "pso" => Ok(Algorithm::Pso),
            other => Err(Error::Config(format!("unknown optimizer '{other}'"))),
        }
    }
}

/// An algorithm together with its hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "lowercase")]
pub enum OptimizerConfig {
    Firefly(FireflyConfig),
    Ga(GaConfig),
    Pso(PsoConfig),
}

impl OptimizerConfig {
    pub fn algorithm(&self) -> Algorithm {
        match self {
            OptimizerConfig::Firefly(_) => Algorithm::Firefly,
            OptimizerConfig::Ga(_) => Algorithm::Ga,
            OptimizerConfig::Pso(_) => Algorithm::Pso,
        }
    }

    pub fn iterations(&self) -> usize {
        match self {
            OptimizerConfig::Firefly(c) => c.iterations,
            OptimizerConfig::Ga(c) => c.iterations,
            OptimizerConfig::Pso(c) => c.iterations,
        }
    }

    pub fn population(&self) -> usize {
        match self {
            OptimizerConfig::Firefly(c) => c.population,
            OptimizerConfig::Ga(c) => c.population,
            OptimizerConfig::Pso(c) => c.population,
        }
    }

    pub fn set_iterations(&mut self, iterations: usize) {
        match self {
            OptimizerConfig::Firefly(c) => c.iterations = iterations,
            OptimizerConfig::Ga(c) => c.iterations = iterations,
            OptimizerConfig::Pso(c) => c.iterations = iterations,
        }
    }

    pub fn set_population(&mut self, population: usize) {
        match self {
            OptimizerConfig::Firefly(c) => c.population = population,
            OptimizerConfig::Ga(c) => c.population = population,
            OptimizerConfig::Pso(c) => c.population = population,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            OptimizerConfig::Firefly(c) => c.validate(),
            OptimizerConfig::Ga(c) => c.validate(),
            OptimizerConfig::Pso(c) => c.validate(),
        }
    }

    pub fn optimize<O: Objective + ?Sized>(
        &self,
        objective: &O,
        space: &SearchSpace,
        seed: u64,
    ) -> Result<OptimizationResult> {
        match self {
            OptimizerConfig::Firefly(c) => optimize_firefly(objective, space, c, seed),
            OptimizerConfig::Ga(c) => optimize_ga(objective, space, c, seed),
            OptimizerConfig::Pso(c) => optimize_pso(objective, space, c, seed),
        }
    }
}

/// Euclidean distance between two points.
pub fn distance(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Dimension {
            kind: "distance",
            expected: x.len(),
            actual: y.len(),
        });
    }
    Ok(squared_distance(x, y).sqrt())
}

#[inline]
fn squared_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()
}

fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_dimension<O: Objective + ?Sized>(objective: &O, space: &SearchSpace) -> Result<()> {
    if objective.dimension() != space.dimension() {
        return Err(Error::Dimension {
            kind: "objective",
            expected: space.dimension(),
            actual: objective.dimension(),
        });
    }
    Ok(())
}

/// Counts objective calls and tracks the best point seen so far.
struct Evaluator<'a, O: ?Sized> {
    objective: &'a O,
    evaluations: u64,
    best_score: f64,
    best_position: Vec<f64>,
}

impl<'a, O: Objective + ?Sized> Evaluator<'a, O> {
    fn new(objective: &'a O) -> Self {
        Self {
            objective,
            evaluations: 0,
            best_score: f64::INFINITY,
            best_position: Vec::new(),
        }
    }

    /// Scores `x`, mapping NaN and ±∞ to `+∞`. Strict improvement is
    /// required to replace the incumbent, so the first-found point wins ties.
    fn eval(&mut self, x: &[f64]) -> f64 {
        let raw = self.objective.evaluate(x);
        self.evaluations += 1;
        let score = if raw.is_finite() { raw } else { f64::INFINITY };
        if score < self.best_score || self.best_position.is_empty() {
            self.best_score = score;
            self.best_position.clear();
            self.best_position.extend_from_slice(x);
        }
        score
    }

    fn finish(self, trace: Vec<f64>) -> OptimizationResult {
        OptimizationResult {
            best_position: self.best_position,
            best_score: self.best_score,
            trace,
            evaluations: self.evaluations,
        }
    }
}
