//! Firefly algorithm.
//!
//! Each firefly's light intensity is its objective value, and a lower value
//! is brighter. During one generation firefly `i` scans the other fireflies
//! and, for every brighter `j`, moves by
//!
//! ```text
//! x_i ← x_i + β(r_ij)·(x_j − x_i) + α·(U(0,1) − ½)·(upper − lower)
//! ```
//!
//! then is clamped into the box and re-evaluated. A firefly with no
//! brighter neighbour performs the random step alone. The population is
//! ranked (brightest first) after every generation and `α` decays
//! geometrically.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    check_dimension, rng_from_seed, squared_distance, Evaluator, Objective, OptimizationResult,
    SearchSpace, DEFAULT_ITERATIONS, DEFAULT_POPULATION,
};
use crate::error::{Error, Result};

/// How attractiveness falls off with distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    /// `β_min + (β_0 − β_min)·exp(−γ r²)`
    #[default]
    Gaussian,
    /// `β_min + (β_0 − β_min) / (1 + γ r²)`
    Rational,
}

/// Which fireflies `i` is compared against in one generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairScan {
    /// `j ∈ 0..=i` over the ranked population.
    #[default]
    LowerTriangular,
    /// Every `j ≠ i`.
    AllPairs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FireflyConfig {
    pub iterations: usize,
    pub population: usize,
    /// Initial weight of the random step, relative to the box width.
    pub alpha: f64,
    /// Attractiveness at distance zero.
    pub beta0: f64,
    /// Attractiveness floor at large distances.
    pub betamin: f64,
    /// Light absorption coefficient.
    pub gamma: f64,
    /// Per-generation multiplier on `alpha`; `None` picks
    /// `(1e-4 / 0.9)^(1 / iterations)`.
    pub alpha_decay: Option<f64>,
    pub kernel: Kernel,
    pub scan: PairScan,
}

impl Default for FireflyConfig {
    fn default() -> Self {
        Self {
            iterations: DEFAULT_ITERATIONS,
            population: DEFAULT_POPULATION,
            alpha: 0.4,
            beta0: 1.0,
            betamin: 1.0,
            gamma: 0.4,
            alpha_decay: None,
            kernel: Kernel::Gaussian,
            scan: PairScan::LowerTriangular,
        }
    }
}

impl FireflyConfig {
    pub fn effective_alpha_decay(&self) -> f64 {
        self.alpha_decay
            .unwrap_or_else(|| (1e-4f64 / 0.9).powf(1.0 / self.iterations.max(1) as f64))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(format!("firefly: {msg}")));
        if self.iterations < 1 {
            return bad("iterations must be >= 1");
        }
        if self.population < 2 {
            return bad("population must be >= 2");
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return bad("alpha must lie in [0, 1]");
        }
        if !(self.beta0.is_finite() && self.beta0 > 0.0) {
            return bad("beta0 must be > 0");
        }
        if !(self.betamin.is_finite() && self.betamin >= 0.0) {
            return bad("betamin must be >= 0");
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return bad("gamma must be >= 0");
        }
        let decay = self.effective_alpha_decay();
        if !(decay.is_finite() && decay > 0.0 && decay <= 1.0) {
            return bad("alpha_decay must lie in (0, 1]");
        }
        Ok(())
    }

    fn kernel_value(&self, r2: f64) -> f64 {
        match self.kernel {
            Kernel::Gaussian => attractiveness(r2.sqrt(), self.beta0, self.betamin, self.gamma),
            Kernel::Rational => {
                self.betamin + (self.beta0 - self.betamin) / (1.0 + self.gamma * r2)
            }
        }
    }
}

/// Gaussian attractiveness `β_min + (β_0 − β_min)·exp(−γ r²)` at distance `r`.
pub fn attractiveness(r: f64, beta0: f64, betamin: f64, gamma: f64) -> f64 {
    betamin + (beta0 - betamin) * (-gamma * r * r).exp()
}

pub fn optimize_firefly<O: Objective + ?Sized>(
    objective: &O,
    space: &SearchSpace,
    cfg: &FireflyConfig,
    seed: u64,
) -> Result<OptimizationResult> {
    check_dimension(objective, space)?;
    cfg.validate()?;

    let mut rng = rng_from_seed(seed);
    let mut ev = Evaluator::new(objective);
    let widths = space.widths();
    let n = cfg.population;

    let mut positions: Vec<Vec<f64>> = (0..n).map(|_| space.sample(&mut rng)).collect();
    let mut scores: Vec<f64> = positions.iter().map(|x| ev.eval(x)).collect();
    rank(&mut positions, &mut scores);

    let decay = cfg.effective_alpha_decay();
    let mut alpha = cfg.alpha;
    let mut trace = Vec::with_capacity(cfg.iterations);

    for _ in 0..cfg.iterations {
        for i in 0..n {
            let last = match cfg.scan {
                PairScan::LowerTriangular => i,
                PairScan::AllPairs => n - 1,
            };
            let mut moved = false;
            for j in 0..=last {
                if scores[j] >= scores[i] {
                    continue;
                }
                let beta = cfg.kernel_value(squared_distance(&positions[i], &positions[j]));
                let (xi, xj) = pair_mut(&mut positions, i, j);
                for k in 0..xi.len() {
                    let step = alpha * (rng.random::<f64>() - 0.5) * widths[k];
                    xi[k] += beta * (xj[k] - xi[k]) + step;
                }
                space.clamp(xi);
                scores[i] = ev.eval(xi);
                moved = true;
            }
            if !moved {
                let xi = &mut positions[i];
                for (v, w) in xi.iter_mut().zip(&widths) {
                    *v += alpha * (rng.random::<f64>() - 0.5) * w;
                }
                space.clamp(xi);
                scores[i] = ev.eval(xi);
            }
        }
        rank(&mut positions, &mut scores);
        alpha *= decay;
        trace.push(ev.best_score);
    }

    Ok(ev.finish(trace))
}

/// Stable sort by score, brightest (lowest) first.
fn rank(positions: &mut Vec<Vec<f64>>, scores: &mut Vec<f64>) {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    *positions = order
        .iter()
        .map(|&k| std::mem::take(&mut positions[k]))
        .collect();
    *scores = order.iter().map(|&k| scores[k]).collect();
}

/// Mutable `i` alongside shared `j`, for `i != j`.
fn pair_mut(v: &mut [Vec<f64>], i: usize, j: usize) -> (&mut Vec<f64>, &Vec<f64>) {
    debug_assert_ne!(i, j);
    if i < j {
        let (a, b) = v.split_at_mut(j);
        (&mut a[i], &b[0])
    } else {
        let (a, b) = v.split_at_mut(i);
        (&mut b[0], &a[j])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizers::FnObjective;
    use approx::assert_relative_eq;
    use std::cell::RefCell;

    fn sphere() -> FnObjective<impl Fn(&[f64]) -> f64> {
        FnObjective::new(2, |x: &[f64]| x.iter().map(|v| v * v).sum())
    }

    #[test]
    fn attractiveness_values() {
        assert_eq!(attractiveness(0.0, 1.7, 0.2, 0.4), 1.7);
        assert_eq!(attractiveness(3.0, 1.0, 0.0, 0.0), 1.0);
        assert_relative_eq!(attractiveness(1.0, 1.0, 0.0, 0.4), (-0.4f64).exp());
        assert!((attractiveness(1.0, 1.0, 0.0, 0.4) - 0.6703).abs() < 5e-5);
        // betamin == beta0 collapses to a constant
        assert_eq!(attractiveness(5.0, 1.0, 1.0, 0.4), 1.0);
    }

    #[test]
    fn rational_kernel() {
        let cfg = FireflyConfig {
            kernel: Kernel::Rational,
            betamin: 0.0,
            gamma: 1.0,
            ..Default::default()
        };
        assert_eq!(cfg.kernel_value(1.0), 0.5);
        assert_eq!(cfg.kernel_value(0.0), 1.0);
    }

    #[test]
    fn default_decay_reaches_small_alpha() {
        let cfg = FireflyConfig::default();
        let d = cfg.effective_alpha_decay();
        assert_relative_eq!(d.powi(500), 1e-4 / 0.9, max_relative = 1e-9);
    }

    #[test]
    fn rejects_single_firefly() {
        let cfg = FireflyConfig {
            population: 1,
            ..Default::default()
        };
        let space = SearchSpace::uniform(2, -5.0, 5.0).unwrap();
        assert!(matches!(
            optimize_firefly(&sphere(), &space, &cfg, 1),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn converges_on_sphere() {
        let space = SearchSpace::uniform(2, -5.0, 5.0).unwrap();
        let cfg = FireflyConfig {
            population: 30,
            iterations: 200,
            ..Default::default()
        };
        let r = optimize_firefly(&sphere(), &space, &cfg, 7).unwrap();
        assert!(r.best_score < 1e-3, "{}", r.best_score);
        assert_eq!(r.trace.len(), 200);
        assert_eq!(r.best_score, *r.trace.last().unwrap());
    }

    #[test]
    fn no_randomness_no_brighter_neighbour_means_no_motion() {
        let seen = RefCell::new(Vec::new());
        let flat = FnObjective::new(3, |x: &[f64]| {
            seen.borrow_mut().push(x.to_vec());
            1.0
        });
        let space = SearchSpace::uniform(3, -1.0, 1.0).unwrap();
        let cfg = FireflyConfig {
            alpha: 0.0,
            population: 5,
            iterations: 4,
            scan: PairScan::AllPairs,
            ..Default::default()
        };
        optimize_firefly(&flat, &space, &cfg, 3).unwrap();
        let seen = seen.into_inner();
        let initial: Vec<_> = seen[..5].to_vec();
        for x in &seen[5..] {
            assert!(initial.contains(x));
        }
    }

    #[test]
    fn evaluation_budget() {
        let space = SearchSpace::uniform(2, -5.0, 5.0).unwrap();
        for (n, scan) in [
            (2, PairScan::LowerTriangular),
            (7, PairScan::AllPairs),
            (10, PairScan::LowerTriangular),
        ] {
            let cfg = FireflyConfig {
                population: n,
                iterations: 20,
                scan,
                ..Default::default()
            };
            let r = optimize_firefly(&sphere(), &space, &cfg, 11).unwrap();
            assert!(r.evaluations as usize <= n * (cfg.iterations + 1) * n);
            assert!(r.evaluations as usize >= n * (cfg.iterations + 1));
        }
    }

    #[test]
    fn nan_candidates_never_win() {
        let obj = FnObjective::new(1, |x: &[f64]| if x[0] < 0.0 { f64::NAN } else { x[0] });
        let space = SearchSpace::uniform(1, -1.0, 1.0).unwrap();
        let cfg = FireflyConfig {
            population: 10,
            iterations: 30,
            ..Default::default()
        };
        let r = optimize_firefly(&obj, &space, &cfg, 5).unwrap();
        assert!(r.best_score.is_finite());
        assert!(r.best_position[0] >= 0.0);
    }
}
