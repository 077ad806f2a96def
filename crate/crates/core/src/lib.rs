//! Fitting COCOMO-family software effort models with population-based
//! metaheuristics.
//!
//! The crate is organised bottom-up:
//!
//! * [`dataset`] loads and splits project data and ships the NASA-18 table,
//! * [`models`] evaluates the Basic, Model I and Model II effort equations,
//! * [`metrics`] scores predictions (VAF, MSE, MAE, MMRE, RMSE, R²),
//! * [`optimizers`] provides Firefly, GA and PSO minimizers over a box,
//! * [`harness`] runs repeated seeded fits and aggregates the results.

pub mod dataset;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod models;
pub mod optimizers;

pub use dataset::{load_csv, nasa_dataset, split_fixed, Dataset, ProjectRecord, SplitDataset};
pub use error::{Error, Result};
pub use harness::{
    compare_all, run_experiment, CompareConfig, ExperimentConfig, ExperimentReport, MaeObjective,
    RunResult,
};
pub use metrics::{evaluate, MetricsReport};
pub use models::{default_search_space, predict, predict_all, ModelSpec, ParameterVector};
pub use optimizers::{
    Algorithm, FireflyConfig, GaConfig, Objective, OptimizationResult, OptimizerConfig, PsoConfig,
    SearchSpace,
};
