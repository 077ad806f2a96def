//! COCOMO-family effort models.
//!
//! * `Basic`:   E = a·KLOC^b
//! * `ModelI`:  E = a·KLOC^b + c·ME
//! * `ModelII`: E = a·KLOC^b + c·ME + d
//!
//! Coefficients are always fitted, never looked up. Predictions are not
//! clamped, so a negative `c` or `d` can produce a negative estimate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, ProjectRecord};
use crate::error::{Error, Result};
use crate::optimizers::SearchSpace;

/// Which model form is being fitted. The dimension follows from the kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelSpec {
    Basic,
    #[serde(rename = "model1")]
    ModelI,
    #[serde(rename = "model2")]
    ModelII,
}

impl ModelSpec {
    pub const ALL: [ModelSpec; 3] = [ModelSpec::Basic, ModelSpec::ModelI, ModelSpec::ModelII];

    /// Number of coefficients: 2 (a, b), 3 (a, b, c) or 4 (a, b, c, d).
    pub const fn dimension(self) -> usize {
        match self {
            ModelSpec::Basic => 2,
            ModelSpec::ModelI => 3,
            ModelSpec::ModelII => 4,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            ModelSpec::Basic => "basic",
            ModelSpec::ModelI => "model1",
            ModelSpec::ModelII => "model2",
        }
    }

    /// Human-readable title used in rendered tables.
    pub const fn title(self) -> &'static str {
        match self {
            ModelSpec::Basic => "Basic COCOMO model",
            ModelSpec::ModelI => "COCOMO Model I",
            ModelSpec::ModelII => "COCOMO Model II",
        }
    }

    /// Estimated effort from raw coefficients. The caller guarantees
    /// `coefficients.len() == self.dimension()`.
    #[inline]
    pub(crate) fn eval(self, coefficients: &[f64], kloc: f64, me: f64) -> f64 {
        let power = coefficients[0] * (coefficients[1] * kloc.ln()).exp();
        match self {
            ModelSpec::Basic => power,
            ModelSpec::ModelI => power + coefficients[2] * me,
            ModelSpec::ModelII => power + coefficients[2] * me + coefficients[3],
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "basic" => Ok(ModelSpec::Basic),
            "model1" | "modeli" | "model-i" => Ok(ModelSpec::ModelI),
            "model2" | "modelii" | "model-ii" => Ok(ModelSpec::ModelII),
            other => Err(Error::Config(format!("unknown model '{other}'"))),
        }
    }
}

/// Coefficients (a, b[, c[, d]]) for one model form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterVector {
    spec: ModelSpec,
    values: Vec<f64>,
}

impl ParameterVector {
    pub fn new(spec: ModelSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.dimension() {
            return Err(Error::Dimension {
                kind: spec.name(),
                expected: spec.dimension(),
                actual: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Config(format!("coefficient {v} is not finite")));
        }
        Ok(Self { spec, values })
    }

    pub fn spec(&self) -> ModelSpec {
        self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn check_spec(spec: ModelSpec, p: &ParameterVector) -> Result<()> {
    if p.spec.dimension() != spec.dimension() {
        return Err(Error::Dimension {
            kind: spec.name(),
            expected: spec.dimension(),
            actual: p.values.len(),
        });
    }
    Ok(())
}

/// Estimated effort in person-months for one project.
pub fn predict(spec: ModelSpec, p: &ParameterVector, r: &ProjectRecord) -> Result<f64> {
    check_spec(spec, p)?;
    let e = spec.eval(&p.values, r.kloc, r.me);
    if e.is_finite() {
        Ok(e)
    } else {
        Err(Error::NonFinite { id: r.id })
    }
}

/// Predictions for every record, in dataset order.
pub fn predict_all(spec: ModelSpec, p: &ParameterVector, d: &Dataset) -> Result<Vec<f64>> {
    d.records().iter().map(|r| predict(spec, p, r)).collect()
}

/// Default coefficient box: a ∈ [0, 10], b ∈ [0.01, 2], c ∈ [−5, 5], d ∈ [−20, 20].
pub fn default_search_space(spec: ModelSpec) -> SearchSpace {
    const LOWER: [f64; 4] = [0.0, 0.01, -5.0, -20.0];
    const UPPER: [f64; 4] = [10.0, 2.0, 5.0, 20.0];
    let n = spec.dimension();
    SearchSpace::new(LOWER[..n].to_vec(), UPPER[..n].to_vec())
        .expect("default bounds are well-formed")
}
