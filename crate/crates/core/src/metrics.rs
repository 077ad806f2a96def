//! Regression error measures over (actual, predicted) effort vectors.

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::models::{predict_all, ModelSpec, ParameterVector};

/// The six evaluation measures for one fitted model on one dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    /// Variance accounted for, in percent.
    pub vaf: f64,
    pub mse: f64,
    pub mae: f64,
    pub mmre: f64,
    pub rmse: f64,
    /// Coefficient of determination. Can be negative for bad fits.
    pub r2: f64,
}

impl MetricsReport {
    /// Column order used by every table and report.
    pub const NAMES: [&'static str; 6] = ["VAF", "MSE", "MAE", "MMRE", "RMSE", "R2"];

    pub fn compute(actual: &[f64], predicted: &[f64]) -> Result<Self> {
        Ok(Self {
            vaf: vaf(actual, predicted)?,
            mse: mse(actual, predicted)?,
            mae: mae(actual, predicted)?,
            mmre: mmre(actual, predicted)?,
            rmse: rmse(actual, predicted)?,
            r2: r_squared(actual, predicted)?,
        })
    }

    pub fn values(&self) -> [f64; 6] {
        [self.vaf, self.mse, self.mae, self.mmre, self.rmse, self.r2]
    }

    pub fn from_values(v: [f64; 6]) -> Self {
        Self {
            vaf: v[0],
            mse: v[1],
            mae: v[2],
            mmre: v[3],
            rmse: v[4],
            r2: v[5],
        }
    }

    /// Arithmetic mean of each measure. `None` for an empty slice.
    pub fn mean(reports: &[MetricsReport]) -> Option<Self> {
        if reports.is_empty() {
            return None;
        }
        let mut sum = [0.0; 6];
        for r in reports {
            for (s, v) in sum.iter_mut().zip(r.values()) {
                *s += v;
            }
        }
        let n = reports.len() as f64;
        Some(Self::from_values(sum.map(|s| s / n)))
    }
}

fn check(actual: &[f64], predicted: &[f64], metric: &'static str, min: usize) -> Result<()> {
    if actual.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            actual: actual.len(),
            predicted: predicted.len(),
        });
    }
    if actual.len() < min {
        return Err(Error::TooShort {
            metric,
            min,
            len: actual.len(),
        });
    }
    Ok(())
}

fn check_variance(actual: &[f64], metric: &'static str) -> Result<()> {
    if actual.iter().all(|&y| y == actual[0]) {
        return Err(Error::ZeroVariance { metric });
    }
    Ok(())
}

fn mean(v: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = v.len() as f64;
    v.sum::<f64>() / n
}

/// Population variance (divides by n).
fn variance(v: &[f64]) -> f64 {
    let m = mean(v.iter().copied());
    mean(v.iter().map(|x| (x - m) * (x - m)))
}

pub fn mse(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    check(actual, predicted, "mse", 1)?;
    Ok(mean(
        actual.iter().zip(predicted).map(|(y, p)| (y - p) * (y - p)),
    ))
}

pub fn mae(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    check(actual, predicted, "mae", 1)?;
    Ok(mean(
        actual.iter().zip(predicted).map(|(y, p)| (y - p).abs()),
    ))
}

/// Mean magnitude of relative error, mean of |y − ŷ| / y.
pub fn mmre(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    check(actual, predicted, "mmre", 1)?;
    if let Some(index) = actual.iter().position(|&y| y == 0.0) {
        return Err(Error::ZeroActual { index });
    }
    Ok(mean(
        actual
            .iter()
            .zip(predicted)
            .map(|(y, p)| ((y - p) / y).abs()),
    ))
}

pub fn rmse(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    mse(actual, predicted).map(f64::sqrt)
}

/// Variance accounted for, (1 − var(y − ŷ) / var(y)) × 100.
pub fn vaf(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    check(actual, predicted, "vaf", 2)?;
    check_variance(actual, "vaf")?;
    let residuals: Vec<f64> = actual.iter().zip(predicted).map(|(y, p)| y - p).collect();
    Ok((1.0 - variance(&residuals) / variance(actual)) * 100.0)
}

/// Coefficient of determination, 1 − SS_res / SS_tot.
pub fn r_squared(actual: &[f64], predicted: &[f64]) -> Result<f64> {
    check(actual, predicted, "r2", 2)?;
    check_variance(actual, "r2")?;
    let m = mean(actual.iter().copied());
    let ss_res: f64 = actual
        .iter()
        .zip(predicted)
        .map(|(y, p)| (y - p) * (y - p))
        .sum();
    let ss_tot: f64 = actual.iter().map(|y| (y - m) * (y - m)).sum();
    Ok(1.0 - ss_res / ss_tot)
}

/// All six measures for `p` on every record of `d`.
pub fn evaluate(spec: ModelSpec, p: &ParameterVector, d: &Dataset) -> Result<MetricsReport> {
    let predicted = predict_all(spec, p, d)?;
    MetricsReport::compute(&d.efforts(), &predicted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{nasa_dataset, split_fixed, ProjectRecord};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn spot_values() {
        assert_eq!(mse(&[0.0, 0.0], &[1.0, -1.0]).unwrap(), 1.0);
        assert_eq!(mae(&[0.0, 0.0], &[1.0, -1.0]).unwrap(), 1.0);
        assert_eq!(mae(&[10.0], &[7.0]).unwrap(), 3.0);
        assert_relative_eq!(mmre(&[10.0], &[11.0]).unwrap(), 0.1, max_relative = 1e-15);
        assert_eq!(rmse(&[0.0, 0.0], &[3.0, -3.0]).unwrap(), 3.0);
        let y = [1.0, 4.0, 2.0, 9.0];
        let shifted: Vec<f64> = y.iter().map(|v| v + 5.0).collect();
        assert_relative_eq!(vaf(&y, &shifted).unwrap(), 100.0, max_relative = 1e-15);
        assert_eq!(r_squared(&y, &[4.0; 4]).unwrap(), 0.0);
    }

    #[test]
    fn perfect_prediction() {
        let y = nasa_dataset().efforts();
        let r = MetricsReport::compute(&y, &y).unwrap();
        assert_eq!(r.values(), [100.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn rmse_matches_reported_mse() {
        assert!((104.88f64.sqrt() - 10.24).abs() < 0.005);
    }

    #[test]
    fn error_paths() {
        assert!(matches!(
            mse(&[1.0], &[1.0, 2.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(mae(&[], &[]), Err(Error::TooShort { .. })));
        assert_eq!(
            mmre(&[1.0, 0.0], &[1.0, 1.0]),
            Err(Error::ZeroActual { index: 1 })
        );
        assert!(matches!(
            vaf(&[3.0, 3.0], &[1.0, 2.0]),
            Err(Error::ZeroVariance { .. })
        ));
        assert!(matches!(
            r_squared(&[0.1; 3], &[1.0; 3]),
            Err(Error::ZeroVariance { .. })
        ));
        assert!(matches!(
            vaf(&[1.0], &[1.0]),
            Err(Error::TooShort { min: 2, .. })
        ));
    }

    #[test]
    fn r2_can_go_negative() {
        assert!(r_squared(&[1.0, 2.0, 3.0], &[10.0, -10.0, 10.0]).unwrap() < 0.0);
    }

    #[test]
    fn evaluate_on_perfect_synthetic_data() {
        // effort = 2·kloc exactly
        let records = (1..=5)
            .map(|i| ProjectRecord::new(i, i as f64, 0.0, 2.0 * i as f64).unwrap())
            .collect();
        let d = Dataset::new("linear", records).unwrap();
        let p = ParameterVector::new(ModelSpec::Basic, vec![2.0, 1.0]).unwrap();
        let r = evaluate(ModelSpec::Basic, &p, &d).unwrap();
        assert_relative_eq!(r.vaf, 100.0, epsilon = 1e-9);
        assert!(r.mse < 1e-20 && r.mae < 1e-10 && r.mmre < 1e-12 && r.rmse < 1e-10);
        assert_relative_eq!(r.r2, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn evaluate_propagates_metric_errors() {
        let split = split_fixed(&nasa_dataset(), 17).unwrap();
        let p = ParameterVector::new(ModelSpec::Basic, vec![1.0, 1.0]).unwrap();
        assert!(evaluate(ModelSpec::Basic, &p, &split.test).is_err());
    }

    #[test]
    fn mean_of_reports() {
        let a = MetricsReport::from_values([1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let b = MetricsReport::from_values([3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
        assert_eq!(
            MetricsReport::mean(&[a, b]).unwrap().values(),
            [2.0, 3.0, 4.0, 5.0, 6.0, 7.0]
        );
        assert_eq!(MetricsReport::mean(&[a]).unwrap(), a);
        assert!(MetricsReport::mean(&[]).is_none());
    }

    fn pairs() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (2usize..40).prop_flat_map(|n| {
            (
                prop::collection::vec(0.5f64..500.0, n),
                prop::collection::vec(-100.0f64..600.0, n),
            )
        })
    }

    proptest! {
        #[test]
        fn rmse_squared_is_mse((y, p) in pairs()) {
            let m = mse(&y, &p).unwrap();
            let r = rmse(&y, &p).unwrap();
            prop_assert!((r * r - m).abs() <= 1e-9 * m.max(f64::MIN_POSITIVE));
        }

        #[test]
        fn permutation_invariance((y, p) in pairs(), seed in any::<u64>()) {
            prop_assume!(y.iter().any(|v| *v != y[0]));
            let mut idx: Vec<usize> = (0..y.len()).collect();
            // deterministic shuffle from seed
            let mut s = seed;
            for i in (1..idx.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                idx.swap(i, (s >> 33) as usize % (i + 1));
            }
            let yp: Vec<f64> = idx.iter().map(|&i| y[i]).collect();
            let pp: Vec<f64> = idx.iter().map(|&i| p[i]).collect();
            let a = MetricsReport::compute(&y, &p).unwrap();
            let b = MetricsReport::compute(&yp, &pp).unwrap();
            for (u, v) in a.values().iter().zip(b.values()) {
                prop_assert!((u - v).abs() <= 1e-9 * u.abs().max(1.0));
            }
        }

        #[test]
        fn errors_are_nonnegative((y, p) in pairs()) {
            let r = MetricsReport::compute(&y, &p);
            if let Ok(r) = r {
                prop_assert!(r.mse >= 0.0 && r.mae >= 0.0 && r.mmre >= 0.0 && r.rmse >= 0.0);
                prop_assert!(r.r2 <= 1.0);
            }
        }

        #[test]
        fn mae_grows_when_residuals_widen((y, p) in pairs(), eps in 0.0f64..10.0) {
            let widened: Vec<f64> = y.iter().zip(&p)
                .map(|(y, p)| p + eps * (p - y).signum())
                .collect();
            prop_assert!(mae(&y, &widened).unwrap() >= mae(&y, &p).unwrap());
        }
    }
}
