//! Regression metrics over aligned actual/predicted vectors.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// `r2` is `None` when the actuals are constant; `mape` is `None` when any
/// actual is zero. Both serialize as `null`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricsReport {
    pub mae: f64,
    pub mse: f64,
    pub rmse: f64,
    pub r2: Option<f64>,
    /// Percent.
    pub mape: Option<f64>,
}

pub fn compute_metrics(actual: &[f64], predicted: &[f64]) -> Result<MetricsReport> {
    if actual.len() != predicted.len() {
        return Err(Error::Shape(format!(
            "{} actuals vs {} predictions",
            actual.len(),
            predicted.len()
        )));
    }
    if actual.is_empty() {
        return Err(Error::Invalid("metrics of empty vectors".into()));
    }
    if actual.iter().chain(predicted).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("metrics input"));
    }
    let n = actual.len() as f64;
    let (mut abs_sum, mut sq_sum, mut pct_sum) = (0.0, 0.0, 0.0);
    let mut mape_defined = true;
    for (&a, &p) in actual.iter().zip(predicted) {
        let e = a - p;
        abs_sum += e.abs();
        sq_sum += e * e;
        if a == 0.0 {
            mape_defined = false;
        } else {
            pct_sum += e.abs() / a.abs();
        }
    }
    let mean = actual.iter().sum::<f64>() / n;
    let ss_tot: f64 = actual.iter().map(|a| (a - mean).powi(2)).sum();
    let mse = sq_sum / n;
    Ok(MetricsReport {
        mae: abs_sum / n,
        mse,
        rmse: mse.sqrt(),
        r2: (ss_tot > 0.0).then(|| 1.0 - sq_sum / ss_tot),
        mape: mape_defined.then(|| 100.0 * pct_sum / n),
    })
}

impl fmt::Display for MetricsReport {
    /// Two-column "Evaluation parameters / Value" table.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |v: Option<f64>| v.map_or_else(|| "undefined".to_string(), |x| format!("{x:.4}"));
        writeln!(f, "{:<24}Value", "Evaluation parameters")?;
        writeln!(f, "{:<24}{:.4}", "MAE", self.mae)?;
        writeln!(f, "{:<24}{:.4}", "MSE", self.mse)?;
        writeln!(f, "{:<24}{:.4}", "RMSE", self.rmse)?;
        writeln!(f, "{:<24}{}", "R2", opt(self.r2))?;
        writeln!(f, "{:<24}{}", "MAPE (%)", opt(self.mape))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_fit() {
        let m = compute_metrics(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(
            (m.mae, m.mse, m.rmse, m.r2, m.mape),
            (0.0, 0.0, 0.0, Some(1.0), Some(0.0))
        );
    }

    #[test]
    fn mean_predictor_has_zero_r2() {
        let m = compute_metrics(&[1.0, 2.0, 3.0], &[2.0, 2.0, 2.0]).unwrap();
        assert!((m.mae - 2.0 / 3.0).abs() < 1e-15);
        assert!((m.mse - 2.0 / 3.0).abs() < 1e-15);
        assert!((m.rmse - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(m.r2, Some(0.0));
    }

    #[test]
    fn mape_and_undefined_cases() {
        assert_eq!(compute_metrics(&[2.0], &[3.0]).unwrap().mape, Some(50.0));
        let m = compute_metrics(&[0.0, 1.0], &[0.5, 1.0]).unwrap();
        assert_eq!(m.mape, None);
        let m = compute_metrics(&[4.0, 4.0], &[4.0, 4.0]).unwrap();
        assert_eq!((m.mae, m.r2), (0.0, None));
        assert!(m.to_string().contains("undefined"));
    }

    #[test]
    fn r2_is_not_clamped() {
        let m = compute_metrics(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap();
        assert_eq!(m.r2, Some(-3.0));
    }

    #[test]
    fn errors() {
        assert!(compute_metrics(&[1.0], &[1.0, 2.0]).is_err());
        assert!(compute_metrics(&[], &[]).is_err());
        assert!(compute_metrics(&[f64::NAN], &[1.0]).is_err());
    }
}
