use chrono::NaiveDate;

use super::{ScalerParams, Series};
use crate::error::{Error, Result};

/// Sliding windows over a scaled series with one-step-ahead targets.
///
/// Window `i` covers scaled values `i .. i + lookback` and `targets[i]` is the
/// value at `i + lookback`.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowedDataset {
    pub windows: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
    pub lookback: usize,
    pub scaler: ScalerParams,
}

impl WindowedDataset {
    /// Build from values that are already scaled.
    pub fn from_scaled(values: &[f64], lookback: usize, scaler: ScalerParams) -> Result<Self> {
        if lookback == 0 {
            return Err(Error::Invalid("lookback must be positive".into()));
        }
        if values.len() <= lookback {
            return Err(Error::InsufficientData {
                needed: lookback,
                got: values.len(),
            });
        }
        let windows = values
            .windows(lookback + 1)
            .map(|w| w[..lookback].to_vec())
            .collect();
        let targets = values[lookback..].to_vec();
        Ok(Self {
            windows,
            targets,
            lookback,
            scaler,
        })
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }
}

/// Scale the target column of `series` and cut it into windows.
pub fn make_windows(
    series: &Series,
    lookback: usize,
    scaler: ScalerParams,
) -> Result<WindowedDataset> {
    let scaled: Vec<f64> = series.values().iter().map(|&v| scaler.scale(v)).collect();
    WindowedDataset::from_scaled(&scaled, lookback, scaler)
}

/// Train gets every record dated on or before `boundary`, test the rest.
/// Both halves must be non-empty.
pub fn chronological_split(series: &Series, boundary: NaiveDate) -> Result<(Series, Series)> {
    let (first, last) = (series.first_date(), series.last_date());
    if boundary < first || boundary >= last {
        return Err(Error::Split {
            boundary,
            first,
            last,
        });
    }
    let cut = series.records().partition_point(|r| r.date <= boundary);
    let (train, test) = series.records().split_at(cut);
    Ok((
        Series::new(train.to_vec(), series.target())?,
        Series::new(test.to_vec(), series.target())?,
    ))
}
