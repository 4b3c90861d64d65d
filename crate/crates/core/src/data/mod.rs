//! OHLC price series: ingestion, descriptive statistics, scaling, windowing
//! and chronological splitting.

mod io;
mod scale;
mod stats;
mod window;

use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use io::{load_csv, parse_date, read_csv, write_csv};
pub use scale::{fit_scaler, ScalerParams};
pub use stats::{describe, ColumnStats, SeriesStats};
pub use window::{chronological_split, make_windows, WindowedDataset};

/// One trading day.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OhlcRecord {
    pub date: NaiveDate,
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
}

impl OhlcRecord {
    pub fn get(&self, column: Column) -> f64 {
        match column {
            Column::Open => self.open,
            Column::High => self.high,
            Column::Low => self.low,
            Column::Close => self.close,
        }
    }

    /// Consistency problems that real vendor data routinely has. These are
    /// reported, never fatal.
    pub fn sanity_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.low > self.open.min(self.close) {
            out.push(format!(
                "{}: low {} above min(open, close)",
                self.date, self.low
            ));
        }
        if self.high < self.open.max(self.close) {
            out.push(format!(
                "{}: high {} below max(open, close)",
                self.date, self.high
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Column {
    Open,
    High,
    Low,
    #[default]
    Close,
}

impl Column {
    pub const ALL: [Column; 4] = [Column::Open, Column::High, Column::Low, Column::Close];

    pub fn header(self) -> &'static str {
        match self {
            Column::Open => "Open",
            Column::High => "High",
            Column::Low => "Low",
            Column::Close => "Close",
        }
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.header())
    }
}

impl FromStr for Column {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "open" => Ok(Column::Open),
            "high" => Ok(Column::High),
            "low" => Ok(Column::Low),
            "close" => Ok(Column::Close),
            other => Err(Error::Invalid(format!("unknown column {other:?}"))),
        }
    }
}

/// Non-empty, strictly date-ordered price history with a forecasting target.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    records: Vec<OhlcRecord>,
    target: Column,
}

impl Series {
    /// Sorts by date and rejects empty input, duplicate dates and
    /// non-finite or non-positive prices.
    pub fn new(mut records: Vec<OhlcRecord>, target: Column) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptySeries);
        }
        for r in &records {
            for c in Column::ALL {
                let v = r.get(c);
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::Invalid(format!(
                        "{}: {c} price {v} is not a finite positive number",
                        r.date
                    )));
                }
            }
        }
        records.sort_by_key(|r| r.date);
        if let Some(w) = records.windows(2).find(|w| w[0].date == w[1].date) {
            return Err(Error::DuplicateDate { date: w[0].date });
        }
        Ok(Self { records, target })
    }

    pub fn records(&self) -> &[OhlcRecord] {
        &self.records
    }

    pub fn target(&self) -> Column {
        self.target
    }

    pub fn with_target(mut self, target: Column) -> Self {
        self.target = target;
        self
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn first_date(&self) -> NaiveDate {
        self.records[0].date
    }

    pub fn last_date(&self) -> NaiveDate {
        self.records[self.records.len() - 1].date
    }

    pub fn dates(&self) -> Vec<NaiveDate> {
        self.records.iter().map(|r| r.date).collect()
    }

    pub fn column(&self, column: Column) -> Vec<f64> {
        self.records.iter().map(|r| r.get(column)).collect()
    }

    /// Values of the target column.
    pub fn values(&self) -> Vec<f64> {
        self.column(self.target)
    }

    pub fn sanity_warnings(&self) -> Vec<String> {
        self.records
            .iter()
            .flat_map(OhlcRecord::sanity_warnings)
            .collect()
    }
}
