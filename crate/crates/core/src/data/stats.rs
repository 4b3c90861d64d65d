use std::fmt::Write as _;

use serde::Serialize;

use super::{Column, Series};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ColumnStats {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (divisor `n − 1`); 0 for a single value.
    pub std: f64,
    pub min: f64,
    pub q25: f64,
    pub q50: f64,
    pub q75: f64,
    pub max: f64,
}

impl ColumnStats {
    pub fn from_values(values: &[f64]) -> Self {
        assert!(!values.is_empty(), "statistics of an empty column");
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
            (ss / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Self {
            count: n,
            mean,
            std,
            min: sorted[0],
            q25: quantile_sorted(&sorted, 0.25),
            q50: quantile_sorted(&sorted, 0.5),
            q75: quantile_sorted(&sorted, 0.75),
            max: sorted[n - 1],
        }
    }

    /// Rows in the printed order.
    pub fn rows(&self) -> [(&'static str, f64); 8] {
        [
            ("count", self.count as f64),
            ("mean", self.mean),
            ("std", self.std),
            ("min", self.min),
            ("25%", self.q25),
            ("50%", self.q50),
            ("75%", self.q75),
            ("max", self.max),
        ]
    }
}

/// Linear interpolation between the closest ranks: position `q·(n−1)`.
pub(crate) fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesStats {
    pub open: ColumnStats,
    pub high: ColumnStats,
    pub low: ColumnStats,
    pub close: ColumnStats,
}

impl SeriesStats {
    pub fn get(&self, column: Column) -> &ColumnStats {
        match column {
            Column::Open => &self.open,
            Column::High => &self.high,
            Column::Low => &self.low,
            Column::Close => &self.close,
        }
    }

    /// Whitespace-aligned table: one row per statistic, one column per price.
    /// Values print in shortest round-trip form so the table can be parsed
    /// back without loss.
    pub fn to_table(&self) -> String {
        let cells: Vec<Vec<String>> = (0..8)
            .map(|i| {
                Column::ALL
                    .iter()
                    .map(|&c| {
                        let (name, v) = self.get(c).rows()[i];
                        if name == "count" {
                            format!("{}", v as usize)
                        } else {
                            format!("{v}")
                        }
                    })
                    .collect()
            })
            .collect();
        let width = cells
            .iter()
            .flatten()
            .map(String::len)
            .chain(Column::ALL.iter().map(|c| c.header().len()))
            .max()
            .unwrap_or(0);
        let mut out = format!("{:<6}", "");
        for c in Column::ALL {
            let _ = write!(out, "  {:>width$}", c.header());
        }
        out.push('\n');
        for (i, row) in cells.iter().enumerate() {
            let _ = write!(out, "{:<6}", self.open.rows()[i].0);
            for cell in row {
                let _ = write!(out, "  {cell:>width$}");
            }
            out.push('\n');
        }
        out
    }
}

pub fn describe(series: &Series) -> SeriesStats {
    let stats = |c| ColumnStats::from_values(&series.column(c));
    SeriesStats {
        open: stats(Column::Open),
        high: stats(Column::High),
        low: stats(Column::Low),
        close: stats(Column::Close),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_value() {
        let s = ColumnStats::from_values(&[5.0]);
        assert_eq!(
            (s.mean, s.min, s.max, s.q50, s.std),
            (5.0, 5.0, 5.0, 5.0, 0.0)
        );
        assert_eq!(s.count, 1);
    }

    #[test]
    fn linear_quantiles() {
        // positions 0.75, 1.5, 2.25 on [1, 2, 3, 4]
        let s = ColumnStats::from_values(&[4.0, 1.0, 3.0, 2.0]);
        assert_eq!((s.q25, s.q50, s.q75), (1.75, 2.5, 3.25));
        assert!((s.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }
}
