//! Independent oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use chrono::{Duration, NaiveDate};
use galstm::data::{Column, OhlcRecord, Series};
use galstm::lstm::{forward_window, LstmParams};
use galstm::numerics::Rng;

pub const SAMPLE_CSV: &str = include_str!("../data/sample_prices.csv");

/// Central finite-difference gradient of `loss(params)` for every scalar
/// parameter, in `LstmParams::flatten` order.
pub fn finite_difference_grad(
    params: &LstmParams,
    eps: f64,
    loss: impl Fn(&LstmParams) -> f64,
) -> Vec<f64> {
    let n = params.num_params();
    let mut out = Vec::with_capacity(n);
    let mut probe = params.clone();
    for k in 0..n {
        let original = nth_param(&mut probe, k);
        *nth_param_mut(&mut probe, k) = original + eps;
        let up = loss(&probe);
        *nth_param_mut(&mut probe, k) = original - eps;
        let down = loss(&probe);
        *nth_param_mut(&mut probe, k) = original;
        out.push((up - down) / (2.0 * eps));
    }
    out
}

fn nth_param(p: &mut LstmParams, mut k: usize) -> f64 {
    *nth_param_mut_inner(p, &mut k)
}

fn nth_param_mut(p: &mut LstmParams, mut k: usize) -> &mut f64 {
    nth_param_mut_inner(p, &mut k)
}

fn nth_param_mut_inner<'a>(p: &'a mut LstmParams, k: &mut usize) -> &'a mut f64 {
    for t in p.tensors_mut() {
        if *k < t.len() {
            return &mut t[*k];
        }
        *k -= t.len();
    }
    panic!("parameter index out of range");
}

/// Half squared error of one window, via the forward pass only.
pub fn window_loss(params: &LstmParams, window: &[f64], target: f64) -> f64 {
    let (y, _) = forward_window(window, params).unwrap();
    0.5 * (y - target).powi(2)
}

pub fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-8)
}

/// Textbook descriptive statistics: two-pass variance and quantiles from the
/// numpy "linear" definition written out with explicit ranks.
pub struct OracleStats {
    pub count: f64,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub q25: f64,
    pub q50: f64,
    pub q75: f64,
    pub max: f64,
}

pub fn oracle_stats(values: &[f64]) -> OracleStats {
    let n = values.len();
    let mut sum = 0.0;
    for v in values {
        sum += v;
    }
    let mean = sum / n as f64;
    let mut ss = 0.0;
    for v in values {
        ss += (v - mean) * (v - mean);
    }
    let std = if n > 1 {
        (ss / (n as f64 - 1.0)).sqrt()
    } else {
        0.0
    };
    let mut s = values.to_vec();
    // insertion sort, independent of the library's sort
    for i in 1..s.len() {
        let mut j = i;
        while j > 0 && s[j - 1] > s[j] {
            s.swap(j - 1, j);
            j -= 1;
        }
    }
    let q = |p: f64| {
        let h = (n as f64 - 1.0) * p;
        let below = h.floor();
        let i = below as usize;
        if i + 1 >= n {
            s[n - 1]
        } else {
            s[i] + (h - below) * (s[i + 1] - s[i])
        }
    };
    OracleStats {
        count: n as f64,
        mean,
        std,
        min: s[0],
        q25: q(0.25),
        q50: q(0.5),
        q75: q(0.75),
        max: s[n - 1],
    }
}

/// Neumaier-compensated sum, so the oracle does not share the library's
/// naive accumulation order.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Straight-from-the-definition regression metrics:
/// (mae, mse, rmse, r2, mape).
pub fn oracle_metrics(a: &[f64], p: &[f64]) -> (f64, f64, f64, f64, f64) {
    let n = a.len() as f64;
    let diffs = || a.iter().zip(p).map(|(x, y)| x - y);
    let mae = compensated_sum(diffs().map(f64::abs)) / n;
    let ss_res = compensated_sum(diffs().map(|d| d * d));
    let mse = ss_res / n;
    let mean = compensated_sum(a.iter().copied()) / n;
    let ss_tot = compensated_sum(a.iter().map(|x| (x - mean) * (x - mean)));
    let mape = 100.0 * compensated_sum(a.iter().zip(p).map(|(x, y)| ((x - y) / x).abs())) / n;
    (mae, mse, mse.sqrt(), 1.0 - ss_res / ss_tot, mape)
}

/// Sine wave (period 50 samples, unit amplitude, offset 3) with Gaussian
/// noise of standard deviation 5% of the amplitude.
pub fn noisy_sine(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = Rng::new(seed);
    (0..n)
        .map(|i| 3.0 + (std::f64::consts::TAU * i as f64 / 50.0).sin() + rng.normal(0.0, 0.05))
        .collect()
}

pub fn day(i: usize) -> NaiveDate {
    NaiveDate::from_ymd_opt(2020, 1, 1).unwrap() + Duration::days(i as i64)
}

/// Flat OHLC bars (open = high = low = close) on consecutive days.
pub fn series_from_values(values: &[f64]) -> Series {
    let records = values
        .iter()
        .enumerate()
        .map(|(i, &v)| OhlcRecord {
            date: day(i),
            open: v,
            high: v,
            low: v,
            close: v,
        })
        .collect();
    Series::new(records, Column::Close).unwrap()
}

pub fn write_series_csv(values: &[f64], path: &std::path::Path) {
    let file = std::fs::File::create(path).unwrap();
    galstm::data::write_csv(&series_from_values(values), file).unwrap();
}
