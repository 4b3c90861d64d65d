use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;

use super::{Column, OhlcRecord, Series};
use crate::error::{Error, Result};

const REQUIRED: [&str; 5] = ["date", "open", "high", "low", "close"];

/// Accepts `YYYY/M/D` and ISO `YYYY-MM-DD`.
pub fn parse_date(s: &str) -> Option<NaiveDate> {
    let s = s.trim();
    NaiveDate::parse_from_str(s, "%Y/%m/%d")
        .or_else(|_| NaiveDate::parse_from_str(s, "%Y-%m-%d"))
        .ok()
}

pub fn load_csv(path: impl AsRef<Path>) -> Result<Series> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::Schema {
        path: path.to_owned(),
        message: format!("cannot open: {e}"),
    })?;
    read_csv(file, path)
}

/// Parse CSV from any reader; `origin` is only used in error messages.
pub fn read_csv(reader: impl Read, origin: impl Into<PathBuf>) -> Result<Series> {
    let origin = origin.into();
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let schema_err = |message: String| Error::Schema {
        path: origin.clone(),
        message,
    };
    let headers = rdr
        .headers()
        .map_err(|e| schema_err(format!("unreadable header: {e}")))?
        .clone();
    if headers.iter().all(str::is_empty) {
        return Err(schema_err("missing header row".into()));
    }
    let mut idx = [0usize; 5];
    for (slot, name) in idx.iter_mut().zip(REQUIRED) {
        *slot = headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| schema_err(format!("missing column {name:?}")))?;
    }

    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| Error::Row {
            path: origin.clone(),
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = row.position().map_or(0, |p| p.line());
        let row_err = |message: String| Error::Row {
            path: origin.clone(),
            line,
            message,
        };
        let field = |i: usize| row.get(idx[i]).unwrap_or("");
        let date = parse_date(field(0))
            .ok_or_else(|| row_err(format!("unparseable date {:?}", field(0))))?;
        let mut prices = [0.0f64; 4];
        for (k, p) in prices.iter_mut().enumerate() {
            let raw = field(k + 1);
            *p = raw
                .parse::<f64>()
                .map_err(|_| row_err(format!("unparseable {} value {raw:?}", REQUIRED[k + 1])))?;
        }
        records.push(OhlcRecord {
            date,
            open: prices[0],
            high: prices[1],
            low: prices[2],
            close: prices[3],
        });
    }
    Series::new(records, Column::default())
}

/// Writes the canonical `Date,Open,High,Low,Close` layout. Prices use the
/// shortest representation that parses back to the same `f64`.
pub fn write_csv(series: &Series, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(["Date", "Open", "High", "Low", "Close"])
        .map_err(csv_err)?;
    for r in series.records() {
        w.write_record([
            r.date.format("%Y-%m-%d").to_string(),
            r.open.to_string(),
            r.high.to_string(),
            r.low.to_string(),
            r.close.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
