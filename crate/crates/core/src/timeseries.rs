//! Historical price/rate series: CSV ingestion, validation and raw shifts.
//!
//! A [`PriceSeries`] is an ordered set of `(date, value)` observations of a
//! single risk factor. Consecutive rows define one step; calendar gaps are
//! not interpreted.

use std::io::{Read, Write};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{median_abs, Scalar};

/// Relative factor applied to `median(|S|)` for the default positivity threshold.
pub const DEFAULT_EPS_FACTOR: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries<T> {
    label: String,
    dates: Vec<NaiveDate>,
    values: Vec<T>,
}

impl<T: Scalar> PriceSeries<T> {
    /// Builds a validated series. Observations are sorted by date.
    pub fn new(label: impl Into<String>, mut obs: Vec<(NaiveDate, T)>) -> Result<Self> {
        if let Some(pos) = obs.iter().position(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteValue { line: pos as u64 + 1 });
        }
        obs.sort_by_key(|(d, _)| *d);
        Self::from_sorted(label.into(), obs)
    }

    fn from_sorted(label: String, obs: Vec<(NaiveDate, T)>) -> Result<Self> {
        if let Some(w) = obs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateDate(w[0].0));
        }
        if obs.len() < 2 {
            return Err(Error::SeriesTooShort { needed: 2, got: obs.len() });
        }
        let (dates, values) = obs.into_iter().unzip();
        Ok(Self { label, dates, values })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false: a valid series holds at least two observations.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn first(&self) -> T {
        self.values[0]
    }

    pub fn last(&self) -> T {
        self.values[self.values.len() - 1]
    }

    pub fn last_date(&self) -> NaiveDate {
        self.dates[self.dates.len() - 1]
    }

    /// Restricts the series to the inclusive date range `from..=to`.
    pub fn window(&self, from: NaiveDate, to: NaiveDate) -> Result<Self> {
        let obs: Vec<_> = self
            .dates
            .iter()
            .zip(&self.values)
            .filter(|(d, _)| **d >= from && **d <= to)
            .map(|(d, v)| (*d, *v))
            .collect();
        let got = obs.len();
        Self::from_sorted(self.label.clone(), obs).map_err(|e| match e {
            Error::SeriesTooShort { .. } => Error::WindowTooShort { from, to, got },
            other => other,
        })
    }

    /// Default positivity threshold for relative shifts: `1e-8 · median(|S|)`.
    pub fn default_eps(&self) -> T {
        T::lit(DEFAULT_EPS_FACTOR) * median_abs(&self.values)
    }

    /// Writes the series as `date,value` CSV.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "date,value")?;
        for (d, v) in self.dates.iter().zip(&self.values) {
            writeln!(w, "{},{}", d.format("%Y-%m-%d"), v)?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

/// Reads a `date,value` CSV stream into a validated series.
///
/// Lines starting with `#` are skipped. Rows may arrive in any order; the
/// result is sorted by date.
pub fn ingest_csv<T: Scalar, R: Read>(source: R, label: &str) -> Result<PriceSeries<T>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(source);

    let header = rdr.headers().map_err(|e| csv_error(&e, 1))?.clone();
    if header.len() != 2 || &header[0] != "date" || &header[1] != "value" {
        return Err(Error::MalformedRow {
            line: header.position().map_or(1, |p| p.line()),
            message: format!("expected header `date,value`, found `{}`", join(&header)),
        });
    }

    let mut obs = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(&e, 0))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != 2 {
            return Err(Error::MalformedRow { line, message: format!("expected 2 fields, found {}", rec.len()) });
        }
        let date = NaiveDate::parse_from_str(&rec[0], "%Y-%m-%d")
            .map_err(|e| Error::MalformedRow { line, message: format!("bad date `{}`: {e}", &rec[0]) })?;
        let value: T =
            rec[1].parse().map_err(|_| Error::MalformedRow { line, message: format!("bad value `{}`", &rec[1]) })?;
        if !value.is_finite() {
            return Err(Error::NonFiniteValue { line });
        }
        obs.push((date, value));
    }
    obs.sort_by_key(|(d, _)| *d);
    PriceSeries::from_sorted(label.to_string(), obs)
}

fn csv_error(e: &csv::Error, fallback_line: u64) -> Error {
    Error::MalformedRow { line: e.position().map_or(fallback_line, |p| p.line()), message: e.to_string() }
}

fn join(rec: &csv::StringRecord) -> String {
    rec.iter().collect::<Vec<_>>().join(",")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShiftKind {
    Absolute,
    Relative,
}

/// One-step risk-factor shifts, dated at the later day of each pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftSeries<T> {
    pub kind: ShiftKind,
    pub dates: Vec<NaiveDate>,
    pub values: Vec<T>,
}

/// `S_k - S_{k-1}` for every step.
pub fn absolute_shifts<T: Scalar>(s: &PriceSeries<T>) -> ShiftSeries<T> {
    let values = s.values.windows(2).map(|w| w[1] - w[0]).collect();
    ShiftSeries { kind: ShiftKind::Absolute, dates: s.dates[1..].to_vec(), values }
}

/// `S_k / S_{k-1} - 1` for every step, provided every denominator exceeds `eps`.
pub fn relative_shifts<T: Scalar>(s: &PriceSeries<T>, eps: T) -> Result<ShiftSeries<T>> {
    check_denominators(s.values(), eps)?;
    let values = s.values.windows(2).map(|w| w[1] / w[0] - T::one()).collect();
    Ok(ShiftSeries { kind: ShiftKind::Relative, dates: s.dates[1..].to_vec(), values })
}

/// Checks `S_{k-1} > eps` for every denominator `k = 1..N`.
pub(crate) fn check_denominators<T: Scalar>(values: &[T], eps: T) -> Result<()> {
    let denominators = &values[..values.len().saturating_sub(1)];
    match denominators.iter().position(|&x| x <= eps) {
        Some(index) => {
            Err(Error::DenominatorTooSmall { index, value: denominators[index].as_f64(), threshold: eps.as_f64() })
        }
        None => Ok(()),
    }
}
