//! CSV schemas with byte-stable number rendering.

use std::io::{Read, Write};

use crate::analytic::ImpulseCurve;
use crate::detection::{DetectionResult, ItrValue};
use crate::error::{Error, Result};
use crate::sim::{AggregatedSeries, ObservationSeries};

pub const CURVE_HEADER: [&str; 2] = ["time_s", "expected_count"];
pub const SERIES_HEADER: [&str; 2] = ["time_s", "count"];
pub const AGGREGATE_HEADER: [&str; 5] = ["time_s", "mean", "std", "ci99_low", "ci99_high"];
pub const DETECTION_HEADER: [&str; 5] = ["zeta", "method", "p_detect", "p_error", "scenario"];
pub const ITR_HEADER: [&str; 4] = ["t_s", "t_end", "itr", "scenario"];

/// Shortest rendering with 9 significant digits, like C's `%.9g`.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..9).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (8 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn writer<W: Write>(out: W, header: &[&str]) -> Result<csv::Writer<W>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header).map_err(csv_error)?;
    Ok(w)
}

fn finish<W: Write>(w: csv::Writer<W>) -> Result<()> {
    w.into_inner()
        .map_err(|e| Error::Io(e.into_error()))?
        .flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Csv {
            line,
            reason: format!("{other:?}"),
        },
    }
}

pub fn write_curve<W: Write>(out: W, curve: &ImpulseCurve) -> Result<()> {
    let mut w = writer(out, &CURVE_HEADER)?;
    for (t, c) in curve.times.iter().zip(&curve.expected_counts) {
        w.write_record([sig9(*t), sig9(*c)]).map_err(csv_error)?;
    }
    finish(w)
}

pub fn write_series<W: Write>(out: W, series: &ObservationSeries) -> Result<()> {
    let mut w = writer(out, &SERIES_HEADER)?;
    for (t, c) in series.sample_times.iter().zip(&series.counts) {
        w.write_record([sig9(*t), c.to_string()])
            .map_err(csv_error)?;
    }
    finish(w)
}

pub fn write_aggregate<W: Write>(out: W, agg: &AggregatedSeries) -> Result<()> {
    let mut w = writer(out, &AGGREGATE_HEADER)?;
    for i in 0..agg.sample_times.len() {
        w.write_record([
            sig9(agg.sample_times[i]),
            sig9(agg.mean[i]),
            sig9(agg.std[i]),
            sig9(agg.ci99_low[i]),
            sig9(agg.ci99_high[i]),
        ])
        .map_err(csv_error)?;
    }
    finish(w)
}

pub fn write_detection<W: Write>(out: W, rows: &[DetectionResult], scenario: &str) -> Result<()> {
    let mut w = writer(out, &DETECTION_HEADER)?;
    for r in rows {
        w.write_record([
            r.threshold_zeta.to_string(),
            r.method.to_string(),
            sig9(r.p_detect),
            sig9(r.p_error),
            scenario.to_string(),
        ])
        .map_err(csv_error)?;
    }
    finish(w)
}

pub fn write_itr<W: Write>(out: W, rows: &[(ItrValue, String)]) -> Result<()> {
    let mut w = writer(out, &ITR_HEADER)?;
    for (v, scenario) in rows {
        w.write_record([sig9(v.t_s), sig9(v.t_end), sig9(v.value), scenario.clone()])
            .map_err(csv_error)?;
    }
    finish(w)
}

/// A time series read back from one of the CSV schemas.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// Name of the column `values` came from.
    pub column: &'static str,
}

impl Signal {
    /// Closed-form curves are integrated by trapezoid; sampled counts are summed.
    pub fn is_curve(&self) -> bool {
        self.column == "expected_count"
    }
}

/// Time and signal columns from any of the curve, series or aggregate files.
/// The signal is the first of `expected_count`, `mean`, `count` present.
pub fn read_signal<R: Read>(input: R) -> Result<Signal> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = r.headers().map_err(csv_error)?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let time = col("time_s").ok_or(Error::Csv {
        line: 1,
        reason: "missing `time_s` column".into(),
    })?;
    let (column, signal) = ["expected_count", "mean", "count"]
        .into_iter()
        .find_map(|n| col(n).map(|i| (n, i)))
        .ok_or(Error::Csv {
            line: 1,
            reason: "need one of `expected_count`, `mean`, `count` columns".into(),
        })?;
    let (mut times, mut values) = (Vec::new(), Vec::new());
    for rec in r.records() {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let num = |i: usize| -> Result<f64> {
            let field = rec.get(i).unwrap_or("");
            field.parse().map_err(|_| Error::Csv {
                line,
                reason: format!("`{field}` is not a number"),
            })
        };
        times.push(num(time)?);
        values.push(num(signal)?);
    }
    if times.is_empty() {
        return Err(Error::Csv {
            line: 1,
            reason: "no data rows".into(),
        });
    }
    Ok(Signal {
        times,
        values,
        column,
    })
}

/// `{scenario}_{seed}_{rep}.csv`
pub fn series_file_name(scenario: &str, seed: u64, repetition: u32) -> String {
    format!("{scenario}_{seed}_{repetition}.csv")
}
