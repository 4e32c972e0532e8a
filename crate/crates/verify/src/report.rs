//! Report serialisation. JSON keys come out in a fixed order and every real number is written
//! in scientific notation with six significant digits, so equal reports are equal bytes.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use serde_json::value::RawValue;
use thiserror::Error;

use crate::suites::VerificationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}` (expected json or csv)")),
        }
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("serialisation failed: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// `{:.5e}`: six significant digits, always a valid JSON number for finite input.
pub fn sci(v: f64) -> String {
    format!("{v:.5e}")
}

fn raw(v: f64) -> Result<Box<RawValue>, serde_json::Error> {
    if v.is_finite() {
        RawValue::from_string(sci(v))
    } else {
        RawValue::from_string("null".into())
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    scenario: &'a str,
    seed: u64,
    samples: usize,
    fd_step: Box<RawValue>,
    tolerance: Box<RawValue>,
    suites: Vec<&'static str>,
    summary: JsonSummary,
    records: Vec<JsonRecord<'a>>,
}

#[derive(Serialize)]
struct JsonSummary {
    all_pass: bool,
    passed: usize,
    failed: usize,
    suites: Vec<JsonSuiteSummary>,
}

#[derive(Serialize)]
struct JsonSuiteSummary {
    suite: &'static str,
    max_residual: Option<Box<RawValue>>,
    passed: usize,
    failed: usize,
    errors: usize,
}

#[derive(Serialize)]
struct JsonRecord<'a> {
    suite: &'static str,
    point: usize,
    residual: Option<Box<RawValue>>,
    threshold: Box<RawValue>,
    pass: bool,
    details: Details,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
}

/// Detail values in record order, each a preformatted number.
struct Details(Vec<(&'static str, Box<RawValue>)>);

impl Serialize for Details {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

fn to_json(r: &VerificationReport) -> Result<String, serde_json::Error> {
    let records = r
        .records
        .iter()
        .map(|rec| {
            let details = Details(rec.details.iter().map(|(k, v)| Ok((*k, raw(*v)?))).collect::<Result<_, serde_json::Error>>()?);
            Ok(JsonRecord {
                suite: rec.suite.name(),
                point: rec.point,
                residual: rec.residual.map(raw).transpose()?,
                threshold: raw(rec.threshold)?,
                pass: rec.pass,
                details,
                error: rec.error.as_deref(),
            })
        })
        .collect::<Result<Vec<_>, serde_json::Error>>()?;
    let suites = r
        .summary
        .iter()
        .map(|s| {
            Ok(JsonSuiteSummary {
                suite: s.suite.name(),
                max_residual: s.max_residual.map(raw).transpose()?,
                passed: s.passed,
                failed: s.failed,
                errors: s.errors,
            })
        })
        .collect::<Result<Vec<_>, serde_json::Error>>()?;
    let doc = JsonReport {
        scenario: &r.scenario,
        seed: r.seed,
        samples: r.samples,
        fd_step: raw(r.fd_step)?,
        tolerance: raw(r.tolerance)?,
        suites: r.suites.iter().map(|s| s.name()).collect(),
        summary: JsonSummary { all_pass: r.all_pass(), passed: r.passed(), failed: r.failed(), suites },
        records,
    };
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    Ok(text)
}

fn to_csv(r: &VerificationReport) -> String {
    let mut out = String::from("suite,point,residual,threshold,pass\n");
    for rec in &r.records {
        let residual = rec.residual.map(sci).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{},{}", rec.suite.name(), rec.point, residual, sci(rec.threshold), rec.pass);
    }
    out
}

pub fn emit_report(r: &VerificationReport, format: Format) -> Result<Vec<u8>, ReportError> {
    Ok(match format {
        Format::Json => to_json(r)?.into_bytes(),
        Format::Csv => to_csv(r).into_bytes(),
    })
}

pub fn write_report(r: &VerificationReport, format: Format, path: &Path) -> Result<(), ReportError> {
    let bytes = emit_report(r, format)?;
    std::fs::write(path, bytes).map_err(|source| ReportError::Io { path: path.display().to_string(), source })
}
