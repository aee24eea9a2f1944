//! CSV and JSON writers. Numbers carry ten significant digits in both.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;

use crate::error::CliError;
use crate::sweep::{Dataset, SweepRecord};

pub const CSV_HEADER: &str = "theta,q,nu2,c_l1,c_re,c_tr,concurrence,d_cl1_dq";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Ten significant digits in the style of C's `%.10g`: fixed notation for
/// decimal exponents in `[-5, 10)`, otherwise scientific, trailing zeros
/// dropped.
pub fn sig10(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.9e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..10).contains(&exp) {
        let decimals = (9 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// `x` rounded to the value [`sig10`] prints.
pub fn round10(x: f64) -> f64 {
    sig10(x).parse().expect("sig10 output parses")
}

pub fn render(data: &Dataset, format: Format) -> Result<Vec<u8>, CliError> {
    for r in &data.records {
        r.validate()?;
    }
    Ok(match format {
        Format::Csv => render_csv(data).into_bytes(),
        Format::Json => render_json(data)?,
    })
}

fn render_csv(data: &Dataset) -> String {
    let mut out = String::from(CSV_HEADER);
    if data.with_nu {
        out.push_str(",nu");
    }
    out.push('\n');
    for r in &data.records {
        let mut fields = r.fields().map(sig10).join(",");
        if data.with_nu {
            fields.push(',');
            fields.push_str(&sig10(r.nu.unwrap_or(r.nu2.sqrt())));
        }
        out.push_str(&fields);
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct JsonRecord {
    theta: f64,
    q: f64,
    nu2: f64,
    c_l1: f64,
    c_re: f64,
    c_tr: f64,
    concurrence: f64,
    d_cl1_dq: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    nu: Option<f64>,
}

impl JsonRecord {
    fn new(r: &SweepRecord, with_nu: bool) -> Self {
        let [theta, q, nu2, c_l1, c_re, c_tr, concurrence, d_cl1_dq] = r.fields().map(round10);
        Self {
            theta,
            q,
            nu2,
            c_l1,
            c_re,
            c_tr,
            concurrence,
            d_cl1_dq,
            nu: with_nu.then(|| round10(r.nu.unwrap_or(r.nu2.sqrt()))),
        }
    }
}

fn render_json(data: &Dataset) -> Result<Vec<u8>, CliError> {
    let rows: Vec<JsonRecord> = data
        .records
        .iter()
        .map(|r| JsonRecord::new(r, data.with_nu))
        .collect();
    to_json(&rows)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value)
        .map_err(|e| CliError::Usage(format!("cannot encode JSON: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(bytes: &[u8], path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => io::stdout()
            .lock()
            .write_all(bytes)
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}
