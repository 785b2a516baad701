//! Machine-readable run reports (CSV and JSON) and the hex-float codec
//! used for every real value that must survive a round trip.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rug::Float;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::{
    ClassCountRecord, LotteryRow, SimulationReport, SweepCell, SweepSummary,
};

/// The invocation a report came from: subcommand plus its arguments, both
/// as strings so the report replays from the file alone.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub args: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn new(subcommand: &str) -> Self {
        RunConfig { subcommand: subcommand.to_string(), args: BTreeMap::new() }
    }

    pub fn arg(mut self, key: &str, value: impl ToString) -> Self {
        self.args.insert(key.to_string(), value.to_string());
        self
    }
}

/// A typed record that knows its CSV schema.
pub trait CsvRecord {
    fn columns() -> &'static [&'static str];
    fn row(&self) -> Vec<String>;
}

/// A full report: tool identity, the invocation, and the records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<T> {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub records: Vec<T>,
}

impl<T: Serialize> Report<T> {
    pub fn new(config: RunConfig, records: Vec<T>) -> Self {
        Report {
            tool: "wlsim".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            records,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| Error::invalid(format!("report serialization failed: {e}")))
    }
}

impl<T: DeserializeOwned> Report<T> {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::invalid(format!("report deserialization failed: {e}")))
    }
}

impl<T: Serialize + CsvRecord> Report<T> {
    /// CSV with the tool and invocation embedded as `#` comment lines.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        writeln!(out, "# {} {}", self.tool, self.version).expect("string write");
        let config = serde_json::to_string(&self.config)
            .map_err(|e| Error::invalid(format!("config serialization failed: {e}")))?;
        writeln!(out, "# config: {config}").expect("string write");
        writeln!(out, "{}", T::columns().join(",")).expect("string write");
        for record in &self.records {
            let cells: Vec<String> = record.row().iter().map(|c| csv_escape(c)).collect();
            writeln!(out, "{}", cells.join(",")).expect("string write");
        }
        Ok(out)
    }

    /// Picks the format from the file extension: `.csv` or `.json`.
    pub fn render(&self, path: &str) -> Result<String> {
        if path.ends_with(".csv") {
            self.to_csv()
        } else if path.ends_with(".json") {
            self.to_json()
        } else {
            Err(Error::invalid(format!(
                "cannot infer report format from `{path}`; use a .csv or .json extension"
            )))
        }
    }
}

fn csv_escape(cell: &str) -> String {
    if cell.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// `x` in C `%a` style: `0x1.8p+1`, sign preserved, mantissa digits
/// trimmed. The encoding is exact, so [`parse_f64`] restores the bits.
pub fn format_hex_f64(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    let sign = if x.is_sign_negative() { "-" } else { "" };
    if x.is_infinite() {
        return format!("{sign}inf");
    }
    let bits = x.to_bits();
    let exponent = ((bits >> 52) & 0x7ff) as i64;
    let mantissa = bits & ((1u64 << 52) - 1);
    if exponent == 0 && mantissa == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, exp) = if exponent == 0 { ('0', -1022) } else { ('1', exponent - 1023) };
    let mut digits = format!("{mantissa:013x}");
    while digits.ends_with('0') {
        digits.pop();
    }
    if digits.is_empty() {
        format!("{sign}0x{lead}p{exp:+}")
    } else {
        format!("{sign}0x{lead}.{digits}p{exp:+}")
    }
}

/// Parses a C-style hex float (`[+-]0x<hex>[.<hex>]p[+-]<dec>`) to the
/// nearest f64. Rejects anything else.
pub fn parse_hex_f64(s: &str) -> Result<f64> {
    let bad = || Error::invalid(format!("bad hex float `{s}`"));
    let (negative, rest) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let rest = rest.strip_prefix("0x").or_else(|| rest.strip_prefix("0X")).ok_or_else(bad)?;
    let (mantissa, exponent) = rest.split_once(['p', 'P']).ok_or_else(bad)?;
    let exponent: i32 = exponent.parse().map_err(|_| bad())?;
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let digits: String = int_part.chars().chain(frac_part.chars()).collect();
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_hexdigit()) {
        return Err(bad());
    }
    let scale = exponent - 4 * frac_part.len() as i32;
    let incomplete = Float::parse_radix(&digits, 16).map_err(|_| bad())?;
    let mut value = Float::with_val(53, incomplete);
    value <<= scale;
    let value = value.to_f64();
    Ok(if negative { -value } else { value })
}

/// Accepts either a plain decimal or a hex float.
pub fn parse_real(s: &str) -> Result<f64> {
    let body = s.trim_start_matches(['+', '-']);
    if body.starts_with("0x") || body.starts_with("0X") {
        parse_hex_f64(s)
    } else {
        s.parse()
            .map_err(|_| Error::invalid(format!("bad real literal `{s}`")))
    }
}

impl CsvRecord for SimulationReport {
    fn columns() -> &'static [&'static str] {
        &[
            "graph",
            "gamma",
            "bits",
            "perfect",
            "first_divergence_round",
            "convergence_round",
            "wl_classes",
            "mpnn_classes",
        ]
    }

    fn row(&self) -> Vec<String> {
        vec![
            self.graph_id.clone(),
            format_hex_f64(self.gamma),
            self.bits.to_string(),
            self.perfect.to_string(),
            self.first_divergence_round.map_or(String::new(), |r| r.to_string()),
            self.convergence_round.to_string(),
            self.wl_classes.to_string(),
            self.mpnn_classes_per_round
                .last()
                .map_or(String::new(), |c| c.to_string()),
        ]
    }
}

impl CsvRecord for LotteryRow {
    fn columns() -> &'static [&'static str] {
        &["gamma", "perfect_count"]
    }

    fn row(&self) -> Vec<String> {
        vec![format_hex_f64(self.gamma), self.perfect_count.to_string()]
    }
}

impl CsvRecord for SweepCell {
    fn columns() -> &'static [&'static str] {
        &["n", "seed", "gamma", "min_bits"]
    }

    fn row(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.seed.to_string(),
            format_hex_f64(self.gamma),
            self.min_bits.map_or(String::new(), |b| b.to_string()),
        ]
    }
}

impl CsvRecord for SweepSummary {
    fn columns() -> &'static [&'static str] {
        &["n", "seed", "mean_bits", "sd_bits", "found", "total"]
    }

    fn row(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.seed.to_string(),
            format_hex_f64(self.mean_bits),
            format_hex_f64(self.sd_bits),
            self.found.to_string(),
            self.total.to_string(),
        ]
    }
}

impl CsvRecord for ClassCountRecord {
    fn columns() -> &'static [&'static str] {
        &["gamma", "bits", "mpnn_classes", "wl_classes"]
    }

    fn row(&self) -> Vec<String> {
        vec![
            format_hex_f64(self.gamma),
            self.bits.to_string(),
            self.mpnn_classes.to_string(),
            self.wl_classes.to_string(),
        ]
    }
}
