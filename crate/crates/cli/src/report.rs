use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

/// Agreement threshold for rows that carry a reference value.
pub const MATCH_TOL: f64 = 1e-10;

const FRACTION_TOL: f64 = 1e-12;
const MAX_DENOMINATOR: i64 = 64;

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fraction: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paper_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_error: Option<f64>,
}

impl Row {
    pub fn new(name: impl Into<String>, value: f64) -> Self {
        // Adding zero maps -0.0 to 0.0.
        let value = value + 0.0;
        Row {
            name: name.into(),
            value,
            fraction: small_fraction(value),
            paper_value: None,
            abs_error: None,
        }
    }

    pub fn against(name: impl Into<String>, value: f64, reference: f64) -> Self {
        Row {
            paper_value: Some(reference),
            abs_error: Some((value - reference).abs()),
            ..Row::new(name, value)
        }
    }

    pub fn mismatched(&self) -> bool {
        self.abs_error.is_some_and(|e| e.is_nan() || e > MATCH_TOL)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub experiment: &'static str,
    pub config: Value,
    pub results: Vec<Row>,
}

impl Report {
    pub fn new(experiment: &'static str, config: Value) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            experiment,
            config,
            results: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Row) {
        self.results.push(row);
    }

    pub fn mismatches(&self) -> usize {
        self.results.iter().filter(|r| r.mismatched()).count()
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self) -> csv::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["name", "value", "fraction", "paper_value", "abs_error"])?;
        for r in &self.results {
            w.write_record([
                r.name.clone(),
                r.value.to_string(),
                r.fraction.clone().unwrap_or_default(),
                r.paper_value.map(|v| v.to_string()).unwrap_or_default(),
                r.abs_error.map(|v| v.to_string()).unwrap_or_default(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn to_table(&self) -> String {
        let header = [
            "quantity",
            "computed_value",
            "fraction",
            "paper_value",
            "abs_error",
        ];
        let cells: Vec<[String; 5]> = self
            .results
            .iter()
            .map(|r| {
                [
                    r.name.clone(),
                    significant(r.value),
                    r.fraction.clone().unwrap_or_default(),
                    r.paper_value.map(significant).unwrap_or_default(),
                    r.abs_error.map(|e| format!("{e:.1e}")).unwrap_or_default(),
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        writeln!(out, "# {}", self.experiment).unwrap();
        let mut line = |fields: &[&str]| {
            let parts: Vec<String> = fields
                .iter()
                .zip(widths)
                .map(|(f, w)| format!("{f:<w$}"))
                .collect();
            writeln!(out, "{}", parts.join("  ").trim_end()).unwrap();
        };
        line(&header);
        for row in &cells {
            line(&row.each_ref().map(String::as_str));
        }
        out
    }
}

/// `p/q` in lowest terms when `value` is within 1e-12 of a fraction with
/// `q <= 64`.
pub fn small_fraction(value: f64) -> Option<String> {
    if !value.is_finite() {
        return None;
    }
    (1..=MAX_DENOMINATOR).find_map(|q| {
        let p = (value * q as f64).round();
        ((value - p / q as f64).abs() <= FRACTION_TOL).then(|| {
            if q == 1 {
                format!("{}", p as i64)
            } else {
                format!("{}/{q}", p as i64)
            }
        })
    })
}

/// Decimal rendering with 15 significant digits.
pub fn significant(value: f64) -> String {
    if value == 0.0 || !value.is_finite() {
        return value.to_string();
    }
    // Round first so 0.99999999999999998 counts as magnitude 0.
    let rounded: f64 = format!("{value:.14e}").parse().expect("valid float");
    let magnitude = rounded.abs().log10().floor() as i32;
    if (-5..15).contains(&magnitude) {
        let decimals = (14 - magnitude).max(0) as usize;
        format!("{value:.decimals$}")
    } else {
        format!("{value:.14e}")
    }
}
