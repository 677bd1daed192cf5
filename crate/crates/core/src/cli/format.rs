//! File formats.
//!
//! Series: plain text, one number per line. Lines starting with `#` are
//! comments, except the header `# step=<float>` which records the sampling
//! step. Blank lines are skipped.
//!
//! Systems, models and reports: JSON objects carrying `"format_version": 1`.
//! Writers emit keys in sorted order with two-space indentation and every
//! float with 17 significant digits, so equal values always give
//! byte-identical files and every `f64` survives a round trip exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::CliError;
use crate::dynsys::TimeSeries;
use crate::ident::{IdentReport, PredictionModel};
use crate::numkit::MonicPolynomial;

pub const FORMAT_VERSION: u32 = 1;

/// Float with 17 significant digits in JSON-compatible scientific notation.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn parse_series(text: &str) -> Result<TimeSeries, CliError> {
    let mut values = Vec::new();
    let mut step = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(v) = comment.trim().strip_prefix("step=") {
                let s: f64 = v.trim().parse().map_err(|_| CliError::Parse {
                    line: line_no,
                    message: format!("invalid step '{}'", v.trim()),
                })?;
                if !(s.is_finite() && s > 0.0) {
                    return Err(CliError::Parse {
                        line: line_no,
                        message: format!("step must be positive, got {s}"),
                    });
                }
                step = Some(s);
            }
            continue;
        }
        let v: f64 = line.parse().map_err(|_| CliError::Parse {
            line: line_no,
            message: format!("not a number: '{line}'"),
        })?;
        if !v.is_finite() {
            return Err(CliError::Parse {
                line: line_no,
                message: format!("non-finite value '{line}'"),
            });
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(CliError::EmptySeries);
    }
    Ok(TimeSeries::new(values)?.with_step(step)?)
}

pub fn read_series(path: &Path) -> Result<TimeSeries, CliError> {
    parse_series(&read_text(path)?)
}

pub fn format_series(series: &TimeSeries) -> String {
    let mut out = String::new();
    if let Some(step) = series.step() {
        let _ = writeln!(out, "# step={}", format_float(step));
    }
    for v in series.values() {
        let _ = writeln!(out, "{}", format_float(*v));
    }
    out
}

pub(crate) fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Deterministic JSON rendering of any serializable value.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let v = serde_json::to_value(value).map_err(|e| CliError::Format(e.to_string()))?;
    let mut out = String::new();
    emit(&v, 0, &mut out);
    out.push('\n');
    Ok(out)
}

fn emit(v: &Value, indent: usize, out: &mut String) {
    let pad = |k: usize, out: &mut String| out.extend(std::iter::repeat_n(' ', 2 * k));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&format_float(n.as_f64().expect("f64 number")));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            // numeric rows stay on one line
            if items.iter().all(|i| i.is_number()) {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    emit(item, indent, out);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                pad(indent + 1, out);
                emit(item, indent + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(indent, out);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (k, key) in keys.iter().enumerate() {
                pad(indent + 1, out);
                out.push_str(&Value::String((*key).clone()).to_string());
                out.push_str(": ");
                emit(&map[*key], indent + 1, out);
                out.push_str(if k + 1 < keys.len() { ",\n" } else { "\n" });
            }
            pad(indent, out);
            out.push('}');
        }
    }
}

/// Writes `report` as canonical JSON.
pub fn write_report<T: Serialize>(report: &T, path: &Path) -> Result<(), CliError> {
    write_text(path, &to_canonical_json(report)?)
}

pub fn read_report<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    parse_json(&read_text(path)?)
}

pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    match value.get("format_version").and_then(Value::as_u64) {
        Some(v) if v == u64::from(FORMAT_VERSION) => {}
        Some(v) => {
            return Err(CliError::Format(format!(
                "unsupported format_version {v} (expected {FORMAT_VERSION})"
            )))
        }
        None => return Err(CliError::Format("missing format_version".into())),
    }
    serde_json::from_value(value).map_err(|e| CliError::Format(e.to_string()))
}

/// System description file: a [`crate::dynsys::SystemSpec`] plus the version tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemFile {
    pub format_version: u32,
    #[serde(flatten)]
    pub system: crate::dynsys::SystemSpec,
}

/// Identified model with the diagnostics of its solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub order: usize,
    pub coeffs: Vec<f64>,
    pub offset: Option<f64>,
    pub step: Option<f64>,
    pub window_start: usize,
    pub residual: f64,
    pub condition: f64,
}

impl ModelFile {
    pub fn from_report(r: &IdentReport) -> Self {
        ModelFile {
            format_version: FORMAT_VERSION,
            order: r.model.order(),
            coeffs: r.model.coeffs().to_vec(),
            offset: r.model.offset(),
            step: r.model.step(),
            window_start: r.window_start,
            residual: r.residual,
            condition: r.condition_estimate,
        }
    }

    pub fn to_model(&self) -> Result<PredictionModel, CliError> {
        if self.coeffs.len() != self.order {
            return Err(CliError::Format(format!(
                "model order {} but {} coefficients",
                self.order,
                self.coeffs.len()
            )));
        }
        MonicPolynomial::new(self.coeffs.clone())
            .and_then(|p| PredictionModel::new(p, self.offset, self.step))
            .map_err(|e| CliError::Format(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservabilityReport {
    pub format_version: u32,
    pub n: usize,
    pub rank: usize,
    pub observable: bool,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub format_version: u32,
    pub step: f64,
    /// `[re, im]` pairs in lexicographic order.
    pub eigenvalues: Vec<[f64; 2]>,
    pub aliasing_risk: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_examples() {
        let s = parse_series("1\n1\n2\n3\n5\n").unwrap();
        assert_eq!(s.values(), &[1.0, 1.0, 2.0, 3.0, 5.0]);
        assert_eq!(s.step(), None);

        let s = parse_series("# step=0.3\n1.0\n0.955\n").unwrap();
        assert_eq!(s.values(), &[1.0, 0.955]);
        assert_eq!(s.step(), Some(0.3));

        match parse_series("1\nabc\n") {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_series("# only a comment\n\n"),
            Err(CliError::EmptySeries)
        ));
        assert!(matches!(
            parse_series("# step=-1\n1\n"),
            Err(CliError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn series_round_trip_is_exact() {
        let v = vec![0.1, -1.0 / 3.0, 1e-300, 12345.678901234567];
        let s = TimeSeries::new(v.clone())
            .unwrap()
            .with_step(Some(0.01))
            .unwrap();
        let back = parse_series(&format_series(&s)).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn canonical_json_is_sorted_and_fixed_width() {
        #[derive(Serialize)]
        struct R {
            zeta: f64,
            alpha: Vec<f64>,
            count: usize,
            none: Option<f64>,
        }
        let text = to_canonical_json(&R {
            zeta: 0.1,
            alpha: vec![1.0, -2.5],
            count: 3,
            none: None,
        })
        .unwrap();
        assert_eq!(
            text,
            "{\n  \"alpha\": [1.0000000000000000e0, -2.5000000000000000e0],\n  \"count\": 3,\n  \"none\": null,\n  \"zeta\": 1.0000000000000001e-1\n}\n"
        );
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["zeta"].as_f64(), Some(0.1));
    }

    #[test]
    fn version_is_checked() {
        let ok = r#"{"format_version": 1, "n": 2, "rank": 1, "observable": false, "tol": 1e-9}"#;
        assert!(parse_json::<ObservabilityReport>(ok).is_ok());
        let bad = ok.replace("\"format_version\": 1", "\"format_version\": 2");
        assert!(matches!(
            parse_json::<ObservabilityReport>(&bad),
            Err(CliError::Format(_))
        ));
    }

    #[test]
    fn system_file_flattens_spec() {
        let text =
            r#"{"format_version": 1, "kind": "discrete", "a": [[0, 1], [1, 1]], "c": [1, 0]}"#;
        let f: SystemFile = parse_json(text).unwrap();
        assert_eq!(f.system.dim(), 2);
        let again: SystemFile = parse_json(&to_canonical_json(&f).unwrap()).unwrap();
        assert_eq!(again, f);
    }
}
