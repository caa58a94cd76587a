//! Structured outcome of a check, and its JSON form.
//!
//! Numbers are written with 17 significant digits, so parsing a report and
//! writing it again reproduces the same bytes. Non-finite numbers have no
//! JSON spelling and are written as `null`; a report carrying one never
//! passes.

use std::fmt::Write as _;

use serde_json::Value;

use crate::jet::{is_finite, Complex};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    Real(f64),
    Complex(Complex),
}

impl Metric {
    /// Real value, or modulus for complex metrics; compared against the
    /// tolerance when the metric is the headline.
    pub fn scalar(&self) -> f64 {
        match self {
            Metric::Real(x) => *x,
            Metric::Complex(z) => z.norm(),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Metric::Real(x) => x.is_finite(),
            Metric::Complex(z) => is_finite(*z),
        }
    }

    pub fn as_real(&self) -> Option<f64> {
        match self {
            Metric::Real(x) => Some(*x),
            Metric::Complex(_) => None,
        }
    }

    pub fn as_complex(&self) -> Complex {
        match self {
            Metric::Real(x) => Complex::new(*x, 0.0),
            Metric::Complex(z) => *z,
        }
    }
}

impl From<f64> for Metric {
    fn from(x: f64) -> Self {
        Metric::Real(x)
    }
}

impl From<Complex> for Metric {
    fn from(z: Complex) -> Self {
        Metric::Complex(z)
    }
}

impl From<usize> for Metric {
    fn from(n: usize) -> Self {
        Metric::Real(n as f64)
    }
}

impl From<bool> for Metric {
    fn from(b: bool) -> Self {
        Metric::Real(if b { 1.0 } else { 0.0 })
    }
}

/// The headline metric is always the first entry of `metrics`; `pass` is
/// true exactly when it is finite and at most `tolerance`, and no extra
/// failure condition was recorded by the check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub check: String,
    pub inputs: Vec<(String, String)>,
    pub metrics: Vec<(String, Metric)>,
    pub tolerance: f64,
    pub pass: bool,
    pub n_points: usize,
    pub n_skipped: usize,
}

impl CheckReport {
    pub fn new(check: &str, headline: &str, value: impl Into<Metric>, tolerance: f64) -> Self {
        let value = value.into();
        let pass = value.is_finite() && value.scalar() <= tolerance;
        CheckReport {
            check: check.to_string(),
            inputs: Vec::new(),
            metrics: vec![(headline.to_string(), value)],
            tolerance,
            pass,
            n_points: 0,
            n_skipped: 0,
        }
    }

    /// Report for a pure computation, which always passes.
    pub fn computation(check: &str) -> Self {
        CheckReport {
            check: check.to_string(),
            inputs: Vec::new(),
            metrics: Vec::new(),
            tolerance: 0.0,
            pass: true,
            n_points: 0,
            n_skipped: 0,
        }
    }

    pub fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.push((key.to_string(), value.to_string()));
        self
    }

    pub fn metric(mut self, key: &str, value: impl Into<Metric>) -> Self {
        let value = value.into();
        if !value.is_finite() {
            self.pass = false;
        }
        self.metrics.push((key.to_string(), value));
        self
    }

    pub fn points(mut self, n_points: usize, n_skipped: usize) -> Self {
        self.n_points = n_points;
        self.n_skipped = n_skipped;
        self
    }

    /// Records a failure condition beyond the headline comparison.
    pub fn require(mut self, condition: bool) -> Self {
        self.pass &= condition;
        self
    }

    pub fn headline(&self) -> Option<(&str, Metric)> {
        self.metrics.first().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn get(&self, key: &str) -> Option<Metric> {
        self.metrics.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn real(&self, key: &str) -> Option<f64> {
        self.get(key).map(|m| m.scalar())
    }

    pub fn complex(&self, key: &str) -> Option<Complex> {
        self.get(key).map(|m| m.as_complex())
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\"check\":");
        push_str_lit(&mut out, &self.check);
        out.push_str(",\"inputs\":{");
        for (k, (key, value)) in self.inputs.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            push_str_lit(&mut out, key);
            out.push(':');
            push_str_lit(&mut out, value);
        }
        out.push_str("},\"metrics\":{");
        for (k, (key, value)) in self.metrics.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            push_str_lit(&mut out, key);
            out.push(':');
            match value {
                Metric::Real(x) => push_number(&mut out, *x),
                Metric::Complex(z) => {
                    out.push('[');
                    push_number(&mut out, z.re);
                    out.push(',');
                    push_number(&mut out, z.im);
                    out.push(']');
                }
            }
        }
        out.push_str("},\"tolerance\":");
        push_number(&mut out, self.tolerance);
        let _ = write!(
            out,
            ",\"pass\":{},\"n_points\":{},\"n_skipped\":{}}}",
            self.pass, self.n_points, self.n_skipped
        );
        out
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let obj = v.as_object().ok_or("report is not a JSON object")?;
        let expected = [
            "check",
            "inputs",
            "metrics",
            "tolerance",
            "pass",
            "n_points",
            "n_skipped",
        ];
        if obj.len() != expected.len() || expected.iter().any(|k| !obj.contains_key(*k)) {
            return Err(format!("report keys must be exactly {expected:?}"));
        }
        let check = obj["check"].as_str().ok_or("`check` must be a string")?;
        let inputs = obj["inputs"]
            .as_object()
            .ok_or("`inputs` must be an object")?
            .iter()
            .map(|(k, v)| {
                v.as_str()
                    .map(|s| (k.clone(), s.to_string()))
                    .ok_or_else(|| format!("input `{k}` must be a string"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let metrics = obj["metrics"]
            .as_object()
            .ok_or("`metrics` must be an object")?
            .iter()
            .map(|(k, v)| {
                metric_from_json(v).map(|m| (k.clone(), m)).ok_or_else(|| {
                    format!("metric `{k}` must be a number, null, or an [re, im] pair")
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let count = |key: &str| {
            obj[key]
                .as_u64()
                .map(|n| n as usize)
                .ok_or_else(|| format!("`{key}` must be a non-negative integer"))
        };
        let report = CheckReport {
            check: check.to_string(),
            inputs,
            metrics,
            tolerance: number_from_json(&obj["tolerance"]).ok_or("`tolerance` must be a number")?,
            pass: obj["pass"].as_bool().ok_or("`pass` must be a boolean")?,
            n_points: count("n_points")?,
            n_skipped: count("n_skipped")?,
        };
        if report.n_skipped > report.n_points {
            return Err("n_skipped exceeds n_points".into());
        }
        Ok(report)
    }
}

fn number_from_json(v: &Value) -> Option<f64> {
    match v {
        Value::Null => Some(f64::NAN),
        Value::Number(n) => n.as_f64(),
        _ => None,
    }
}

fn metric_from_json(v: &Value) -> Option<Metric> {
    match v {
        Value::Array(pair) if pair.len() == 2 => Some(Metric::Complex(Complex::new(
            number_from_json(&pair[0])?,
            number_from_json(&pair[1])?,
        ))),
        other => number_from_json(other).map(Metric::Real),
    }
}

fn push_number(out: &mut String, x: f64) {
    if x.is_finite() {
        let _ = write!(out, "{x:.16e}");
    } else {
        out.push_str("null");
    }
}

fn push_str_lit(out: &mut String, s: &str) {
    out.push_str(&serde_json::to_string(s).expect("string serialization cannot fail"));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_tracks_headline() {
        assert!(CheckReport::new("x", "max_abs", 1e-12, 1e-10).pass);
        assert!(!CheckReport::new("x", "max_abs", 1e-9, 1e-10).pass);
        assert!(!CheckReport::new("x", "max_abs", f64::NAN, 1e-10).pass);
        assert!(
            !CheckReport::new("x", "max_abs", 0.0, 1e-10)
                .require(false)
                .pass
        );
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let r = CheckReport::new("green", "abs_diff", 1.234e-17, 1e-7)
            .input("f", "conj(z) \"quoted\"")
            .metric("lhs", Complex::new(0.1, std::f64::consts::PI))
            .metric("n", 3usize)
            .points(10, 1);
        let text = r.to_json();
        let back = CheckReport::from_json(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), text);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["metrics"]["lhs"][1].as_f64(), Some(std::f64::consts::PI));
    }

    #[test]
    fn non_finite_metric_is_null_and_fails() {
        let r = CheckReport::computation("c").metric("bad", f64::INFINITY);
        assert!(!r.pass);
        assert!(r.to_json().contains("\"bad\":null"));
    }

    #[test]
    fn schema_violations_are_rejected() {
        assert!(CheckReport::from_json("[]").is_err());
        assert!(CheckReport::from_json(r#"{"check":"x"}"#).is_err());
        let bad = r#"{"check":"x","inputs":{},"metrics":{"m":"str"},"tolerance":1,"pass":true,"n_points":0,"n_skipped":0}"#;
        assert!(CheckReport::from_json(bad).is_err());
    }
}
