//! Verification reports and their serialized forms.
//!
//! Every check in the suites reduces to one `VerificationReport`: a named
//! residual compared against a pinned tolerance at a recorded resolution.
//! Serialization is deterministic by construction: parameters live in a
//! sorted map, floats print through the shortest round-trip representation,
//! and nothing time- or machine-dependent is recorded, so two runs with
//! the same configuration produce byte-identical files.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct VerificationReport {
    pub check: String,
    pub params: BTreeMap<String, String>,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub resolution: usize,
}

impl VerificationReport {
    /// A report passes when the residual is at or below tolerance and finite.
    pub fn new(check: impl Into<String>, resolution: usize, residual: f64, tolerance: f64) -> Self {
        VerificationReport {
            check: check.into(),
            params: BTreeMap::new(),
            residual,
            tolerance,
            pass: residual.is_finite() && residual.abs() <= tolerance,
            resolution,
        }
    }

    pub fn with_param(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.params.insert(key.into(), value.to_string());
        self
    }

    /// Marks a check that asserts a lower bound (a witness that must NOT
    /// vanish): pass when |residual| is at or above the tolerance.
    pub fn expecting_nonzero(mut self) -> Self {
        self.pass = self.residual.is_finite() && self.residual.abs() >= self.tolerance;
        self
    }
}

pub fn all_pass(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

pub fn to_json(reports: &[VerificationReport]) -> Result<String> {
    let mut text = serde_json::to_string_pretty(reports)?;
    text.push('\n');
    Ok(text)
}

pub fn from_json(text: &str) -> Result<Vec<VerificationReport>> {
    Ok(serde_json::from_str(text)?)
}

/// CSV with one row per report; params flattened as `k=v` pairs joined by
/// `;` in sorted key order.
pub fn to_csv(reports: &[VerificationReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["check", "params", "residual", "tolerance", "pass", "resolution"])
        .map_err(|e| Error::Csv(e.to_string()))?;
    for r in reports {
        let params = r
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";");
        w.write_record([
            r.check.clone(),
            params,
            format!("{:e}", r.residual),
            format!("{:e}", r.tolerance),
            r.pass.to_string(),
            r.resolution.to_string(),
        ])
        .map_err(|e| Error::Csv(e.to_string()))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Csv(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Csv(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<VerificationReport> {
        vec![
            VerificationReport::new("multiplier_exactness", 4096, 3.2e-15, 1e-12)
                .with_param("s", 0.5)
                .with_param("mode", 3),
            VerificationReport::new("witness", 129, 0.034, 1e-2).expecting_nonzero(),
            VerificationReport::new("failing", 64, 2.0, 1e-3),
        ]
    }

    #[test]
    fn pass_logic() {
        let r = sample();
        assert!(r[0].pass);
        assert!(r[1].pass, "nonzero witness above threshold must pass");
        assert!(!r[2].pass);
        assert!(!all_pass(&r));
        assert!(all_pass(&r[..2]));
        assert!(!VerificationReport::new("nan", 1, f64::NAN, 1.0).pass);
    }

    #[test]
    fn json_round_trip_and_shape() {
        let r = sample();
        let text = to_json(&r).unwrap();
        assert!(text.contains("\"check\": \"multiplier_exactness\""));
        assert!(text.contains("\"pass\": true"));
        assert!(text.contains("\"resolution\": 4096"));
        let back = from_json(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn csv_shape() {
        let text = to_csv(&sample()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "check,params,residual,tolerance,pass,resolution");
        assert!(lines[1].starts_with("multiplier_exactness,mode=3;s=0.5,"));
        assert!(lines[3].contains(",false,"));
    }

    #[test]
    fn serialization_is_reproducible() {
        let r = sample();
        assert_eq!(to_json(&r).unwrap(), to_json(&r.clone()).unwrap());
        assert_eq!(to_csv(&r).unwrap(), to_csv(&r.clone()).unwrap());
    }
}
