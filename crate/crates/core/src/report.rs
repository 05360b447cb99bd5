//! Check records shared by every harness.

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

/// Magnitude below which relative errors fall back to absolute ones.
pub const ABS_FALLBACK: f64 = 1e-12;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub area: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub schema_version: u32,
    pub check: String,
    pub params: Params,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub abs_error: f64,
    pub rel_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// `(abs, rel)` error between two equal-length value lists, componentwise max.
pub fn errors(lhs: &[f64], rhs: &[f64]) -> (f64, f64) {
    lhs.iter().zip(rhs).fold((0.0f64, 0.0f64), |(a, r), (&x, &y)| {
        let abs = (x - y).abs();
        let scale = x.abs().max(y.abs());
        let rel = if scale < ABS_FALLBACK { abs } else { abs / scale };
        (a.max(abs), r.max(rel))
    })
}

impl CheckReport {
    /// Compares value lists; passes when the relative error (absolute below
    /// `ABS_FALLBACK`) is within `tolerance`.
    pub fn compare(check: impl Into<String>, params: Params, lhs: Vec<f64>, rhs: Vec<f64>, tolerance: f64) -> Self {
        let (abs_error, rel_error) = if lhs.len() == rhs.len() {
            errors(&lhs, &rhs)
        } else {
            (f64::INFINITY, f64::INFINITY)
        };
        let pass = rel_error.is_finite() && rel_error <= tolerance;
        CheckReport {
            schema_version: SCHEMA_VERSION,
            check: check.into(),
            params,
            lhs,
            rhs,
            abs_error,
            rel_error,
            tolerance,
            pass,
            note: None,
        }
    }

    /// Compares against a known magnitude: `rel_error = max |lhs - rhs| / scale`.
    /// Used where some exact values are zero but the computation carries
    /// quadrature error at the size of `scale`.
    pub fn compare_scaled(
        check: impl Into<String>,
        params: Params,
        lhs: Vec<f64>,
        rhs: Vec<f64>,
        scale: f64,
        tolerance: f64,
    ) -> Self {
        let mut r = CheckReport::compare(check, params, lhs, rhs, tolerance);
        if r.abs_error.is_finite() {
            r.rel_error = r.abs_error / scale;
            r.pass = r.rel_error <= tolerance;
        }
        r
    }

    /// A residual that should vanish; `residual` is already relative.
    pub fn residual(check: impl Into<String>, params: Params, residual: f64, tolerance: f64) -> Self {
        CheckReport {
            schema_version: SCHEMA_VERSION,
            check: check.into(),
            params,
            lhs: vec![residual],
            rhs: vec![0.0],
            abs_error: residual,
            rel_error: residual,
            tolerance,
            pass: residual.is_finite() && residual <= tolerance,
            note: None,
        }
    }

    /// A sub-computation failed; the failure is recorded instead of a value.
    pub fn failure(check: impl Into<String>, params: Params, tolerance: f64, err: &crate::Error) -> Self {
        CheckReport {
            schema_version: SCHEMA_VERSION,
            check: check.into(),
            params,
            lhs: Vec::new(),
            rhs: Vec::new(),
            abs_error: f64::INFINITY,
            rel_error: f64::INFINITY,
            tolerance,
            pass: false,
            note: Some(err.to_string()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rule() {
        let r = CheckReport::compare("x", Params::default(), vec![1.0], vec![1.0 + 1e-9], 1e-8);
        assert!(r.pass);
        let r = CheckReport::compare("x", Params::default(), vec![1.0], vec![1.1], 1e-8);
        assert!(!r.pass);
        // absolute fallback for tiny magnitudes
        let r = CheckReport::compare("x", Params::default(), vec![0.0], vec![3e-13], 1e-8);
        assert!(r.pass);
        let r = CheckReport::compare("x", Params::default(), vec![0.0], vec![1e-6], 1e-8);
        assert!(!r.pass);
        let r = CheckReport::compare("x", Params::default(), vec![0.0], vec![], 1e-8);
        assert!(!r.pass);
        let r = CheckReport::compare_scaled("x", Params::default(), vec![1e-9, 2.0], vec![0.0, 2.0], 1.0, 1e-8);
        assert!(r.pass);
        let r = CheckReport::compare_scaled("x", Params::default(), vec![1e-9, 2.0], vec![0.0, 2.0], 0.01, 1e-8);
        assert!(!r.pass);
    }

    #[test]
    fn json_skips_empty_params() {
        let r = CheckReport::residual("rel", Params { beta: Some(2.0), ..Params::default() }, 0.0, 1e-10);
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"beta\":2.0"));
        assert!(!s.contains("seed"));
    }
}
