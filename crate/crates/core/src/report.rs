use serde::Serialize;

use crate::models::ComplexPoint;

/// Outcome of one verification check, serialized as one JSON document.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub model: String,
    pub samples: usize,
    pub h: f64,
    pub tol: f64,
    pub worst_point: Option<ComplexPoint>,
    pub worst_value: f64,
    pub pass: bool,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, model: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            model: model.into(),
            samples: 0,
            h: 0.0,
            tol: 0.0,
            worst_point: None,
            worst_value: 0.0,
            pass: true,
        }
    }
}
