//! CSV and JSON encodings. Floats use the shortest decimal that round-trips.

use std::fmt::Write;

use nlcs_core::metrics::{ConformanceReport, ScanRow};
use nlcs_core::state::Provenance;
use nlcs_core::wigner::WignerGrid;
use nlcs_core::{Complex64, StateVector};
use serde::{Deserialize, Serialize};

/// Shortest round-trip decimal, switching to exponent form at the extremes.
pub fn float(v: f64) -> String {
    format!("{v:?}")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(c: Complex64) -> Self {
        ComplexJson { re: c.re, im: c.im }
    }
}

impl From<ComplexJson> for Complex64 {
    fn from(c: ComplexJson) -> Self {
        Complex64::new(c.re, c.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub n_max: usize,
    pub alpha: ComplexJson,
    pub phi: f64,
    pub model: String,
    pub coeffs: Vec<ComplexJson>,
}

pub fn state_to_json(state: &StateVector) -> String {
    let p = state.provenance();
    let doc = StateJson {
        n_max: state.n_max(),
        alpha: p.alpha.into(),
        phi: p.phi,
        model: p.model.clone(),
        coeffs: state.coeffs().iter().copied().map(Into::into).collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("state serializes");
    out.push('\n');
    out
}

pub fn state_from_json(text: &str) -> Result<StateVector, String> {
    let doc: StateJson = serde_json::from_str(text).map_err(|e| format!("invalid state JSON: {e}"))?;
    if doc.coeffs.len() != doc.n_max + 1 {
        return Err(format!("state JSON: n_max = {} but {} coefficients", doc.n_max, doc.coeffs.len()));
    }
    let provenance = Provenance { model: doc.model, alpha: doc.alpha.into(), phi: doc.phi };
    StateVector::from_raw_parts(doc.coeffs.into_iter().map(Into::into).collect(), provenance)
        .map_err(|e| format!("state JSON: {e}"))
}

/// `n,re,im`.
pub fn state_csv(state: &StateVector) -> String {
    let mut out = String::from("n,re,im\n");
    for (n, c) in state.coeffs().iter().enumerate() {
        writeln!(out, "{n},{},{}", float(c.re), float(c.im)).unwrap();
    }
    out
}

/// `n,p`.
pub fn pn_csv(pn: &[f64]) -> String {
    let mut out = String::from("n,p\n");
    for (n, p) in pn.iter().enumerate() {
        writeln!(out, "{n},{}", float(*p)).unwrap();
    }
    out
}

#[derive(Serialize)]
struct PnRow {
    n: usize,
    p: f64,
}

pub fn pn_json(pn: &[f64]) -> String {
    let rows: Vec<PnRow> = pn.iter().enumerate().map(|(n, &p)| PnRow { n, p }).collect();
    serde_json::to_string_pretty(&rows).expect("pn serializes") + "\n"
}

/// `alpha,value,component`; rows whose evaluation failed carry `NaN`.
pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from("alpha,value,component\n");
    for r in rows {
        let value = r.value.as_ref().map_or(f64::NAN, |v| *v);
        writeln!(out, "{},{},{}", float(r.alpha), float(value), r.component.name()).unwrap();
    }
    out
}

#[derive(Serialize)]
struct ScanJson<'a> {
    alpha: f64,
    value: Option<f64>,
    component: &'a str,
    error: Option<String>,
}

pub fn scan_json(rows: &[ScanRow]) -> String {
    let doc: Vec<ScanJson> = rows
        .iter()
        .map(|r| ScanJson {
            alpha: r.alpha,
            value: r.value.as_ref().ok().copied(),
            component: r.component.name(),
            error: r.value.as_ref().err().map(|e| e.to_string()),
        })
        .collect();
    serde_json::to_string_pretty(&doc).expect("scan serializes") + "\n"
}

/// `x,p,w`, `x` outer.
pub fn wigner_csv(grid: &WignerGrid) -> String {
    let mut out = String::with_capacity(32 * grid.values.len() + 8);
    out.push_str("x,p,w\n");
    for (i, x) in grid.xs.iter().enumerate() {
        let xs = float(*x);
        for (j, p) in grid.ps.iter().enumerate() {
            writeln!(out, "{xs},{},{}", float(*p), float(grid.value(i, j))).unwrap();
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WignerSummary {
    pub min_value: f64,
    pub min_x: f64,
    pub min_p: f64,
    pub norm_sum: f64,
}

impl WignerSummary {
    pub fn of(grid: &WignerGrid) -> Self {
        WignerSummary {
            min_value: grid.min_value,
            min_x: grid.min_location.0,
            min_p: grid.min_location.1,
            norm_sum: grid.norm_sum(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes") + "\n"
    }
}

/// `n,re,im` of `f_s(n)`.
pub fn fs_csv(values: &[(usize, Complex64)]) -> String {
    let mut out = String::from("n,re,im\n");
    for (n, v) in values {
        writeln!(out, "{n},{},{}", float(v.re), float(v.im)).unwrap();
    }
    out
}

pub fn fs_json(values: &[(usize, Complex64)]) -> String {
    #[derive(Serialize)]
    struct Row {
        n: usize,
        re: f64,
        im: f64,
    }
    let rows: Vec<Row> = values.iter().map(|(n, v)| Row { n: *n, re: v.re, im: v.im }).collect();
    serde_json::to_string_pretty(&rows).expect("fs serializes") + "\n"
}

fn status(passes: Option<bool>) -> &'static str {
    match passes {
        Some(true) => "pass",
        Some(false) => "fail",
        None => "logged",
    }
}

/// `key,quantity,deviation,tolerance,status,negated_deviation`.
pub fn crosscheck_csv(report: &ConformanceReport) -> String {
    let mut out = String::from("key,quantity,deviation,tolerance,status,negated_deviation\n");
    for e in &report.entries {
        let opt = |v: Option<f64>| v.map(float).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{}",
            e.key,
            e.quantity,
            float(e.deviation),
            opt(e.tolerance),
            status(e.passes()),
            opt(e.negated_deviation)
        )
        .unwrap();
    }
    out
}

pub fn crosscheck_json(report: &ConformanceReport) -> String {
    #[derive(Serialize)]
    struct Entry<'a> {
        key: &'a str,
        quantity: &'a str,
        deviation: f64,
        tolerance: Option<f64>,
        status: &'a str,
        negated_deviation: Option<f64>,
    }
    #[derive(Serialize)]
    struct Doc<'a> {
        n_max: usize,
        entries: Vec<Entry<'a>>,
    }
    let doc = Doc {
        n_max: report.n_max,
        entries: report
            .entries
            .iter()
            .map(|e| Entry {
                key: e.key,
                quantity: e.quantity,
                deviation: e.deviation,
                tolerance: e.tolerance,
                status: status(e.passes()),
                negated_deviation: e.negated_deviation,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
}
