//! Output artifacts: the results.csv table (fixed column order, 17
//! significant digits, header always present) and the JSON verification
//! report.
//!
//! The runtime_ms column is written as 0 for every record: identical
//! configs must reproduce byte-identical CSV files, which wall-clock
//! timings would break. Aggregate timings live in report.json, which is
//! not part of the reproducibility contract.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::homog::SweepRecord;

pub const CSV_HEADER: &str = "experiment,method,bc,p,s,epsilon,value_eps,value_limit,abs_error,bound_value,within_bound,residual,runtime_ms";

/// 17 significant digits: enough to round-trip any f64.
pub fn fmt17(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{x:.16e}")
    }
}

/// 6 significant digits for human-readable summaries.
pub fn fmt6(x: f64) -> String {
    if !x.is_finite() {
        return fmt17(x);
    }
    if x == 0.0 {
        return "0.00000".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..=8).contains(&mag) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

/// One results.csv row.
#[derive(Debug, Clone)]
pub struct CsvRow {
    pub experiment: String,
    pub method: String,
    pub bc: String,
    pub p: f64,
    pub s: f64,
    pub epsilon: f64,
    pub value_eps: f64,
    pub value_limit: f64,
    pub abs_error: f64,
    pub bound_value: f64,
    pub within_bound: bool,
    pub residual: f64,
}

impl CsvRow {
    pub fn from_record(kind: &str, r: &SweepRecord) -> Self {
        CsvRow {
            experiment: format!("{kind}:{}", r.quantity.label()),
            method: r.method.to_string(),
            bc: r.bc.clone(),
            p: r.p,
            s: r.s,
            epsilon: r.epsilon,
            value_eps: r.value_eps,
            value_limit: r.value_limit,
            abs_error: r.abs_error,
            bound_value: r.bound_value,
            within_bound: r.within_bound,
            residual: r.residual,
        }
    }

    fn line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},0",
            self.experiment,
            self.method,
            self.bc,
            fmt17(self.p),
            fmt17(self.s),
            fmt17(self.epsilon),
            fmt17(self.value_eps),
            fmt17(self.value_limit),
            fmt17(self.abs_error),
            fmt17(self.bound_value),
            self.within_bound,
            fmt17(self.residual),
        )
    }
}

pub fn render_results_csv(rows: &[CsvRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.line());
        out.push('\n');
    }
    out
}

pub fn write_results_csv(path: &Path, rows: &[CsvRow]) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(render_results_csv(rows).as_bytes())
}

/// Per-curve-point solution samples for plotting.
pub fn write_curve_samples(
    path: &Path,
    samples: &[(f64, f64, f64)],
) -> std::io::Result<()> {
    let mut out = String::from("x,u,w\n");
    for (x, u, w) in samples {
        out.push_str(&format!("{},{},{}\n", fmt17(*x), fmt17(*u), fmt17(*w)));
    }
    std::fs::write(path, out)
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportConstants {
    pub c1: f64,
    pub c_p: f64,
    /// Which Poincare constant c_p is: the Dirichlet one, 1/mu1^(1/p).
    pub c_p_convention: &'static str,
    pub mu1: f64,
    pub mu2: f64,
    #[serde(rename = "C_m")]
    pub cm: f64,
    #[serde(rename = "C_n")]
    pub cn: f64,
    pub c_teo2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitEntry {
    pub quantity: String,
    pub s: f64,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckEntry {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckEntry { name: name.into(), passed, detail: detail.into() }
    }
}

/// The report.json payload: verdicts, constants used, and fit slopes.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub experiment: String,
    pub bc: String,
    pub p: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constants: Option<ReportConstants>,
    pub fits: Vec<FitEntry>,
    pub checks: Vec<CheckEntry>,
    pub failures: Vec<String>,
    pub n_records: usize,
    pub runtime_ms: u128,
}

impl Report {
    pub fn all_checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(self).expect("report serializes");
        std::fs::write(path, text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt17_round_trips() {
        for &x in &[std::f64::consts::PI, 1.0 / 3.0, 1e-300, -2.5e17, 0.1] {
            let s = fmt17(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s}");
        }
        assert_eq!(fmt17(f64::NAN), "nan");
        assert_eq!(fmt17(f64::INFINITY), "inf");
    }

    #[test]
    fn fmt6_examples() {
        assert_eq!(fmt6(std::f64::consts::PI * std::f64::consts::PI), "9.86960");
        assert_eq!(fmt6(39.478417604357434), "39.4784");
        assert_eq!(fmt6(0.00123456789), "0.00123457");
    }

    #[test]
    fn header_column_order_is_pinned() {
        assert_eq!(
            CSV_HEADER.split(',').collect::<Vec<_>>(),
            vec![
                "experiment",
                "method",
                "bc",
                "p",
                "s",
                "epsilon",
                "value_eps",
                "value_limit",
                "abs_error",
                "bound_value",
                "within_bound",
                "residual",
                "runtime_ms"
            ]
        );
    }

    #[test]
    fn row_rendering_is_deterministic() {
        let row = CsvRow {
            experiment: "sweep:alpha".into(),
            method: "shooting".into(),
            bc: "dirichlet".into(),
            p: 2.0,
            s: 0.5,
            epsilon: 0.125,
            value_eps: 1.2345,
            value_limit: 1.2,
            abs_error: 0.0345,
            bound_value: f64::INFINITY,
            within_bound: true,
            residual: 1e-12,
        };
        let a = render_results_csv(std::slice::from_ref(&row));
        let b = render_results_csv(std::slice::from_ref(&row));
        assert_eq!(a, b);
        assert!(a.starts_with(CSV_HEADER));
        assert!(a.contains(",inf,true,"));
    }
}
