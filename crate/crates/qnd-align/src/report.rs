//! Output formatting: the machine-readable scenario record, the sweep
//! table (CSV or JSON lines), and the human-readable report. Every number
//! printed here is computed by the library layers; this module only
//! formats. Formats are pinned by golden-file tests.

use crate::couplings::{CouplingSet, SweepPoint};
use crate::scenarios::ScenarioResult;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// One sweep row with the derived prediction columns.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub delta_norm: f64,
    pub kappa_v: f64,
    pub kappa_t: f64,
    pub eps_p: f64,
    pub eps_a: f64,
    /// Double-pass first-order conditional variance 1/(1 + 4 kappa_t^2).
    pub predicted_conditional_variance: f64,
    pub squeezing_db: f64,
    pub masked: bool,
}

impl From<&SweepPoint> for SweepRecord {
    fn from(p: &SweepPoint) -> Self {
        let predicted = 1.0 / (1.0 + 4.0 * p.kappa_t * p.kappa_t);
        SweepRecord {
            delta_norm: p.normalized_detuning,
            kappa_v: p.kappa_v,
            kappa_t: p.kappa_t,
            eps_p: p.eps_p,
            eps_a: p.eps_a,
            predicted_conditional_variance: predicted,
            squeezing_db: 10.0 * predicted.log10(),
            masked: p.masked,
        }
    }
}

pub const SWEEP_CSV_HEADER: &str =
    "delta_norm,kappa_v,kappa_t,eps_p,eps_a,predicted_conditional_variance,squeezing_db,masked";

/// Full double precision so downstream plotting loses nothing.
fn full(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = String::with_capacity(64 + points.len() * 160);
    out.push_str(SWEEP_CSV_HEADER);
    out.push('\n');
    for p in points {
        let r = SweepRecord::from(p);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            full(r.delta_norm),
            full(r.kappa_v),
            full(r.kappa_t),
            full(r.eps_p),
            full(r.eps_a),
            full(r.predicted_conditional_variance),
            full(r.squeezing_db),
            r.masked
        );
    }
    out
}

pub fn sweep_json_lines(points: &[SweepPoint]) -> String {
    let mut out = String::with_capacity(points.len() * 200);
    for p in points {
        let r = SweepRecord::from(p);
        out.push_str(&serde_json::to_string(&r).expect("sweep row serializes"));
        out.push('\n');
    }
    out
}

/// Machine-readable record of one scenario evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct ReportRecord {
    pub geometry: String,
    pub coupling: CouplingSet,
    pub conditional_variances: BTreeMap<String, f64>,
    pub squeezing_db: BTreeMap<String, f64>,
    pub headline_squeezing_db: Option<f64>,
    pub epr: Option<f64>,
    pub epr_threshold: Option<f64>,
    pub symplectic_residual: f64,
    pub noise_degradation: Option<f64>,
    pub warnings: Vec<String>,
}

pub fn record(result: &ScenarioResult) -> ReportRecord {
    ReportRecord {
        geometry: result.geometry.name().to_string(),
        coupling: result.coupling,
        conditional_variances: result.conditional_variances.clone(),
        squeezing_db: result.squeezing_db.clone(),
        headline_squeezing_db: result.headline_squeezing_db,
        epr: result.epr,
        epr_threshold: result.epr.map(|_| 4.0),
        symplectic_residual: result.symplectic_residual,
        noise_degradation: result.noise_degradation,
        warnings: result.warnings.clone(),
    }
}

pub fn json_line(record: &ReportRecord) -> String {
    let mut s = serde_json::to_string(record).expect("report serializes");
    s.push('\n');
    s
}

pub fn human_report(r: &ReportRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {}", r.geometry);
    let _ = writeln!(out, "couplings (per pass):");
    let _ = writeln!(out, "  kappa_v    = {:+.6e}", r.coupling.kappa_v);
    let _ = writeln!(out, "  kappa_t    = {:+.6e}", r.coupling.kappa_t);
    let _ = writeln!(out, "  eps_a      = {:.6e}", r.coupling.eps_a);
    let _ = writeln!(out, "  eps_p      = {:.6e}", r.coupling.eps_p);
    let _ = writeln!(out, "  eps_prime  = {:+.6e}", r.coupling.eps_prime);
    let _ = writeln!(out, "  saturation = {:.6e}", r.coupling.saturation);
    let _ = writeln!(out, "conditional variances:");
    for (k, v) in &r.conditional_variances {
        let _ = writeln!(out, "  {k:<18} = {v:.6e}");
    }
    let _ = writeln!(out, "squeezing (dB, vs vacuum reference):");
    for (k, v) in &r.squeezing_db {
        let _ = writeln!(out, "  {k:<18} = {v:+.3}");
    }
    if let Some(db) = r.headline_squeezing_db {
        let _ = writeln!(out, "headline squeezing: {db:+.2} dB");
    }
    if let Some(epr) = r.epr {
        let _ = writeln!(
            out,
            "EPR sum variance: {:.6e} (separable at or above {:.1})",
            epr,
            r.epr_threshold.unwrap_or(4.0)
        );
    }
    let _ = writeln!(out, "symplectic residual of the coherent map: {:.3e}", r.symplectic_residual);
    if let Some(d) = r.noise_degradation {
        let _ = writeln!(out, "noise degradation of the headline variance: {:+.2}%", 100.0 * d);
    }
    if !r.warnings.is_empty() {
        let _ = writeln!(out, "warnings:");
        for w in &r.warnings {
            let _ = writeln!(out, "  - {w}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::couplings::SweepPoint;

    fn sample_points() -> Vec<SweepPoint> {
        vec![
            SweepPoint {
                normalized_detuning: 5.0,
                kappa_v: 0.01,
                kappa_t: -0.5,
                eps_p: 0.1,
                eps_a: 0.1,
                masked: false,
            },
            SweepPoint {
                normalized_detuning: 6.0,
                kappa_v: 0.02,
                kappa_t: -0.25,
                eps_p: 0.05,
                eps_a: 0.05,
                masked: true,
            },
        ]
    }

    #[test]
    fn csv_shape_and_determinism() {
        let pts = sample_points();
        let a = sweep_csv(&pts);
        let b = sweep_csv(&pts);
        assert_eq!(a, b);
        let mut lines = a.lines();
        assert_eq!(lines.next().unwrap(), SWEEP_CSV_HEADER);
        let first = lines.next().unwrap();
        assert_eq!(first.split(',').count(), 8);
        assert!(first.ends_with(",false"));
        assert!(a.lines().nth(2).unwrap().ends_with(",true"));
    }

    #[test]
    fn csv_keeps_full_precision() {
        let pts = vec![SweepPoint {
            normalized_detuning: 1.0 / 3.0,
            kappa_v: 0.1,
            kappa_t: 0.2,
            eps_p: 0.0,
            eps_a: 0.0,
            masked: false,
        }];
        let csv = sweep_csv(&pts);
        let cell = csv.lines().nth(1).unwrap().split(',').next().unwrap();
        let back: f64 = cell.parse().unwrap();
        assert_eq!(back, 1.0 / 3.0);
    }

    #[test]
    fn predicted_variance_column() {
        let pts = sample_points();
        let rec = SweepRecord::from(&pts[0]);
        assert!((rec.predicted_conditional_variance - 0.5).abs() < 1e-15);
        assert!((rec.squeezing_db - 10.0 * 0.5f64.log10()).abs() < 1e-12);
    }

    #[test]
    fn json_lines_one_object_per_row() {
        let pts = sample_points();
        let text = sweep_json_lines(&pts);
        assert_eq!(text.lines().count(), 2);
        for line in text.lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert!(v.get("delta_norm").is_some());
            assert!(v.get("masked").is_some());
        }
    }
}
