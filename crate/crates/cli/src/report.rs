//! Serializable reports and their terminal rendering.

use std::fmt::Write as _;

use serde::Serialize;

use crate::config::RunConfig;

/// Every knob that can move a verdict.
#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub rank_tol: f64,
    pub feature_tol: f64,
    pub const_tol: f64,
    pub killing_tol: f64,
    pub transport_tol: f64,
    pub ode_step: f64,
    pub fd_step: f64,
    pub probe_radius: f64,
    pub probe_count: usize,
    pub max_order: usize,
}

impl Tolerances {
    pub fn from_config(cfg: &RunConfig) -> Self {
        let n = &cfg.numerics;
        Tolerances {
            rank_tol: n.rank_tol,
            feature_tol: n.feature_tol,
            const_tol: n.const_tol,
            killing_tol: n.killing_tol,
            transport_tol: n.transport_tol,
            ode_step: n.ode_step,
            fd_step: n.fd_step,
            probe_radius: n.probe_radius,
            probe_count: n.probe_count(cfg.dim()),
            max_order: cfg.max_order,
        }
    }
}

pub fn tolerance_lines(t: &Tolerances) -> String {
    format!(
        "tolerances: rank_tol={:e} feature_tol={:e} const_tol={:e} killing_tol={:e} transport_tol={:e} ode_step={:e} fd_step={:e} probe_radius={} probe_count={} max_order={}\n",
        t.rank_tol, t.feature_tol, t.const_tol, t.killing_tol, t.transport_tol, t.ode_step, t.fd_step, t.probe_radius, t.probe_count, t.max_order
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    pub point: Vec<f64>,
    pub k: Vec<usize>,
    pub s0: usize,
    pub probe: String,
    pub generator_order: usize,
    /// Orthonormal basis of `Kill^{generator_order}`.
    pub generators: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub dimension: usize,
    pub max_order: usize,
    pub verdict: String,
    pub invariants_constant: bool,
    pub invariant_order: usize,
    pub max_invariant_deviation: f64,
    pub generators_full_rank: bool,
    pub tolerances: Tolerances,
    pub points: Vec<PointReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldReport {
    pub generator: Vec<f64>,
    pub csv: String,
    pub lattice_points: usize,
    pub checked_points: usize,
    pub max_residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KillingReport {
    pub point: Vec<f64>,
    pub lattice_spacing: f64,
    pub lattice_half_width: usize,
    pub tolerances: Tolerances,
    pub fields: Vec<FieldReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitReport {
    pub nodes: usize,
    pub singular_nodes: usize,
    pub strata: usize,
    pub orbits: usize,
    pub flagged_orbits: usize,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub status: Status,
    pub value: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRow {
    pub fn new(name: impl Into<String>, value: f64, tolerance: f64, passed: bool) -> Self {
        // `+ 0.0` folds a negative zero into zero for display.
        CheckRow {
            name: name.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            value: value + 0.0,
            tolerance,
            note: None,
        }
    }

    pub fn skipped(name: impl Into<String>, note: String) -> Self {
        CheckRow {
            name: name.into(),
            status: Status::Skip,
            value: f64::NAN,
            tolerance: f64::NAN,
            note: Some(note),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub base_point: Vec<f64>,
    pub samples: usize,
    pub passed: bool,
    pub tolerances: Tolerances,
    pub checks: Vec<CheckRow>,
}

pub fn check_table(rows: &[CheckRow]) -> String {
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in rows {
        let status = match r.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        write!(out, "{status}  {:<width$}  ", r.name).unwrap();
        if r.status == Status::Skip {
            write!(out, "{}", r.note.as_deref().unwrap_or("")).unwrap();
        } else {
            write!(out, "{:.3e} (tol {:e})", r.value, r.tolerance).unwrap();
            if let Some(note) = &r.note {
                write!(out, "  [{note}]").unwrap();
            }
        }
        out.push('\n');
    }
    out
}
