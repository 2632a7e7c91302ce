//! Subcommand pipelines. Each returns a text summary for the terminal and
//! writes its artifacts under the output directory.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use parsym_core::integrator::{
    killing_field, lattice_points, verify_curvature_ode, verify_killing,
    verify_transport_invariance, write_field_csv, DEFECT_RATIO_RANGE,
};
use parsym_core::invariants::point_suite;
use parsym_core::killing::{homogeneity_report, integrability_probe, killing_spaces};
use parsym_core::orbits::{orbit_atlas, Grid};
use parsym_core::{Error as CoreError, FrameSpec};
use serde::Serialize;
use thiserror::Error;

use crate::config::{OutputFormat, RunConfig};
use crate::report::{self, CheckRow, Status, Tolerances};

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Analyze,
    Killing {
        at: Option<Vec<f64>>,
        generator: Option<Vec<f64>>,
    },
    Orbits,
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Killing { .. } => "killing",
            Command::Orbits => "orbits",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{command}: {source}")]
    Core {
        command: &'static str,
        source: CoreError,
    },
    #[error("{command}: {message}")]
    Usage {
        command: &'static str,
        message: String,
    },
    #[error("{command}: cannot write {path}: {message}")]
    Io {
        command: &'static str,
        path: String,
        message: String,
    },
}

impl RunError {
    fn core(command: &'static str) -> impl Fn(CoreError) -> RunError {
        move |source| RunError::Core { command, source }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// Everything checked passed.
    pub success: bool,
    pub summary: String,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.success {
            0
        } else {
            1
        }
    }
}

struct Sink<'a> {
    command: &'static str,
    dir: &'a Path,
    files: Vec<PathBuf>,
}

impl Sink<'_> {
    fn path(&mut self, name: &str) -> PathBuf {
        let p = self.dir.join(name);
        self.files.push(p.clone());
        p
    }

    fn text(&mut self, name: &str, contents: &str) -> Result<(), RunError> {
        let p = self.path(name);
        fs::write(&p, contents).map_err(|e| RunError::Io {
            command: self.command,
            path: p.display().to_string(),
            message: e.to_string(),
        })
    }

    fn toml<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), RunError> {
        let body = toml::to_string(value).map_err(|e| RunError::Io {
            command: self.command,
            path: name.into(),
            message: e.to_string(),
        })?;
        self.text(name, &body)
    }

    fn core(&self, e: CoreError) -> RunError {
        match e {
            CoreError::Io { path, message } => RunError::Io {
                command: self.command,
                path,
                message,
            },
            source => RunError::Core {
                command: self.command,
                source,
            },
        }
    }
}

pub fn run(command: &Command, cfg: &RunConfig, out_dir: &Path) -> Result<Outcome, RunError> {
    let name = command.name();
    let spec = cfg.frame_spec().map_err(RunError::core(name))?;
    fs::create_dir_all(out_dir).map_err(|e| RunError::Io {
        command: name,
        path: out_dir.display().to_string(),
        message: e.to_string(),
    })?;
    let mut sink = Sink {
        command: name,
        dir: out_dir,
        files: Vec::new(),
    };
    let (success, summary) = match command {
        Command::Analyze => analyze(&spec, cfg, &mut sink)?,
        Command::Killing { at, generator } => {
            killing(&spec, cfg, at.as_deref(), generator.as_deref(), &mut sink)?
        }
        Command::Orbits => orbits(&spec, cfg, &mut sink)?,
        Command::Verify => verify(&spec, cfg, &mut sink)?,
    };
    Ok(Outcome {
        success,
        summary,
        files: sink.files,
    })
}

fn analyze(spec: &FrameSpec, cfg: &RunConfig, sink: &mut Sink) -> Result<(bool, String), RunError> {
    let n = spec.dim();
    let nm = &cfg.numerics;
    let samples = cfg.sample_points();
    let mut points = Vec::new();
    for x in &samples {
        let f = killing_spaces(spec, x, cfg.max_order, nm).map_err(|e| sink.core(e))?;
        let probe = match integrability_probe(spec, x, nm.probe_radius, nm.probe_count(n), nm) {
            Ok(p) if p.in_domain => "regular".to_string(),
            Ok(_) => "singular".to_string(),
            Err(CoreError::OutsideDomain { .. }) => {
                "skipped (probe ball leaves the box)".to_string()
            }
            Err(e) => return Err(sink.core(e)),
        };
        let top = cfg.max_order.min(n + 1);
        points.push(report::PointReport {
            point: x.clone(),
            k: f.dims().to_vec(),
            s0: f.stabilization_order(),
            probe,
            generator_order: top,
            generators: f.basis_vectors(top),
        });
    }
    let h = homogeneity_report(spec, &samples, nm).map_err(|e| sink.core(e))?;
    let rep = report::AnalyzeReport {
        dimension: n,
        max_order: cfg.max_order,
        verdict: h.verdict.describe().to_string(),
        invariants_constant: h.invariants_constant,
        invariant_order: h.order,
        max_invariant_deviation: h.max_deviation,
        generators_full_rank: h.generators_full_rank,
        tolerances: Tolerances::from_config(cfg),
        points,
    };
    if cfg.wants(OutputFormat::Toml) {
        sink.toml("analyze.toml", &rep)?;
    }
    let mut out = String::new();
    writeln!(out, "samples: {}", rep.points.len()).unwrap();
    for p in &rep.points {
        writeln!(
            out,
            "  x = {:?}  k = {:?}  s0 = {}  probe: {}",
            p.point, p.k, p.s0, p.probe
        )
        .unwrap();
    }
    writeln!(
        out,
        "invariants constant up to order {}: {} (max deviation {:.3e}, const_tol {:e})",
        h.order, h.invariants_constant, h.max_deviation, h.const_tol
    )
    .unwrap();
    writeln!(
        out,
        "k_{} = n at every sample: {}",
        h.order, h.generators_full_rank
    )
    .unwrap();
    writeln!(out, "verdict: {}", rep.verdict).unwrap();
    out.push_str(&report::tolerance_lines(&rep.tolerances));
    Ok((true, out))
}

fn parse_dim(name: &str, v: &[f64], n: usize) -> Result<(), RunError> {
    if v.len() != n {
        return Err(RunError::Usage {
            command: "killing",
            message: format!("--{name} needs {n} comma-separated values, got {}", v.len()),
        });
    }
    Ok(())
}

fn killing(
    spec: &FrameSpec,
    cfg: &RunConfig,
    at: Option<&[f64]>,
    generator: Option<&[f64]>,
    sink: &mut Sink,
) -> Result<(bool, String), RunError> {
    let n = spec.dim();
    let nm = &cfg.numerics;
    let at = at.ok_or_else(|| RunError::Usage {
        command: "killing",
        message: "--at is required".into(),
    })?;
    parse_dim("at", at, n)?;
    let generators = match generator {
        Some(a) => {
            parse_dim("gen", a, n)?;
            vec![a.to_vec()]
        }
        None => killing_spaces(spec, at, n + 2, nm)
            .map_err(|e| sink.core(e))?
            .basis_vectors(n + 1),
    };
    let mut fields = Vec::new();
    let mut out = String::new();
    for (idx, a) in generators.iter().enumerate() {
        let field = match killing_field(spec, at, a, nm) {
            Ok(f) => f,
            Err(CoreError::PreconditionViolated(message)) => {
                writeln!(out, "{message}").unwrap();
                return Ok((false, out));
            }
            Err(e) => return Err(sink.core(e)),
        };
        let samples = field
            .lattice(spec, cfg.lattice_spacing, cfg.lattice_half_width)
            .map_err(|e| sink.core(e))?;
        let checked = lattice_points(n, cfg.lattice_spacing, cfg.lattice_half_width.min(1));
        let check = verify_killing(spec, &field, &checked, nm).map_err(|e| sink.core(e))?;
        let csv = if generators.len() == 1 {
            "killing_field.csv".to_string()
        } else {
            format!("killing_field_{}.csv", idx + 1)
        };
        if cfg.wants(OutputFormat::Csv) {
            let path = sink.path(&csv);
            write_field_csv(&path, &samples).map_err(|e| sink.core(e))?;
        }
        writeln!(
            out,
            "generator {:?}: {} lattice points, max bracket residual {:.3e} (killing_tol {:e}) {}",
            a,
            samples.len(),
            check.max_residual,
            check.tolerance,
            if check.passed { "PASS" } else { "FAIL" }
        )
        .unwrap();
        fields.push(report::FieldReport {
            generator: a.clone(),
            csv,
            lattice_points: samples.len(),
            checked_points: check.samples.len(),
            max_residual: check.max_residual,
            passed: check.passed,
        });
    }
    let success = fields.iter().all(|f| f.passed);
    let rep = report::KillingReport {
        point: at.to_vec(),
        lattice_spacing: cfg.lattice_spacing,
        lattice_half_width: cfg.lattice_half_width,
        tolerances: Tolerances::from_config(cfg),
        fields,
    };
    if cfg.wants(OutputFormat::Toml) {
        sink.toml("killing.toml", &rep)?;
    }
    out.push_str(&report::tolerance_lines(&rep.tolerances));
    Ok((success, out))
}

fn orbits(spec: &FrameSpec, cfg: &RunConfig, sink: &mut Sink) -> Result<(bool, String), RunError> {
    let grid = Grid::new(cfg.bounds.clone(), cfg.resolution.clone()).map_err(|e| sink.core(e))?;
    let atlas = orbit_atlas(spec, grid, &cfg.numerics).map_err(|e| sink.core(e))?;
    if cfg.wants(OutputFormat::Csv) {
        let path = sink.path("orbits.csv");
        atlas.write_csv(&path).map_err(|e| sink.core(e))?;
    }
    let mut summary = Vec::new();
    atlas
        .write_summary(&mut summary)
        .expect("writing to memory");
    let mut out = String::from_utf8(summary).expect("summary is UTF-8");
    let tolerances = Tolerances::from_config(cfg);
    out.push_str(&report::tolerance_lines(&tolerances));
    sink.text("orbits_summary.txt", &out)?;
    if cfg.wants(OutputFormat::Toml) {
        let rep = report::OrbitReport {
            nodes: atlas.nodes.len(),
            singular_nodes: atlas.node_stratum.iter().filter(|s| s.is_none()).count(),
            strata: atlas.strata.len(),
            orbits: atlas.orbits.len(),
            flagged_orbits: atlas
                .orbits
                .iter()
                .filter(|o| !o.possibly_same.is_empty())
                .count(),
            tolerances,
        };
        sink.toml("orbits.toml", &rep)?;
    }
    Ok((true, out))
}

fn verify(spec: &FrameSpec, cfg: &RunConfig, sink: &mut Sink) -> Result<(bool, String), RunError> {
    let n = spec.dim();
    let nm = &cfg.numerics;
    let mut rows: Vec<CheckRow> = Vec::new();
    let x0 = cfg.centre();
    let samples = cfg.sample_points();

    // Transport of each stable generator along every frame direction.
    let f0 = killing_spaces(spec, &x0, n + 2, nm).map_err(|e| sink.core(e))?;
    let s = f0.stabilization_order();
    for (gi, a) in f0.basis_vectors(s + 1).iter().enumerate() {
        for i in 0..n {
            let mut xi = vec![0.0; n];
            xi[i] = 1.0;
            let name = format!(
                "transport invariance, generator {} along X{}",
                gi + 1,
                i + 1
            );
            rows.push(
                match verify_transport_invariance(spec, &x0, &xi, a, cfg.verify_duration, s, nm) {
                    Ok(c) => {
                        let mut row = CheckRow::new(name, c.max_residual, c.tolerance, c.passed);
                        row.note = Some(format!(
                            "k_s = k_(s+1) checked only at the {} path samples",
                            c.times.len()
                        ));
                        row
                    }
                    Err(
                        e @ (CoreError::PreconditionViolated(_) | CoreError::DomainExit { .. }),
                    ) => CheckRow::skipped(name, e.to_string()),
                    Err(e) => return Err(sink.core(e)),
                },
            );
        }
    }

    // Differentiated invariants along each frame direction.
    let orders: Vec<usize> = (1..=2)
        .filter(|&r| r < spec.max_curvature_order())
        .collect();
    let ones = vec![1.0; n];
    for i in 0..n {
        let mut xi = vec![0.0; n];
        xi[i] = 1.0;
        let name = format!("ODE identity defect ratio along X{}", i + 1);
        rows.push(
            match verify_curvature_ode(
                spec,
                &x0,
                &xi,
                &ones,
                &orders,
                cfg.verify_duration,
                10,
                nm.ode_step,
            ) {
                Ok(c) => {
                    let worst = c
                        .samples
                        .iter()
                        .filter_map(|s| s.ratio)
                        .map(|r| (r - 4.0).abs())
                        .fold(0.0, f64::max);
                    let half_width = 0.5 * (DEFECT_RATIO_RANGE.1 - DEFECT_RATIO_RANGE.0);
                    let mut row = CheckRow::new(name, worst, half_width, c.passed);
                    row.note = Some("value = max |ratio - 4|".into());
                    row
                }
                Err(e @ CoreError::DomainExit { .. }) => CheckRow::skipped(name, e.to_string()),
                Err(e) => return Err(sink.core(e)),
            },
        );
    }

    // Per-point suites, worst value per suite.
    let mut suites: Vec<CheckRow> = Vec::new();
    for x in &samples {
        for c in point_suite(spec, x, nm).map_err(|e| sink.core(e))? {
            match suites.iter_mut().find(|r| r.name == c.name) {
                Some(r) => {
                    r.value = r.value.max(c.value);
                    if !c.passed {
                        r.status = Status::Fail;
                    }
                }
                None => suites.push(CheckRow::new(c.name, c.value, c.tolerance, c.passed)),
            }
        }
    }
    rows.extend(suites);

    let success = rows.iter().all(|r| r.status != Status::Fail);
    let rep = report::VerifyReport {
        base_point: x0,
        samples: samples.len(),
        passed: success,
        tolerances: Tolerances::from_config(cfg),
        checks: rows,
    };
    if cfg.wants(OutputFormat::Toml) {
        sink.toml("verify.toml", &rep)?;
    }
    let mut out = report::check_table(&rep.checks);
    out.push_str(&report::tolerance_lines(&rep.tolerances));
    writeln!(out, "overall: {}", if success { "PASS" } else { "FAIL" }).unwrap();
    Ok((success, out))
}
