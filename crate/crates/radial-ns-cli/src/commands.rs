//! Subcommand bodies. Each returns the process exit status.

use crate::config::{ConfigError, RunConfig};
use crate::output::{preflight, write_json, write_manifest, write_paths, write_trajectory, write_weak_rows};
use radial_ns::data::prepare;
use radial_ns::family::{run_family, FamilyConfig, FamilyError, FamilyReport};
use radial_ns::monitors::{all_passed, measured_c0, run_suite, MonitorRecord};
use radial_ns::solver::{run, Mode, SolverConfig, SolverError, Trajectory};
use radial_ns::weak::{check_trajectory, observed_order, worst_by_equation, Equation, ResidualRow};
use serde::Serialize;
use serde_json::json;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Config = 2,
    Aborted = 3,
    MonitorFailed = 4,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("invalid data: {0}")]
    Data(String),
    #[error("output directory: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit(&self) -> Exit {
        Exit::Config
    }
}

#[derive(Serialize)]
struct StepSummary {
    steps: usize,
    rejections: u32,
    worst_step_entropy_excess: f64,
    entropy_warnings: u32,
}

fn step_summary(traj: &Trajectory) -> StepSummary {
    StepSummary {
        steps: traj.steps.dt.len(),
        rejections: traj.steps.rejections,
        worst_step_entropy_excess: traj.steps.worst_step_entropy_excess,
        entropy_warnings: traj.steps.entropy_warnings,
    }
}

/// One `(a, k)` pipeline with full outputs in `out`.
pub fn cmd_run(cfg: &RunConfig, out: &Path) -> Result<Exit, CliError> {
    preflight(out)?;
    let params = cfg.params();
    let base = cfg.load_data(cfg.run.k).map_err(CliError::Data)?;
    let data = prepare(&base, cfg.run.a, cfg.run.k, cfg.run.cells).map_err(|e| CliError::Data(e.to_string()))?;
    let c0 = measured_c0(&data, &params);
    let (traj, error, exit) = match run(&data, &params, &cfg.solver()) {
        Ok(t) => (t, None, Exit::Ok),
        Err(SolverError::RunAborted { partial, reason, t }) => {
            (*partial, Some(format!("run aborted at t={t}: {reason}")), Exit::Aborted)
        }
        Err(e @ SolverError::EntropyViolation { .. }) => {
            let msg = e.to_string();
            let SolverError::EntropyViolation { partial, .. } = e else { unreachable!() };
            (*partial, Some(msg), Exit::MonitorFailed)
        }
        Err(e) => return Err(CliError::Data(e.to_string())),
    };
    let records: Vec<MonitorRecord> = run_suite(&traj, c0, &cfg.suite());
    let passed = all_passed(&records);
    let mut files = write_trajectory(out, &traj, cfg.run.profile_points)?;
    write_json(
        &out.join("monitors.json"),
        &json!({
            "c0": c0,
            "passed": passed,
            "error": error,
            "steps": step_summary(&traj),
            "records": records,
            "samples": traj.samples,
        }),
    )?;
    files.push("monitors.json".into());
    write_manifest(out, "run", cfg, &files)?;
    if let Some(e) = &error {
        eprintln!("{e}");
    }
    Ok(match exit {
        Exit::Ok if !passed && cfg.mode == Mode::Strict => Exit::MonitorFailed,
        other => other,
    })
}

fn label(a: f64, k: f64) -> String {
    format!("a={a}_k={k}")
}

fn family_config(cfg: &RunConfig, workers: usize) -> FamilyConfig {
    let s = cfg.solver();
    FamilyConfig {
        cells: s.cells,
        t_end: s.t_end,
        cfl: s.cfl,
        dt_min: s.dt_min,
        mode: s.mode,
        samples: cfg.run.samples,
        workers,
        suite: cfg.suite(),
        holder_eps: cfg.family.holder_eps.clone(),
        holder_points: cfg.family.holder_points,
        ..Default::default()
    }
}

fn emit_family(out: &Path, cfg: &RunConfig, rep: &FamilyReport, error: Option<&str>) -> Result<bool, CliError> {
    let mut files = Vec::new();
    for run in &rep.runs {
        let name = label(run.a, run.k);
        let dir = out.join(&name);
        std::fs::create_dir_all(&dir)?;
        write_json(&dir.join("monitors.json"), run)?;
        files.push(format!("{name}/monitors.json"));
        if let Some(p) = rep.paths.iter().find(|p| p.a == run.a && p.k == run.k) {
            write_paths(&dir.join("paths.csv"), std::slice::from_ref(p))?;
            files.push(format!("{name}/paths.csv"));
        }
    }
    let interface_ok = rep.interface.iter().all(|i| i.bounded_by_c0 && i.lower_bound_ok);
    let passed = rep.complete && interface_ok && rep.runs.iter().all(|r| r.passed);
    write_json(&out.join("family.json"), &json!({ "passed": passed, "error": error, "report": rep }))?;
    write_paths(&out.join("paths.csv"), &rep.paths)?;
    files.push("family.json".into());
    files.push("paths.csv".into());
    write_manifest(out, "family", cfg, &files)?;
    Ok(passed)
}

/// The `(a, k)` family from `[family]`.
pub fn cmd_family(cfg: &RunConfig, out: &Path, workers: usize) -> Result<Exit, CliError> {
    preflight(out)?;
    let params = cfg.params();
    let k_max = cfg.family.k.iter().cloned().fold(1.0, f64::max);
    let base = cfg.load_data(k_max).map_err(CliError::Data)?;
    let fcfg = family_config(cfg, workers);
    match run_family(&cfg.family.a, &cfg.family.k, &base, &params, &fcfg) {
        Ok(rep) => {
            let passed = emit_family(out, cfg, &rep, None)?;
            Ok(if !passed && cfg.mode == Mode::Strict { Exit::MonitorFailed } else { Exit::Ok })
        }
        Err(FamilyError::RunAborted { a, k, reason, partial }) => {
            let msg = format!("run (a={a}, k={k}) aborted: {reason}");
            emit_family(out, cfg, &partial, Some(&msg))?;
            eprintln!("{msg}");
            Ok(Exit::Aborted)
        }
        Err(e) => Err(CliError::Data(e.to_string())),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WeakSummary {
    pub cells: Vec<usize>,
    /// Largest normalised residual per equation at each `N`.
    pub worst: Vec<(String, Vec<f64>)>,
    /// Observed order between the coarsest and finest `N`.
    pub order: Vec<(String, f64)>,
    pub passed: bool,
}

pub fn weak_summary(cells: &[usize], rows: &[ResidualRow]) -> WeakSummary {
    let per_n: Vec<Vec<(Equation, f64)>> = cells
        .iter()
        .map(|&n| worst_by_equation(&rows.iter().filter(|r| r.n == n).cloned().collect::<Vec<_>>()))
        .collect();
    let refinement = *cells.last().unwrap() as f64 / cells[0] as f64;
    let mut worst = Vec::new();
    let mut order = Vec::new();
    for (i, eq) in Equation::ALL.iter().enumerate() {
        let series: Vec<f64> = per_n.iter().map(|v| v[i].1).collect();
        order.push((eq.name().to_string(), observed_order(series[0], *series.last().unwrap(), refinement)));
        worst.push((eq.name().to_string(), series));
    }
    let passed = order.iter().all(|(_, p)| *p >= 1.0);
    WeakSummary { cells: cells.to_vec(), worst, order, passed }
}

/// Weak-form residuals of one trajectory stored at every step.
pub fn weak_rows(cfg: &RunConfig, cells: usize) -> Result<Vec<ResidualRow>, CliError> {
    let params = cfg.params();
    let base = cfg.load_data(cfg.run.k).map_err(CliError::Data)?;
    let data = prepare(&base, cfg.run.a, cfg.run.k, cells).map_err(|e| CliError::Data(e.to_string()))?;
    let scfg = SolverConfig { cells, output_times: Vec::new(), record_every_step: true, ..cfg.solver() };
    let traj = run(&data, &params, &scfg).map_err(|e| CliError::Data(e.to_string()))?;
    check_trajectory(&traj, cfg.weak.points_per_cell * cells + 1).map_err(|e| CliError::Data(e.to_string()))
}

/// Residual table over `[weak] cells` and the observed orders.
pub fn cmd_check_weakform(cfg: &RunConfig, out: &Path) -> Result<Exit, CliError> {
    preflight(out)?;
    let mut rows = Vec::new();
    for &n in &cfg.weak.cells {
        rows.extend(weak_rows(cfg, n)?);
    }
    write_weak_rows(&out.join("weakform.csv"), &rows)?;
    let summary = weak_summary(&cfg.weak.cells, &rows);
    write_json(&out.join("weakform.json"), &summary)?;
    write_manifest(out, "check-weakform", cfg, &["weakform.csv".into(), "weakform.json".into()])?;
    Ok(if !summary.passed && cfg.mode == Mode::Strict { Exit::MonitorFailed } else { Exit::Ok })
}
