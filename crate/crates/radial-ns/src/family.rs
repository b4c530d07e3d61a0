//! The double-indexed `(a, k)` family: one pipeline per pair, particle
//! paths on a shared probe lattice, Cauchy-style distances, the vacuum
//! interface estimate and weighted Hölder moduli.

use crate::bridge::{cutoff_extend, pullback, RadialProfile};
use crate::data::{prepare, DataError, RadialData};
use crate::interp::linear;
use crate::monitors::{all_passed, measured_c0, path_lower, path_upper, run_suite, sigma, MonitorRecord, SuiteOptions};
use crate::par;
use crate::params::FluidParams;
use crate::solver::{run, uniform_times, LagrangianState, Mode, SolverConfig, SolverError, Trajectory};
use serde::Serialize;
use thiserror::Error;

/// Hölder moduli below this are treated as identically zero.
pub const FLAT_MODULUS: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("particle path of run (a={a}, k={k}) is not increasing in x at t={t}")]
    NonMonotone { a: f64, k: f64, t: f64 },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("run (a={a}, k={k}) aborted: {reason}")]
    RunAborted { a: f64, k: f64, reason: String, partial: Box<FamilyReport> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyConfig {
    pub cells: usize,
    pub t_end: f64,
    pub cfl: f64,
    pub dt_min: f64,
    pub mode: Mode,
    /// Number of uniform time samples, including `0` and `t_end`.
    pub samples: usize,
    /// Geometric probe levels `2^{-levels..0} k_min`.
    pub probe_levels: u32,
    pub workers: usize,
    pub suite: SuiteOptions,
    pub holder_eps: Vec<f64>,
    pub holder_points: usize,
}

impl Default for FamilyConfig {
    fn default() -> Self {
        FamilyConfig {
            cells: 1024,
            t_end: 0.5,
            cfl: 0.4,
            dt_min: 1e-10,
            mode: Mode::Strict,
            samples: 16,
            probe_levels: 6,
            workers: 0,
            suite: SuiteOptions::default(),
            holder_eps: vec![0.5],
            holder_points: 1025,
        }
    }
}

impl FamilyConfig {
    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            cells: self.cells,
            t_end: self.t_end,
            cfl: self.cfl,
            dt_min: self.dt_min,
            output_times: uniform_times(self.t_end, self.samples),
            mode: self.mode,
            record_every_step: false,
            max_newton: 25,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeLattice {
    pub x: Vec<f64>,
    pub t: Vec<f64>,
}

pub fn probe_lattice(k_min: f64, levels: u32, t_end: f64, samples: usize) -> ProbeLattice {
    let x = (0..=levels).rev().map(|p| k_min * 0.5f64.powi(p as i32)).collect();
    ProbeLattice { x, t: uniform_times(t_end, samples) }
}

/// Particle paths `r(x_i, t_j)` of one run; `r[j][i]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathFamily {
    pub a: f64,
    pub k: f64,
    pub x: Vec<f64>,
    pub t: Vec<f64>,
    pub r: Vec<Vec<f64>>,
}

/// `r(x)` on one state; `r^n` is linear in `x` across each cell.
pub fn path_at(state: &LagrangianState, x: f64) -> f64 {
    let nf = state.n as f64;
    let rn: Vec<f64> = state.r.iter().map(|r| r.powf(nf)).collect();
    linear(&state.x, &rn, x).max(0.0).powf(1.0 / nf)
}

pub fn path_family(traj: &Trajectory, lattice: &ProbeLattice) -> Result<PathFamily, FamilyError> {
    let first = traj.states.first().ok_or_else(|| FamilyError::InsufficientData("empty trajectory".into()))?;
    let (a, k) = (first.a, first.k);
    if lattice.x.last().is_some_and(|&x| x > k * (1.0 + 1e-14)) {
        return Err(FamilyError::Config(format!("probe x exceeds the total mass {k}")));
    }
    let mut r = Vec::with_capacity(lattice.t.len());
    for &t in &lattice.t {
        let s = traj
            .states
            .iter()
            .find(|s| (s.t - t).abs() <= 1e-12 * t.max(1.0))
            .ok_or_else(|| FamilyError::InsufficientData(format!("no stored state at t={t}")))?;
        let row: Vec<f64> = lattice.x.iter().map(|&x| path_at(s, x)).collect();
        if row.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(FamilyError::NonMonotone { a, k, t });
        }
        r.push(row);
    }
    Ok(PathFamily { a, k, x: lattice.x.clone(), t: lattice.t.clone(), r })
}

pub fn sup_distance(p: &PathFamily, q: &PathFamily) -> f64 {
    p.r.iter().flatten().zip(q.r.iter().flatten()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Slack of the path bounds at every lattice point, worst value.
pub fn path_bound_margin(p: &PathFamily, c0: f64, n: u32) -> f64 {
    let nf = n as f64;
    let mut worst = f64::INFINITY;
    for row in &p.r {
        for (&x, &r) in p.x.iter().zip(row) {
            let rn = r.powf(nf);
            let lo = path_lower(p.a, n, x, c0);
            let hi = path_upper(n, x, c0);
            worst = worst.min((rn - lo) / lo.max(1.0)).min((hi - rn) / hi);
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub a: f64,
    pub k: f64,
    pub c0: f64,
    pub complete: bool,
    pub passed: bool,
    pub steps: usize,
    pub path_bound_margin: Option<f64>,
    /// `min 1/v` over cells below the smallest probe, per sample time.
    pub inner_density: Vec<f64>,
    pub error: Option<String>,
    pub monitors: Vec<MonitorRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuccessiveK {
    pub a: f64,
    pub k: Vec<f64>,
    /// `d(k_i, k_{i+1})`
    pub distances: Vec<f64>,
    pub strictly_decreasing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterfaceEstimate {
    pub k: f64,
    pub a: Vec<f64>,
    pub t: Vec<f64>,
    /// `underline_r(t)` per value of `a`, in the order of `a`.
    pub curves: Vec<Vec<f64>>,
    pub a_min: f64,
    pub c0: f64,
    pub bounded_by_c0: bool,
    /// `underline_r(t)^n >= a_min^n` at every sample.
    pub lower_bound_ok: bool,
    /// `underline_r` at the first positive sample time decreases with `a`.
    pub small_t_decrease: bool,
    /// Per `a`, the smallest density next to the inner boundary over all
    /// samples; a proxy for density degenerating inside a vacuum ball.
    pub inner_density_min: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolderRow {
    pub eps: f64,
    pub separations_r: Vec<f64>,
    pub modulus_r: Vec<f64>,
    pub alpha_r: Option<f64>,
    pub separations_t: Vec<f64>,
    pub modulus_t: Vec<f64>,
    pub alpha_t: Option<f64>,
}

impl HolderRow {
    pub fn flat_r(&self) -> bool {
        self.alpha_r.is_none()
    }
    pub fn flat_t(&self) -> bool {
        self.alpha_t.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    pub complete: bool,
    pub lattice: ProbeLattice,
    pub runs: Vec<RunSummary>,
    /// `(a, k)` of each row of `distance`.
    pub labels: Vec<(f64, f64)>,
    pub distance: Vec<Vec<f64>>,
    pub successive_k: Vec<SuccessiveK>,
    pub interface: Vec<InterfaceEstimate>,
    /// Per completed run, in the order of `labels`.
    pub holder: Vec<Vec<HolderRow>>,
    #[serde(skip)]
    pub paths: Vec<PathFamily>,
}

fn sorted_nonempty(xs: &[f64], what: &str) -> Result<(), FamilyError> {
    if xs.is_empty() {
        return Err(FamilyError::Config(format!("{what} list is empty")));
    }
    if xs.windows(2).any(|w| !(w[0] < w[1])) || xs.iter().any(|x| !x.is_finite()) {
        return Err(FamilyError::Config(format!("{what} list must be strictly increasing")));
    }
    Ok(())
}

struct Outcome {
    summary: RunSummary,
    path: Option<PathFamily>,
    holder: Vec<HolderRow>,
    failure: Option<String>,
}

fn one_run(
    a: f64,
    k: f64,
    base: &RadialData,
    params: &FluidParams,
    cfg: &FamilyConfig,
    lattice: &ProbeLattice,
) -> Result<Outcome, FamilyError> {
    let data = prepare(base, a, k, cfg.cells)?;
    let c0 = measured_c0(&data, params);
    let mut summary = RunSummary {
        a,
        k,
        c0,
        complete: false,
        passed: false,
        steps: 0,
        path_bound_margin: None,
        inner_density: Vec::new(),
        error: None,
        monitors: Vec::new(),
    };
    let traj = match run(&data, params, &cfg.solver()) {
        Ok(t) => t,
        Err(e) => {
            let reason = e.to_string();
            if let SolverError::RunAborted { partial, .. } | SolverError::EntropyViolation { partial, .. } = e {
                summary.steps = partial.steps.dt.len();
            }
            summary.error = Some(reason.clone());
            return Ok(Outcome { summary, path: None, holder: Vec::new(), failure: Some(reason) });
        }
    };
    let path = path_family(&traj, lattice)?;
    summary.steps = traj.steps.dt.len();
    summary.path_bound_margin = Some(path_bound_margin(&path, c0, params.n));
    summary.inner_density = traj.states.iter().map(|s| inner_density(s, lattice.x[0])).collect();
    summary.monitors = run_suite(&traj, c0, &cfg.suite);
    summary.passed = all_passed(&summary.monitors);
    summary.complete = true;
    let holder = match holder_moduli(&traj.states, &cfg.holder_eps, cfg.holder_points) {
        Ok(rows) => rows,
        Err(FamilyError::InsufficientData(_)) => Vec::new(),
        Err(e) => return Err(e),
    };
    Ok(Outcome { summary, path: Some(path), holder, failure: None })
}

/// `min 1/v` over cells whose centre lies below mass `x_max`.
pub fn inner_density(state: &LagrangianState, x_max: f64) -> f64 {
    let xc = state.x_cells();
    let mut rho = 1.0 / state.v[0];
    for (x, v) in xc.iter().zip(&state.v) {
        if *x > x_max {
            break;
        }
        rho = rho.min(1.0 / v);
    }
    rho
}

/// One full pipeline per `(a, k)`, runs spread over `cfg.workers` threads.
pub fn run_family(
    a_list: &[f64],
    k_list: &[f64],
    base: &RadialData,
    params: &FluidParams,
    cfg: &FamilyConfig,
) -> Result<FamilyReport, FamilyError> {
    sorted_nonempty(a_list, "a")?;
    sorted_nonempty(k_list, "k")?;
    if let Err(errs) = params.validate() {
        return Err(FamilyError::Config(errs.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; ")));
    }
    if cfg.samples < 3 {
        return Err(FamilyError::Config("need at least 3 time samples".into()));
    }
    let lattice = probe_lattice(k_list[0], cfg.probe_levels, cfg.t_end, cfg.samples);
    let pairs: Vec<(f64, f64)> = a_list.iter().flat_map(|&a| k_list.iter().map(move |&k| (a, k))).collect();
    let outcomes =
        par::with_workers(cfg.workers, || par::map(&pairs, |&(a, k)| one_run(a, k, base, params, cfg, &lattice)));
    let mut outs = Vec::with_capacity(outcomes.len());
    for o in outcomes {
        outs.push(o?);
    }
    let failure = outs.iter().find_map(|o| o.failure.clone().map(|f| (o.summary.a, o.summary.k, f)));
    let report = assemble(lattice, outs, params.n)?;
    match failure {
        Some((a, k, reason)) => Err(FamilyError::RunAborted { a, k, reason, partial: Box::new(report) }),
        None => Ok(report),
    }
}

fn assemble(lattice: ProbeLattice, outs: Vec<Outcome>, n: u32) -> Result<FamilyReport, FamilyError> {
    let complete = outs.iter().all(|o| o.failure.is_none());
    let mut runs = Vec::new();
    let mut paths = Vec::new();
    let mut holder = Vec::new();
    let mut c0s = Vec::new();
    for o in outs {
        if let Some(p) = o.path {
            c0s.push(o.summary.c0);
            paths.push(p);
            holder.push(o.holder);
        }
        runs.push(o.summary);
    }
    let labels: Vec<(f64, f64)> = paths.iter().map(|p| (p.a, p.k)).collect();
    let distance = distance_matrix(&paths);

    let mut successive_k = Vec::new();
    let mut a_values: Vec<f64> = labels.iter().map(|l| l.0).collect();
    a_values.dedup();
    for &a in &a_values {
        let idx: Vec<usize> = (0..paths.len()).filter(|&i| labels[i].0 == a).collect();
        if idx.len() < 2 {
            continue;
        }
        let distances: Vec<f64> = idx.windows(2).map(|w| distance[w[0]][w[1]]).collect();
        successive_k.push(SuccessiveK {
            a,
            k: idx.iter().map(|&i| labels[i].1).collect(),
            strictly_decreasing: distances.windows(2).all(|w| w[1] < w[0]),
            distances,
        });
    }

    let mut k_values: Vec<f64> = labels.iter().map(|l| l.1).collect();
    k_values.sort_by(f64::total_cmp);
    k_values.dedup();
    let mut interface = Vec::new();
    for &k in &k_values {
        let idx: Vec<usize> = (0..paths.len()).filter(|&i| labels[i].1 == k).collect();
        if idx.len() < 2 {
            continue;
        }
        // decreasing a
        let fams: Vec<&PathFamily> = idx.iter().rev().map(|&i| &paths[i]).collect();
        let c0 = c0s[*idx.first().unwrap()];
        let mut est = estimate_vacuum_interface(&fams, c0, n)?;
        est.inner_density_min = idx
            .iter()
            .rev()
            .map(|&i| {
                let (a, k) = labels[i];
                runs.iter()
                    .find(|r| r.a == a && r.k == k)
                    .map_or(f64::NAN, |r| r.inner_density.iter().cloned().fold(f64::INFINITY, f64::min))
            })
            .collect();
        interface.push(est);
    }
    Ok(FamilyReport { complete, lattice, runs, labels, distance, successive_k, interface, holder, paths })
}

/// Symmetric matrix of sup distances over the shared lattice.
pub fn distance_matrix(paths: &[PathFamily]) -> Vec<Vec<f64>> {
    let n = paths.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = sup_distance(&paths[i], &paths[j]);
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    d
}

/// `lim_{x->0} r(x, t)` by linear extrapolation of `r^n` over the two
/// smallest probes, clipped to `[0, r(x_0)^n]`.
pub fn interface_curve(p: &PathFamily, n: u32) -> Vec<f64> {
    let nf = n as f64;
    let (x0, x1) = (p.x[0], p.x[1]);
    p.r.iter()
        .map(|row| {
            let (y0, y1) = (row[0].powf(nf), row[1].powf(nf));
            let lim = y0 - (y1 - y0) * x0 / (x1 - x0);
            lim.clamp(0.0, y0).powf(1.0 / nf)
        })
        .collect()
}

/// `families` share `k` and are ordered by decreasing `a`; `c0` is the
/// measured constant of the smallest `a`.
pub fn estimate_vacuum_interface(families: &[&PathFamily], c0: f64, n: u32) -> Result<InterfaceEstimate, FamilyError> {
    if families.len() < 2 {
        return Err(FamilyError::InsufficientData("need at least two values of a".into()));
    }
    if families.windows(2).any(|w| !(w[1].a < w[0].a)) {
        return Err(FamilyError::Config("values of a must be strictly decreasing".into()));
    }
    let k = families[0].k;
    if families.iter().any(|f| f.k != k || f.x != families[0].x || f.t != families[0].t) {
        return Err(FamilyError::Config("families must share k and the probe lattice".into()));
    }
    for f in families {
        for (row, &t) in f.r.iter().zip(&f.t) {
            if row.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(FamilyError::NonMonotone { a: f.a, k: f.k, t });
            }
        }
    }
    let curves: Vec<Vec<f64>> = families.iter().map(|f| interface_curve(f, n)).collect();
    let last = families.last().unwrap();
    let lowest = curves.last().unwrap();
    let nf = n as f64;
    let an = last.a.powf(nf);
    let j1 = if last.t.len() > 1 { 1 } else { 0 };
    Ok(InterfaceEstimate {
        k,
        a: families.iter().map(|f| f.a).collect(),
        t: last.t.clone(),
        a_min: last.a,
        c0,
        bounded_by_c0: lowest.iter().all(|&r| r <= c0),
        lower_bound_ok: lowest.iter().all(|&r| r.powf(nf) >= an * (1.0 - 1e-12)),
        small_t_decrease: curves.windows(2).all(|w| w[1][j1] < w[0][j1]),
        curves,
        inner_density_min: Vec::new(),
    })
}

/// Least-squares slope of `ln m` against `ln s` over positive moduli.
fn fit_exponent(s: &[f64], m: &[f64]) -> Option<f64> {
    if m.iter().cloned().fold(0.0, f64::max) <= FLAT_MODULUS {
        return None;
    }
    let pts: Vec<(f64, f64)> =
        s.iter().zip(m).filter(|(_, &m)| m > FLAT_MODULUS).map(|(s, m)| (s.ln(), m.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

/// Weighted moduli `sigma^{1/2} |du| + sigma |de|` over `r >= r(eps, t)`,
/// at dyadic separations in space and in sample index.
pub fn holder_moduli(
    states: &[LagrangianState],
    eps_levels: &[f64],
    points: usize,
) -> Result<Vec<HolderRow>, FamilyError> {
    if states.len() < 3 {
        return Err(FamilyError::InsufficientData(format!("need profiles at >= 3 times, got {}", states.len())));
    }
    if points < 16 {
        return Err(FamilyError::InsufficientData("need at least 16 radial points".into()));
    }
    let a = states[0].a;
    let hi = 1.5 * states.iter().map(|s| *s.r.last().unwrap()).fold(0.0, f64::max);
    let h = (hi - a) / (points - 1) as f64;
    let grid: Vec<f64> = (0..points).map(|i| a + h * i as f64).collect();
    let profiles: Vec<RadialProfile> = par::map(states, |s| {
        let p = pullback(s, &grid);
        let edge = p.r_edge;
        cutoff_extend(&p, edge).expect("r_edge exceeds a for admissible states")
    });
    let mut rows = Vec::with_capacity(eps_levels.len());
    for &eps in eps_levels {
        if !(eps > 0.0) || states.iter().any(|s| eps > s.k) {
            return Err(FamilyError::Config(format!("eps must lie in (0, k], got {eps}")));
        }
        let start: Vec<usize> = states.iter().map(|s| grid.partition_point(|&r| r < path_at(s, eps))).collect();
        let widest = start.iter().map(|&i| points - i).min().unwrap();
        let shifts: Vec<usize> = (0..6).map(|j| 1usize << j).filter(|&s| 4 * s < widest).collect();
        if shifts.len() < 3 {
            return Err(FamilyError::InsufficientData(format!("fewer than 3 dyadic separations beyond eps={eps}")));
        }
        let weighted = |t: f64, du: f64, de: f64| sigma(t).sqrt() * du.abs() + sigma(t) * de.abs();
        let modulus_r: Vec<f64> = shifts
            .iter()
            .map(|&sh| {
                profiles
                    .iter()
                    .zip(&start)
                    .map(|(p, &i0)| {
                        (i0..points - sh)
                            .map(|i| weighted(p.t, p.u[i] - p.u[i + sh], p.e[i] - p.e[i + sh]))
                            .fold(0.0, f64::max)
                    })
                    .fold(0.0, f64::max)
            })
            .collect();
        let i_all = *start.iter().max().unwrap();
        let tshifts: Vec<usize> = (0..6).map(|j| 1usize << j).filter(|&s| s < profiles.len() - 1).collect();
        let mut sep_t = Vec::new();
        let mut modulus_t = Vec::new();
        for &sh in &tshifts {
            let mut worst = 0.0f64;
            let mut tau = 0.0f64;
            for j in 1..profiles.len() - sh {
                let (p, q) = (&profiles[j], &profiles[j + sh]);
                tau = tau.max(q.t - p.t);
                for i in i_all..points {
                    worst = worst.max(weighted(p.t, p.u[i] - q.u[i], p.e[i] - q.e[i]));
                }
            }
            sep_t.push(tau);
            modulus_t.push(worst);
        }
        let separations_r: Vec<f64> = shifts.iter().map(|&s| s as f64 * h).collect();
        rows.push(HolderRow {
            eps,
            alpha_r: fit_exponent(&separations_r, &modulus_r),
            separations_r,
            modulus_r,
            alpha_t: fit_exponent(&sep_t, &modulus_t),
            separations_t: sep_t,
            modulus_t,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::DataKind;

    fn constant_traj(a: f64, k: f64, cells: usize, t_end: f64, samples: usize) -> Trajectory {
        let s0 = LagrangianState::constant(a, k, 3, cells);
        let cfg = SolverConfig { cells, t_end, output_times: uniform_times(t_end, samples), ..Default::default() };
        crate::solver::run_from(s0, &FluidParams::default(), &cfg).unwrap()
    }

    #[test]
    fn lattice_is_geometric() {
        let l = probe_lattice(2.0, 6, 0.5, 16);
        assert_eq!(l.x.len(), 7);
        assert_eq!(l.x[0], 2.0 / 64.0);
        assert_eq!(*l.x.last().unwrap(), 2.0);
        assert_eq!(l.t.len(), 16);
    }

    #[test]
    fn constant_paths_are_closed_form() {
        let traj = constant_traj(0.1, 2.0, 64, 0.05, 4);
        let l = probe_lattice(2.0, 6, 0.05, 4);
        let p = path_family(&traj, &l).unwrap();
        for row in &p.r {
            for (&x, &r) in p.x.iter().zip(row) {
                let exact = (0.001 + 3.0 * x).powf(1.0 / 3.0);
                assert!((r - exact).abs() < 1e-12, "{r} vs {exact}");
            }
        }
        for u in interface_curve(&p, 3) {
            assert!((u - 0.1).abs() < 1e-10);
        }
    }

    #[test]
    fn constant_moduli_are_flat() {
        let traj = constant_traj(0.1, 2.0, 64, 0.05, 4);
        let rows = holder_moduli(&traj.states, &[0.5], 257).unwrap();
        assert!(rows[0].flat_r() && rows[0].flat_t());
    }

    #[test]
    fn too_few_profiles() {
        let traj = constant_traj(0.1, 2.0, 64, 0.05, 2);
        assert!(matches!(holder_moduli(&traj.states, &[0.5], 257), Err(FamilyError::InsufficientData(_))));
    }

    #[test]
    fn interface_needs_two_a() {
        let traj = constant_traj(0.1, 2.0, 32, 0.02, 3);
        let p = path_family(&traj, &probe_lattice(2.0, 6, 0.02, 3)).unwrap();
        assert!(matches!(estimate_vacuum_interface(&[&p], 2.0, 3), Err(FamilyError::InsufficientData(_))));
    }

    #[test]
    fn non_monotone_surface_rejected() {
        let traj = constant_traj(0.1, 2.0, 32, 0.02, 3);
        let l = probe_lattice(2.0, 6, 0.02, 3);
        let p = path_family(&traj, &l).unwrap();
        let mut q = path_family(&constant_traj(0.05, 2.0, 32, 0.02, 3), &l).unwrap();
        q.r[1].swap(2, 3);
        assert!(matches!(estimate_vacuum_interface(&[&p, &q], 2.0, 3), Err(FamilyError::NonMonotone { .. })));
    }

    #[test]
    fn constant_family_distances() {
        let base = RadialData::generate(&DataKind::Constant, 3, 3.0, 301).unwrap();
        let cfg = FamilyConfig { cells: 32, t_end: 0.02, samples: 3, holder_points: 129, ..Default::default() };
        let rep = run_family(&[0.05, 0.1], &[2.0], &base, &FluidParams::default(), &cfg).unwrap();
        assert!(rep.complete);
        let d = rep.distance[0][1];
        let exact = rep
            .lattice
            .x
            .iter()
            .map(|&x| ((0.001 + 3.0 * x).cbrt() - (0.000125 + 3.0 * x).cbrt()).abs())
            .fold(0.0, f64::max);
        assert!((d - exact).abs() < 1e-12, "{d} vs {exact}");
        assert_eq!(rep.distance[1][0], d);
        assert_eq!(rep.distance[0][0], 0.0);
        let est = &rep.interface[0];
        assert!(est.curves[1].iter().all(|r| (r - 0.05).abs() < 1e-10));
        assert!(est.lower_bound_ok && est.bounded_by_c0 && est.small_t_decrease);
        assert_eq!(est.inner_density_min, vec![1.0, 1.0]);
    }

    #[test]
    fn unsorted_lists_rejected() {
        let base = RadialData::generate(&DataKind::Constant, 3, 3.0, 301).unwrap();
        let r = run_family(&[0.1, 0.05], &[2.0], &base, &FluidParams::default(), &FamilyConfig::default());
        assert!(matches!(r, Err(FamilyError::Config(_))));
    }
}
