//! Time integration of the annular problem in mass coordinates:
//!
//! ```text
//! D_t v = D_x(r^m u)
//! D_t u + r^m D_x p = beta r^m D_x(D_x(r^m u) / v)
//! D_t e + p D_x(r^m u) = beta |D_x(r^m u)|^2 / v - 2 m mu D_x(r^{m-1} u^2)
//!                        + kappa D_x(r^{2m} D_x e / v)
//! r^n = a^n + n int_0^x v
//! ```
//!
//! with `u = D_x e = 0` at `x = 0, k`.
//!
//! Staggered grid: `r`, `u` on nodes, `v`, `e` on cells. Every flux is
//! written so that summation by parts reproduces the continuous energy and
//! entropy identities exactly; the shear term uses the cell average of
//! `u/r` that turns the production into a perfect square. Steps are
//! backward Euler in all terms, solved by Newton with a finite-difference
//! banded Jacobian. Convexity of the entropy then gives the discrete
//! inequality `E(t+dt) + dt D(t+dt) <= E(t)` for every accepted step.
//!
//! The unknowns per step are the increments of `r^n` at interior nodes,
//! interior velocities and all cell energies. Specific volume is updated
//! from increments of `r^n` so no large numbers are ever differenced.

pub mod banded;

use crate::data::{reconstruct_radius, LagrangianData};
use crate::monitors::entropy::{entropy_functional, EntropyReport};
use crate::params::FluidParams;
use banded::BandMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LagrangianState {
    pub t: f64,
    pub a: f64,
    pub k: f64,
    pub n: u32,
    pub dx: f64,
    /// Node coordinates (`N + 1`).
    pub x: Vec<f64>,
    /// Radii at nodes (`N + 1`).
    pub r: Vec<f64>,
    /// Velocity at nodes (`N + 1`).
    pub u: Vec<f64>,
    /// Specific volume per cell (`N`).
    pub v: Vec<f64>,
    /// Internal energy per cell (`N`).
    pub e: Vec<f64>,
}

impl LagrangianState {
    pub fn from_data(data: &LagrangianData) -> Self {
        LagrangianState {
            t: 0.0,
            a: data.a,
            k: data.k,
            n: data.n,
            dx: data.dx,
            x: data.x.clone(),
            r: data.r0.clone(),
            u: data.u0.clone(),
            v: data.v0.clone(),
            e: data.e0.clone(),
        }
    }

    /// Uniform state `(v, u, e) = (1, 0, 1)`.
    pub fn constant(a: f64, k: f64, n: u32, cells: usize) -> Self {
        let dx = k / cells as f64;
        let v = vec![1.0; cells];
        LagrangianState {
            t: 0.0,
            a,
            k,
            n,
            dx,
            x: (0..=cells).map(|j| if j == cells { k } else { j as f64 * dx }).collect(),
            r: reconstruct_radius(&v, a, n, dx),
            u: vec![0.0; cells + 1],
            v,
            e: vec![1.0; cells],
        }
    }

    pub fn cells(&self) -> usize {
        self.v.len()
    }

    /// Cell-centre mass coordinates.
    pub fn x_cells(&self) -> Vec<f64> {
        self.x.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Cell-centre radii `((r_j^n + r_{j+1}^n)/2)^{1/n}`.
    pub fn r_cells(&self) -> Vec<f64> {
        let nf = self.n as f64;
        self.r.windows(2).map(|w| (0.5 * (w[0].powf(nf) + w[1].powf(nf))).powf(1.0 / nf)).collect()
    }

    /// `max_j |r_j^n - a^n - n sum_{c<j} dx v_c|`.
    pub fn mass_identity_residual(&self) -> f64 {
        let nf = self.n as f64;
        let an = self.a.powf(nf);
        let mut acc = 0.0;
        let mut worst = (self.r[0].powf(nf) - an).abs();
        for c in 0..self.cells() {
            acc += self.dx * self.v[c];
            worst = worst.max((self.r[c + 1].powf(nf) - an - nf * acc).abs());
        }
        worst
    }

    pub fn is_admissible(&self) -> bool {
        self.v.iter().all(|v| *v > 0.0 && v.is_finite())
            && self.e.iter().all(|e| *e > 0.0 && e.is_finite())
            && self.u.iter().all(|u| u.is_finite())
    }

    pub fn max_abs_diff(&self, other: &LagrangianState) -> f64 {
        let d = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        d(&self.v, &other.v).max(d(&self.u, &other.u)).max(d(&self.e, &other.e)).max(d(&self.r, &other.r))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Strict,
    Exploratory,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverConfig {
    pub cells: usize,
    pub t_end: f64,
    pub cfl: f64,
    pub dt_min: f64,
    /// Sample times in `[0, t_end]`; `0` and `t_end` are always sampled.
    pub output_times: Vec<f64>,
    pub mode: Mode,
    /// Store every accepted step (used by the weak-form checker).
    pub record_every_step: bool,
    pub max_newton: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            cells: 1024,
            t_end: 0.5,
            cfl: 0.4,
            dt_min: 1e-10,
            output_times: uniform_times(0.5, 16),
            mode: Mode::Strict,
            record_every_step: false,
            max_newton: 25,
        }
    }
}

/// `count` uniform samples of `[0, t_end]` including both ends.
pub fn uniform_times(t_end: f64, count: usize) -> Vec<f64> {
    if count < 2 {
        return vec![t_end];
    }
    (0..count).map(|i| if i + 1 == count { t_end } else { t_end * i as f64 / (count - 1) as f64 }).collect()
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("step rejected at t={t}, dt={dt}: {reason}")]
    StepRejected { t: f64, dt: f64, reason: String },
    #[error("run aborted at t={t}: {reason}")]
    RunAborted { t: f64, reason: String, partial: Box<Trajectory> },
    #[error("entropy inequality violated at t={t}: excess {excess:e}")]
    EntropyViolation { t: f64, excess: f64, partial: Box<Trajectory> },
    #[error("invalid solver input: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct StepDiagnostics {
    pub dt: Vec<f64>,
    pub newton_iterations: Vec<u32>,
    pub rejections: u32,
    /// Largest value of `E(t+dt) + dt D(t+dt) - E(t)` relative to `E(t)`.
    pub worst_step_entropy_excess: f64,
    pub entropy_warnings: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleDiagnostics {
    pub t: f64,
    pub entropy: EntropyReport,
    /// `int (u^2/2 + e) dx`
    pub total_energy: f64,
    /// Kinetic energy removed by the implicit step, `sum dt-steps |du|^2/2 dx`.
    pub numerical_kinetic_loss: f64,
    /// `max_j |r_j - (r_j(0) + int u_j dt)|`
    pub kinematic_drift: f64,
    pub mass_identity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub params: FluidParams,
    pub config: SolverConfig,
    pub states: Vec<LagrangianState>,
    pub samples: Vec<SampleDiagnostics>,
    pub steps: StepDiagnostics,
}

/// Layout of the Newton unknowns: `e_c` at `3c`, `dR_j` at `3j-2`,
/// `u_j` at `3j-1` for interior nodes `j = 1..N-1`.
struct Layout {
    cells: usize,
}

impl Layout {
    fn len(&self) -> usize {
        3 * self.cells - 2
    }
    #[inline]
    fn e(&self, c: usize) -> usize {
        3 * c
    }
    #[inline]
    fn dr(&self, j: usize) -> usize {
        3 * j - 2
    }
    #[inline]
    fn u(&self, j: usize) -> usize {
        3 * j - 1
    }
}

const KL: usize = 4;
const KU: usize = 4;

struct Workspace {
    big_r: Vec<f64>,
    r: Vec<f64>,
    rm: Vec<f64>,
    u: Vec<f64>,
    v: Vec<f64>,
    e: Vec<f64>,
    w: Vec<f64>,
    p: Vec<f64>,
    q: Vec<f64>,
    s: Vec<f64>,
    flux: Vec<f64>,
}

impl Workspace {
    fn new(cells: usize) -> Self {
        let nodes = cells + 1;
        Workspace {
            big_r: vec![0.0; nodes],
            r: vec![0.0; nodes],
            rm: vec![0.0; nodes],
            u: vec![0.0; nodes],
            v: vec![0.0; cells],
            e: vec![0.0; cells],
            w: vec![0.0; nodes],
            p: vec![0.0; cells],
            q: vec![0.0; cells],
            s: vec![0.0; nodes],
            flux: vec![0.0; nodes],
        }
    }
}

struct StepProblem<'a> {
    old: &'a LagrangianState,
    params: &'a FluidParams,
    dt: f64,
    lay: Layout,
    big_r_old: Vec<f64>,
}

impl<'a> StepProblem<'a> {
    fn new(old: &'a LagrangianState, params: &'a FluidParams, dt: f64) -> Self {
        let nf = params.nf();
        StepProblem {
            old,
            params,
            dt,
            lay: Layout { cells: old.cells() },
            big_r_old: old.r.iter().map(|r| r.powf(nf)).collect(),
        }
    }

    fn initial_guess(&self) -> Vec<f64> {
        let mut z = vec![0.0; self.lay.len()];
        for c in 0..self.lay.cells {
            z[self.lay.e(c)] = self.old.e[c];
        }
        for j in 1..self.lay.cells {
            z[self.lay.u(j)] = self.old.u[j];
        }
        z
    }

    fn scales(&self) -> Vec<f64> {
        let mut s = vec![1.0; self.lay.len()];
        let nf = self.params.nf();
        let umax = self.old.u.iter().fold(0.0f64, |m, u| m.max(u.abs()));
        for c in 0..self.lay.cells {
            s[self.lay.e(c)] = self.old.e[c].abs().max(1e-3);
        }
        for j in 1..self.lay.cells {
            s[self.lay.dr(j)] = nf * self.old.dx;
            s[self.lay.u(j)] = umax.max(1.0);
        }
        s
    }

    /// Unpack `z` into the new fields and derived quantities.
    fn fill(&self, z: &[f64], ws: &mut Workspace) {
        let lay = &self.lay;
        let nc = lay.cells;
        let nf = self.params.nf();
        let m = self.params.m();
        let dx = self.old.dx;
        ws.big_r.copy_from_slice(&self.big_r_old);
        ws.u[0] = 0.0;
        ws.u[nc] = 0.0;
        let mut d_prev = 0.0;
        for c in 0..nc {
            let d_next = if c + 1 < nc { z[lay.dr(c + 1)] } else { 0.0 };
            ws.v[c] = self.old.v[c] + (d_next - d_prev) / (nf * dx);
            ws.e[c] = z[lay.e(c)];
            if c + 1 < nc {
                ws.big_r[c + 1] += d_next;
                ws.u[c + 1] = z[lay.u(c + 1)];
            }
            d_prev = d_next;
        }
        for j in 0..=nc {
            let r = if j == 0 { self.old.a } else { ws.big_r[j].powf(1.0 / nf) };
            ws.r[j] = r;
            ws.rm[j] = r.powf(m);
            ws.w[j] = ws.rm[j] * ws.u[j];
            ws.s[j] = r.powf(m - 1.0) * ws.u[j] * ws.u[j];
        }
        let gm1 = self.params.gamma - 1.0;
        for c in 0..nc {
            ws.p[c] = gm1 * ws.e[c] / ws.v[c];
            ws.q[c] = (ws.w[c + 1] - ws.w[c]) / (dx * ws.v[c]);
        }
        ws.flux[0] = 0.0;
        ws.flux[nc] = 0.0;
        for j in 1..nc {
            let vn = 0.5 * (ws.v[j - 1] + ws.v[j]);
            ws.flux[j] = self.params.kappa * ws.rm[j] * ws.rm[j] * (ws.e[j] - ws.e[j - 1]) / (dx * vn);
        }
    }

    fn residual(&self, z: &[f64], ws: &mut Workspace, out: &mut [f64]) {
        self.fill(z, ws);
        let lay = &self.lay;
        let nc = lay.cells;
        let dx = self.old.dx;
        let dt = self.dt;
        let nf = self.params.nf();
        let m = self.params.m();
        let beta = self.params.beta();
        let mu = self.params.mu;
        for j in 1..nc {
            out[lay.dr(j)] = z[lay.dr(j)] - nf * dt * ws.w[j];
            let force = (ws.p[j] - ws.p[j - 1]) - beta * (ws.q[j] - ws.q[j - 1]);
            out[lay.u(j)] = ws.u[j] - self.old.u[j] + dt * ws.rm[j] * force / dx;
        }
        for c in 0..nc {
            let div = (ws.w[c + 1] - ws.w[c]) / dx;
            let src = ws.p[c] * div - beta * ws.q[c] * ws.q[c] * ws.v[c] + 2.0 * m * mu * (ws.s[c + 1] - ws.s[c]) / dx
                - (ws.flux[c + 1] - ws.flux[c]) / dx;
            out[lay.e(c)] = ws.e[c] - self.old.e[c] + dt * src;
        }
    }

    fn jacobian(&self, z: &mut [f64], f0: &[f64], scales: &[f64], ws: &mut Workspace, jac: &mut BandMatrix) {
        let n = z.len();
        let stride = KL + KU + 1;
        let mut f1 = vec![0.0; n];
        let mut hs = vec![0.0; n];
        let mut saved = vec![0.0; n];
        jac.clear();
        for color in 0..stride {
            let mut col = color;
            while col < n {
                let h = 1e-7 * scales[col].max(z[col].abs());
                hs[col] = h;
                saved[col] = z[col];
                z[col] += h;
                col += stride;
            }
            self.residual(z, ws, &mut f1);
            let mut col = color;
            while col < n {
                z[col] = saved[col];
                let lo = col.saturating_sub(KU);
                let hi = (col + KL).min(n - 1);
                for row in lo..=hi {
                    let d = (f1[row] - f0[row]) / hs[col];
                    if d != 0.0 {
                        jac.set(row, col, d);
                    }
                }
                col += stride;
            }
        }
    }
}

/// Sound-speed based step limit in mass coordinates.
pub fn stable_dt(state: &LagrangianState, params: &FluidParams, cfl: f64) -> f64 {
    let m = params.m();
    let nf = params.nf();
    let mut fastest = 0.0f64;
    let mut rm_max = 0.0f64;
    for c in 0..state.cells() {
        let rc = (0.5 * (state.r[c].powf(nf) + state.r[c + 1].powf(nf))).powf(1.0 / nf);
        let sound = (params.gamma * (params.gamma - 1.0) * state.e[c]).sqrt();
        fastest = fastest.max(rc.powf(m) * sound / state.v[c]);
        rm_max = rm_max.max(rc.powf(m));
    }
    let a = if fastest > 0.0 { state.dx / fastest } else { f64::INFINITY };
    let b = state.dx / rm_max;
    cfl * a.min(b)
}

/// One backward-Euler step. Returns the new state and the Newton count.
pub fn step(state: &LagrangianState, params: &FluidParams, dt: f64) -> Result<(LagrangianState, u32), SolverError> {
    step_with(state, params, dt, 25)
}

fn step_with(
    state: &LagrangianState,
    params: &FluidParams,
    dt: f64,
    max_newton: usize,
) -> Result<(LagrangianState, u32), SolverError> {
    let reject = |reason: String| SolverError::StepRejected { t: state.t, dt, reason };
    if !(dt > 0.0) {
        return Err(reject("non-positive step".into()));
    }
    if state.cells() < 2 {
        return Err(SolverError::Invalid("need at least two cells".into()));
    }
    let prob = StepProblem::new(state, params, dt);
    let n = prob.lay.len();
    let mut ws = Workspace::new(state.cells());
    let mut z = prob.initial_guess();
    let scales = prob.scales();
    let mut f = vec![0.0; n];
    let mut jac = BandMatrix::zeros(n, KL, KU);
    let mut iters = 0u32;
    let mut converged = false;
    for _ in 0..max_newton {
        prob.residual(&z, &mut ws, &mut f);
        if f.iter().any(|x| !x.is_finite()) {
            return Err(reject("non-finite residual".into()));
        }
        prob.jacobian(&mut z, &f.clone(), &scales, &mut ws, &mut jac);
        let mut delta = f.clone();
        if !jac.solve_in_place(&mut delta) {
            return Err(reject("singular Newton matrix".into()));
        }
        let mut worst = 0.0f64;
        for i in 0..n {
            z[i] -= delta[i];
            worst = worst.max(delta[i].abs() / scales[i]);
        }
        iters += 1;
        if !worst.is_finite() {
            return Err(reject("Newton diverged".into()));
        }
        if worst <= 1e-13 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(reject("Newton did not converge".into()));
    }
    prob.fill(&z, &mut ws);
    if ws.v.iter().any(|v| !(*v > 0.0)) {
        return Err(reject("specific volume lost positivity".into()));
    }
    if ws.e.iter().any(|e| !(*e > 0.0)) {
        return Err(reject("internal energy lost positivity".into()));
    }
    let mut next = state.clone();
    next.t = state.t + dt;
    next.v.copy_from_slice(&ws.v);
    next.e.copy_from_slice(&ws.e);
    next.u.copy_from_slice(&ws.u);
    next.r = reconstruct_radius(&next.v, state.a, state.n, state.dx);
    Ok((next, iters))
}

fn total_energy(state: &LagrangianState) -> f64 {
    let ke: f64 = state.u[1..state.u.len() - 1].iter().map(|u| 0.5 * u * u).sum();
    let ie: f64 = state.e.iter().sum();
    (ke + ie) * state.dx
}

const STEP_ENTROPY_REL: f64 = 1e-10;
const STEP_ENTROPY_ABS: f64 = 1e-12;

/// Integrate to `cfg.t_end`, sampling at `cfg.output_times`.
pub fn run(data: &LagrangianData, params: &FluidParams, cfg: &SolverConfig) -> Result<Trajectory, SolverError> {
    run_from(LagrangianState::from_data(data), params, cfg)
}

pub fn run_from(initial: LagrangianState, params: &FluidParams, cfg: &SolverConfig) -> Result<Trajectory, SolverError> {
    if params.validate().is_err() {
        return Err(SolverError::Invalid("fluid parameters violate the physical condition".into()));
    }
    if !(cfg.t_end > 0.0) || !(cfg.cfl > 0.0) || !(cfg.dt_min > 0.0) {
        return Err(SolverError::Invalid("t_end, cfl and dt_min must be positive".into()));
    }
    if !initial.is_admissible() {
        return Err(SolverError::Invalid("initial state must have v > 0, e > 0".into()));
    }
    let mut outs: Vec<f64> = cfg.output_times.iter().cloned().filter(|t| *t > 0.0 && *t < cfg.t_end).collect();
    outs.push(cfg.t_end);
    outs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    outs.dedup();

    let mut traj = Trajectory {
        params: *params,
        config: cfg.clone(),
        states: Vec::new(),
        samples: Vec::new(),
        steps: StepDiagnostics::default(),
    };
    let mut state = initial;
    let mut ent = entropy_functional(&state, params);
    let mut r_kin = state.r.clone();
    let mut cum_d = 0.0;
    let mut ke_loss = 0.0;
    let record =
        |traj: &mut Trajectory, s: &LagrangianState, ent: EntropyReport, cum_d: f64, ke_loss: f64, r_kin: &[f64]| {
            let mut ent = ent;
            ent.cumulative_d = cum_d;
            let drift = r_kin.iter().zip(&s.r).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            traj.samples.push(SampleDiagnostics {
                t: s.t,
                entropy: ent,
                total_energy: total_energy(s),
                numerical_kinetic_loss: ke_loss,
                kinematic_drift: drift,
                mass_identity: s.mass_identity_residual(),
            });
            traj.states.push(s.clone());
        };
    record(&mut traj, &state, ent, cum_d, ke_loss, &r_kin);

    let mut next_out = 0usize;
    let tol_t = 1e-12 * cfg.t_end;
    while state.t < cfg.t_end - tol_t {
        let target = outs[next_out];
        let mut dt = stable_dt(&state, params, cfg.cfl).min(target - state.t);
        // avoid a sliver step just before a sample time
        if target - state.t - dt < 0.1 * dt {
            dt = target - state.t;
        }
        let (next, iters) = loop {
            match step_with(&state, params, dt, cfg.max_newton) {
                Ok(ok) => break ok,
                Err(SolverError::StepRejected { reason, .. }) => {
                    traj.steps.rejections += 1;
                    dt *= 0.5;
                    if dt < cfg.dt_min {
                        let t = state.t;
                        return Err(SolverError::RunAborted {
                            t,
                            reason: format!("step size fell below dt_min: {reason}"),
                            partial: Box::new(traj),
                        });
                    }
                }
                Err(other) => return Err(other),
            }
        };
        let mut next = next;
        let hit = (next.t - target).abs() <= tol_t;
        if hit {
            next.t = target;
        }
        let new_ent = entropy_functional(&next, params);
        let excess = new_ent.e + dt * new_ent.dissipation() - ent.e;
        let allowed = ent.e * STEP_ENTROPY_REL + STEP_ENTROPY_ABS;
        let rel = if ent.e > 0.0 { excess / ent.e } else { excess };
        traj.steps.worst_step_entropy_excess = traj.steps.worst_step_entropy_excess.max(rel);
        if excess > allowed {
            traj.steps.entropy_warnings += 1;
            if cfg.mode == Mode::Strict {
                let t = next.t;
                return Err(SolverError::EntropyViolation { t, excess, partial: Box::new(traj) });
            }
        }
        cum_d += dt * new_ent.dissipation();
        for j in 1..state.u.len() - 1 {
            let du = next.u[j] - state.u[j];
            ke_loss += 0.5 * du * du * state.dx;
        }
        for j in 0..r_kin.len() {
            r_kin[j] += dt * next.u[j];
        }
        traj.steps.dt.push(dt);
        traj.steps.newton_iterations.push(iters);
        state = next;
        ent = new_ent;
        if hit {
            next_out += 1;
            record(&mut traj, &state, ent, cum_d, ke_loss, &r_kin);
        } else if cfg.record_every_step {
            record(&mut traj, &state, ent, cum_d, ke_loss, &r_kin);
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_state_is_fixed_point() {
        let params = FluidParams::default();
        let s0 = LagrangianState::constant(0.1, 2.0, 3, 64);
        let dt = stable_dt(&s0, &params, 0.4);
        let mut s = s0.clone();
        for _ in 0..100 {
            s = step(&s, &params, dt).unwrap().0;
        }
        assert!(s.max_abs_diff(&s0) <= 1e-12, "{}", s.max_abs_diff(&s0));
    }
}
