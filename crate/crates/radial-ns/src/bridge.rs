//! Eulerian view of a Lagrangian state: inversion of the particle map,
//! the Jacobian `v r^{-m}`, and the cut-off extension to `(1, 0, 1)`.

use crate::cutoff::{edge_cutoff, edge_cutoff_dr};
use crate::interp::{linear, Pchip};
use crate::solver::LagrangianState;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BridgeError {
    #[error("invalid state: {0}")]
    InvalidState(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    pub t: f64,
    pub a: f64,
    pub n: u32,
    pub r: Vec<f64>,
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
    pub e: Vec<f64>,
    /// Cut-off weight; all ones before extension.
    pub phi: Vec<f64>,
    /// `false` where the radius lies outside the fluid annulus.
    pub inside: Vec<bool>,
    pub r_edge: f64,
}

impl RadialProfile {
    pub fn m(&self) -> f64 {
        self.n as f64 - 1.0
    }
}

/// Inverse particle map `r -> x` on one state.
pub struct InverseMap {
    map: Pchip,
}

impl InverseMap {
    pub fn new(state: &LagrangianState) -> Self {
        InverseMap { map: Pchip::new(state.r.clone(), state.x.clone()) }
    }

    pub fn x_of(&self, r: f64) -> f64 {
        self.map.eval(r)
    }

    /// `d x / d r`
    pub fn dx_dr(&self, r: f64) -> f64 {
        self.map.deriv(r)
    }
}

/// Fields at mass coordinate `x`: `u` linear on nodes, `v` and `e` linear
/// between cell centres and constant in the outer half cells.
pub fn fields_at_x(state: &LagrangianState, xc: &[f64], x: f64) -> (f64, f64, f64) {
    let u = linear(&state.x, &state.u, x);
    let v = linear(xc, &state.v, x);
    let e = linear(xc, &state.e, x);
    (v, u, e)
}

/// Sample `(1/v, u, e)` on `r_grid`; points outside `[a, r_edge]` are
/// marked exterior and hold `(1, 0, 1)`.
pub fn pullback(state: &LagrangianState, r_grid: &[f64]) -> RadialProfile {
    let inv = InverseMap::new(state);
    let xc = state.x_cells();
    let r_edge = *state.r.last().unwrap();
    let len = r_grid.len();
    let mut prof = RadialProfile {
        t: state.t,
        a: state.a,
        n: state.n,
        r: r_grid.to_vec(),
        rho: vec![1.0; len],
        u: vec![0.0; len],
        e: vec![1.0; len],
        phi: vec![1.0; len],
        inside: vec![false; len],
        r_edge,
    };
    let tol = 1e-12 * r_edge;
    for (i, &r) in r_grid.iter().enumerate() {
        if r < state.a - tol || r > r_edge + tol {
            continue;
        }
        let x = inv.x_of(r.clamp(state.a, r_edge));
        let (v, u, e) = fields_at_x(state, &xc, x);
        prof.rho[i] = 1.0 / v;
        prof.u[i] = u;
        prof.e[i] = e;
        prof.inside[i] = true;
    }
    prof
}

/// `J_j = v_j r_j^{-m}` at the nodes, with node volumes averaged from the
/// adjacent cells.
pub fn jacobian(state: &LagrangianState) -> Vec<f64> {
    let m = state.n as f64 - 1.0;
    let nc = state.cells();
    (0..=nc)
        .map(|j| {
            let v = if j == 0 {
                state.v[0]
            } else if j == nc {
                state.v[nc - 1]
            } else {
                0.5 * (state.v[j - 1] + state.v[j])
            };
            v * state.r[j].powf(-m)
        })
        .collect()
}

/// Blend toward `(1, 0, 1)` with `phi = xi((2r - r_edge)/r_edge)`.
pub fn cutoff_extend(profile: &RadialProfile, r_edge: f64) -> Result<RadialProfile, BridgeError> {
    if !(r_edge > profile.a) {
        return Err(BridgeError::InvalidState(format!(
            "outer radius {r_edge} must exceed the inner radius {}",
            profile.a
        )));
    }
    let mut out = profile.clone();
    out.r_edge = r_edge;
    for i in 0..out.r.len() {
        let phi = edge_cutoff(out.r[i], r_edge);
        out.phi[i] = phi;
        if phi == 1.0 {
            continue;
        }
        if phi == 0.0 {
            out.rho[i] = 1.0;
            out.u[i] = 0.0;
            out.e[i] = 1.0;
        } else {
            out.rho[i] = (profile.rho[i] - 1.0) * phi + 1.0;
            out.u[i] = profile.u[i] * phi;
            out.e[i] = (profile.e[i] - 1.0) * phi + 1.0;
        }
    }
    Ok(out)
}

/// `|d phi / d r|` bound check helper.
pub fn cutoff_slope(r: f64, r_edge: f64) -> f64 {
    edge_cutoff_dr(r, r_edge)
}

/// Uniform grid on `[a, factor * r_edge]`.
pub fn output_grid(state: &LagrangianState, points: usize, factor: f64) -> Vec<f64> {
    let r_edge = *state.r.last().unwrap();
    let hi = factor * r_edge;
    (0..points)
        .map(|i| if i + 1 == points { hi } else { state.a + (hi - state.a) * i as f64 / (points - 1) as f64 })
        .collect()
}

/// Default Eulerian profile: pullback on `[a, 1.5 r_edge]` then extension.
pub fn eulerian_profile(state: &LagrangianState, points: usize) -> RadialProfile {
    let grid = output_grid(state, points, 1.5);
    let prof = pullback(state, &grid);
    let edge = prof.r_edge;
    cutoff_extend(&prof, edge).expect("r_edge exceeds a for admissible states")
}

/// `int_a^r rho s^m ds` for the cellwise-constant density `1/v_c`.
pub fn eulerian_mass(state: &LagrangianState, r: f64) -> f64 {
    let nf = state.n as f64;
    let target = r.powf(nf);
    let mut mass = 0.0;
    for c in 0..state.cells() {
        let lo = state.r[c].powf(nf);
        let hi = state.r[c + 1].powf(nf);
        if target <= lo {
            break;
        }
        let top = hi.min(target);
        mass += (top - lo) / (nf * state.v[c]);
    }
    mass
}
