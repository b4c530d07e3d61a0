//! Particle-path bounds, the specific-volume envelope and the mean-value
//! cells. All three follow from `int psi(v) dx <= C0/(gamma-1)`-type
//! bounds by Jensen's inequality, which holds exactly for the cell sums the
//! solver uses, so no discretisation slack is needed.

use super::BoundCheck;
use crate::params::FluidParams;
use crate::scalar::{envelope_bounds, psi, psi_left_inv, psi_right_inv, EnvelopeParams};
use crate::solver::LagrangianState;
use serde::Serialize;

/// Lower bound `a^n + n x psi_-^{-1}(C0/x)` of `r^n`.
pub fn path_lower(a: f64, n: u32, x: f64, c0: f64) -> f64 {
    let nf = n as f64;
    if x <= 0.0 {
        return a.powf(nf);
    }
    a.powf(nf) + nf * x * psi_left_inv(c0 / x)
}

/// Upper bound of `r^n`: `K (1 + x)` with `K = max(C0, 1 + n psi_+^{-1}(C0))`,
/// which covers both cases of the argument (`r^n <= n(1+x)` and
/// `r^n <= 1 + n max(1,x) psi_+^{-1}(C0)`).
pub fn path_upper(n: u32, x: f64, c0: f64) -> f64 {
    let nf = n as f64;
    c0.max(1.0 + nf * psi_right_inv(c0)) * (1.0 + x)
}

/// `lim_{x -> 0+}` of the lower bound, evaluated at `x = 1e-12`.
pub fn path_lower_limit(a: f64, n: u32, c0: f64) -> f64 {
    path_lower(a, n, 1e-12, c0)
}

pub fn check_path_bounds(state: &LagrangianState, c0: f64) -> BoundCheck {
    let nf = state.n as f64;
    let mut check = BoundCheck::new("path_bounds");
    for (j, (&x, &r)) in state.x.iter().zip(&state.r).enumerate() {
        if j == 0 {
            continue;
        }
        let rn = r.powf(nf);
        let lo = path_lower(state.a, state.n, x, c0);
        let hi = path_upper(state.n, x, c0);
        // relative slack so that margins at large x are comparable
        check.observe((rn - lo) / rn, (x, state.t));
        check.observe((hi - rn) / hi, (x, state.t));
    }
    check
}

/// Check `v_lower(eps,t) <= v <= v_upper(eps,t)` on every cell inside
/// `[eps, k]`. Margins are in `ln v`.
pub fn check_envelope(state: &LagrangianState, eps: f64, c0: f64, params: &FluidParams) -> BoundCheck {
    let mut check = BoundCheck::new("density_envelope");
    let p = EnvelopeParams { a: state.a, c0, n: state.n, beta: params.beta() };
    let env = match envelope_bounds(&p, eps, state.t) {
        Ok(env) => env,
        Err(_) => {
            check.observe(f64::NAN, (eps, state.t));
            return check;
        }
    };
    for c in 0..state.cells() {
        let x_lo = state.x[c];
        if x_lo < eps - 1e-12 * state.k {
            continue;
        }
        let lv = state.v[c].ln();
        let xc = 0.5 * (state.x[c] + state.x[c + 1]);
        let slack = (lv - env.ln_lower).min(env.ln_upper - lv);
        check.observe(slack, (xc, state.t));
    }
    check
}

/// Points of one unit mass cell `[i-1, i]` where `v` and `e` satisfy the
/// mean-value bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellMean {
    pub i: usize,
    /// `A_i`, `v(A_i)`
    pub a_x: f64,
    pub v: f64,
    /// `B_i`, `e(B_i)`
    pub b_x: f64,
    pub e: f64,
    pub v_ok: bool,
    pub e_ok: bool,
}

/// For each unit cell, the grid cell minimising `psi(v)` (resp. `psi(e)`);
/// its value lies in `[psi_-^{-1}(C), psi_+^{-1}(C)]` whenever the cell
/// average of `psi` does, with `C = C0/(gamma-1)` for `v` and `C0` for `e`.
pub fn cell_mean_values(state: &LagrangianState, c0: f64, params: &FluidParams) -> (Vec<CellMean>, BoundCheck) {
    let gm1 = params.gamma - 1.0;
    let (v_lo, v_hi) = (psi_left_inv(c0 / gm1), psi_right_inv(c0 / gm1));
    let (e_lo, e_hi) = (psi_left_inv(c0), psi_right_inv(c0));
    let mut check = BoundCheck::new("mean_value_cells");
    let units = state.k.floor() as usize;
    let mut out = Vec::with_capacity(units);
    for i in 1..=units {
        let (lo, hi) = ((i - 1) as f64, i as f64);
        let mut best_v: Option<(usize, f64)> = None;
        let mut best_e: Option<(usize, f64)> = None;
        for c in 0..state.cells() {
            let xc = 0.5 * (state.x[c] + state.x[c + 1]);
            if xc <= lo || xc >= hi {
                continue;
            }
            let pv = psi(state.v[c]);
            let pe = psi(state.e[c]);
            if best_v.is_none_or(|(_, b)| pv < b) {
                best_v = Some((c, pv));
            }
            if best_e.is_none_or(|(_, b)| pe < b) {
                best_e = Some((c, pe));
            }
        }
        let mid = 0.5 * (lo + hi);
        let (Some((cv, _)), Some((ce, _))) = (best_v, best_e) else {
            check.observe(-1.0, (mid, state.t));
            continue;
        };
        let (v, e) = (state.v[cv], state.e[ce]);
        let xv = 0.5 * (state.x[cv] + state.x[cv + 1]);
        let xe = 0.5 * (state.x[ce] + state.x[ce + 1]);
        let sv = (v - v_lo).min(v_hi - v);
        let se = (e - e_lo).min(e_hi - e);
        check.observe(sv, (xv, state.t));
        check.observe(se, (xe, state.t));
        out.push(CellMean { i, a_x: xv, v, b_x: xe, e, v_ok: sv >= 0.0, e_ok: se >= 0.0 });
    }
    (out, check)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_state_satisfies_everything() {
        let s = LagrangianState::constant(0.1, 4.0, 3, 128);
        let params = FluidParams::default();
        assert!(check_path_bounds(&s, 1.0).satisfied);
        assert!(check_envelope(&s, 0.5, 1.0, &params).satisfied);
        let (cells, check) = cell_mean_values(&s, 1.0, &params);
        assert!(check.satisfied);
        assert_eq!(cells.len(), 4);
        assert!(cells.iter().all(|c| c.v == 1.0 && c.e == 1.0));
    }

    #[test]
    fn lower_limit_is_a_to_the_n() {
        let lim = path_lower_limit(0.1, 3, 5.0);
        assert!((lim - 1e-3).abs() <= 1e-8);
    }

    #[test]
    fn compressed_state_breaks_path_bound() {
        let mut s = LagrangianState::constant(0.1, 4.0, 3, 64);
        for v in &mut s.v {
            *v = 1e-6;
        }
        s.r = crate::data::reconstruct_radius(&s.v, s.a, s.n, s.dx);
        assert!(!check_path_bounds(&s, 1.0).satisfied);
    }
}
