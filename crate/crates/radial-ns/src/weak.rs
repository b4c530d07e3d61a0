//! Weak-form residuals of the exterior problem on Eulerian profiles.
//!
//! Test functions are separable, `phi(r, t) = A(r) B(t)`, so every
//! space-time integral reduces to time quadratures of a few spatial sums
//! per profile. Spatial sums use the trapezoid rule with weight `r^m` on the
//! common grid; time integrals use the trapezoid rule, with `d_t phi` terms
//! taken against the exact increments of `B` over each interval.
//!
//! Identities, with `P = (gamma-1) rho e` and `E = u^2/2 + e`:
//!
//! ```text
//! continuity  [rho phi] = int int rho d_t phi + rho u d_r phi
//! momentum    [rho u phi] - int int rho u (d_t phi + u d_r phi)
//!                 = int int (P - beta(u_r + m u/r)) (d_r phi + m phi/r)
//! energy      [rho E phi] = int int rho E d_t phi + (rho E + P) u d_r phi
//!                 - int int (2 mu u u_r + lambda u (u_r + m u/r) + kappa e_r) d_r phi
//! ```
//!
//! where `[q] = int q(r,T) r^m dr - int q(r,0) r^m dr` and every integral
//! carries `r^m dr`. The momentum identity only admits `phi(a, t) = 0`.

use crate::bridge::{pullback, RadialProfile};
use crate::par;
use crate::params::FluidParams;
use crate::solver::{LagrangianState, Trajectory};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeakError {
    #[error("contract error: {0}")]
    Contract(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Equation {
    Continuity,
    Momentum,
    Energy,
}

impl Equation {
    pub const ALL: [Equation; 3] = [Equation::Continuity, Equation::Momentum, Equation::Energy];

    pub fn name(self) -> &'static str {
        match self {
            Equation::Continuity => "continuity",
            Equation::Momentum => "momentum",
            Equation::Energy => "energy",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundaryClass {
    /// No condition at `r = a`.
    #[serde(rename = "D_a")]
    Da,
    /// `phi(a, t) = 0` for all `t`.
    #[serde(rename = "D0_a")]
    D0a,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    /// `A(r) = (1 - s^2)^8`, `s = (r - center)/width`.
    BumpProduct,
    /// `A(r) = (1 - s^2)^8`, `s = (r - a)/(center + width - a)`: equal to 1
    /// at `r = a` with zero slope.
    PolynomialCutoff,
}

const BUMP_POWER: i32 = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestFunction {
    pub id: String,
    pub kind: TestKind,
    pub class: BoundaryClass,
    pub a: f64,
    pub center: f64,
    pub width: f64,
    pub t_end: f64,
}

impl TestFunction {
    pub fn bump(id: &str, a: f64, center: f64, width: f64, t_end: f64) -> Self {
        let class = if center - width >= a { BoundaryClass::D0a } else { BoundaryClass::Da };
        TestFunction { id: id.into(), kind: TestKind::BumpProduct, class, a, center, width, t_end }
    }

    pub fn cutoff(id: &str, a: f64, center: f64, width: f64, t_end: f64) -> Self {
        TestFunction {
            id: id.into(),
            kind: TestKind::PolynomialCutoff,
            class: BoundaryClass::Da,
            a,
            center,
            width,
            t_end,
        }
    }

    /// `(lo, hi)` of the spatial support.
    pub fn support(&self) -> (f64, f64) {
        match self.kind {
            TestKind::BumpProduct => (self.center - self.width, self.center + self.width),
            TestKind::PolynomialCutoff => (self.a, self.center + self.width),
        }
    }

    /// `(A, A')` at `r`.
    pub fn space(&self, r: f64) -> (f64, f64) {
        let (origin, scale) = match self.kind {
            TestKind::BumpProduct => (self.center, self.width),
            TestKind::PolynomialCutoff => (self.a, self.center + self.width - self.a),
        };
        let s = (r - origin) / scale;
        if s.abs() >= 1.0 {
            return (0.0, 0.0);
        }
        let q = 1.0 - s * s;
        let p = BUMP_POWER as f64;
        (q.powi(BUMP_POWER), -2.0 * p * s * q.powi(BUMP_POWER - 1) / scale)
    }

    /// `B(t) = 16 s^2 (1 - s)^2`, `s = t / T`.
    pub fn time(&self, t: f64) -> f64 {
        let s = (t / self.t_end).clamp(0.0, 1.0);
        16.0 * s * s * (1.0 - s) * (1.0 - s)
    }

    pub fn vanishes_at_inner(&self) -> bool {
        self.space(self.a).0 == 0.0
    }
}

/// Twelve functions: centres `a + S {0.3, 0.5, 0.7}`, widths `{0.15, 0.25} S`,
/// one full bump and one inner cut-off each, with `S = 0.9 r_edge - a`.
pub fn catalog(a: f64, r_edge: f64, t_end: f64) -> Vec<TestFunction> {
    let s = 0.9 * r_edge - a;
    let mut out = Vec::with_capacity(12);
    for (ci, cf) in [0.3, 0.5, 0.7].iter().enumerate() {
        for (wi, wf) in [0.15, 0.25].iter().enumerate() {
            let (c, w) = (a + s * cf, s * wf);
            out.push(TestFunction::bump(&format!("bump_c{ci}_w{wi}"), a, c, w, t_end));
            out.push(TestFunction::cutoff(&format!("cutoff_c{ci}_w{wi}"), a, c, w, t_end));
        }
    }
    out
}

const RHO: usize = 0;
const RHO_U_DR: usize = 1;
const MOM: usize = 2;
const MOM_CONV: usize = 3;
const PRESSURE: usize = 4;
const VISCOUS: usize = 5;
const EN: usize = 6;
const EN_FLUX: usize = 7;
const EN_DIFF: usize = 8;
const SUMS: usize = 9;

/// Spatial sums of one profile against one `A(r)`, with the sums of the
/// absolute integrands alongside.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Sums {
    t: f64,
    val: [f64; SUMS],
    mag: [f64; SUMS],
}

impl Sums {
    #[inline]
    fn add(&mut self, k: usize, x: f64) {
        self.val[k] += x;
        self.mag[k] += x.abs();
    }
}

/// `(u_r, e_r)` on a uniform-or-not grid by second-order differences.
fn gradients(p: &RadialProfile) -> (Vec<f64>, Vec<f64>) {
    let d = |f: &[f64]| -> Vec<f64> {
        let r = &p.r;
        let n = r.len();
        (0..n)
            .map(|i| {
                let (a, b, c) = if i == 0 {
                    (0, 1, 2)
                } else if i == n - 1 {
                    (n - 3, n - 2, n - 1)
                } else {
                    (i - 1, i, i + 1)
                };
                let (x0, x1, x2) = (r[a], r[b], r[c]);
                let x = r[i];
                let w0 = (2.0 * x - x1 - x2) / ((x0 - x1) * (x0 - x2));
                let w1 = (2.0 * x - x0 - x2) / ((x1 - x0) * (x1 - x2));
                let w2 = (2.0 * x - x0 - x1) / ((x2 - x0) * (x2 - x1));
                w0 * f[a] + w1 * f[b] + w2 * f[c]
            })
            .collect()
    };
    (d(&p.u), d(&p.e))
}

fn grid_weights(p: &RadialProfile) -> Vec<f64> {
    let m = p.m();
    let n = p.r.len();
    (0..n)
        .map(|i| {
            let left = if i > 0 { p.r[i] - p.r[i - 1] } else { 0.0 };
            let right = if i + 1 < n { p.r[i + 1] - p.r[i] } else { 0.0 };
            0.5 * (left + right) * p.r[i].powf(m)
        })
        .collect()
}

fn profile_sums(p: &RadialProfile, funcs: &[TestFunction], params: &FluidParams) -> Vec<Sums> {
    let m = p.m();
    let beta = params.beta();
    let gm1 = params.gamma - 1.0;
    let (ur, er) = gradients(p);
    let w = grid_weights(p);
    funcs
        .iter()
        .map(|f| {
            let mut s = Sums { t: p.t, ..Sums::default() };
            for i in 0..p.r.len() {
                let (a, da) = f.space(p.r[i]);
                if a == 0.0 && da == 0.0 {
                    continue;
                }
                let (r, rho, u, e) = (p.r[i], p.rho[i], p.u[i], p.e[i]);
                let wi = w[i];
                let pr = gm1 * rho * e;
                let div = ur[i] + m * u / r;
                let big_e = 0.5 * u * u + e;
                s.add(RHO, wi * rho * a);
                s.add(RHO_U_DR, wi * rho * u * da);
                s.add(MOM, wi * rho * u * a);
                s.add(MOM_CONV, wi * rho * u * u * da);
                let test = da + m * a / r;
                s.add(PRESSURE, wi * pr * test);
                s.add(VISCOUS, wi * beta * div * test);
                s.add(EN, wi * rho * big_e * a);
                s.add(EN_FLUX, wi * (rho * big_e + pr) * u * da);
                s.add(
                    EN_DIFF,
                    wi * (2.0 * params.mu * u * ur[i] + params.lambda * u * div + params.kappa * er[i]) * da,
                );
            }
            s
        })
        .collect()
}

/// Signed residual and its normalisation for one `(eq, phi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub signed: f64,
    pub scale: f64,
}

impl Residual {
    pub fn normalized(&self) -> f64 {
        if self.scale > 0.0 {
            self.signed.abs() / self.scale
        } else {
            self.signed.abs()
        }
    }
}

/// Each term is `(value, magnitude)`, the magnitude being the same
/// quadrature applied to absolute integrands; the largest magnitude
/// normalises the residual.
fn assemble(series: &[Sums], f: &TestFunction, eq: Equation) -> Residual {
    let b: Vec<f64> = series.iter().map(|s| f.time(s.t)).collect();
    let last = series.len() - 1;
    // int q d_t phi with exact increments of B
    let dt_term = |k: usize| {
        (0..last).fold((0.0, 0.0), |(v, m), n| {
            let db = 0.5 * (b[n + 1] - b[n]);
            (
                v + db * (series[n].val[k] + series[n + 1].val[k]),
                m + db.abs() * (series[n].mag[k] + series[n + 1].mag[k]),
            )
        })
    };
    // int B q dt by the trapezoid rule
    let trap = |k: usize| {
        (0..last).fold((0.0, 0.0), |(v, m), n| {
            let h = 0.5 * (series[n + 1].t - series[n].t);
            let (s0, s1) = (&series[n], &series[n + 1]);
            (
                v + h * (b[n] * s0.val[k] + b[n + 1] * s1.val[k]),
                m + h * (b[n].abs() * s0.mag[k] + b[n + 1].abs() * s1.mag[k]),
            )
        })
    };
    let end = |k: usize| (b[last] * series[last].val[k], b[last].abs() * series[last].mag[k]);
    let start = |k: usize| (-b[0] * series[0].val[k], b[0].abs() * series[0].mag[k]);
    let neg = |(v, m): (f64, f64)| (-v, m);
    let terms: Vec<(f64, f64)> = match eq {
        Equation::Continuity => vec![end(RHO), start(RHO), neg(dt_term(RHO)), neg(trap(RHO_U_DR))],
        Equation::Momentum => {
            vec![end(MOM), start(MOM), neg(dt_term(MOM)), neg(trap(MOM_CONV)), neg(trap(PRESSURE)), trap(VISCOUS)]
        }
        Equation::Energy => vec![end(EN), start(EN), neg(dt_term(EN)), neg(trap(EN_FLUX)), trap(EN_DIFF)],
    };
    Residual { signed: terms.iter().map(|t| t.0).sum(), scale: terms.iter().map(|t| t.1).fold(0.0, f64::max) }
}

fn check_pairing(eq: Equation, f: &TestFunction) -> Result<(), WeakError> {
    if eq == Equation::Momentum && !f.vanishes_at_inner() {
        return Err(WeakError::Contract(format!(
            "momentum identity needs phi(a, t) = 0; test function {} is {:?}",
            f.id, f.class
        )));
    }
    Ok(())
}

fn check_profiles(profiles: &[RadialProfile], funcs: &[TestFunction]) -> Result<(), WeakError> {
    if profiles.len() < 2 {
        return Err(WeakError::InsufficientData("need at least two profiles".into()));
    }
    let grid = &profiles[0].r;
    if profiles.iter().any(|p| &p.r != grid) {
        return Err(WeakError::Contract("profiles must share one r-grid".into()));
    }
    if profiles.windows(2).any(|w| !(w[1].t > w[0].t)) {
        return Err(WeakError::Contract("profiles must be strictly increasing in time".into()));
    }
    let (lo, hi) = (grid[0], *grid.last().unwrap());
    for f in funcs {
        let (a, b) = f.support();
        if a < lo - 1e-12 || b > hi + 1e-12 {
            return Err(WeakError::Contract(format!("test function {} is not supported inside the grid", f.id)));
        }
    }
    Ok(())
}

/// Normalised residual of one identity against one test function.
pub fn weak_residual(
    profiles: &[RadialProfile],
    eq: Equation,
    phi: &TestFunction,
    params: &FluidParams,
) -> Result<Residual, WeakError> {
    check_pairing(eq, phi)?;
    let funcs = std::slice::from_ref(phi);
    check_profiles(profiles, funcs)?;
    let series: Vec<Sums> = profiles.iter().map(|p| profile_sums(p, funcs, params)[0]).collect();
    Ok(assemble(&series, phi, eq))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualRow {
    pub eq: Equation,
    pub phi_id: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub residual: f64,
}

/// Common grid `[a, min_t r_edge(t)]` with `points` nodes.
pub fn common_grid(states: &[LagrangianState], points: usize) -> Vec<f64> {
    let a = states[0].a;
    let hi = states.iter().map(|s| *s.r.last().unwrap()).fold(f64::INFINITY, f64::min);
    (0..points).map(|i| if i + 1 == points { hi } else { a + (hi - a) * i as f64 / (points - 1) as f64 }).collect()
}

/// Every admissible `(eq, phi)` pair of the catalog on a trajectory stored
/// at every step. Profiles are built and reduced one state at a time, in
/// parallel, then summed in time order.
pub fn check_trajectory(traj: &Trajectory, points: usize) -> Result<Vec<ResidualRow>, WeakError> {
    let states = &traj.states;
    if states.len() < 2 {
        return Err(WeakError::InsufficientData("need at least two stored states".into()));
    }
    let grid = common_grid(states, points);
    let r_edge = *grid.last().unwrap();
    let t_end = states.last().unwrap().t;
    let funcs = catalog(states[0].a, r_edge, t_end);
    let params = traj.params;
    let per_state: Vec<Vec<Sums>> = par::map(states, |s| profile_sums(&pullback(s, &grid), &funcs, &params));
    let cells = states[0].cells();
    let mut rows = Vec::new();
    for eq in Equation::ALL {
        for (k, f) in funcs.iter().enumerate() {
            if check_pairing(eq, f).is_err() {
                continue;
            }
            let series: Vec<Sums> = per_state.iter().map(|v| v[k]).collect();
            let r = assemble(&series, f, eq);
            rows.push(ResidualRow { eq, phi_id: f.id.clone(), n: cells, residual: r.normalized() });
        }
    }
    Ok(rows)
}

/// Largest residual per equation.
pub fn worst_by_equation(rows: &[ResidualRow]) -> Vec<(Equation, f64)> {
    Equation::ALL
        .iter()
        .map(|&eq| (eq, rows.iter().filter(|r| r.eq == eq).map(|r| r.residual).fold(0.0, f64::max)))
        .collect()
}

/// `log2(coarse / fine) / log2(refinement)`.
pub fn observed_order(coarse: f64, fine: f64, refinement: f64) -> f64 {
    (coarse / fine).log2() / refinement.log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::output_grid;

    fn constant_profiles(count: usize, t_end: f64) -> Vec<RadialProfile> {
        (0..count)
            .map(|i| {
                let mut s = LagrangianState::constant(0.1, 4.0, 3, 64);
                s.t = t_end * i as f64 / (count - 1) as f64;
                let grid = output_grid(&s, 801, 1.0);
                pullback(&s, &grid)
            })
            .collect()
    }

    #[test]
    fn catalog_has_twelve_and_classes() {
        let c = catalog(0.1, 2.3, 0.5);
        assert_eq!(c.len(), 12);
        assert_eq!(c.iter().filter(|f| f.class == BoundaryClass::D0a).count(), 6);
        for f in &c {
            assert_eq!(f.vanishes_at_inner(), f.class == BoundaryClass::D0a);
            assert!(f.support().1 <= 0.9 * 2.3 + 1e-12);
        }
    }

    #[test]
    fn constant_fields_have_roundoff_residuals() {
        let params = FluidParams::default();
        let profs = constant_profiles(41, 0.5);
        let edge = profs[0].r_edge;
        for f in catalog(0.1, edge, 0.5) {
            for eq in Equation::ALL {
                match weak_residual(&profs, eq, &f, &params) {
                    Ok(r) => assert!(r.normalized() < 1e-12, "{eq:?} {} {}", f.id, r.normalized()),
                    Err(WeakError::Contract(_)) => assert_eq!(eq, Equation::Momentum),
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn wrong_velocity_is_detected() {
        let params = FluidParams::default();
        let mut profs = constant_profiles(41, 0.5);
        for p in &mut profs {
            for i in 0..p.r.len() {
                p.u[i] = -0.3 * ((p.r[i] - p.a) * 2.0).sin();
            }
        }
        let edge = profs[0].r_edge;
        let f = &catalog(0.1, edge, 0.5)[0];
        let r = weak_residual(&profs, Equation::Continuity, f, &params).unwrap();
        assert!(r.normalized() > 0.1, "{}", r.normalized());
    }

    #[test]
    fn momentum_refuses_da_functions() {
        let params = FluidParams::default();
        let profs = constant_profiles(5, 0.5);
        let f = TestFunction::cutoff("c", 0.1, 0.8, 0.3, 0.5);
        assert!(matches!(weak_residual(&profs, Equation::Momentum, &f, &params), Err(WeakError::Contract(_))));
    }
}
