//! Run-time checks of the a-priori estimates. Each check reports the
//! smallest slack and where it occurred; "assert" monitors carry a pass/fail
//! verdict, "report" monitors only a value.

pub mod bounds;
pub mod entropy;
pub mod high_order;
pub mod integrability;
pub mod suite;
pub mod sup;

use crate::data::LagrangianData;
use crate::params::FluidParams;
use crate::solver::{LagrangianState, Trajectory};
use serde::Serialize;
use thiserror::Error;

pub use bounds::{
    cell_mean_values, check_envelope, check_path_bounds, path_lower, path_lower_limit, path_upper, CellMean,
};
pub use entropy::{entropy_functional, EntropyReport};
pub use high_order::{high_order_functional, HighOrderReport};
pub use integrability::{entropy_bound_eulerian, random_intervals, uniform_integrability};
pub use suite::{all_passed, run_suite, SuiteOptions};
pub use sup::{sup_estimates, SupReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MonitorError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MonitorMode {
    Assert,
    Report,
}

/// Outcome of one inequality check. `margin >= 0` iff `satisfied`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub satisfied: bool,
    pub margin: f64,
    /// `(x or r, t)` of the smallest slack.
    pub location: Option<(f64, f64)>,
}

impl BoundCheck {
    pub fn new(name: &str) -> Self {
        BoundCheck { name: name.to_string(), satisfied: true, margin: f64::INFINITY, location: None }
    }

    /// Record one slack value; negative slack is a violation.
    pub fn observe(&mut self, slack: f64, at: (f64, f64)) {
        if slack < self.margin || slack.is_nan() {
            self.margin = slack;
            self.location = Some(at);
        }
        if !(slack >= 0.0) {
            self.satisfied = false;
        }
    }

    /// Fold several checks of the same bound into one.
    pub fn merge(name: &str, checks: &[BoundCheck]) -> BoundCheck {
        let mut out = BoundCheck::new(name);
        for c in checks {
            if let Some(at) = c.location {
                out.observe(c.margin, at);
            }
            out.satisfied &= c.satisfied;
        }
        out
    }
}

/// JSON record of one monitor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonitorRecord {
    pub monitor: String,
    pub mode: MonitorMode,
    pub satisfied: Option<bool>,
    pub margin: Option<f64>,
    pub worst_location: Option<(f64, f64)>,
    pub value: serde_json::Value,
}

impl MonitorRecord {
    pub fn assert(check: &BoundCheck, value: serde_json::Value) -> Self {
        MonitorRecord {
            monitor: check.name.clone(),
            mode: MonitorMode::Assert,
            satisfied: Some(check.satisfied),
            margin: finite(check.margin),
            worst_location: check.location,
            value,
        }
    }

    pub fn report(name: &str, value: serde_json::Value) -> Self {
        MonitorRecord {
            monitor: name.to_string(),
            mode: MonitorMode::Report,
            satisfied: None,
            margin: None,
            worst_location: None,
            value,
        }
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// `sigma(t) = min(1, t)`
pub fn sigma(t: f64) -> f64 {
    t.clamp(0.0, 1.0)
}

/// Data constant used by every monitor:
/// `max{ C(data), E(0)/min(1, gamma-1), sup rho0, sup v0, sup 1/e0, 1 }`
/// where `C(data)` is the data integral and `E(0)` the initial entropy.
pub fn measured_c0(data: &LagrangianData, params: &FluidParams) -> f64 {
    let integral = crate::data::data_entropy_constant(data, params);
    let state = LagrangianState::from_data(data);
    let e0 = entropy::entropy_value(&state, params);
    measured_c0_from(integral, e0, &state, params)
}

pub fn measured_c0_from(integral: f64, e0: f64, state: &LagrangianState, params: &FluidParams) -> f64 {
    let g1 = (params.gamma - 1.0).min(1.0);
    let mut c0 = integral.max(e0 / g1).max(1.0);
    for &v in &state.v {
        c0 = c0.max(v).max(1.0 / v);
    }
    for &e in &state.e {
        c0 = c0.max(1.0 / e);
    }
    c0
}

/// `E(t) + int_0^t D <= E(0)(1 + rel) + abs` at every sample, and every
/// dissipation channel nonnegative.
pub fn check_entropy_trajectory(traj: &Trajectory, rel: f64, abs: f64) -> BoundCheck {
    let mut check = BoundCheck::new("entropy_inequality");
    let Some(first) = traj.samples.first() else {
        return check;
    };
    let e0 = first.entropy.e;
    for s in &traj.samples {
        let lhs = s.entropy.e + s.entropy.cumulative_d;
        check.observe(e0 * (1.0 + rel) + abs - lhs, (0.0, s.t));
        let d = &s.entropy;
        check.observe(d.d_heat.min(d.d_visc_bulk).min(d.d_visc_shear), (0.0, s.t));
    }
    check
}
