//! The standard set of monitors over one trajectory.

use super::{
    cell_mean_values, check_entropy_trajectory, check_envelope, check_path_bounds, entropy_bound_eulerian,
    high_order_functional, path_lower_limit, random_intervals, sup_estimates, uniform_integrability, BoundCheck,
    MonitorRecord,
};
use crate::bridge::{eulerian_profile, jacobian};
use crate::par;
use crate::solver::Trajectory;
use serde::Serialize;
use serde_json::json;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteOptions {
    pub envelope_eps: f64,
    pub sup_eta: f64,
    pub high_order_y: f64,
    pub intervals: usize,
    pub profile_points: usize,
    pub seed: u64,
    pub entropy_rel: f64,
    pub entropy_abs: f64,
    pub mass_identity_tol: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            envelope_eps: 0.5,
            sup_eta: 0.5,
            high_order_y: 0.5,
            intervals: 100,
            profile_points: 2049,
            seed: 0,
            entropy_rel: 1e-8,
            entropy_abs: 1e-12,
            mass_identity_tol: 1e-10,
        }
    }
}

/// Every monitor over the stored samples of `traj`; assert-mode records
/// first, in a fixed order.
pub fn run_suite(traj: &Trajectory, c0: f64, opts: &SuiteOptions) -> Vec<MonitorRecord> {
    let params = &traj.params;
    let states = &traj.states;
    let mut out = Vec::new();
    let Some(first) = states.first() else {
        return out;
    };
    let last = states.last().unwrap();

    let ent = check_entropy_trajectory(traj, opts.entropy_rel, opts.entropy_abs);
    let e0 = traj.samples[0].entropy.e;
    let fin = traj.samples.last().unwrap().entropy;
    out.push(MonitorRecord::assert(
        &ent,
        json!({
            "E0": e0,
            "E_final": fin.e,
            "cumulative_D": fin.cumulative_d,
            "worst_step_excess": traj.steps.worst_step_entropy_excess,
        }),
    ));

    let mut mass = BoundCheck::new("mass_identity");
    for s in &traj.samples {
        mass.observe(opts.mass_identity_tol - s.mass_identity, (0.0, s.t));
    }
    let worst_mass = traj.samples.iter().map(|s| s.mass_identity).fold(0.0, f64::max);
    out.push(MonitorRecord::assert(&mass, json!({ "max_residual": worst_mass })));

    let path = BoundCheck::merge("path_bounds", &par::map(states, |s| check_path_bounds(s, c0)));
    let an = first.a.powf(first.n as f64);
    out.push(MonitorRecord::assert(
        &path,
        json!({ "c0": c0, "lower_limit_minus_a_n": path_lower_limit(first.a, first.n, c0) - an }),
    ));

    let env =
        BoundCheck::merge("density_envelope", &par::map(states, |s| check_envelope(s, opts.envelope_eps, c0, params)));
    out.push(MonitorRecord::assert(&env, json!({ "eps": opts.envelope_eps, "c0": c0 })));

    let cells = par::map(states, |s| cell_mean_values(s, c0, params).1);
    out.push(MonitorRecord::assert(&BoundCheck::merge("mean_value_cells", &cells), json!({ "samples": cells.len() })));

    let profiles = par::map(states, |s| eulerian_profile(s, opts.profile_points));
    let c_t = profiles.iter().map(entropy_bound_eulerian).fold(0.0, f64::max);
    let ui: Vec<BoundCheck> = profiles
        .iter()
        .enumerate()
        .map(|(i, p)| uniform_integrability(p, &random_intervals(p, opts.intervals, opts.seed + i as u64), c_t))
        .collect();
    out.push(MonitorRecord::assert(
        &BoundCheck::merge("uniform_integrability", &ui),
        json!({ "c_t": c_t, "intervals_per_sample": opts.intervals }),
    ));

    let mut jac = BoundCheck::new("jacobian_positive");
    let (mut jmin, mut jmax) = (f64::INFINITY, 0.0f64);
    for s in states {
        for (x, j) in s.x.iter().zip(jacobian(s)) {
            jac.observe(j, (*x, s.t));
            jmin = jmin.min(j);
            jmax = jmax.max(j);
        }
    }
    out.push(MonitorRecord::assert(&jac, json!({ "min": jmin, "max": jmax })));

    let budget0 = traj.samples[0].total_energy;
    let drift = traj
        .samples
        .iter()
        .map(|s| (s.total_energy + s.numerical_kinetic_loss - budget0).abs() / budget0)
        .fold(0.0, f64::max);
    out.push(MonitorRecord::report("energy_budget", json!({ "max_relative_drift": drift })));

    let kin = traj.samples.iter().map(|s| s.kinematic_drift).fold(0.0, f64::max);
    out.push(MonitorRecord::report("kinematic_consistency", json!({ "max_drift": kin })));

    let floor = states.iter().flat_map(|s| s.e.iter()).cloned().fold(f64::INFINITY, f64::min);
    out.push(MonitorRecord::report("internal_energy_floor", json!({ "min_e": floor })));

    let sup = |eta: f64| match sup_estimates(states, eta) {
        Ok(r) => serde_json::to_value(r).unwrap_or_default(),
        Err(e) => json!({ "error": e.to_string() }),
    };
    out.push(MonitorRecord::report(
        "sup_estimates",
        json!({ "eta": sup(opts.sup_eta), "half_eta": sup(0.5 * opts.sup_eta) }),
    ));

    let ho = match high_order_functional(states, params, opts.high_order_y) {
        Ok(r) => serde_json::to_value(r).unwrap_or_default(),
        Err(e) => json!({ "error": e.to_string() }),
    };
    out.push(MonitorRecord::report("high_order_functional", ho));
    out.push(MonitorRecord::report("final_time", json!({ "t": last.t })));
    out
}

/// `true` iff every assert-mode record passed.
pub fn all_passed(records: &[MonitorRecord]) -> bool {
    records.iter().all(|r| r.satisfied != Some(false))
}
