//! Default bump run with the monitor suite: `cargo run --release --example default_run [N]`.

use radial_ns::data::{generated_data, prepare, DataKind};
use radial_ns::monitors::{measured_c0, run_suite, SuiteOptions};
use radial_ns::params::FluidParams;
use radial_ns::solver::{run, SolverConfig};

fn main() {
    let cells: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1024);
    let params = FluidParams::default();
    let base = generated_data(&DataKind::gaussian_default(), 3, 4.0).expect("built-in data");
    let data = prepare(&base, 0.1, 4.0, cells).expect("lagrangian data");
    let c0 = measured_c0(&data, &params);
    let traj = match run(&data, &params, &SolverConfig { cells, ..Default::default() }) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(3);
        }
    };
    println!("steps {}  rejections {}  C0 {c0:.6}", traj.steps.dt.len(), traj.steps.rejections);
    for s in &traj.samples {
        println!(
            "t={:.4}  E={:.6e}  intD={:.4e}  mass={:.1e}  drift={:.1e}",
            s.t, s.entropy.e, s.entropy.cumulative_d, s.mass_identity, s.kinematic_drift
        );
    }
    for r in run_suite(&traj, c0, &SuiteOptions::default()) {
        println!("{:<24} {:?}", r.monitor, r.satisfied);
    }
}
