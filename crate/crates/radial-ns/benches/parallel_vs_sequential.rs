use criterion::{criterion_group, criterion_main, Criterion};
use radial_ns::bridge::eulerian_profile;
use radial_ns::data::{generated_data, prepare, DataKind};
use radial_ns::monitors::{entropy_bound_eulerian, entropy_functional};
use radial_ns::par;
use radial_ns::params::FluidParams;
use radial_ns::solver::{run, uniform_times, SolverConfig};
use std::hint::black_box;

fn bench(c: &mut Criterion) {
    let params = FluidParams::default();
    let base = generated_data(&DataKind::gaussian_default(), 3, 4.0).unwrap();
    let data = prepare(&base, 0.1, 4.0, 512).unwrap();
    let cfg = SolverConfig { cells: 512, t_end: 0.1, output_times: uniform_times(0.1, 32), ..Default::default() };
    let states = run(&data, &params, &cfg).unwrap().states;

    let work = |s: &radial_ns::solver::LagrangianState| {
        let p = eulerian_profile(s, 2049);
        entropy_bound_eulerian(&p) + entropy_functional(s, &params).e
    };
    let mut g = c.benchmark_group("per_sample_monitors");
    g.bench_function("sequential", |b| b.iter(|| black_box(par::map_sequential(&states, work))));
    #[cfg(feature = "parallel")]
    g.bench_function("parallel", |b| b.iter(|| black_box(par::map_parallel(&states, work))));
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
