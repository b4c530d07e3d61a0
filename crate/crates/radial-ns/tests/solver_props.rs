use proptest::prelude::*;
use radial_ns::data::reconstruct_radius;
use radial_ns::monitors::entropy_functional;
use radial_ns::params::FluidParams;
use radial_ns::solver::{stable_dt, step, LagrangianState};

/// A smooth random perturbation of the constant state on 48 cells.
fn perturbed(amp_v: f64, amp_u: f64, amp_e: f64, phase: f64) -> LagrangianState {
    let mut s = LagrangianState::constant(0.2, 2.0, 3, 48);
    let nc = s.cells();
    for c in 0..nc {
        let x = (c as f64 + 0.5) / nc as f64;
        let w = (std::f64::consts::PI * x).sin().powi(2);
        s.v[c] = 1.0 + amp_v * w * (6.0 * x + phase).sin();
        s.e[c] = 1.0 + amp_e * w * (4.0 * x - phase).cos();
    }
    for j in 1..nc {
        let x = j as f64 / nc as f64;
        s.u[j] = amp_u * (std::f64::consts::PI * x).sin() * (3.0 * x + phase).cos();
    }
    s.r = reconstruct_radius(&s.v, s.a, s.n, s.dx);
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn step_keeps_structure(
        amp_v in 0.0f64..0.4,
        amp_u in -0.3f64..0.3,
        amp_e in 0.0f64..0.4,
        phase in 0.0f64..6.0,
        cfl in 0.1f64..1.0,
    ) {
        let params = FluidParams::default();
        let s0 = perturbed(amp_v, amp_u, amp_e, phase);
        let dt = stable_dt(&s0, &params, cfl);
        let (s1, _) = step(&s0, &params, dt).unwrap();
        prop_assert!(s1.is_admissible());
        prop_assert!(s1.mass_identity_residual() <= 1e-12);
        prop_assert_eq!(s1.u[0], 0.0);
        prop_assert_eq!(*s1.u.last().unwrap(), 0.0);
        let e0 = entropy_functional(&s0, &params);
        let e1 = entropy_functional(&s1, &params);
        prop_assert!(e1.d_heat >= 0.0 && e1.d_visc_bulk >= 0.0 && e1.d_visc_shear >= 0.0);
        prop_assert!(e1.e + dt * e1.dissipation() <= e0.e * (1.0 + 1e-10) + 1e-12);
        // total mass and the inner radius are fixed
        prop_assert_eq!(s1.r[0], s0.a);
    }
}

#[test]
fn constant_state_stationary() {
    let params = FluidParams::default();
    let s0 = LagrangianState::constant(0.1, 4.0, 3, 128);
    let cap = stable_dt(&s0, &params, 1.0);
    for frac in [0.1, 0.5, 1.0] {
        let mut s = s0.clone();
        for _ in 0..100 {
            s = step(&s, &params, frac * cap).unwrap().0;
        }
        let mut d = s0.clone();
        d.t = s.t;
        assert!(s.max_abs_diff(&d) <= 1e-12, "frac {frac}: {}", s.max_abs_diff(&d));
    }
}

#[test]
fn two_dimensional_step() {
    let params = FluidParams { n: 2, ..Default::default() };
    let mut s0 = LagrangianState::constant(0.2, 2.0, 2, 32);
    for j in 1..32 {
        s0.u[j] = 0.1 * (std::f64::consts::PI * j as f64 / 32.0).sin();
    }
    let dt = stable_dt(&s0, &params, 0.4);
    let (s1, _) = step(&s0, &params, dt).unwrap();
    assert!(s1.is_admissible());
    assert!(s1.mass_identity_residual() <= 1e-12);
}
