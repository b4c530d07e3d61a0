use proptest::prelude::*;
use radial_ns::scalar::{
    branch_inverse, convex_eval, envelope_bounds, f1, f2, f3, omega_bounds, Branch, ConvexFnId, EnvelopeParams,
    OmegaKind,
};

/// Round-trip residual, relative above 1 and absolute below.
fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

proptest! {
    #[test]
    fn psi_round_trip(ln_y in -20.0f64..5.0) {
        let y = ln_y.exp();
        for br in [Branch::Left, Branch::Right] {
            let z = branch_inverse(ConvexFnId::Psi, br, y).unwrap();
            prop_assert!(rel(convex_eval(ConvexFnId::Psi, z).unwrap(), y) <= 1e-12);
            match br {
                Branch::Left => prop_assert!(z <= 1.0),
                Branch::Right => prop_assert!(z >= 1.0),
            }
        }
    }

    #[test]
    fn g_round_trip(ln_y in -20.0f64..5.0) {
        let y = ln_y.exp();
        let z = branch_inverse(ConvexFnId::G, Branch::Right, y).unwrap();
        prop_assert!(rel(convex_eval(ConvexFnId::G, z).unwrap(), y) <= 1e-12);
        if y < 1.0 {
            let z = branch_inverse(ConvexFnId::G, Branch::Left, y).unwrap();
            prop_assert!(z < 1.0);
            prop_assert!(rel(convex_eval(ConvexFnId::G, z).unwrap(), y) <= 1e-12);
        }
    }

    #[test]
    fn inverses_are_monotone(y1 in 1e-6f64..10.0, y2 in 1e-6f64..10.0) {
        let (lo, hi) = if y1 < y2 { (y1, y2) } else { (y2, y1) };
        let r = |y| branch_inverse(ConvexFnId::Psi, Branch::Right, y).unwrap();
        let l = |y| branch_inverse(ConvexFnId::Psi, Branch::Left, y).unwrap();
        prop_assert!(r(lo) <= r(hi));
        prop_assert!(l(lo) >= l(hi));
    }

    #[test]
    fn set_bounds_monotone_in_measure(z in 0.1f64..10.0, y in 1e-6f64..1.0) {
        for f in [f1, f2, f3] {
            prop_assert!(f(0.5 * y, z) <= f(y, z) * (1.0 + 1e-12));
        }
        let w1 = omega_bounds(y, z, OmegaKind::Omega1).unwrap();
        let w2 = omega_bounds(y, z, OmegaKind::Omega2).unwrap();
        prop_assert!(w1 >= 0.0 && w2 >= 0.0);
    }

    #[test]
    fn envelope_widens_in_time(t in 0.0f64..1.0, dt in 0.01f64..1.0, c0 in 1.0f64..3.0) {
        let p = EnvelopeParams { a: 0.1, c0, n: 3, beta: 0.3 };
        let e1 = envelope_bounds(&p, 0.5, t).unwrap();
        let e2 = envelope_bounds(&p, 0.5, t + dt).unwrap();
        prop_assert!(e2.ln_upper >= e1.ln_upper);
        prop_assert!(e2.ln_lower <= e1.ln_lower);
        prop_assert!(e1.ln_lower <= e1.ln_upper);
    }
}

#[test]
fn limits_decrease_on_log_grid() {
    for z in [0.1, 1.0, 10.0] {
        for f in [f1, f2, f3] {
            let vals: Vec<f64> = (1..=8).map(|p| f(10f64.powi(-p), z)).collect();
            assert!(vals.windows(2).all(|w| w[1] < w[0]), "z={z}: {vals:?}");
        }
    }
}

#[test]
fn domain_errors() {
    assert!(convex_eval(ConvexFnId::Psi, 0.0).is_err());
    assert!(convex_eval(ConvexFnId::G, -1.0).is_err());
    assert!(branch_inverse(ConvexFnId::Psi, Branch::Left, -0.5).is_err());
    assert!(omega_bounds(-1.0, 1.0, OmegaKind::F1).is_err());
    assert!(envelope_bounds(&EnvelopeParams { a: 0.1, c0: 1.0, n: 3, beta: 0.3 }, 0.0, 0.0).is_err());
}
