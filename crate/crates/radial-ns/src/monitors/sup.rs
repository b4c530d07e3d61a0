//! Time-integrated sup norms away from the origin. Report-only: the
//! constants in front of the `eta` powers are not explicit.

use super::MonitorError;
use crate::solver::LagrangianState;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupReport {
    pub eta: f64,
    /// `int_0^T sup_{r >= eta} |u|/sqrt(e) dt`
    pub u_over_sqrt_e: f64,
    /// `int_0^T sup_{r >= eta} ln max(1, e) dt`
    pub log_e_plus: f64,
    /// `int_0^T sup_{r >= eta} ln max(1, 1/e) dt`
    pub log_e_minus: f64,
    /// `eta^{(2-n)/2} + eta^{2-n}`
    pub predicted_u_scale: f64,
    /// `1 + sqrt|ln eta|` for `n = 2`, `eta^{2-n}` for `n = 3`.
    pub predicted_log_scale: f64,
}

fn trapezoid_in_time(ts: &[f64], ys: &[f64]) -> f64 {
    ts.windows(2).zip(ys.windows(2)).map(|(t, y)| 0.5 * (t[1] - t[0]) * (y[0] + y[1])).sum()
}

/// Requires `a < eta < 1`. Uses the stored states in time order.
pub fn sup_estimates(states: &[LagrangianState], eta: f64) -> Result<SupReport, MonitorError> {
    let first = states.first().ok_or_else(|| MonitorError::InsufficientData("no states".into()))?;
    if !(eta > first.a && eta < 1.0) {
        return Err(MonitorError::Domain(format!("eta must lie in (a, 1) = ({}, 1), got {eta}", first.a)));
    }
    let n = first.n as f64;
    let mut ts = Vec::with_capacity(states.len());
    let (mut su, mut sp, mut sm) = (Vec::new(), Vec::new(), Vec::new());
    for s in states {
        let cells = s.cells();
        let (mut bu, mut bp, mut bm) = (0.0f64, 0.0f64, 0.0f64);
        for j in 1..cells {
            if s.r[j] < eta {
                continue;
            }
            let e_node = 0.5 * (s.e[j - 1] + s.e[j]);
            bu = bu.max(s.u[j].abs() / e_node.sqrt());
        }
        for c in 0..cells {
            if s.r[c + 1] < eta {
                continue;
            }
            bp = bp.max(s.e[c].max(1.0).ln());
            bm = bm.max((1.0 / s.e[c]).max(1.0).ln());
        }
        ts.push(s.t);
        su.push(bu);
        sp.push(bp);
        sm.push(bm);
    }
    let log_scale = if first.n == 2 { 1.0 + eta.ln().abs().sqrt() } else { eta.powf(2.0 - n) };
    Ok(SupReport {
        eta,
        u_over_sqrt_e: trapezoid_in_time(&ts, &su),
        log_e_plus: trapezoid_in_time(&ts, &sp),
        log_e_minus: trapezoid_in_time(&ts, &sm),
        predicted_u_scale: eta.powf((2.0 - n) / 2.0) + eta.powf(2.0 - n),
        predicted_log_scale: log_scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_trajectory_gives_zero() {
        let mut a = LagrangianState::constant(0.1, 4.0, 3, 32);
        let mut b = a.clone();
        b.t = 1.0;
        a.t = 0.0;
        let rep = sup_estimates(&[a.clone(), b], 0.5).unwrap();
        assert_eq!((rep.u_over_sqrt_e, rep.log_e_plus, rep.log_e_minus), (0.0, 0.0, 0.0));
        assert!(sup_estimates(&[a.clone()], 0.05).is_err());
        assert!(sup_estimates(&[a], 1.0).is_err());
    }
}
