//! Convex entropy functions, their branch inverses, the explicit density
//! envelope and the set-function bounds built from them.
//!
//! All three functions are strictly convex on `(0, inf)`:
//!
//! * `G(z) = 1 - z + z ln z`, minimum 0 at `z = 1`,
//! * `psi(z) = z - 1 - ln z`, minimum 0 at `z = 1`,
//! * `H(z) = z ln z`, minimum `-1/e` at `z = 1/e`.
//!
//! Inverses are computed by bracketed bisection followed by a few Newton
//! steps. Left branches bisect in `ln z` so that very small roots keep full
//! relative precision.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalarError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConvexFnId {
    G,
    Psi,
    H,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Left,
    Right,
}

impl ConvexFnId {
    pub fn argmin(self) -> f64 {
        match self {
            ConvexFnId::G | ConvexFnId::Psi => 1.0,
            ConvexFnId::H => (-1.0f64).exp(),
        }
    }

    pub fn min_value(self) -> f64 {
        match self {
            ConvexFnId::G | ConvexFnId::Psi => 0.0,
            ConvexFnId::H => -(-1.0f64).exp(),
        }
    }

    /// Supremum of the left branch's range (the value as `z -> 0+`).
    fn left_sup(self) -> f64 {
        match self {
            ConvexFnId::G => 1.0,
            ConvexFnId::Psi => f64::INFINITY,
            ConvexFnId::H => 0.0,
        }
    }

    fn eval_unchecked(self, z: f64) -> f64 {
        match self {
            ConvexFnId::G => {
                if z == 1.0 {
                    0.0
                } else {
                    1.0 - z + z * z.ln()
                }
            }
            ConvexFnId::Psi => {
                if z == 1.0 {
                    0.0
                } else {
                    z - 1.0 - z.ln()
                }
            }
            ConvexFnId::H => z * z.ln(),
        }
    }

    fn deriv(self, z: f64) -> f64 {
        match self {
            ConvexFnId::G => z.ln(),
            ConvexFnId::Psi => 1.0 - 1.0 / z,
            ConvexFnId::H => z.ln() + 1.0,
        }
    }
}

pub fn convex_eval(f: ConvexFnId, zeta: f64) -> Result<f64, ScalarError> {
    if !(zeta > 0.0) || !zeta.is_finite() {
        return Err(ScalarError::Domain(format!("{f:?} requires a finite positive argument, got {zeta}")));
    }
    Ok(f.eval_unchecked(zeta))
}

/// `psi` without the domain check, for hot loops over validated fields.
#[inline]
pub fn psi(z: f64) -> f64 {
    ConvexFnId::Psi.eval_unchecked(z)
}

#[inline]
pub fn g_fn(z: f64) -> f64 {
    ConvexFnId::G.eval_unchecked(z)
}

const BISECT_WIDTH: f64 = 1e-14;
const NEWTON_POLISH: usize = 5;
const LARGE_ARG: f64 = 700.0;

pub fn branch_inverse(f: ConvexFnId, branch: Branch, y: f64) -> Result<f64, ScalarError> {
    if y.is_nan() {
        return Err(ScalarError::Domain("NaN level".into()));
    }
    if y < f.min_value() {
        return Err(ScalarError::Domain(format!("{f:?} has no preimage below its minimum {}, got {y}", f.min_value())));
    }
    if y == f.min_value() {
        return Ok(f.argmin());
    }
    match branch {
        Branch::Right => Ok(right_inverse(f, y)),
        Branch::Left => {
            if f == ConvexFnId::H {
                return Err(ScalarError::Unsupported("left branch of H is not provided".into()));
            }
            if y >= f.left_sup() {
                return Err(ScalarError::Domain(format!(
                    "{f:?} left branch only reaches levels below {}, got {y}",
                    f.left_sup()
                )));
            }
            Ok(left_inverse(f, y))
        }
    }
}

fn right_inverse(f: ConvexFnId, y: f64) -> f64 {
    if y > LARGE_ARG {
        return large_right_inverse(f, y);
    }
    let lo0 = f.argmin();
    let mut hi = 2.0 * lo0;
    while f.eval_unchecked(hi) < y {
        hi *= 2.0;
    }
    let mut lo = hi / 2.0;
    if lo < lo0 {
        lo = lo0;
    }
    while hi - lo > BISECT_WIDTH * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f.eval_unchecked(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    newton_polish(f, y, 0.5 * (lo + hi), lo0, f64::INFINITY)
}

/// Fixed-point iterations that avoid any exponential of the level.
fn large_right_inverse(f: ConvexFnId, y: f64) -> f64 {
    let mut z = match f {
        ConvexFnId::Psi => y,
        ConvexFnId::G | ConvexFnId::H => y / y.ln(),
    };
    for _ in 0..200 {
        let next = match f {
            ConvexFnId::Psi => 1.0 + y + z.ln(),
            ConvexFnId::G => (y - 1.0) / (z.ln() - 1.0),
            ConvexFnId::H => y / z.ln(),
        };
        let done = (next - z).abs() <= 1e-15 * next;
        z = next;
        if done {
            break;
        }
    }
    newton_polish(f, y, z, f.argmin(), f64::INFINITY)
}

fn newton_polish(f: ConvexFnId, y: f64, mut z: f64, lo: f64, hi: f64) -> f64 {
    for _ in 0..NEWTON_POLISH {
        let r = f.eval_unchecked(z) - y;
        let d = f.deriv(z);
        if r == 0.0 || d == 0.0 {
            break;
        }
        let next = z - r / d;
        if !(next > lo && next < hi) {
            break;
        }
        if (f.eval_unchecked(next) - y).abs() > r.abs() {
            break;
        }
        z = next;
    }
    z
}

/// `f(e^s)` written in terms of `s` so that `e^s` underflowing to zero
/// does not produce `0 * -inf`.
fn eval_log(f: ConvexFnId, s: f64) -> f64 {
    let z = s.exp();
    match f {
        ConvexFnId::G => 1.0 - z + z * s,
        ConvexFnId::Psi => z - 1.0 - s,
        ConvexFnId::H => z * s,
    }
}

fn left_inverse(f: ConvexFnId, y: f64) -> f64 {
    // bisection in s = ln z on (-inf, ln argmin]
    let g = |s: f64| eval_log(f, s);
    let hi0 = f.argmin().ln();
    let mut step = 1.0;
    let mut lo = hi0 - step;
    while g(lo) < y {
        step *= 2.0;
        lo = hi0 - step;
    }
    let mut hi = (hi0 - step / 2.0).min(hi0);
    if step == 1.0 {
        hi = hi0;
    }
    while hi - lo > BISECT_WIDTH * lo.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < y {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // Newton on s: d/ds f(e^s) = f'(z) z
    let mut s = 0.5 * (lo + hi);
    for _ in 0..NEWTON_POLISH {
        let z = s.exp();
        let r = eval_log(f, s) - y;
        let d = f.deriv(z) * z;
        if r == 0.0 || d == 0.0 {
            break;
        }
        let next = s - r / d;
        if !(next < hi0) || (g(next) - y).abs() > r.abs() {
            break;
        }
        s = next;
    }
    s.exp()
}

pub fn psi_left_inv(y: f64) -> f64 {
    branch_inverse(ConvexFnId::Psi, Branch::Left, y).unwrap_or(0.0)
}

pub fn psi_right_inv(y: f64) -> f64 {
    branch_inverse(ConvexFnId::Psi, Branch::Right, y).unwrap_or(f64::INFINITY)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeParams {
    pub a: f64,
    pub c0: f64,
    pub n: u32,
    pub beta: f64,
}

impl EnvelopeParams {
    pub fn m(&self) -> f64 {
        self.n as f64 - 1.0
    }
}

/// Lower and upper specific-volume envelopes together with their natural
/// logarithms. The plain values overflow to `inf` or underflow to `0` for
/// the small `z` typical of interior monitoring; the logarithms stay
/// finite longer and are what bound checks compare against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Envelope {
    pub v_lower: f64,
    pub v_upper: f64,
    pub ln_lower: f64,
    pub ln_upper: f64,
    pub h: f64,
}

pub fn envelope_h(p: &EnvelopeParams, z: f64) -> f64 {
    let n = p.n as f64;
    let base = p.a.powf(n) + n * z * psi_left_inv(p.c0 / z);
    base.powf(-2.0 * p.m() / n)
}

pub fn envelope_bounds(p: &EnvelopeParams, z: f64, t: f64) -> Result<Envelope, ScalarError> {
    if !(z > 0.0) {
        return Err(ScalarError::Domain(format!("envelope needs z > 0, got {z}")));
    }
    if !(t >= 0.0) {
        return Err(ScalarError::Domain(format!("envelope needs t >= 0, got {t}")));
    }
    let n = p.n as f64;
    let m = p.m();
    let c0 = p.c0;
    let h = envelope_h(p, z);
    // ln f = C0 h
    let ln_f = c0 * h;
    let f = ln_f.exp();
    // ln Gamma
    let ln_gamma = -(m * c0 * t / p.beta) * h.powf(n / (2.0 * m));
    let inner = if t == 0.0 { c0 * h * f } else { c0 * t * f + c0 * (1.0 + t) * h * f * (c0 * t * f).exp() };
    let ln_upper = c0.ln() + 2.0 * (1.0 + t).ln() + ln_f + inner;
    let quad = if t == 0.0 { 0.0 } else { t * c0 * f * f };
    let ln_lower = c0.ln() - (1.0 + t).ln() - ln_f - quad + ln_gamma;
    Ok(Envelope { v_lower: ln_lower.exp(), v_upper: ln_upper.exp(), ln_lower, ln_upper, h })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OmegaKind {
    F1,
    F2,
    F3,
    Omega1,
    Omega2,
}

/// `f1(y; z) = y G+^{-1}(z/y)`.
pub fn f1(y: f64, z: f64) -> f64 {
    if y == 0.0 {
        return 0.0;
    }
    y * right_inverse(ConvexFnId::G, z / y)
}

/// `f2(y; z) = y psi+^{-1}(z/y) - z`.
pub fn f2(y: f64, z: f64) -> f64 {
    if y == 0.0 {
        return 0.0;
    }
    y * right_inverse(ConvexFnId::Psi, z / y) - z
}

/// `f3(y; z) = y H+^{-1}(z/y)`.
pub fn f3(y: f64, z: f64) -> f64 {
    if y == 0.0 {
        return 0.0;
    }
    y * right_inverse(ConvexFnId::H, z / y)
}

/// Closed-form `y`-derivatives of `f1`, `f2`, `f3`.
pub fn omega_slope(kind: OmegaKind, y: f64, z: f64) -> Result<f64, ScalarError> {
    if !(y > 0.0) || !(z > 0.0) {
        return Err(ScalarError::Domain("slope needs y > 0 and z > 0".into()));
    }
    let q = z / y;
    Ok(match kind {
        OmegaKind::F1 | OmegaKind::Omega1 => {
            let w = right_inverse(ConvexFnId::G, q);
            (w - 1.0) / w.ln()
        }
        OmegaKind::F2 | OmegaKind::Omega2 => {
            let w = right_inverse(ConvexFnId::Psi, q);
            w * w.ln() / (w - 1.0)
        }
        OmegaKind::F3 => {
            let w = right_inverse(ConvexFnId::H, q);
            w / (1.0 + w.ln())
        }
    })
}

/// Set-function bounds. `set_measure` is `int_E r^m dr`.
pub fn omega_bounds(set_measure: f64, z: f64, which: OmegaKind) -> Result<f64, ScalarError> {
    if !(set_measure >= 0.0) {
        return Err(ScalarError::Domain(format!("set measure must be nonnegative, got {set_measure}")));
    }
    if !(z > 0.0) {
        return Err(ScalarError::Domain(format!("level z must be positive, got {z}")));
    }
    if set_measure == 0.0 {
        return Ok(0.0);
    }
    Ok(match which {
        OmegaKind::F1 | OmegaKind::Omega1 => f1(set_measure, z),
        OmegaKind::F2 => f2(set_measure, z),
        OmegaKind::F3 => f3(set_measure, z),
        OmegaKind::Omega2 => f2(f1(set_measure, z), z),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minima_and_simple_values() {
        assert_eq!(convex_eval(ConvexFnId::Psi, 1.0).unwrap(), 0.0);
        assert_eq!(convex_eval(ConvexFnId::G, 1.0).unwrap(), 0.0);
        let e = std::f64::consts::E;
        assert!((convex_eval(ConvexFnId::G, e).unwrap() - 1.0).abs() < 1e-15);
        let h = convex_eval(ConvexFnId::H, 1.0 / e).unwrap();
        assert!((h + 1.0 / e).abs() < 1e-16);
        assert!(convex_eval(ConvexFnId::Psi, 0.0).is_err());
        assert!(convex_eval(ConvexFnId::G, -1.0).is_err());
    }

    #[test]
    fn psi_branches_at_zero() {
        assert_eq!(branch_inverse(ConvexFnId::Psi, Branch::Right, 0.0).unwrap(), 1.0);
        assert_eq!(branch_inverse(ConvexFnId::Psi, Branch::Left, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn psi_right_at_one_matches_plain_bisection() {
        let mut lo = 1.0f64;
        let mut hi = 10.0f64;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid - 1.0 - mid.ln() < 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let z = branch_inverse(ConvexFnId::Psi, Branch::Right, 1.0).unwrap();
        assert!((z - lo).abs() < 1e-12);
        assert!((z - 3.1462).abs() < 1e-4);
    }

    #[test]
    fn h_left_unsupported_and_range_errors() {
        assert!(matches!(branch_inverse(ConvexFnId::H, Branch::Left, 0.1), Err(ScalarError::Unsupported(_))));
        assert!(branch_inverse(ConvexFnId::Psi, Branch::Right, -1e-3).is_err());
        assert!(branch_inverse(ConvexFnId::H, Branch::Right, -0.5).is_err());
        assert!(branch_inverse(ConvexFnId::G, Branch::Left, 1.5).is_err());
    }

    #[test]
    fn large_argument_guard_round_trips() {
        for &y in &[701.0, 1e4, 1e8, 1e12] {
            for f in [ConvexFnId::G, ConvexFnId::Psi, ConvexFnId::H] {
                let z = branch_inverse(f, Branch::Right, y).unwrap();
                let back = f.eval_unchecked(z);
                assert!((back - y).abs() <= 1e-14 * y, "{f:?} {y} {back}");
            }
        }
    }

    #[test]
    fn gamma_is_one_at_t_zero() {
        let p = EnvelopeParams { a: 0.1, c0: 0.5, n: 3, beta: 0.3 };
        let env = envelope_bounds(&p, 1.0, 0.0).unwrap();
        let h = envelope_h(&p, 1.0);
        let f = (p.c0 * h).exp();
        assert!((env.v_lower - p.c0 / f).abs() < 1e-12 * env.v_lower.max(1e-300));
        let upper = p.c0 * f * (p.c0 * h * f).exp();
        assert!((env.v_upper - upper).abs() <= 1e-12 * upper);
    }

    #[test]
    fn omega_examples() {
        let z = 0.7;
        let w = omega_bounds(1.0 / 3.0, z, OmegaKind::Omega1).unwrap();
        let g = branch_inverse(ConvexFnId::G, Branch::Right, 3.0 * z).unwrap();
        assert!((w - g / 3.0).abs() < 1e-14);
        assert_eq!(omega_bounds(0.0, 1.0, OmegaKind::Omega2).unwrap(), 0.0);
        assert!(omega_bounds(-1.0, 1.0, OmegaKind::F1).is_err());
        let mut prev = f64::INFINITY;
        for k in 1..=8 {
            let v = f1(10f64.powi(-k), 1.0);
            assert!(v < prev);
            prev = v;
        }
    }
}
