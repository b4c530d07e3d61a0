//! Data hierarchy: radial Cauchy data, mollified exterior data on `[a, R]`,
//! far-field truncation at total mass `k`, and Lagrangian data on `[0, k]`.
//!
//! Lagrangian data live on a staggered mass grid: radii and velocities on
//! the `N + 1` nodes `x_j = j k / N`, specific volume and internal energy as
//! cell averages on the `N` cells between them.

use crate::cutoff::{edge_cutoff, inner_blend};
use crate::interp::{linear, locate};
use crate::params::FluidParams;
use crate::scalar::{g_fn, psi};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DataError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invalid data: {0}")]
    Invalid(String),
}

/// Built-in initial profiles. Every profile equals `(1, 0, 1)` outside a
/// bounded radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataKind {
    Constant,
    GaussianBump {
        #[serde(default = "bump_amp")]
        amplitude: f64,
        #[serde(default = "bump_center")]
        center: f64,
        #[serde(default = "bump_width")]
        width: f64,
    },
    DiscontinuousShell {
        #[serde(default = "shell_inner_rho")]
        inner_rho: f64,
        #[serde(default = "shell_rho")]
        shell_rho: f64,
        #[serde(default = "shell_r_inner")]
        r_inner: f64,
        #[serde(default = "shell_r_outer")]
        r_outer: f64,
    },
}

fn bump_amp() -> f64 {
    1.0
}
fn bump_center() -> f64 {
    1.0
}
fn bump_width() -> f64 {
    0.15
}
fn shell_inner_rho() -> f64 {
    0.5
}
fn shell_rho() -> f64 {
    2.0
}
fn shell_r_inner() -> f64 {
    0.6
}
fn shell_r_outer() -> f64 {
    1.2
}

impl DataKind {
    pub fn gaussian_default() -> Self {
        DataKind::GaussianBump { amplitude: bump_amp(), center: bump_center(), width: bump_width() }
    }

    pub fn shell_default() -> Self {
        DataKind::DiscontinuousShell {
            inner_rho: shell_inner_rho(),
            shell_rho: shell_rho(),
            r_inner: shell_r_inner(),
            r_outer: shell_r_outer(),
        }
    }

    /// `(rho, u, e)` at radius `r`.
    pub fn sample(&self, r: f64) -> (f64, f64, f64) {
        match *self {
            DataKind::Constant => (1.0, 0.0, 1.0),
            DataKind::GaussianBump { amplitude, center, width } => {
                let s = (r - center) / width;
                let dev = amplitude * (-0.5 * s * s).exp() * crate::cutoff::xi(s.abs() - 3.0);
                (1.0 + dev, 0.0, 1.0)
            }
            DataKind::DiscontinuousShell { inner_rho, shell_rho, r_inner, r_outer } => {
                let rho = if r < r_inner {
                    inner_rho
                } else if r < r_outer {
                    shell_rho
                } else {
                    1.0
                };
                (rho, 0.0, 1.0)
            }
        }
    }
}

/// Spherically symmetric data on `[0, R]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialData {
    pub n: u32,
    pub r: Vec<f64>,
    pub rho0: Vec<f64>,
    pub u0: Vec<f64>,
    pub e0: Vec<f64>,
    pub cstar: f64,
}

impl RadialData {
    pub fn new(n: u32, r: Vec<f64>, rho0: Vec<f64>, u0: Vec<f64>, e0: Vec<f64>) -> Result<Self, DataError> {
        let len = r.len();
        if len < 2 || rho0.len() != len || u0.len() != len || e0.len() != len {
            return Err(DataError::Invalid("columns r, rho, u, e must have equal length >= 2".into()));
        }
        if !(r[0] >= 0.0) {
            return Err(DataError::Invalid("radial grid must start at r >= 0".into()));
        }
        if r.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(DataError::Invalid("radial grid must be strictly increasing".into()));
        }
        let all = r.iter().chain(&rho0).chain(&u0).chain(&e0);
        if all.clone().any(|v| !v.is_finite()) {
            return Err(DataError::Invalid("all samples must be finite".into()));
        }
        if rho0.iter().any(|&p| !(p > 0.0)) || e0.iter().any(|&e| !(e > 0.0)) {
            return Err(DataError::Invalid("density and internal energy must be positive".into()));
        }
        let rho_max = rho0.iter().cloned().fold(f64::MIN, f64::max);
        let rho_min = rho0.iter().cloned().fold(f64::MAX, f64::min);
        let e_min = e0.iter().cloned().fold(f64::MAX, f64::min);
        let cstar = rho_max.max(1.0 / rho_min).max(1.0 / e_min).max(1.0);
        Ok(RadialData { n, r, rho0, u0, e0, cstar })
    }

    pub fn generate(kind: &DataKind, n: u32, r_max: f64, points: usize) -> Result<Self, DataError> {
        if !(r_max > 0.0) || points < 2 {
            return Err(DataError::Config("generator needs r_max > 0 and at least 2 points".into()));
        }
        let h = r_max / (points - 1) as f64;
        let r: Vec<f64> = (0..points).map(|i| i as f64 * h).collect();
        let mut rho = Vec::with_capacity(points);
        let mut u = Vec::with_capacity(points);
        let mut e = Vec::with_capacity(points);
        for &ri in &r {
            let (a, b, c) = kind.sample(ri);
            rho.push(a);
            u.push(b);
            e.push(c);
        }
        RadialData::new(n, r, rho, u, e)
    }

    pub fn r_max(&self) -> f64 {
        *self.r.last().unwrap()
    }

    fn deviations_at(&self, s: f64) -> (f64, f64, f64) {
        // even extension for rho, e; odd for u
        let (x, sign) = if s < 0.0 { (-s, -1.0) } else { (s, 1.0) };
        let rho = linear(&self.r, &self.rho0, x);
        let u = linear(&self.r, &self.u0, x);
        let e = linear(&self.r, &self.e0, x);
        (rho - 1.0, sign * u, e - 1.0)
    }
}

/// Outer radius large enough that data with density at least `1/cstar`
/// holds total mass `k_max` beyond the inner radius.
pub fn default_r_max(n: u32, k_max: f64, cstar: f64) -> f64 {
    let nf = n as f64;
    (nf * cstar * (k_max + 1.0) + 1.0).powf(1.0 / nf) + 0.5
}

/// Smooth exterior data on `[a, R]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExteriorData {
    pub n: u32,
    pub a: f64,
    pub r: Vec<f64>,
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
    pub e: Vec<f64>,
}

impl ExteriorData {
    pub fn fields_at(&self, r: f64) -> (f64, f64, f64) {
        (linear(&self.r, &self.rho, r), linear(&self.r, &self.u, r), linear(&self.r, &self.e, r))
    }

    pub fn m(&self) -> f64 {
        self.n as f64 - 1.0
    }

    /// `int {rho(u^2/2 + psi(e)) + G(rho) + (rho-1)^2 + u^4 + (e-1)^2} r^m dr`
    /// by the trapezoid rule.
    pub fn entropy_integral(&self) -> f64 {
        let m = self.m();
        let dens: Vec<f64> = (0..self.r.len())
            .map(|i| {
                let (p, u, e) = (self.rho[i], self.u[i], self.e[i]);
                let val = p * (0.5 * u * u + psi(e)) + g_fn(p) + (p - 1.0).powi(2) + u.powi(4) + (e - 1.0).powi(2);
                val * self.r[i].powf(m)
            })
            .collect();
        trapezoid(&self.r, &dens)
    }
}

pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2).zip(ys.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1])).sum()
}

const KERNEL_INTERVALS: usize = 64;

fn mollifier_weights() -> (Vec<f64>, Vec<f64>) {
    // Simpson nodes on [-1, 1] for the bump exp(1/(z^2-1)), normalised to sum 1.
    let m = KERNEL_INTERVALS;
    let h = 2.0 / m as f64;
    let mut z = Vec::with_capacity(m + 1);
    let mut w = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let zi = -1.0 + i as f64 * h;
        let j = if zi.abs() < 1.0 { (1.0 / (zi * zi - 1.0)).exp() } else { 0.0 };
        let simpson = if i == 0 || i == m {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        z.push(zi);
        w.push(j * simpson);
    }
    let total: f64 = w.iter().sum();
    for wi in &mut w {
        *wi /= total;
    }
    (z, w)
}

/// Reflect, mollify on scale `a/2`, and blend to `(1, 0, 1)` on `[a, 2a]`.
pub fn mollify_extend(data: &RadialData, a: f64) -> Result<ExteriorData, DataError> {
    if !(a > 0.0 && a < 1.0) {
        return Err(DataError::Config(format!("inner radius must lie in (0, 1), got {a}")));
    }
    let r_max = data.r_max();
    if r_max <= 2.0 * a {
        return Err(DataError::Config("data radius must exceed 2a".into()));
    }
    let h_in = data.r.windows(2).map(|w| w[1] - w[0]).fold(f64::MAX, f64::min);
    let h = h_in.min(a / 32.0);
    let cells = ((r_max - a) / h).ceil() as usize;
    let h = (r_max - a) / cells as f64;
    let (kz, kw) = mollifier_weights();
    let delta = 0.5 * a;
    let len = cells + 1;
    let mut r = Vec::with_capacity(len);
    let mut rho = Vec::with_capacity(len);
    let mut u = Vec::with_capacity(len);
    let mut e = Vec::with_capacity(len);
    for i in 0..len {
        let ri = if i == cells { r_max } else { a + i as f64 * h };
        let chi = inner_blend(ri, a);
        let (mut dr, mut du, mut de) = (0.0, 0.0, 0.0);
        if chi != 0.0 {
            for (z, w) in kz.iter().zip(&kw) {
                if *w == 0.0 {
                    continue;
                }
                let (a1, b1, c1) = data.deviations_at(ri - delta * z);
                dr += w * a1;
                du += w * b1;
                de += w * c1;
            }
        }
        r.push(ri);
        rho.push(dr * chi + 1.0);
        u.push(du * chi);
        e.push(de * chi + 1.0);
    }
    Ok(ExteriorData { n: data.n, a, r, rho, u, e })
}

/// Cumulative mass `x(r) = int_a^r rho s^m ds` and its inverse, integrated
/// exactly for the piecewise-linear density of the samples.
#[derive(Debug, Clone)]
pub struct MassMap {
    pub n: u32,
    pub a: f64,
    r: Vec<f64>,
    rho: Vec<f64>,
    cum: Vec<f64>,
}

impl MassMap {
    pub fn new(data: &ExteriorData) -> Self {
        let mut cum = Vec::with_capacity(data.r.len());
        cum.push(0.0);
        let mut acc = 0.0;
        for i in 0..data.r.len() - 1 {
            acc += segment_mass(data.n, data.r[i], data.r[i + 1], data.rho[i], data.rho[i + 1], data.r[i + 1]);
            cum.push(acc);
        }
        MassMap { n: data.n, a: data.a, r: data.r.clone(), rho: data.rho.clone(), cum }
    }

    pub fn total_mass(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    pub fn mass_at(&self, r: f64) -> f64 {
        let i = locate(&self.r, r);
        let rr = r.clamp(self.r[i], self.r[i + 1]);
        self.cum[i] + segment_mass(self.n, self.r[i], self.r[i + 1], self.rho[i], self.rho[i + 1], rr)
    }

    /// Density `rho(r)` of the piecewise-linear samples.
    pub fn density(&self, r: f64) -> f64 {
        linear(&self.r, &self.rho, r)
    }

    /// Particle path `r(x)` with `|x(r) - x| <= 1e-12`.
    pub fn r_of(&self, x: f64) -> Result<f64, DataError> {
        if x == 0.0 {
            return Ok(self.a);
        }
        if !(x > 0.0) || x > self.total_mass() {
            return Err(DataError::Config(format!(
                "data carry mass {} which is less than the requested {x}; enlarge the data radius",
                self.total_mass()
            )));
        }
        let i = locate(&self.cum, x);
        let (mut lo, mut hi) = (self.r[i], self.r[i + 1]);
        let m = self.n as f64 - 1.0;
        let mut r = lo + (hi - lo) * (x - self.cum[i]) / (self.cum[i + 1] - self.cum[i]);
        for _ in 0..200 {
            let f = self.mass_at(r) - x;
            if f.abs() <= 1e-12 * x.max(1.0) * 1e-2 {
                break;
            }
            if f < 0.0 {
                lo = r;
            } else {
                hi = r;
            }
            let d = self.density(r) * r.powf(m);
            let newton = r - f / d;
            r = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if hi - lo <= 1e-16 * hi {
                break;
            }
        }
        Ok(r)
    }

    /// `D_x r = 1 / (r^m rho(r))` along the path.
    pub fn dr_dx(&self, x: f64) -> Result<f64, DataError> {
        let r = self.r_of(x)?;
        Ok(1.0 / (r.powf(self.n as f64 - 1.0) * self.density(r)))
    }
}

/// `int_{r0}^{r} rho(s) s^m ds` with `rho` linear between `(r0, p0)` and `(r1, p1)`.
fn segment_mass(n: u32, r0: f64, r1: f64, p0: f64, p1: f64, r: f64) -> f64 {
    let nf = n as f64;
    let slope = (p1 - p0) / (r1 - r0);
    let base = p0 - slope * r0;
    base * (r.powi(n as i32) - r0.powi(n as i32)) / nf
        + slope * (r.powi(n as i32 + 1) - r0.powi(n as i32 + 1)) / (nf + 1.0)
}

/// Far-field truncation at the radius holding mass `k`.
pub fn truncate_farfield(data: &ExteriorData, k: f64) -> Result<ExteriorData, DataError> {
    if !(k >= 1.0) {
        return Err(DataError::Config(format!("mass index must be >= 1, got {k}")));
    }
    let edge = MassMap::new(data).r_of(k)?;
    let mut out = data.clone();
    for i in 0..out.r.len() {
        let (p, u, e) = blend(data.rho[i], data.u[i], data.e[i], edge_cutoff(data.r[i], edge));
        out.rho[i] = p;
        out.u[i] = u;
        out.e[i] = e;
    }
    Ok(out)
}

#[inline]
fn blend(rho: f64, u: f64, e: f64, phi: f64) -> (f64, f64, f64) {
    if phi == 1.0 {
        (rho, u, e)
    } else if phi == 0.0 {
        (1.0, 0.0, 1.0)
    } else {
        ((rho - 1.0) * phi + 1.0, u * phi, (e - 1.0) * phi + 1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LagrangianData {
    pub n: u32,
    pub a: f64,
    pub k: f64,
    pub dx: f64,
    /// Node coordinates, length `N + 1`.
    pub x: Vec<f64>,
    /// Radii from the cell volumes, length `N + 1`.
    pub r0: Vec<f64>,
    /// Exterior particle path at the nodes, length `N + 1`.
    pub r_path: Vec<f64>,
    pub u0: Vec<f64>,
    /// Cell averages, length `N`.
    pub v0: Vec<f64>,
    pub e0: Vec<f64>,
}

impl LagrangianData {
    pub fn cells(&self) -> usize {
        self.v0.len()
    }
}

/// `r_j = (a^n + n sum_{c<j} dx v_c)^{1/n}`.
pub fn reconstruct_radius(v: &[f64], a: f64, n: u32, dx: f64) -> Vec<f64> {
    let nf = n as f64;
    let an = a.powf(nf);
    let mut r = Vec::with_capacity(v.len() + 1);
    r.push(a);
    let mut acc = 0.0;
    for &vc in v {
        acc += dx * vc;
        r.push((an + nf * acc).powf(1.0 / nf));
    }
    r
}

const GAUSS3: [(f64, f64); 3] =
    [(-0.774_596_669_241_483_4, 5.0 / 18.0), (0.0, 8.0 / 18.0), (0.774_596_669_241_483_4, 5.0 / 18.0)];

/// Truncate at mass `k` and map to the mass grid with `cells` cells.
pub fn to_lagrangian(data: &ExteriorData, k: f64, cells: usize) -> Result<LagrangianData, DataError> {
    if !(k >= 1.0) {
        return Err(DataError::Config(format!("mass index must be >= 1, got {k}")));
    }
    if cells < 4 {
        return Err(DataError::Config("need at least 4 cells".into()));
    }
    let map = MassMap::new(data);
    let edge = map.r_of(k)?;
    let truncated = |r: f64| {
        let (p, u, e) = data.fields_at(r);
        blend(p, u, e, edge_cutoff(r, edge))
    };
    let dx = k / cells as f64;
    let x: Vec<f64> = (0..=cells).map(|j| if j == cells { k } else { j as f64 * dx }).collect();
    let mut r_path = Vec::with_capacity(cells + 1);
    for &xj in &x {
        r_path.push(map.r_of(xj)?);
    }
    let mut u0: Vec<f64> = r_path.iter().map(|&r| truncated(r).1).collect();
    u0[0] = 0.0;
    u0[cells] = 0.0;
    let mut v0 = Vec::with_capacity(cells);
    let mut e0 = Vec::with_capacity(cells);
    for c in 0..cells {
        let mid = 0.5 * (x[c] + x[c + 1]);
        let half = 0.5 * (x[c + 1] - x[c]);
        let (mut va, mut ea) = (0.0, 0.0);
        for (g, w) in GAUSS3 {
            let (p, _, e) = truncated(map.r_of(mid + half * g)?);
            va += w * (1.0 / p);
            ea += w * e;
        }
        v0.push(va);
        e0.push(ea);
    }
    let r0 = reconstruct_radius(&v0, data.a, data.n, dx);
    Ok(LagrangianData { n: data.n, a: data.a, k, dx, x, r0, r_path, u0, v0, e0 })
}

/// Built-in profile sampled on `[0, R]` with `R` large enough for mass `k_max`.
pub fn generated_data(kind: &DataKind, n: u32, k_max: f64) -> Result<RadialData, DataError> {
    let probe = RadialData::generate(kind, n, 4.0, 801)?;
    let r_max = default_r_max(n, k_max, probe.cstar);
    let points = (r_max / 0.005).ceil() as usize + 1;
    RadialData::generate(kind, n, r_max, points)
}

/// Mollify at `a`, truncate at mass `k` and map to `cells` mass cells.
pub fn prepare(data: &RadialData, a: f64, k: f64, cells: usize) -> Result<LagrangianData, DataError> {
    let ext = mollify_extend(data, a)?;
    to_lagrangian(&ext, k, cells)
}

/// Integral over `[0, k]` of `u^2/2 + psi(e) + psi(v) + (v-1)^2 + u^4 + (e-1)^2`.
pub fn data_entropy_constant(data: &LagrangianData, _params: &FluidParams) -> f64 {
    let dx = data.dx;
    let cells: f64 = data
        .v0
        .iter()
        .zip(&data.e0)
        .map(|(&v, &e)| psi(e) + psi(v) + (v - 1.0).powi(2) + (e - 1.0).powi(2))
        .sum::<f64>()
        * dx;
    let nodes = node_trapezoid(&data.u0, dx, |u| 0.5 * u * u + u.powi(4));
    cells + nodes
}

/// Trapezoid rule on the uniform node grid of `f(values)`.
pub fn node_trapezoid(vals: &[f64], dx: f64, f: impl Fn(f64) -> f64) -> f64 {
    let last = vals.len() - 1;
    let mut s = 0.0;
    for (j, &v) in vals.iter().enumerate() {
        let w = if j == 0 || j == last { 0.5 } else { 1.0 };
        s += w * f(v);
    }
    s * dx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(n: u32) -> RadialData {
        RadialData::generate(&DataKind::Constant, n, 3.0, 601).unwrap()
    }

    #[test]
    fn constant_data_passes_through() {
        let ext = mollify_extend(&constant(3), 0.1).unwrap();
        assert!(ext.rho.iter().all(|&p| p == 1.0));
        assert!(ext.u.iter().all(|&u| u == 0.0));
        assert!(ext.e.iter().all(|&e| e == 1.0));
        let tr = truncate_farfield(&ext, 2.0).unwrap();
        assert_eq!(tr, ext);
        let lag = to_lagrangian(&ext, 2.0, 64).unwrap();
        assert!(lag.v0.iter().all(|&v| (v - 1.0).abs() < 1e-13));
        assert!(lag.e0.iter().all(|&e| e == 1.0));
        assert!(lag.u0.iter().all(|&u| u == 0.0));
        for (x, r) in lag.x.iter().zip(&lag.r_path) {
            let exact = (0.1f64.powi(3) + 3.0 * x).cbrt();
            assert!((r - exact).abs() < 1e-9, "{r} {exact}");
        }
        assert!(data_entropy_constant(&lag, &FluidParams::default()).abs() < 1e-12);
    }

    #[test]
    fn constant_energy_level_formula() {
        let k = 3.0;
        let cells = 30;
        let e = std::f64::consts::E;
        let lag = LagrangianData {
            n: 3,
            a: 0.1,
            k,
            dx: k / cells as f64,
            x: (0..=cells).map(|j| j as f64 * 0.1).collect(),
            r0: vec![0.0; cells + 1],
            r_path: vec![0.0; cells + 1],
            u0: vec![0.0; cells + 1],
            v0: vec![1.0; cells],
            e0: vec![e; cells],
        };
        let c0 = data_entropy_constant(&lag, &FluidParams::default());
        let expected = k * (e - 2.0) + k * (e - 1.0).powi(2);
        assert!((c0 - expected).abs() < 1e-12);
    }

    #[test]
    fn missing_mass_is_a_config_error() {
        let ext = mollify_extend(&constant(3), 0.1).unwrap();
        assert!(matches!(to_lagrangian(&ext, 100.0, 64), Err(DataError::Config(_))));
        assert!(matches!(mollify_extend(&constant(3), 1.5), Err(DataError::Config(_))));
    }
}
