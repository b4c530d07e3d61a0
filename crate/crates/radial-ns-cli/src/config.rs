//! TOML run configuration. Every section is optional; unknown keys are
//! rejected.

use radial_ns::data::{generated_data, DataKind, RadialData};
use radial_ns::monitors::SuiteOptions;
use radial_ns::params::FluidParams;
use radial_ns::solver::{uniform_times, Mode, SolverConfig};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Parse(String),
    #[error("invalid config:\n  {}", .0.join("\n  "))]
    Invalid(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FluidSection {
    pub gamma: f64,
    pub mu: f64,
    pub lambda: f64,
    pub kappa: f64,
    pub n: u32,
    pub gas_constant: f64,
}

impl Default for FluidSection {
    fn default() -> Self {
        let p = FluidParams::default();
        FluidSection {
            gamma: p.gamma,
            mu: p.mu,
            lambda: p.lambda,
            kappa: p.kappa,
            n: p.n,
            gas_constant: p.gas_constant,
        }
    }
}

impl FluidSection {
    pub fn params(&self) -> FluidParams {
        FluidParams {
            gamma: self.gamma,
            mu: self.mu,
            lambda: self.lambda,
            kappa: self.kappa,
            n: self.n,
            gas_constant: self.gas_constant,
        }
    }
}

/// Built-in profile or a CSV file with columns `r,rho,u,e`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum DataSpec {
    Builtin(DataKind),
    File { path: PathBuf },
}

impl Default for DataSpec {
    fn default() -> Self {
        DataSpec::Builtin(DataKind::gaussian_default())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileData {
    #[allow(dead_code)]
    kind: String,
    path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub a: f64,
    pub k: f64,
    pub cells: usize,
    pub t_end: f64,
    pub cfl: f64,
    pub dt_min: f64,
    /// Uniform samples including both ends; ignored when `output_times` is set.
    pub samples: usize,
    pub output_times: Option<Vec<f64>>,
    pub profile_points: usize,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            a: 0.1,
            k: 4.0,
            cells: 1024,
            t_end: 0.5,
            cfl: 0.4,
            dt_min: 1e-10,
            samples: 16,
            output_times: None,
            profile_points: 2049,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MonitorSection {
    pub envelope_eps: f64,
    pub sup_eta: f64,
    pub high_order_y: f64,
    pub intervals: usize,
}

impl Default for MonitorSection {
    fn default() -> Self {
        let s = SuiteOptions::default();
        MonitorSection {
            envelope_eps: s.envelope_eps,
            sup_eta: s.sup_eta,
            high_order_y: s.high_order_y,
            intervals: s.intervals,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FamilySection {
    pub a: Vec<f64>,
    pub k: Vec<f64>,
    pub holder_eps: Vec<f64>,
    pub holder_points: usize,
}

impl Default for FamilySection {
    fn default() -> Self {
        FamilySection { a: vec![0.05, 0.1, 0.2], k: vec![4.0], holder_eps: vec![0.5], holder_points: 1025 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeakSection {
    pub cells: Vec<usize>,
    /// Eulerian quadrature points per mass cell.
    pub points_per_cell: usize,
}

impl Default for WeakSection {
    fn default() -> Self {
        WeakSection { cells: vec![256, 512, 1024], points_per_cell: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub mode: Mode,
    pub fluid: FluidSection,
    pub data: DataSpec,
    pub run: RunSection,
    pub monitors: MonitorSection,
    pub family: FamilySection,
    pub weak: WeakSection,
    /// sha256 of the data file, when the data come from a file.
    pub data_digest: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    mode: Mode,
    #[serde(default)]
    fluid: FluidSection,
    data: Option<toml::Table>,
    #[serde(default)]
    run: RunSection,
    #[serde(default)]
    monitors: MonitorSection,
    #[serde(default)]
    family: FamilySection,
    #[serde(default)]
    weak: WeakSection,
}

pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.into(), source })?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_config_str(&text, base)
}

/// Parse and validate; relative data paths resolve against `base`.
pub fn parse_config_str(text: &str, base: &Path) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    let data = match raw.data {
        None => DataSpec::default(),
        Some(table) => {
            if table.get("kind").and_then(|k| k.as_str()) == Some("file") {
                let f: FileData =
                    table.try_into().map_err(|e: toml::de::Error| ConfigError::Parse(format!("[data]: {e}")))?;
                let path = if f.path.is_absolute() { f.path } else { base.join(f.path) };
                DataSpec::File { path }
            } else {
                let kind: DataKind =
                    table.try_into().map_err(|e: toml::de::Error| ConfigError::Parse(format!("[data]: {e}")))?;
                DataSpec::Builtin(kind)
            }
        }
    };
    let mut cfg = RunConfig {
        seed: raw.seed,
        mode: raw.mode,
        fluid: raw.fluid,
        data,
        run: raw.run,
        monitors: raw.monitors,
        family: raw.family,
        weak: raw.weak,
        data_digest: None,
    };
    if let DataSpec::File { path } = &cfg.data {
        match std::fs::read(path) {
            Ok(bytes) => cfg.data_digest = Some(hex::encode(Sha256::digest(&bytes))),
            Err(e) => return Err(ConfigError::Invalid(vec![format!("data file {}: {e}", path.display())])),
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn check_list(errs: &mut Vec<String>, name: &str, xs: &[f64], lo: f64) {
    if xs.is_empty() {
        errs.push(format!("{name} must be nonempty"));
    }
    if xs.windows(2).any(|w| !(w[0] < w[1])) {
        errs.push(format!("{name} must be strictly increasing"));
    }
    if xs.iter().any(|&x| !(x >= lo) || !x.is_finite()) {
        errs.push(format!("{name} entries must be >= {lo}"));
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut errs: Vec<String> = match self.fluid.params().validate() {
            Ok(()) => Vec::new(),
            Err(es) => es.iter().map(|e| format!("[fluid] {e}")).collect(),
        };
        let r = &self.run;
        if !(r.a > 0.0) {
            errs.push(format!("[run] inner radius a must be positive, got {}", r.a));
        }
        if !(r.k >= 1.0) {
            errs.push(format!("[run] total mass k must be >= 1, got {}", r.k));
        }
        if r.cells < 8 {
            errs.push(format!("[run] cells must be >= 8, got {}", r.cells));
        }
        if !(r.t_end > 0.0) || !r.t_end.is_finite() {
            errs.push(format!("[run] t_end must be positive, got {}", r.t_end));
        }
        if !(r.cfl > 0.0) {
            errs.push(format!("[run] cfl must be positive, got {}", r.cfl));
        }
        if !(r.dt_min > 0.0) {
            errs.push(format!("[run] dt_min must be positive, got {}", r.dt_min));
        }
        if r.output_times.is_none() && r.samples < 3 {
            errs.push("[run] samples must be >= 3".into());
        }
        if let Some(ts) = &r.output_times {
            if ts.iter().any(|&t| !(t >= 0.0 && t <= r.t_end)) {
                errs.push("[run] output_times must lie in [0, t_end]".into());
            }
        }
        if r.profile_points < 16 {
            errs.push("[run] profile_points must be >= 16".into());
        }
        let m = &self.monitors;
        if !(m.envelope_eps > 0.0) {
            errs.push("[monitors] envelope_eps must be positive".into());
        }
        if !(m.sup_eta > 0.0 && m.sup_eta < 1.0) {
            errs.push("[monitors] sup_eta must lie in (0, 1)".into());
        }
        if !(m.high_order_y > 0.0) {
            errs.push("[monitors] high_order_y must be positive".into());
        }
        let f = &self.family;
        check_list(&mut errs, "[family] a", &f.a, f64::MIN_POSITIVE);
        check_list(&mut errs, "[family] k", &f.k, 1.0);
        if f.holder_eps.iter().any(|&e| !(e > 0.0)) {
            errs.push("[family] holder_eps entries must be positive".into());
        }
        let w = &self.weak;
        if w.cells.len() < 2 || w.cells.windows(2).any(|c| c[1] <= c[0]) || w.cells[0] < 8 {
            errs.push("[weak] cells needs >= 2 strictly increasing entries, each >= 8".into());
        }
        if w.points_per_cell == 0 {
            errs.push("[weak] points_per_cell must be >= 1".into());
        }
        if let DataSpec::Builtin(DataKind::GaussianBump { width, .. }) = &self.data {
            if !(*width > 0.0) {
                errs.push("[data] width must be positive".into());
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(errs))
        }
    }

    pub fn params(&self) -> FluidParams {
        self.fluid.params()
    }

    pub fn solver(&self) -> SolverConfig {
        let r = &self.run;
        SolverConfig {
            cells: r.cells,
            t_end: r.t_end,
            cfl: r.cfl,
            dt_min: r.dt_min,
            output_times: r.output_times.clone().unwrap_or_else(|| uniform_times(r.t_end, r.samples)),
            mode: self.mode,
            record_every_step: false,
            max_newton: 25,
        }
    }

    pub fn suite(&self) -> SuiteOptions {
        SuiteOptions {
            envelope_eps: self.monitors.envelope_eps,
            sup_eta: self.monitors.sup_eta,
            high_order_y: self.monitors.high_order_y,
            intervals: self.monitors.intervals,
            profile_points: self.run.profile_points,
            seed: self.seed,
            ..Default::default()
        }
    }

    /// Radial data covering mass up to `k_max`.
    pub fn load_data(&self, k_max: f64) -> Result<RadialData, String> {
        match &self.data {
            DataSpec::Builtin(kind) => generated_data(kind, self.fluid.n, k_max).map_err(|e| e.to_string()),
            DataSpec::File { path } => read_data_csv(path, self.fluid.n),
        }
    }

    /// sha256 over the canonical JSON of the config, including the data digest.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&json))
    }
}

#[derive(Debug, Deserialize)]
struct DataRow {
    r: f64,
    rho: f64,
    u: f64,
    e: f64,
}

pub fn read_data_csv(path: &Path, n: u32) -> Result<RadialData, String> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let (mut r, mut rho, mut u, mut e) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for row in rdr.deserialize() {
        let row: DataRow = row.map_err(|e| format!("{}: {e}", path.display()))?;
        r.push(row.r);
        rho.push(row.rho);
        u.push(row.u);
        e.push(row.e);
    }
    RadialData::new(n, r, rho, u, e).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<RunConfig, ConfigError> {
        parse_config_str(s, Path::new("."))
    }

    #[test]
    fn empty_file_gives_defaults() {
        let c = parse("").unwrap();
        assert_eq!(c.run.cells, 1024);
        assert_eq!(c.run.cfl, 0.4);
        assert_eq!(c.mode, Mode::Strict);
        assert_eq!(c.data, DataSpec::Builtin(DataKind::gaussian_default()));
    }

    #[test]
    fn gamma_one_rejected() {
        let err = parse("[fluid]\ngamma = 1.0\n").unwrap_err().to_string();
        assert!(err.contains("gamma > 1"), "{err}");
    }

    #[test]
    fn bulk_boundary_accepted() {
        let lam = -2.0 * 0.1 / 3.0;
        assert!(parse(&format!("[fluid]\nlambda = {lam:.17e}\n")).is_ok());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(parse("[run]\nN = 5\n"), Err(ConfigError::Parse(_))));
        assert!(matches!(parse("colour = 1\n"), Err(ConfigError::Parse(_))));
        assert!(matches!(parse("[data]\nkind = \"gaussian_bump\"\nheight = 2\n"), Err(ConfigError::Parse(_))));
    }

    #[test]
    fn errors_are_aggregated() {
        match parse("[fluid]\nmu = -1.0\nkappa = 0.0\n[run]\ncfl = 0.0\n") {
            Err(ConfigError::Invalid(es)) => assert_eq!(es.len(), 4, "mu, bulk, kappa, cfl: {es:?}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn data_variants() {
        let c = parse("[data]\nkind = \"discontinuous_shell\"\nshell_rho = 3.0\n").unwrap();
        assert!(
            matches!(c.data, DataSpec::Builtin(DataKind::DiscontinuousShell { shell_rho, .. }) if shell_rho == 3.0)
        );
        let c = parse("[data]\nkind = \"constant\"\n").unwrap();
        assert_eq!(c.data, DataSpec::Builtin(DataKind::Constant));
        assert!(matches!(
            parse("[data]\nkind = \"file\"\npath = \"/nonexistent.csv\"\n"),
            Err(ConfigError::Invalid(_))
        ));
    }

    #[test]
    fn hash_tracks_numerics() {
        let a = parse("").unwrap();
        let b = parse("[run]\ncfl = 0.3\n").unwrap();
        assert_eq!(a.hash(), parse("").unwrap().hash());
        assert_ne!(a.hash(), b.hash());
    }
}
