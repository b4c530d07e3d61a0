//! File emission. Floats are written with 17 significant digits so that
//! identical runs produce identical bytes.

use crate::config::RunConfig;
use radial_ns::bridge::eulerian_profile;
use radial_ns::family::PathFamily;
use radial_ns::solver::Trajectory;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Fails early when `dir` cannot be created or written.
pub fn preflight(dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let probe = dir.join(".write_probe");
    fs::write(&probe, b"")?;
    fs::remove_file(probe)
}

fn write_rows(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(io::Error::other)?;
    bytes.push(b'\n');
    fs::write(path, bytes)
}

pub fn sha256_file(path: &Path) -> io::Result<String> {
    Ok(hex::encode(Sha256::digest(fs::read(path)?)))
}

/// `lagrangian_nodes.csv`, `lagrangian_cells.csv` and `eulerian.csv`.
pub fn write_trajectory(dir: &Path, traj: &Trajectory, profile_points: usize) -> io::Result<Vec<String>> {
    write_rows(
        &dir.join("lagrangian_nodes.csv"),
        &["t", "x", "r", "u"],
        traj.states
            .iter()
            .flat_map(|s| (0..s.x.len()).map(move |j| vec![num(s.t), num(s.x[j]), num(s.r[j]), num(s.u[j])])),
    )?;
    write_rows(
        &dir.join("lagrangian_cells.csv"),
        &["t", "x", "r", "v", "e"],
        traj.states.iter().flat_map(|s| {
            let (xc, rc) = (s.x_cells(), s.r_cells());
            (0..s.cells()).map(move |c| vec![num(s.t), num(xc[c]), num(rc[c]), num(s.v[c]), num(s.e[c])])
        }),
    )?;
    let profiles = radial_ns::par::map(&traj.states, |s| eulerian_profile(s, profile_points));
    write_rows(
        &dir.join("eulerian.csv"),
        &["t", "r", "rho", "u", "e", "phi"],
        profiles.iter().flat_map(|p| {
            (0..p.r.len())
                .map(move |i| vec![num(p.t), num(p.r[i]), num(p.rho[i]), num(p.u[i]), num(p.e[i]), num(p.phi[i])])
        }),
    )?;
    Ok(vec!["lagrangian_nodes.csv".into(), "lagrangian_cells.csv".into(), "eulerian.csv".into()])
}

pub fn write_paths(path: &Path, paths: &[PathFamily]) -> io::Result<()> {
    write_rows(
        path,
        &["a", "k", "x", "t", "r"],
        paths.iter().flat_map(|p| {
            p.t.iter().enumerate().flat_map(move |(j, &t)| {
                p.x.iter().enumerate().map(move |(i, &x)| vec![num(p.a), num(p.k), num(x), num(t), num(p.r[j][i])])
            })
        }),
    )
}

pub fn write_weak_rows(path: &Path, rows: &[radial_ns::weak::ResidualRow]) -> io::Result<()> {
    write_rows(
        path,
        &["eq", "phi_id", "N", "residual"],
        rows.iter().map(|r| vec![r.eq.name().to_string(), r.phi_id.clone(), r.n.to_string(), num(r.residual)]),
    )
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    version: &'a str,
    config_hash: String,
    data_digest: Option<&'a str>,
    config: &'a RunConfig,
    files: BTreeMap<String, String>,
}

/// `manifest.json` with the config hash and a digest of every listed file.
pub fn write_manifest(dir: &Path, command: &str, cfg: &RunConfig, files: &[String]) -> io::Result<()> {
    let mut digests = BTreeMap::new();
    for f in files {
        digests.insert(f.clone(), sha256_file(&dir.join(f))?);
    }
    let m = Manifest {
        command,
        version: env!("CARGO_PKG_VERSION"),
        config_hash: cfg.hash(),
        data_digest: cfg.data_digest.as_deref(),
        config: cfg,
        files: digests,
    };
    write_json(&dir.join("manifest.json"), &m)
}
