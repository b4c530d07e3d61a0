use std::fs;
use std::path::Path;
use std::process::Command;

const SMALL: &str = r#"
seed = 3
[data]
kind = "constant"
[run]
cells = 32
t_end = 0.05
samples = 4
profile_points = 65
[family]
a = [0.1, 0.2]
k = [2.0]
holder_points = 129
"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_radial-ns"))
}

fn write_cfg(dir: &Path, text: &str) -> std::path::PathBuf {
    let p = dir.join("cfg.toml");
    fs::write(&p, text).unwrap();
    p
}

fn run_cmd(sub: &str, cfg: &Path, out: &Path) -> i32 {
    bin().args([sub, "--config"]).arg(cfg).arg("--out").arg(out).status().unwrap().code().unwrap()
}

#[test]
fn constant_run_layout_and_exit() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_cfg(tmp.path(), SMALL);
    let out = tmp.path().join("run");
    assert_eq!(run_cmd("run", &cfg, &out), 0);
    for f in ["manifest.json", "monitors.json", "lagrangian_nodes.csv", "lagrangian_cells.csv", "eulerian.csv"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let eul = fs::read_to_string(out.join("eulerian.csv")).unwrap();
    assert!(eul.starts_with("t,r,rho,u,e,phi\n"));
    let mon: serde_json::Value = serde_json::from_slice(&fs::read(out.join("monitors.json")).unwrap()).unwrap();
    assert_eq!(mon["passed"], true);
    let man: serde_json::Value = serde_json::from_slice(&fs::read(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(man["files"].as_object().unwrap().len(), 4);
}

#[test]
fn rerun_is_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_cfg(tmp.path(), &SMALL.replace("kind = \"constant\"", "kind = \"gaussian_bump\""));
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_eq!(run_cmd("run", &cfg, &a), 0);
    assert_eq!(run_cmd("run", &cfg, &b), 0);
    for f in ["manifest.json", "monitors.json", "lagrangian_nodes.csv", "lagrangian_cells.csv", "eulerian.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn family_layout() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_cfg(tmp.path(), SMALL);
    let out = tmp.path().join("fam");
    assert_eq!(run_cmd("family", &cfg, &out), 0);
    assert!(out.join("family.json").is_file());
    assert!(out.join("paths.csv").is_file());
    for d in ["a=0.1_k=2", "a=0.2_k=2"] {
        assert!(out.join(d).join("monitors.json").is_file(), "{d}");
        assert!(out.join(d).join("paths.csv").is_file(), "{d}");
    }
    let paths = fs::read_to_string(out.join("paths.csv")).unwrap();
    assert!(paths.starts_with("a,k,x,t,r\n"));
    assert_eq!(paths.lines().count(), 1 + 2 * 7 * 4);
}

#[test]
fn config_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    for bad in ["[fluid]\ngamma = 1.0\n", "[run]\nbogus = 1\n", "[fluid]\nmu = 0.0\n", "not toml ["] {
        let cfg = write_cfg(tmp.path(), bad);
        assert_eq!(run_cmd("run", &cfg, &tmp.path().join("x")), 2, "{bad}");
    }
    let cfg = write_cfg(tmp.path(), SMALL);
    let blocker = tmp.path().join("file");
    fs::write(&blocker, b"").unwrap();
    assert_eq!(run_cmd("run", &cfg, &blocker.join("sub")), 2);
}

#[test]
fn data_file_source() {
    let tmp = tempfile::tempdir().unwrap();
    let mut csv = String::from("r,rho,u,e\n");
    for i in 0..=400 {
        let r = i as f64 * 0.01;
        csv.push_str(&format!("{r},{},0,1\n", 1.0 + 0.5 * (-(r - 1.0f64).powi(2) / 0.02).exp()));
    }
    fs::write(tmp.path().join("data.csv"), csv).unwrap();
    let cfg = write_cfg(tmp.path(), &SMALL.replace("kind = \"constant\"", "kind = \"file\"\npath = \"data.csv\""));
    let out = tmp.path().join("run");
    assert_eq!(run_cmd("run", &cfg, &out), 0);
    let man: serde_json::Value = serde_json::from_slice(&fs::read(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(man["data_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn scalars_subcommand() {
    let out = bin().args(["scalars", "inverse", "--function", "psi", "--branch", "right", "1"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let z = v["inverse"][0].as_f64().unwrap();
    assert!((z - 1.0 - z.ln() - 1.0).abs() < 1e-12);
    let out = bin().args(["scalars", "eval", "--function", "psi", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
