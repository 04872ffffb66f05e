use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use coxdiv::divergence::parse_divergence_csv;
use coxdiv::walls::{parse_pencil_csv, parse_pwt_csv};
use coxdiv_cli::{parse_automaton_csv, RunManifest};

fn coxdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coxdiv")).args(args).output().expect("binary runs")
}

fn configs() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut out: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "toml"))
        .collect();
    out.sort();
    out
}

fn files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "manifest.toml")
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect()
}

fn manifest(dir: &Path) -> RunManifest {
    toml::from_str(&std::fs::read_to_string(dir.join("manifest.toml")).unwrap()).unwrap()
}

#[test]
fn grid_divergence_row() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().to_str().unwrap();
    let o = coxdiv(&["divergence", "--oracle", "grid", "--d", "2", "--n", "4", "--delta", "1/2", "--lambda", "0", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = parse_divergence_csv(&std::fs::read_to_string(tmp.path().join("divergence.csv")).unwrap()).unwrap();
    let last = rows.last().unwrap();
    assert_eq!((last.n, last.div_value, last.status.as_str()), (4, Some(8), "EXACT"));
    assert!(String::from_utf8_lossy(&o.stdout).contains("\n4,8,false,"));
}

#[test]
fn infinite_dihedral_pencil() {
    let tmp = tempfile::tempdir().unwrap();
    let o = coxdiv(&["pencil", "--system", "infinite-dihedral", "--radius", "8", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("C_hat = 1"));
    assert_eq!(manifest(tmp.path()).summary["C_hat"], "1");
}

#[test]
fn bad_delta_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let o = coxdiv(&["divergence", "--oracle", "grid", "--d", "2", "--n", "4", "--delta", "0", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("(0,1)"));
    assert!(!tmp.path().join("manifest.toml").exists());
    let o = coxdiv(&["divergence", "--oracle", "grid", "--d", "2", "--n", "4", "--delta", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let o = coxdiv(&["run", "--config", "/nonexistent/run.toml"]);
    assert_eq!(o.status.code(), Some(2));
    let bad = tmp.path().join("bad.toml");
    std::fs::write(&bad, "command = \"divergence\"\n[oracle]\nkind = \"torus\"\n").unwrap();
    assert_eq!(coxdiv(&["run", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&bad, "command = \"pencil\"\n[system]\nname = \"A3\"\n[scan]\nradius = 4\n").unwrap();
    let o = coxdiv(&["run", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "spherical systems are rejected");
    assert_eq!(coxdiv(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn budget_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_coxdiv"))
        .args(["divergence", "--oracle", "free", "--rank", "2", "--n", "4", "--delta", "1/2", "--out"])
        .arg(tmp.path())
        .env(coxdiv_cli::MEMORY_BUDGET_ENV, "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("memory budget"));

    let o = Command::new(env!("CARGO_BIN_EXE_coxdiv"))
        .args(["divergence", "--oracle", "grid", "--d", "2", "--n", "4", "--delta", "1/2"])
        .env(coxdiv_cli::MEMORY_BUDGET_ENV, "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn horizon_exits_3_with_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let o = coxdiv(&[
        "divergence", "--oracle", "grid", "--d", "2", "--n", "4", "--delta", "1/2", "--horizon-factor", "1", "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    let rows = parse_divergence_csv(&std::fs::read_to_string(tmp.path().join("divergence.csv")).unwrap()).unwrap();
    assert_eq!(rows[3].status, "HORIZON_EXCEEDED");
    assert!(tmp.path().join("manifest.toml").exists());
}

#[test]
fn too_many_walls_exits_3() {
    let o = coxdiv(&["pencil", "--system", "affine-A2", "--radius", "41", "--out", "/tmp/unused"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn unbounded_rows_are_plotted_as_gaps() {
    let tmp = tempfile::tempdir().unwrap();
    let o = coxdiv(&["divergence", "--oracle", "free", "--rank", "2", "--n", "3", "--delta", "1/2", "--plot", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let svg = std::fs::read_to_string(tmp.path().join("divergence.svg")).unwrap();
    assert_eq!(svg.matches("gap-marker").count(), 2);
    assert_eq!(manifest(tmp.path()).summary["first_unbounded_n"], "2");
}

// The full sweep over shipped configs lives in the acceptance run; these
// are the quick ones.
#[test]
fn quick_configs_are_deterministic() {
    let quick = ["grid2-divergence", "free2-divergence", "triangle-334-divergence", "pencil-affine-A2", "automaton-B3"];
    let configs: Vec<PathBuf> =
        configs().into_iter().filter(|p| quick.iter().any(|q| p.file_stem().unwrap() == *q)).collect();
    assert_eq!(configs.len(), quick.len());
    for config in configs {
        let mut runs = Vec::new();
        for workers in ["1", "8"] {
            let tmp = tempfile::tempdir().unwrap();
            let o = coxdiv(&[
                "run", "--config", config.to_str().unwrap(), "--workers", workers, "--out", tmp.path().to_str().unwrap(),
            ]);
            assert_eq!(o.status.code(), Some(0), "{}: {}", config.display(), String::from_utf8_lossy(&o.stderr));
            let m = manifest(tmp.path());
            assert_eq!(m.workers.to_string(), workers);
            runs.push((files(tmp.path()), m.digests, tmp));
        }
        assert_eq!(runs[0].0, runs[1].0, "{}", config.display());
        assert_eq!(runs[0].1, runs[1].1, "{}", config.display());
        for (name, body) in &runs[0].0 {
            let text = std::str::from_utf8(body).unwrap();
            match name.as_str() {
                "divergence.csv" => assert!(!parse_divergence_csv(text).unwrap().is_empty()),
                "pencil.csv" => assert!(!parse_pencil_csv(text).unwrap().is_empty()),
                "pwt.csv" => assert!(!parse_pwt_csv(text).unwrap().is_empty()),
                "automaton.csv" => assert!(!parse_automaton_csv(text).unwrap().is_empty()),
                "divergence.svg" => assert!(text.starts_with("<svg")),
                other => panic!("unexpected output {other}"),
            }
        }
    }
}
