use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use tempfile::TempDir;

fn qgv(dir: &Path, config: &str, args: &[&str]) -> Output {
    let path = dir.join("run.toml");
    fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_qgv"))
        .current_dir(dir)
        .args(args)
        .arg("--config")
        .arg(&path)
        .env("QGV_THREADS", "1")
        .output()
        .expect("qgv runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const FREE_SCALAR: &str = "seed = 5\n[theory]\nkind = \"free\"\nfield = \"scalar\"\nmass = 1.0\n";

const TINY_U1: &str = "seed = 11\n[theory]\nkind = \"lattice\"\ngroup = \"u1\"\ndims = [8, 8]\nbeta = 1.0\nconfigs = 40\nthermalization = 50\n";

fn content_hash(o: &Output) -> String {
    stdout(o).lines().find_map(|l| l.strip_prefix("content_hash ").map(str::to_owned)).expect("hash line")
}

#[test]
fn tiny_simulation_is_fast_and_reproducible() {
    let dir = TempDir::new().unwrap();
    let start = Instant::now();
    let first = qgv(dir.path(), TINY_U1, &["simulate"]);
    assert!(start.elapsed() < Duration::from_secs(10), "took {:?}", start.elapsed());
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    assert!(dir.path().join("qgv-out/ensemble.qgv").exists());
    let second = qgv(dir.path(), TINY_U1, &["simulate", "--out", "again"]);
    assert_eq!(content_hash(&first), content_hash(&second));
    let other = qgv(dir.path(), TINY_U1, &["simulate", "--seed", "12", "--out", "other"]);
    assert_ne!(content_hash(&first), content_hash(&other));
}

#[test]
fn measure_reuses_the_stored_ensemble() {
    let dir = TempDir::new().unwrap();
    assert_eq!(qgv(dir.path(), TINY_U1, &["simulate"]).status.code(), Some(0));
    let o = qgv(dir.path(), TINY_U1, &["measure", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("label,mean,error"), "{text}");
    let plaq: f64 = text.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!(plaq > 0.0 && plaq < 1.0, "{plaq}");
    let history = fs::read_to_string(dir.path().join("qgv-out/plaquette_history.csv")).unwrap();
    assert_eq!(history.lines().count(), 41);
}

#[test]
fn missing_key_is_named() {
    let dir = TempDir::new().unwrap();
    let o = qgv(dir.path(), "seed = 1\n[theory]\nkind = \"lattice\"\ngroup = \"u1\"\nbeta = 1.0\nconfigs = 4\n", &["simulate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("dims"), "{}", stderr(&o));
}

#[test]
fn missing_seed_is_an_error_unless_given_on_the_command_line() {
    let dir = TempDir::new().unwrap();
    let cfg = TINY_U1.replace("seed = 11\n", "");
    let o = qgv(dir.path(), &cfg, &["simulate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("seed"));
    assert_eq!(qgv(dir.path(), &cfg, &["simulate", "--seed", "3"]).status.code(), Some(0));
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = TempDir::new().unwrap();
    let o = qgv(dir.path(), &format!("{FREE_SCALAR}colour = \"red\"\n"), &["check"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("colour"), "{}", stderr(&o));
}

#[test]
fn free_scalar_passes_every_check() {
    let dir = TempDir::new().unwrap();
    let o = qgv(dir.path(), FREE_SCALAR, &["check", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let reports: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 8);
    let stored: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("qgv-out/check.json")).unwrap()).unwrap();
    assert_eq!(stored["provenance_hash"].as_str().unwrap().len(), 64);
    let r = qgv(dir.path(), FREE_SCALAR, &["report"]);
    assert_eq!(r.status.code(), Some(0));
    assert!(stdout(&r).contains("reflection_positivity"));
}

#[test]
fn sign_flipped_scalar_fails_reflection_positivity() {
    let dir = TempDir::new().unwrap();
    let cfg = format!("{FREE_SCALAR}variant = \"sign_flipped\"\n");
    let o = qgv(dir.path(), &cfg, &["check", "--axioms", "reflection_positivity"]);
    assert_eq!(o.status.code(), Some(1), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn axioms_from_the_config_are_used() {
    let dir = TempDir::new().unwrap();
    let cfg = format!("{FREE_SCALAR}[check]\naxioms = [\"symmetry\", \"cluster\"]\n");
    let o = qgv(dir.path(), &cfg, &["check", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn unknown_axiom_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let o = qgv(dir.path(), FREE_SCALAR, &["check", "--axioms", "frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("frobnicate") && err.contains("reflection_positivity"), "{err}");
}

#[test]
fn reconstruct_one_test_function() {
    let dir = TempDir::new().unwrap();
    let cfg = format!("{FREE_SCALAR}[basis]\ntests = [[1.5, 0.0, 0.0, 0.0, 0.15]]\ndegree = 2\n");
    let o = qgv(dir.path(), &cfg, &["reconstruct"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("qgv-out/physical_space.json")).unwrap()).unwrap();
    assert_eq!(doc["dim"], 2);
    assert_eq!(doc["null_dim"], 0);
    let spectrum = fs::read_to_string(dir.path().join("qgv-out/spectrum.csv")).unwrap();
    assert_eq!(spectrum.lines().count(), 3);
}

#[test]
fn reconstruct_rejects_support_on_the_plane() {
    let dir = TempDir::new().unwrap();
    let cfg = format!("{FREE_SCALAR}[basis]\ntests = [[0.2, 0.0, 0.0, 0.0, 0.3]]\n");
    let o = qgv(dir.path(), &cfg, &["reconstruct"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("reflection plane"), "{}", stderr(&o));
}

#[test]
fn empty_basis_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let o = qgv(dir.path(), &format!("{FREE_SCALAR}[basis]\ntests = []\n"), &["reconstruct"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("basis.tests"));
}

#[test]
fn continue_finds_a_single_pole() {
    let dir = TempDir::new().unwrap();
    let cfg = FREE_SCALAR.replace("mass = 1.0", "mass = 0.7");
    let o = qgv(dir.path(), &cfg, &["continue"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("qgv-out/spectral_model.json")).unwrap()).unwrap();
    let poles = doc["model"]["poles"].as_array().unwrap();
    assert_eq!(poles.len(), 1);
    assert!((poles[0]["mass_sq"].as_f64().unwrap() - 0.49).abs() < 1e-4);
    assert_eq!(doc["accepted"], true);
    assert!(dir.path().join("qgv-out/time_momentum_model.csv").exists());
}

#[test]
fn lattice_theory_cannot_be_reconstructed() {
    let dir = TempDir::new().unwrap();
    let o = qgv(dir.path(), TINY_U1, &["reconstruct"]);
    assert_eq!(o.status.code(), Some(2));
}
