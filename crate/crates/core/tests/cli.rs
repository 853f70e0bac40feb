use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn regvqe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regvqe"))
        .args(args)
        .env_remove("REGVQE_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn value<'a>(out: &'a str, key: &str) -> &'a str {
    out.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in {out}"))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// A sweep config over a two-qubit `cos + cos` landscape written next to it.
fn toy_config(dir: &Path, psum: &str, grid: &str, seeds: u32) -> PathBuf {
    fs::write(dir.join("toy.psum"), psum).unwrap();
    let cfg = dir.join("toy.toml");
    let text = format!(
        "[hamiltonian]\npath = \"toy.psum\"\n\n[ansatz]\nkind = \"ry_layer\"\n\n[opt]\ngtol = 1e-6\n\n\
         [sweep]\nlambda_grid = {grid}\nn_seeds = {seeds}\n"
    );
    fs::write(&cfg, text).unwrap();
    cfg
}

#[test]
fn exact_single_z() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.psum");
    fs::write(&path, "1.0 Z\n").unwrap();
    let o = regvqe(&["exact", p(&path)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(value(&stdout(&o), "ground_energy"), "-1.0");
}

#[test]
fn exact_bundled_h2() {
    let o = regvqe(&["exact", "--bundled", "h2"]);
    assert!(o.status.success());
    let e: f64 = value(&stdout(&o), "ground_energy").parse().unwrap();
    assert!((e - -2.0309339004473976).abs() < 1e-12);
    assert_eq!(value(&stdout(&o), "n_qubits"), "4");
}

#[test]
fn exact_rfim_is_repeatable() {
    let args = ["exact", "--rfim", "n=12,seed=7"];
    let a = regvqe(&args);
    let b = regvqe(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let e: f64 = value(&stdout(&a), "ground_energy").parse().unwrap();
    assert!(e < -11.0);
}

#[test]
fn run_toy_config_reaches_ground_state() {
    let cfg = manifest_dir().join("configs/toy_ry.toml");
    let o = regvqe(&["run", "--config", p(&cfg), "--lambda0", "0", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let de: f64 = value(&out, "delta_e").parse().unwrap();
    assert!(de < 1e-6, "delta_e={de}");
    assert_eq!(value(&out, "status"), "converged");
}

#[test]
fn run_lambda_override_is_stored() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = manifest_dir().join("configs/toy_ry.toml");
    let out = dir.path().join("run");
    let o = regvqe(&["run", "--config", p(&cfg), "--lambda0", "0.1", "--out", p(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let stored = fs::read_to_string(out.join("run.csv")).unwrap();
    let row = stored.lines().nth(1).unwrap();
    assert!(row.starts_with("0.10000000000000001,0,"), "{row}");
    assert!(out.join("trajectory.csv").exists());
}

#[test]
fn malformed_config_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[hamiltonian]\nbundled = \"h2\"\n\n[opt]\ngtol = = 3\n").unwrap();
    let o = regvqe(&["run", "--config", p(&cfg)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 5"), "{}", stderr(&o));
}

#[test]
fn sweep_writes_one_row_per_pair_and_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = toy_config(dir.path(), "1.0 ZI\n1.0 IZ\n", "[0.0, 0.05]", 5);
    let out = dir.path().join("out");
    let o = regvqe(&["sweep", "--config", p(&cfg), "--out", p(&out), "--workers", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("lambda0=0.05 done"));
    let store = fs::read_to_string(out.join("runs.csv")).unwrap();
    assert_eq!(store.lines().count(), 11);

    // a killed sweep leaves a prefix of the store, possibly mid-line
    let cut = store.len() - 30;
    fs::write(out.join("runs.csv"), &store[..cut]).unwrap();
    let o = regvqe(&["sweep", "--config", p(&cfg), "--out", p(&out), "--resume"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(out.join("runs.csv")).unwrap(), store);

    let o = regvqe(&["sweep", "--config", p(&cfg), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn resolved_config_replays_the_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = toy_config(dir.path(), "1.0 ZI\n1.0 IZ\n", "[0.0, 0.3]", 3);
    let first = dir.path().join("first");
    assert!(regvqe(&["sweep", "--config", p(&cfg), "--out", p(&first)]).status.success());
    let resolved = first.join("resolved.toml");
    let second = dir.path().join("second");
    let o = regvqe(&["sweep", "--config", p(&resolved), "--out", p(&second)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        fs::read_to_string(first.join("runs.csv")).unwrap(),
        fs::read_to_string(second.join("runs.csv")).unwrap()
    );
}

#[test]
fn stats_matches_golden_summary() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = manifest_dir().join("tests/fixtures/stats");
    let o = regvqe(&["stats", p(&fixture.join("runs.csv")), "--out", p(dir.path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    let got = fs::read(dir.path().join("summary.csv")).unwrap();
    let want = fs::read(fixture.join("summary.csv")).unwrap();
    assert!(got == want, "summary.csv differs from the golden file");
    assert_eq!(value(&stdout(&o), "records"), "110");
    for k in 1..=7 {
        assert!(dir.path().join(format!("plot_thr_{k}.csv")).exists());
    }
    assert!(dir.path().join("windows.json").exists());
}

#[test]
fn stats_on_empty_store() {
    let dir = tempfile::tempdir().unwrap();
    let runs = dir.path().join("runs.csv");
    fs::write(&runs, "lambda0,seed,final_energy,final_norm,evals_total,status,delta_e\n").unwrap();
    let o = regvqe(&["stats", p(&runs)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no records"));
}

#[test]
fn stats_rejects_mixed_hamiltonians() {
    let dir = tempfile::tempdir().unwrap();
    let mut hashes = Vec::new();
    let mut stores = Vec::new();
    for (name, psum) in [("a", "1.0 ZI\n1.0 IZ\n"), ("b", "1.0 ZI\n0.5 IZ\n")] {
        let sub = dir.path().join(name);
        fs::create_dir(&sub).unwrap();
        let cfg = toy_config(&sub, psum, "[0.0]", 2);
        let out = sub.join("out");
        let o = regvqe(&["sweep", "--config", p(&cfg), "--out", p(&out)]);
        assert!(o.status.success(), "{}", stderr(&o));
        hashes.push(value(&stdout(&o), "hamiltonian_hash").to_string());
        stores.push(out.join("runs.csv"));
    }
    assert_ne!(hashes[0], hashes[1]);
    let o = regvqe(&["stats", p(&stores[0]), p(&stores[1]), "--out", p(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains(&hashes[0]) && err.contains(&hashes[1]), "{err}");
}

#[test]
fn lambda_scale_for_bundled_h2() {
    let o = regvqe(&["lambda-scale", "--bundled", "h2", "--params", "40"]);
    assert!(o.status.success());
    let s: f64 = value(&stdout(&o), "lambda_scale").parse().unwrap();
    assert!((s - 0.072).abs() < 1e-3);
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    assert_eq!(regvqe(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(regvqe(&["exact"]).status.code(), Some(1));
}
