use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use altchain::cli::{EXIT_DIVERGED, EXIT_OK, EXIT_SWEEP_FAILED, EXIT_USAGE};
use altchain::io::read_system;

fn altchain(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_altchain"))
        .arg("--out-dir")
        .arg(out)
        .args(args)
        .env_remove("ALTCHAIN_OUT_DIR")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn data(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel).to_string_lossy().into_owned()
}

const SHORT: &str = "name = short
[system]
kind = cartoon
cartoon = 2
omegas = 0.1 1 1.05
[initial]
x = 0.1 0.3 0.3
[integrator]
t_end = 20
";

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = altchain(dir.path(), &["run", "does/not/exist.cfg"]);
    assert_eq!(code(&o), EXIT_USAGE);
    assert!(String::from_utf8_lossy(&o.stderr).contains("exist.cfg"));
    assert_eq!(code(&altchain(dir.path(), &["frobnicate"])), EXIT_USAGE);
    assert_eq!(code(&altchain(dir.path(), &["sweep", "--pmax", "201"])), EXIT_USAGE);
    assert_eq!(code(&altchain(dir.path(), &["--help"])), EXIT_OK);

    let bad = dir.path().join("bad.cfg");
    fs::write(&bad, "name = bad\n[system]\nkind = cartoon\ncartoon = 1\nomegas = 0.1 1\n[initial]\nx = 0.1 zero\n[integrator]\nt_end = 1\n").unwrap();
    let o = altchain(dir.path(), &["run", bad.to_str().unwrap()]);
    assert_eq!(code(&o), EXIT_USAGE);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 7"), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn run_writes_outputs_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("short.cfg");
    fs::write(&cfg, SHORT).unwrap();
    let out = dir.path().join("out");
    let o = altchain(&out, &["run", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), EXIT_OK, "{}", String::from_utf8_lossy(&o.stderr));
    let run_dir = out.join("short");
    for f in ["trajectory.csv", "trajectory.svg", "actions.csv", "energy.csv", "manifest.txt"] {
        assert!(run_dir.join(f).exists(), "{f}");
    }
    let csv = fs::read(run_dir.join("trajectory.csv")).unwrap();
    let header = String::from_utf8_lossy(&csv).lines().next().unwrap().to_string();
    assert_eq!(header, "t,x,vx,y,vy,z,vz");
    assert_eq!(String::from_utf8_lossy(&csv).lines().count(), 22);

    let o = altchain(&out, &["run", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), EXIT_OK);
    assert_eq!(fs::read(run_dir.join("trajectory.csv")).unwrap(), csv);

    // overrides reach the integrator
    let o = altchain(&out, &["run", cfg.to_str().unwrap(), "--t-end", "5", "--sample-dt", "0.5"]);
    assert_eq!(code(&o), EXIT_OK);
    assert_eq!(fs::read_to_string(run_dir.join("trajectory.csv")).unwrap().lines().count(), 12);
}

#[test]
fn divergence_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = altchain(dir.path(), &["run", &data("scenarios/fig_p3_divergent.cfg")]);
    assert_eq!(code(&o), EXIT_DIVERGED, "{}", String::from_utf8_lossy(&o.stdout));
    let manifest = fs::read_to_string(dir.path().join("fig_p3_divergent/manifest.txt")).unwrap();
    assert!(manifest.contains("diverged"), "{manifest}");
}

#[test]
fn sweep_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = altchain(dir.path(), &["sweep", "--pmax", "9", "--reference", &data("data/reference/p3.txt")]);
    assert_eq!(code(&o), EXIT_OK);
    let report = fs::read_to_string(dir.path().join("sweep_p9.txt")).unwrap();
    assert!(report.contains("scaling fit vs p3"));

    // a reference of the right size whose eigenvalues match nothing fails its row
    let wrong = dir.path().join("wrong.txt");
    fs::write(&wrong, "3 0.01 1\n0.5 acoustic:1\n1.5 optical:1\n1 1 1 1.0\n").unwrap();
    let o = altchain(dir.path(), &["sweep", "--pmax", "5", "--reference", wrong.to_str().unwrap()]);
    assert_eq!(code(&o), EXIT_SWEEP_FAILED);
}

#[test]
fn analysis_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let o = altchain(dir.path(), &["analyze", &data("data/reference/p9.txt"), "--fit"]);
    assert_eq!(code(&o), EXIT_OK, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("scaling fit: residual"));

    let o = altchain(dir.path(), &["equilibria", "--p", "3"]);
    assert_eq!(code(&o), EXIT_OK);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("4 equilibria"));

    let target = dir.path().join("p5.txt");
    let o = altchain(dir.path(), &["export", "--p", "5", "--reference", &data("data/reference/p5.txt"), "-o", target.to_str().unwrap()]);
    assert_eq!(code(&o), EXIT_OK);
    let sys = read_system(&target).unwrap();
    assert_eq!((sys.p, sys.dim()), (5, 4));
    assert!(sys.lambdas[0] > 0.018 && sys.lambdas[0] < 0.0181);
}
