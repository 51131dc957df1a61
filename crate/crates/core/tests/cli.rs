//   Copyright 2026 hypersupport developers
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.

use std::path::Path;
use std::process::{Command, Output};

use hypersupport::experiment::{read_csv, read_json};
use hypersupport::verify::Strategy;
use hypersupport::VPolytope;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hypersupport"));
    cmd.env_remove("HYPERSUPPORT_SEED");
    cmd
}

fn run_ok(cmd: &mut Command) -> Output {
    let out = cmd.output().unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn no_arguments_is_usage_error() {
    assert_eq!(bin().output().unwrap().status.code(), Some(2));
    assert_eq!(bin().arg("frobnicate").output().unwrap().status.code(), Some(2));
}

#[test]
fn help_exits_cleanly() {
    let out = run_ok(bin().arg("--help"));
    let text = String::from_utf8_lossy(&out.stdout);
    for sub in ["generate", "run", "sweep"] {
        assert!(text.contains(sub));
    }
}

#[test]
fn sweep_requires_a_seed() {
    let out = bin().args(["sweep", "--n", "2", "--trials", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("HYPERSUPPORT_SEED"));
}

#[test]
fn seed_falls_back_to_environment() {
    let args = [
        "sweep",
        "--n",
        "2",
        "--trials",
        "2",
        "--s",
        "0.1",
        "--oracle-budget",
        "16",
    ];
    let a = run_ok(bin().args(args).env("HYPERSUPPORT_SEED", "42"));
    let b = run_ok(bin().args(args).args(["--seed", "42"]));
    let strip = |o: &Output| {
        read_csv(&String::from_utf8_lossy(&o.stdout))
            .unwrap()
            .into_iter()
            .map(|mut r| {
                r.wall_ms = 0.0;
                r
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&a), strip(&b));
    assert!(!strip(&a).is_empty());
    let bad = bin().args(args).env("HYPERSUPPORT_SEED", "abc").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn s_above_s0_is_usage_error() {
    for s0 in ["paper", "fixed:0.05"] {
        let out = bin()
            .args([
                "sweep", "--n", "2", "--trials", "1", "--s", "0.3", "--seed", "1", "--s0", s0,
            ])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(2), "{s0}");
    }
    let out = bin().args(["sweep", "--seed", "1", "--s0", "fixed:"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generate_writes_a_body() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("body.json");
    run_ok(
        bin()
            .args([
                "generate",
                "--kind",
                "needle_simplex",
                "--n",
                "3",
                "--thinness",
                "0.01",
                "--seed",
                "9",
            ])
            .arg("--out")
            .arg(&path),
    );
    let body = VPolytope::read(&path).unwrap();
    assert_eq!(body.dim(), 3);
    assert_eq!(body.vertices().len(), 4);
    let out = run_ok(
        bin()
            .args(["generate", "--kind", "box", "--n", "2", "--thinness", "0.5"])
            .env("HYPERSUPPORT_SEED", "9"),
    );
    assert_eq!(
        VPolytope::from_json(&String::from_utf8_lossy(&out.stdout))
            .unwrap()
            .dim(),
        2
    );
    let bad = bin()
        .args([
            "generate",
            "--kind",
            "box",
            "--n",
            "2",
            "--thinness",
            "0",
            "--seed",
            "1",
        ])
        .output()
        .unwrap();
    assert_ne!(bad.status.code(), Some(0));
}

#[test]
fn run_config_n1_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"n_list":[1],"s_list":[0.1],"trials":1,"seed":5}"#,
    );
    let report = dir.path().join("r.json");
    let plot = dir.path().join("plot.csv");
    run_ok(
        bin()
            .args(["run", "--format", "json", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&report)
            .arg("--plotdata")
            .arg(&plot),
    );
    let rows = read_json(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let alg: Vec<_> = rows.iter().filter(|r| r.strategy == Strategy::Algorithm).collect();
    assert!(!alg.is_empty());
    for r in alg {
        assert!((r.ratio - 0.05).abs() < 1e-12);
        assert!((r.bound - 0.05).abs() < 1e-12);
    }
    let plot = std::fs::read_to_string(&plot).unwrap();
    assert!(plot.starts_with("n,body_kind,thinness,strategy,s,worst_ratio"));
}

#[test]
fn run_with_body_files() {
    let dir = tempfile::tempdir().unwrap();
    let body = VPolytope::regular_polygon(7, 2.0).unwrap();
    body.write(dir.path().join("hept.json")).unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"s_list":[0.1,0.001],"seed":5,"oracle_budget":16,"bodies":{"files":{"paths":["hept.json"]}}}"#,
    );
    let out = run_ok(bin().arg("run").arg("--config").arg(&cfg));
    let rows = read_csv(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert!(rows.iter().all(|r| r.body_kind == "file:hept" && r.n == 2));

    let missing = write(
        dir.path(),
        "m.json",
        r#"{"seed":5,"bodies":{"files":{"paths":["nope.json"]}}}"#,
    );
    assert_eq!(
        bin()
            .arg("run")
            .arg("--config")
            .arg(&missing)
            .output()
            .unwrap()
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bin()
            .args(["run", "--config", "/nonexistent.json"])
            .output()
            .unwrap()
            .status
            .code(),
        Some(2)
    );
    let invalid = write(dir.path(), "i.json", r#"{"n_list":"two"}"#);
    assert_eq!(
        bin()
            .arg("run")
            .arg("--config")
            .arg(&invalid)
            .output()
            .unwrap()
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn violations_exit_one_and_dump_traces() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"n_list":[2],"trials":1,"s_list":[0.1],"seed":5,"oracle_budget":8,"tolerances":{"condition":1e-300}}"#,
    );
    let traces = dir.path().join("traces");
    let out = bin()
        .arg("run")
        .arg("--config")
        .arg(&cfg)
        .arg("--trace-dir")
        .arg(&traces)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("first: n=2 trial 0000:"), "{stderr}");
    let dumped: Vec<_> = std::fs::read_dir(&traces).unwrap().collect();
    assert!(!dumped.is_empty());
    let text = std::fs::read_to_string(dumped[0].as_ref().unwrap().path()).unwrap();
    assert!(hypersupport::SelectionTrace::from_json(&text).is_ok());
}
