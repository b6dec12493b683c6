// Copyright 2026 The polarrecon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

mod common;

use std::path::{Path, PathBuf};
use std::process::Command;

use common::*;
use polarrecon::linalg::{Matrix, Vector};
use serde_json::Value;
use tempfile::TempDir;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Out {
    fn json(&self) -> Value {
        assert_eq!(self.code, 0, "stderr: {}", self.stderr);
        serde_json::from_str(&self.stdout).expect("stdout is JSON")
    }
}

fn run(args: &[&str]) -> Out {
    let out = Command::new(env!("CARGO_BIN_EXE_polarrecon")).args(args).output().unwrap();
    Out {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn file(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

fn matrix(v: &Value) -> Vec<Vec<f64>> {
    v.as_array().unwrap().iter().map(|r| r.as_array().unwrap().iter().map(num).collect()).collect()
}

const UNIT_BALL: &str = r#"{"space":"position","hbar":1.0,"center":[0.0,0.0],"shape":[[1.0,0.0],[0.0,1.0]]}"#;
const INTERVAL: &str = r#"{"space":"position","hbar":1.0,"center":[0.0],"shape":[[1.0]]}"#;

#[test]
fn dual_examples() {
    let d = TempDir::new().unwrap();
    let v = run(&["dual", "--input", s(&file(&d, "b.json", UNIT_BALL))]).json();
    assert_eq!(v["space"], "momentum");
    assert_eq!(matrix(&v["shape"]), vec![vec![1.0, 0.0], vec![0.0, 1.0]]);

    let e = r#"{"space":"position","center":[0,0],"shape":[[4,0],[0,1]]}"#;
    let v = run(&["dual", "--input", s(&file(&d, "e.json", e))]).json();
    assert_eq!(matrix(&v["shape"]), vec![vec![0.25, 0.0], vec![0.0, 1.0]]);
    assert_eq!(num(&v["hbar"]), 1.0);

    let off = r#"{"space":"position","hbar":1,"center":[1,0],"shape":[[1,0],[0,1]]}"#;
    let r = run(&["dual", "--input", s(&file(&d, "o.json", off))]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("translate"), "{}", r.stderr);
    assert!(r.stdout.is_empty());
}

#[test]
fn dual_error_classes() {
    let d = TempDir::new().unwrap();
    let ball = file(&d, "b.json", UNIT_BALL);
    assert_eq!(run(&["dual", "--input", s(&ball), "--hbar", "2"]).code, 1);
    assert_eq!(run(&["dual", "--input", s(&ball), "--hbar", "1"]).code, 0);
    assert_eq!(run(&["dual", "--input", "/nonexistent/x.json"]).code, 2);
    assert_eq!(run(&["dual", "--input", s(&file(&d, "bad.json", "{not json"))]).code, 2);
    let odd = r#"{"space":"position","hbar":1,"center":[0],"shape":[[1,2],[3,4]]}"#;
    assert_eq!(run(&["dual", "--input", s(&file(&d, "odd.json", odd))]).code, 1);
    assert_eq!(run(&["dual"]).code, 2);
}

#[test]
fn reconstruct_examples() {
    let d = TempDir::new().unwrap();
    let x = file(&d, "x.json", INTERVAL);
    let v = run(&["reconstruct", "--x", s(&x), "--slack", "4", "--mode", "pure"]).json();
    let states = v.as_array().unwrap();
    assert_eq!(states.len(), 2);
    for (st, sign) in states.iter().zip([-1.0, 1.0]) {
        let sigma = matrix(&st["covariance"]["sigma"]);
        assert!((sigma[0][1] - sign * 0.8660254037844386).abs() < 1e-15);
        assert_eq!(st["classification"], "pure");
        assert_eq!(st["wavefunction"]["sign_branch"][0].as_i64().unwrap() as f64, sign);
    }

    let v = run(&["reconstruct", "--x", s(&x), "--slack", "4", "--mode", "mixed"]).json();
    assert!((num(&v["purity"]) - 0.5).abs() < 1e-15);
    assert_eq!(v["classification"], "mixed");
    assert!(v.get("wavefunction").is_none());

    assert_eq!(run(&["reconstruct", "--x", s(&x), "--slack", "0.5", "--mode", "pure"]).code, 1);

    let p_bad = file(&d, "p.json", r#"{"space":"momentum","hbar":1,"center":[0],"shape":[[4]]}"#);
    assert_eq!(run(&["reconstruct", "--x", s(&x), "--p", s(&p_bad), "--mode", "mixed"]).code, 1);
    let p_other_hbar = file(&d, "q.json", r#"{"space":"momentum","hbar":2,"center":[0],"shape":[[0.1]]}"#);
    assert_eq!(run(&["reconstruct", "--x", s(&x), "--p", s(&p_other_hbar), "--mode", "pure"]).code, 1);
    assert_eq!(run(&["reconstruct", "--x", s(&x), "--mode", "bogus"]).code, 2);
}

#[test]
fn reconstruct_with_explicit_momentum_region_and_offsets() {
    let d = TempDir::new().unwrap();
    let x = file(&d, "x.json", r#"{"space":"position","hbar":1,"center":[2.0],"shape":[[1.0]]}"#);
    let p = file(&d, "p.json", r#"{"space":"momentum","hbar":1,"center":[-1.0],"shape":[[0.25]]}"#);
    let v = run(&["reconstruct", "--x", s(&x), "--p", s(&p), "--mode", "pure"]).json();
    for st in v.as_array().unwrap() {
        let mean: Vec<f64> = st["covariance"]["mean"].as_array().unwrap().iter().map(num).collect();
        assert_eq!(mean, vec![2.0, -1.0]);
    }
}

fn ellipse_csv(seed: u64, n_points: usize) -> String {
    let q = Matrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
    let pts = uniform_in_ellipse(&mut rng(seed), &q, &Vector::from_column_slice(&[0.5, 0.25]), n_points);
    let mut csv = String::from("x1,x2\n");
    for p in pts {
        csv += &format!("{},{}\n", p[0], p[1]);
    }
    csv
}

#[test]
fn ingest_examples() {
    let d = TempDir::new().unwrap();
    let csv = file(&d, "c.csv", &ellipse_csv(3, 5000));
    let cfg = file(
        &d,
        "cfg.json",
        r#"{"estimator":"loewner","trim_fraction":0.0,"center_mode":"mean","eps":1e-7,"hbar":1.0}"#,
    );
    let v = run(&["ingest", "--csv", s(&csv), "--config", s(&cfg)]).json();
    let shape = Matrix::from_row_iterator(2, 2, matrix(&v["ellipsoid"]["shape"]).into_iter().flatten());
    let truth = Matrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
    assert!(rel(&shape, &truth) < 0.05);
    assert_eq!(v["retained"], 5000);
    assert_eq!(v["dropped"], 0);
    let center: Vec<f64> = v["center"].as_array().unwrap().iter().map(num).collect();
    assert!((center[0] - 0.5).abs() < 0.05 && (center[1] - 0.25).abs() < 0.05);

    let v = run(&["ingest", "--csv", s(&csv), "--estimator", "john", "--trim-fraction", "0.01"]).json();
    assert!(v["dropped"].as_u64().unwrap() > 0);

    assert_eq!(run(&["ingest", "--csv", s(&file(&d, "empty.csv", ""))]).code, 2);
    assert_eq!(run(&["ingest", "--csv", s(&file(&d, "hdr.csv", "x1,x2\n"))]).code, 2);
    let bad = run(&["ingest", "--csv", s(&file(&d, "bad.csv", "x1,x2\n1,2\n3,oops\n"))]);
    assert_eq!(bad.code, 2);
    assert!(bad.stderr.contains("line 3"), "{}", bad.stderr);
    let line = file(&d, "line.csv", "x1,x2\n0,0\n1,1\n2,2\n3,3\n");
    assert_eq!(run(&["ingest", "--csv", s(&line)]).code, 1);
    assert_eq!(run(&["ingest", "--csv", s(&csv), "--config", s(&cfg), "--hbar", "2"]).code, 1);
    assert_eq!(run(&["ingest", "--csv", s(&csv), "--trim-fraction", "0.3"]).code, 1);
    assert_eq!(run(&["ingest", "--csv", s(&csv), "--config", "/nonexistent.json"]).code, 2);
}

#[test]
fn ingest_output_feeds_reconstruct() {
    let d = TempDir::new().unwrap();
    let csv = file(&d, "c.csv", &ellipse_csv(5, 800));
    let ing = run(&["ingest", "--csv", s(&csv)]);
    let x = file(&d, "x.json", &ing.stdout);
    let v = run(&["reconstruct", "--x", s(&x), "--slack", "2", "--mode", "mixed"]).json();
    let mean: Vec<f64> = v["covariance"]["mean"].as_array().unwrap().iter().map(num).collect();
    let center: Vec<f64> = ing.json()["center"].as_array().unwrap().iter().map(num).collect();
    assert_eq!(&mean[..2], &center[..]);
    // purity of the mixed state is slack^(-n/2)
    assert!((num(&v["purity"]) - 0.5).abs() < 1e-12);
}

#[test]
fn check_examples() {
    let d = TempDir::new().unwrap();
    let c = |name, sigma: &str| file(&d, name, &format!(r#"{{"n":1,"hbar":1.0,"sigma":{sigma}}}"#));
    let v = run(&["check", "--sigma", s(&c("a.json", "[[0.5,0],[0,0.5]]"))]).json();
    assert_eq!(v["quantum_ok"], true);
    assert_eq!(v["pure"], true);
    assert!((num(&v["symplectic_eigenvalues"][0]) - 0.5).abs() < 1e-15);

    let v = run(&["check", "--sigma", s(&c("b.json", "[[0.1,0],[0,0.1]]"))]).json();
    assert_eq!(v["quantum_ok"], false);
    assert!(num(&v["rs_margins"][0]) < 0.0);

    let v = run(&["check", "--sigma", s(&c("c.json", "[[0.5,0],[0,2]]"))]).json();
    assert_eq!(v["quantum_ok"], true);
    assert_eq!(v["pure"], false);
    assert!((num(&v["purity"]) - 0.5).abs() < 1e-15);
    assert_eq!(num(&v["rs_margins"][0]), 0.75);

    assert_eq!(run(&["check", "--sigma", s(&c("d.json", "[[1,0],[0,-1]]"))]).code, 1);
    assert_eq!(run(&["check", "--sigma", s(&c("e.json", "[[1,2],[0,1]]"))]).code, 1);
    assert_eq!(run(&["check", "--sigma", s(&c("f.json", "[[0.5,0],[0,0.5]]")), "--hbar", "2"]).code, 1);
    assert_eq!(run(&["check", "--sigma", s(&file(&d, "g.json", "[1,2]"))]).code, 2);
}

#[test]
fn project_examples() {
    let d = TempDir::new().unwrap();
    let diag = file(&d, "a.json", r#"{"n":1,"hbar":1.0,"sigma":[[0.5,0],[0,2]]}"#);
    let v = run(&["project", "--sigma", s(&diag), "--onto", "position"]).json();
    assert_eq!(v["space"], "position");
    // u^2 Q <= 1: endpoint sqrt(1/Q) = sqrt(2 sigma_xx)
    assert!((1.0 / num(&v["shape"][0][0]).sqrt() - 1.0).abs() < 1e-15);
    let v = run(&["project", "--sigma", s(&diag), "--onto", "momentum"]).json();
    assert!((1.0 / num(&v["shape"][0][0]).sqrt() - 2.0).abs() < 1e-15);

    // pure round trip through reconstruct
    let x = file(&d, "x.json", INTERVAL);
    let states = run(&["reconstruct", "--x", s(&x), "--slack", "4", "--mode", "pure"]).json();
    let one = file(&d, "st.json", &states[1].to_string());
    let v = run(&["project", "--sigma", s(&one), "--onto", "position"]).json();
    assert!((num(&v["shape"][0][0]) - 1.0).abs() < 1e-9);

    let singular = file(&d, "s.json", r#"{"n":1,"hbar":1.0,"sigma":[[1,1],[1,1]]}"#);
    assert_eq!(run(&["project", "--sigma", s(&singular), "--onto", "position"]).code, 1);
    assert_eq!(run(&["project", "--sigma", s(&diag), "--onto", "phase"]).code, 2);
}

#[test]
fn wigner_examples() {
    let d = TempDir::new().unwrap();
    let st = file(&d, "st.json", r#"{"n":1,"hbar":1.0,"mean":[0.5,-1.0],"sigma":[[0.5,0],[0,0.5]]}"#);
    let out = d.path().join("w.csv");
    let r6 = 6.0 * 0.5f64.sqrt();
    let grid = format!("{},{},401;{},{},401", 0.5 - r6, 0.5 + r6, -1.0 - r6, -1.0 + r6);
    let v = run(&["wigner", "--state", s(&st), &format!("--grid={grid}"), "--out", s(&out)]).json();
    assert!((num(&v["integral_estimate"]) - 1.0).abs() < 1e-4);
    let max_at: Vec<f64> = v["max_at"].as_array().unwrap().iter().map(num).collect();
    assert!((max_at[0] - 0.5).abs() < 1e-12 && (max_at[1] + 1.0).abs() < 1e-12);

    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with('#') && header.contains("n=1") && header.contains("grid="));
    assert_eq!(lines.next().unwrap(), "z1,z2,W");
    assert_eq!(lines.count(), 401 * 401);

    let vacuum3: Vec<Vec<f64>> =
        (0..6).map(|i| (0..6).map(|j| if i == j { 0.5 } else { 0.0 }).collect()).collect();
    let three = file(
        &d,
        "n3.json",
        &format!(r#"{{"n":3,"hbar":1.0,"sigma":{}}}"#, serde_json::to_string(&vacuum3).unwrap()),
    );
    assert_eq!(run(&["wigner", "--state", s(&three), "--grid=-1,1,5", "--out", s(&out)]).code, 1);
    assert_eq!(run(&["wigner", "--state", s(&st), "--grid", "1,0,5", "--out", s(&out)]).code, 1);
    let unwritable = d.path().join("missing-dir").join("w.csv");
    assert_eq!(run(&["wigner", "--state", s(&st), "--grid=-1,1,5", "--out", s(&unwritable)]).code, 2);
}

#[test]
fn output_is_deterministic() {
    let d = TempDir::new().unwrap();
    let csv = file(&d, "c.csv", &ellipse_csv(9, 500));
    for args in [vec!["ingest", "--csv", s(&csv)], vec!["ingest", "--csv", s(&csv), "--estimator", "john"]] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.code, 0);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(run(&["--help"]).code, 0);
    assert_eq!(run(&["--version"]).code, 0);
    assert_eq!(run(&["frobnicate"]).code, 2);
}
