use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn twostep(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twostep"))
        .args(args)
        .current_dir(dir)
        .env("TWOSTEP_WORKERS", "2")
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = twostep(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn graph_files() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let g = json(&ok(d, &["graph", "paper40"]));
    assert_eq!(g["n"], 40);
    assert_eq!(g["edges"].as_array().unwrap().len(), 60);
    let g = json(&ok(d, &["graph", "torus", "--m", "2", "--k", "4"]));
    assert_eq!(g["n"], 16);
    assert_eq!(g["d"], 4);
    let bad = twostep(d, &["graph", "cycle", "--n", "7"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("even"));

    ok(d, &["graph", "cycle", "--n", "8", "--out", "c8.json"]);
    assert!(d.join("c8.json").exists());
    let manifest = json(&fs::read_to_string(d.join("c8.json.manifest.json")).unwrap());
    assert_eq!(manifest["outputs"][0], "c8.json");
}

#[test]
fn probabilities() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    ok(d, &["graph", "cycle", "--n", "8", "--out", "c8.json"]);
    fs::write(d.join("half.txt"), "RRRRBBBB\n").unwrap();
    fs::write(d.join("alt.txt"), "BRBRBRBR").unwrap();
    fs::write(d.join("short.txt"), "RRBB").unwrap();

    let v = json(&ok(
        d,
        &["prob", "--graph", "c8.json", "--colouring", "half.txt"],
    ));
    assert_eq!(
        (v["x"].as_str(), v["y"].as_str()),
        (Some("5/8"), Some("5/8"))
    );
    let v = json(&ok(
        d,
        &["prob", "--graph", "c8.json", "--colouring", "alt.txt"],
    ));
    assert_eq!(
        (v["x"].as_str(), v["y"].as_str()),
        (Some("0/1"), Some("0/1"))
    );
    // One-step stay: 1 - boundary / (d |R|) = 1 - 2/8.
    let v = json(&ok(
        d,
        &[
            "prob",
            "--graph",
            "c8.json",
            "--colouring",
            "half.txt",
            "--t",
            "1",
        ],
    ));
    assert_eq!(v["x"], "3/4");

    let bad = twostep(
        d,
        &["prob", "--graph", "c8.json", "--colouring", "short.txt"],
    );
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn regions() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let v = json(&ok(d, &["region", "--d", "2"]));
    assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
    let t2 = json(&ok(d, &["region", "--t2"]));
    assert_eq!(t2["vertices"].as_array().unwrap().len(), 6);
    assert!(t2["vertices"]
        .as_array()
        .unwrap()
        .contains(&serde_json::json!(["9/16", "3/4"])));
    let x = json(&ok(d, &["region", "--x-m", "2"]));
    assert_eq!(x["vertices"], t2["vertices"]);
    assert_eq!(twostep(d, &["region"]).status.code(), Some(2));
}

#[test]
fn enumeration_outputs() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    ok(
        d,
        &["graph", "c4union", "--copies", "2", "--out", "c4.json"],
    );
    ok(
        d,
        &["graph", "torus", "--m", "2", "--k", "4", "--out", "t4.json"],
    );

    ok(
        d,
        &["enumerate", "--graph", "c4.json", "--out", "c4", "--svg"],
    );
    let csv = fs::read_to_string(d.join("c4/cloud.csv")).unwrap();
    assert_eq!(csv.lines().count(), 71);
    assert!(csv.starts_with("red_mask_hex,x_num,x_den,y_num,y_den\n"));
    let svg = fs::read_to_string(d.join("c4/cloud.svg")).unwrap();
    assert_eq!(svg.matches("<polygon").count(), 2);
    assert!(svg.contains(r#"viewBox="0 0 1 1""#));
    let hull = json(&fs::read_to_string(d.join("c4/hull.json")).unwrap());
    assert_eq!(hull["outside_container"], 0);
    let manifest = json(&fs::read_to_string(d.join("c4/manifest.json")).unwrap());
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 3);
    assert_eq!(manifest["inputs"][0]["sha256"].as_str().unwrap().len(), 64);

    ok(
        d,
        &[
            "enumerate",
            "--graph",
            "t4.json",
            "--out",
            "t4",
            "--svg",
            "--x-m",
            "2",
        ],
    );
    let csv = fs::read_to_string(d.join("t4/cloud.csv")).unwrap();
    assert_eq!(csv.lines().count(), 12871);
    let svg = fs::read_to_string(d.join("t4/cloud.svg")).unwrap();
    assert_eq!(svg.matches("<polygon").count(), 3);
}

#[test]
fn enumeration_is_byte_deterministic() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    ok(d, &["graph", "paper40", "--out", "p.json"]);
    let args = |out: &'static str, workers: &'static str| {
        vec![
            "--workers",
            workers,
            "enumerate",
            "--graph",
            "p.json",
            "--mode",
            "sample",
            "--samples",
            "2000",
            "--seed",
            "9",
            "--out",
            out,
        ]
    };
    ok(d, &args("a", "1"));
    ok(d, &args("b", "4"));
    for f in ["cloud.csv", "hull.json"] {
        assert_eq!(
            fs::read(d.join("a").join(f)).unwrap(),
            fs::read(d.join("b").join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn oversized_exhaustive_run_is_refused() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    ok(
        d,
        &["graph", "torus", "--m", "2", "--k", "6", "--out", "t6.json"],
    );
    let out = twostep(d, &["enumerate", "--graph", "t6.json", "--out", "t6"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn covers() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let args = [
        "cover",
        "verify",
        "--family",
        "linear",
        "--weights",
        "1,2",
        "--modulus",
        "5",
        "--m",
        "2",
        "--k",
        "10",
        "--r",
        "1",
    ];
    let rep = json(&ok(d, &args));
    assert_eq!(rep["passes"], true);
    assert_eq!(rep["density"], "1/5");

    let wrong = twostep(
        d,
        &[
            "cover", "verify", "--family", "r1", "--m", "2", "--k", "10", "--r", "2",
        ],
    );
    assert_eq!(wrong.status.code(), Some(3));
    let seam = twostep(
        d,
        &[
            "cover", "verify", "--family", "r1", "--m", "2", "--k", "12", "--r", "1",
        ],
    );
    assert_eq!(seam.status.code(), Some(2));

    let h = json(&ok(
        d,
        &["cover", "build", "--family", "hamming", "--l", "2"],
    ));
    assert_eq!(h["m"], 3);

    ok(
        d,
        &[
            "cover",
            "build",
            "--family",
            "r2",
            "--m",
            "2",
            "--lift",
            "2",
            "--out",
            "lifted.json",
        ],
    );
    let rep = json(&ok(
        d,
        &[
            "cover",
            "verify",
            "--cover",
            "lifted.json",
            "--k",
            "6",
            "--r",
            "4",
        ],
    ));
    assert_eq!(rep["passes"], true);

    let cert = json(&ok(
        d,
        &["cover", "search", "--m", "2", "--k", "6", "--r", "3"],
    ));
    assert_eq!(cert["outcome"], "non-existent");
    let found = json(&ok(
        d,
        &["cover", "search", "--m", "2", "--k", "6", "--r", "2"],
    ));
    assert_eq!(found["outcome"], "found");
    assert_eq!(found["members"].as_array().unwrap().len(), 12);
    let guard = twostep(
        d,
        &[
            "cover",
            "search",
            "--m",
            "2",
            "--k",
            "7",
            "--r",
            "3",
            "--max-nodes",
            "1",
        ],
    );
    assert_eq!(guard.status.code(), Some(4));
}

#[test]
fn constructions() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let rep = json(&ok(
        d,
        &[
            "construct",
            "halfsplit",
            "--m",
            "2",
            "--r",
            "1",
            "--k",
            "50",
            "--out",
            "hs.txt",
        ],
    ));
    assert_eq!(rep["within_tolerance"], true);
    assert_eq!(rep["a"], 32);
    let colouring = fs::read_to_string(d.join("hs.txt")).unwrap();
    assert_eq!(colouring.trim().len(), 2500);

    let rep = json(&ok(
        d,
        &[
            "construct",
            "cycle",
            "--kind",
            "alternating",
            "--n",
            "12",
            "--out",
            "alt.txt",
        ],
    ));
    assert_eq!(rep["actual"]["x"], "0/1");
    assert_eq!(
        fs::read_to_string(d.join("alt.txt")).unwrap().trim(),
        "BR".repeat(6)
    );

    ok(
        d,
        &[
            "construct",
            "cycle",
            "--kind",
            "three-quarters",
            "--n",
            "16",
            "--out",
            "tq.txt",
        ],
    );
    ok(d, &["graph", "cycle", "--n", "16", "--out", "c16.json"]);
    let v = json(&ok(
        d,
        &["prob", "--graph", "c16.json", "--colouring", "tq.txt"],
    ));
    assert_eq!(
        (v["x"].as_str(), v["y"].as_str()),
        (Some("1/4"), Some("7/16"))
    );

    ok(
        d,
        &[
            "construct",
            "halfsplit",
            "--m",
            "2",
            "--r",
            "2",
            "--k",
            "12",
            "--out",
            "c1.txt",
        ],
    );
    fs::write(d.join("c2.txt"), "RRRRRRBBBBBB".repeat(12)).unwrap();
    let stdout = ok(
        d,
        &[
            "construct",
            "tile",
            "--m",
            "2",
            "--k",
            "12",
            "--s",
            "1",
            "--t",
            "2",
            "--c1",
            "c1.txt",
            "--c2",
            "c2.txt",
            "--out",
            "tiled.txt",
            "--report",
            "tile.json",
        ],
    );
    assert!(stdout.is_empty());
    let tile = json(&fs::read_to_string(d.join("tile.json")).unwrap());
    assert_eq!(tile["within_bound"], true);
    let tiled = fs::read_to_string(d.join("tiled.txt")).unwrap();
    let tiled = tiled.trim();
    assert_eq!(tiled.len(), 576);
    assert_eq!(tiled.matches('R').count(), 288);
}

#[test]
fn claims_batch() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    ok(
        d,
        &[
            "claims",
            "--k",
            "6",
            "--samples",
            "300",
            "--seed",
            "1",
            "--out",
            "c.csv",
        ],
    );
    let csv = fs::read_to_string(d.join("c.csv")).unwrap();
    assert_eq!(csv.lines().count(), 301);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",true")));
    let small = twostep(d, &["claims", "--k", "4", "--samples", "3"]);
    assert_eq!(small.status.code(), Some(2));
}
