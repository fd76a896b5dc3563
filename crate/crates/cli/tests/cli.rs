use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mstgrid"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn tree_reports_centipede_stats() {
    let v = json(&["tree", "--family", "centipede", "--n", "3"]);
    assert_eq!(v["tree"]["branches"].as_array().unwrap().len(), 8);
    assert_eq!(v["stats"]["avg_stretch"], "2");
    assert_eq!(v["seed"], 0);
    assert_eq!(v["config"]["n"], 3);
    assert!(v["version"].is_string());
}

#[test]
fn tree_fractal_and_formats() {
    let v = json(&["tree", "--family", "fractal", "--k", "2"]);
    assert_eq!(v["tree"]["branches"].as_array().unwrap().len(), 15);
    let ascii = run(&[
        "tree", "--family", "fractal", "--k", "2", "--format", "ascii",
    ]);
    let text = String::from_utf8(ascii.stdout).unwrap();
    assert!(text.starts_with("# mstgrid "));
    assert_eq!(text.lines().count(), 1 + 7);
    let csv = String::from_utf8(
        run(&[
            "tree",
            "--family",
            "centipede",
            "--n",
            "4",
            "--format",
            "csv",
        ])
        .stdout,
    )
    .unwrap();
    assert_eq!(csv.lines().nth(1), Some("d,count,mass"));
    assert_eq!(csv.lines().nth(2), Some("3,3,1/3"));
}

#[test]
fn invalid_inputs_exit_with_usage_code() {
    assert_eq!(code(&["tree", "--family", "centipede", "--n", "1"]), 2);
    assert_eq!(code(&["tree", "--family", "hexagon", "--n", "4"]), 2);
    assert_eq!(
        code(&["tree", "--family", "centipede", "--n", "3", "--bogus"]),
        2
    );
    assert_eq!(code(&["decay", "--family", "kruskal"]), 2);
    assert_eq!(code(&["scatter", "--n", "3"]), 2);
    assert_eq!(code(&["tree", "--config", "/nonexistent/run.json"]), 1);
}

#[test]
fn prob_exact_from_tree_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "g2.json", r#"{"n": 2, "branches": [1, 2, 3]}"#);
    let v = json(&["prob", "--tree", &path, "--mode", "exact"]);
    assert_eq!(v["probability"], "1/4");
    assert_eq!(v["exact"], true);
    assert_eq!(v["log_std_err"], 0.0);
}

#[test]
fn prob_primal_and_dual_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["tree", "--family", "wilson", "--n", "3", "--seed", "4"]);
    let path = write(
        dir.path(),
        "t.json",
        &String::from_utf8(out.stdout).unwrap(),
    );
    let a = json(&["prob", "--tree", &path, "--mode", "exact"]);
    let b = json(&["prob", "--tree", &path, "--mode", "exact-dual"]);
    assert_eq!(a["probability"], b["probability"]);
}

#[test]
fn prob_guard_and_estimate() {
    assert_eq!(code(&["prob", "--family", "centipede", "--n", "8"]), 3);
    let v = json(&[
        "prob",
        "--family",
        "kruskal",
        "--n",
        "8",
        "--mode",
        "estimate",
        "--samples",
        "10000",
        "--seed",
        "2",
    ]);
    assert_eq!(v["samples"], 10000);
    assert!(v["log_prob"].as_f64().unwrap() < 0.0);
    assert!(v["log_std_err"].as_f64().unwrap() > 0.0);
    assert_eq!(v["seed"], 2);
}

#[test]
fn scatter_is_reproducible() {
    let args = [
        "scatter",
        "--n",
        "4",
        "--trees",
        "10",
        "--samples",
        "500",
        "--seed",
        "9",
    ];
    let a = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, run(&args).stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# mstgrid ") && lines[0].contains("seed=9"));
    assert_eq!(lines[1], "sampler,index,avg_stretch,log_prob,log_std_err");
    // 10 + 10 random trees, the centipede and the fractal, then the correlation
    assert_eq!(lines.len(), 2 + 22 + 1);
    assert!(lines
        .last()
        .unwrap()
        .starts_with("# pearson_r_random_trees="));
}

#[test]
fn decay_bounds() {
    let c = json(&["decay", "--family", "centipede"]);
    assert!((c["e_f_bar"].as_f64().unwrap() - 4.0).abs() < 1e-6);
    let f = json(&["decay", "--family", "fractal", "--d-max", "125"]);
    assert!((f["e_f_bar"].as_f64().unwrap() - 3.2508).abs() < 5e-3);
    assert_eq!(f["p_infinity"][0]["p_infinity"], "5/12");
    let u = json(&["decay", "--family", "uniform"]);
    assert!((u["e_f_bar"].as_f64().unwrap() - 3.433).abs() < 1e-2);
    let csv = String::from_utf8(
        run(&[
            "decay",
            "--family",
            "centipede",
            "--format",
            "csv",
            "--points",
            "4",
        ])
        .stdout,
    )
    .unwrap();
    assert_eq!(
        csv.lines().skip(1).collect::<Vec<_>>(),
        ["x,f", "0,1", "0.25,1.25", "0.5,1.5", "0.75,1.75", "1,2"]
    );
}

#[test]
fn conjecture_rows() {
    let args = [
        "conjecture",
        "--family",
        "centipede",
        "--n",
        "2,10",
        "--samples",
        "300",
        "--seed",
        "5",
    ];
    let a = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, run(&args).stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(2)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], "2");
    assert_eq!(rows[0][2], "0");
    assert!(rows[1][2].parse::<f64>().unwrap() > 0.0);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.json",
        r#"{"family": "kruskal", "n": 5, "seed": 11}"#,
    );
    let a = json(&["tree", "--config", &cfg]);
    assert_eq!(a["seed"], 11);
    assert_eq!(a["config"]["family"], "kruskal");
    let b = json(&["tree", "--config", &cfg, "--seed", "12", "--n", "4"]);
    assert_eq!(b["seed"], 12);
    assert_eq!(b["tree"]["n"], 4);
    let bad = write(dir.path(), "bad.json", r#"{"famly": "kruskal"}"#);
    assert_eq!(code(&["tree", "--config", &bad]), 2);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tree.json");
    let o = run(&[
        "tree",
        "--family",
        "double-spiral",
        "--n",
        "7",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success() && o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["tree"]["branches"].as_array().unwrap().len(), 48);
}
