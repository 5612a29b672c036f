use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use quasimicro_cli::csv_io::{Table, ValueKind};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quasimicro"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stderr));
    })
}

#[test]
fn noiseless_wiener_is_flat() {
    let out = run(&["simulate", "wiener", "--mu", "0", "--h", "0", "--p0", "5", "--n", "4", "--dt", "1", "--seed", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let table = Table::from_csv(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(table.kind, ValueKind::Price);
    assert_eq!(table.values, vec![5.0; 5]);
    assert_eq!(table.t, vec![0.0, 1.0, 2.0, 3.0, 4.0]);
}

#[test]
fn twopop_metadata_reports_decomposition() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("ticks.csv");
    let out = run(&["simulate", "twopop", "--p", "0.9", "--ds1", "1", "--n", "10", "--seed", "1", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("ticks.csv.meta.json")).unwrap()).unwrap();
    let d = &meta["results"]["decomposition"];
    assert!((d["sigma1_sq"].as_f64().unwrap() - 0.9).abs() < 1e-12);
    assert!((d["sigma2_sq"].as_f64().unwrap() - 8.1).abs() < 1e-12);
    assert_eq!(meta["config"]["p"], 0.9);
    assert_eq!(meta["seed"], 1);
    let table = Table::from_csv(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(table.values.len(), 10);
}

#[test]
fn ecology_piped_into_tail_fit() {
    let sim = run(&["simulate", "ecology", "--delta", "1", "--n", "1000000", "--seed", "7"]);
    assert_eq!(sim.status.code(), Some(0));
    let fit = run_stdin(&["fit", "tail", "--tail-fraction", "0.01"], &sim.stdout);
    assert_eq!(fit.status.code(), Some(0));
    let xi = json(&fit)["results"]["exponent"].as_f64().unwrap();
    assert!((xi - 1.5).abs() < 0.1, "{xi}");
}

#[test]
fn tail_fit_on_exact_quantiles() {
    let f = fixture("pareto_quantiles.csv");
    let out = run(&["fit", "tail", "--input", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["results"]["exponent"].as_f64().unwrap() - 1.5).abs() < 0.05);
    assert!(v["results"]["model_ref"].is_string());
}

#[test]
fn garch_fit_on_constant_returns_is_degenerate() {
    let csv = "t,value\n".to_string() + &(1..=200).map(|i| format!("{i},0.01\n")).collect::<String>();
    let out = run_stdin(&["fit", "garch"], csv.as_bytes());
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));
}

#[test]
fn garch_fit_on_simulated_returns() {
    let sim = run(&["simulate", "garch", "--n", "20000", "--seed", "3"]);
    let out = run_stdin(&["fit", "garch"], &sim.stdout);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["results"];
    assert_eq!(r["converged"], true);
    assert!((r["spec"]["beta"][0].as_f64().unwrap() - 0.8).abs() < 0.1);
}

#[test]
fn jls_fit_on_noiseless_fixture() {
    let f = fixture("jls_noiseless.csv");
    let out = run(&["fit", "jls", "--input", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["results"];
    assert!(r["rmse"].as_f64().unwrap() < 1e-8, "{r}");
    assert!((r["params"]["t_c"].as_f64().unwrap() - 100.0).abs() < 0.5);
}

#[test]
fn regimes_fit_reports_crossover() {
    let sim = run(&["simulate", "kinematic", "--n", "200000", "--seed", "2"]);
    let out = run_stdin(&["fit", "regimes", "--breakpoints", "0.02,2", "--dt-max", "2"], &sim.stdout);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["results"];
    assert_eq!(r["slopes"].as_array().unwrap().len(), 3);
    let cross = r["kinematic"]["crossover_interval"].as_f64().unwrap();
    assert!((cross / 0.5 - 1.0).abs() < 0.2, "{cross}");
}

#[test]
fn every_simulator_round_trips() {
    for kind in ["wiener", "jls", "ticks", "ecology", "kinematic", "twopop", "garch"] {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let out = run(&["simulate", kind, "--n", "300", "--seed", "11", "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{kind}: {}", String::from_utf8_lossy(&out.stderr));
        let text = std::fs::read_to_string(&path).unwrap();
        let table = Table::from_csv(&text).unwrap();
        assert_eq!(table.to_csv(), text, "{kind}");

        // the JSON rendering carries the same numbers
        let js = run(&["simulate", kind, "--n", "300", "--seed", "11", "--format", "json"]);
        let v = json(&js);
        let key = if table.kind == ValueKind::Price { "price" } else { "value" };
        let vals: Vec<f64> = v["results"][key].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        assert_eq!(vals, table.values, "{kind}");
        assert_eq!(v["config"]["seed"], 11);
        assert!(dir.path().join("out.csv.meta.json").exists());
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["simulate", "wiener", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["fit", "tail", "--input", "/nonexistent/file.csv"]).status.code(), Some(2));
    assert_eq!(run_stdin(&["fit", "tail"], b"x,y\n1,2\n").status.code(), Some(2));
    let bad = run(&["simulate", "twopop", "--p", "1"]);
    assert_eq!(bad.status.code(), Some(3));
    assert!(bad.stdout.is_empty());

    // domain errors leave no file behind
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.csv");
    let out = run(&["simulate", "garch", "--alpha", "0.5", "--beta", "0.6", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!path.exists());
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# wiener run\nn = 3\np0 = 2\nh = 0\nseed = 9\n").unwrap();
    let out = run(&["simulate", "wiener", "--config", cfg.to_str().unwrap(), "--p0", "4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["config"]["n"], 3);
    assert_eq!(v["config"]["p0"], 4.0);
    assert_eq!(v["seed"], 9);
    assert_eq!(v["results"]["price"].as_array().unwrap().len(), 4);
    assert_eq!(v["results"]["price"][0], 4.0);

    std::fs::write(&cfg, "n = lots\n").unwrap();
    assert_eq!(run(&["simulate", "wiener", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn output_is_independent_of_threads() {
    let a = run(&["simulate", "ticks", "--n", "500", "--seed", "5", "--threads", "1"]);
    let b = run(&["simulate", "ticks", "--n", "500", "--seed", "5", "--threads", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

fn strip_wall_times(mut v: Value) -> Value {
    for c in v["results"]["checks"].as_array_mut().unwrap() {
        c.as_object_mut().unwrap().remove("wall_time_ms");
    }
    v
}

#[test]
fn verify_is_deterministic_and_passes() {
    let a = run(&["verify", "--seed", "0"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    let b = run(&["verify", "--seed", "0", "--threads", "2"]);
    let (va, vb) = (json(&a), json(&b));
    assert_eq!(va["results"]["overall_pass"], true);
    assert!(va["results"]["checks"].as_array().unwrap().len() >= 10);
    assert_eq!(strip_wall_times(va)["results"], strip_wall_times(vb)["results"]);

    let c = run(&["verify", "--seed", "12345"]);
    assert_eq!(c.status.code(), Some(0));
    assert_eq!(json(&c)["results"]["overall_pass"], true);
}
