//! The binary's exit-code contract: 0 success, 2 negative result, 1 operational error.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn upos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_upos")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("upos-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn certify_exit_codes() {
    let ok = upos(&["certify", "--domain", "R", "x^2+1"]);
    assert_eq!(code(&ok), 0);
    assert_eq!(stdout_json(&ok)["kind"], "wsos-R");

    let neg = upos(&["certify", "--domain", "R", "x^2-1"]);
    assert_eq!(code(&neg), 2);
    assert_eq!(stdout_json(&neg), serde_json::json!({"t": "0", "value": "-1"}));

    let iv = upos(&["certify", "--domain", "interval", "1", "2", "x"]);
    assert_eq!(code(&iv), 0);
    let doc = stdout_json(&iv);
    assert_eq!(doc["kind"], "wsos-interval");
    assert_eq!(doc["payload"]["region"], serde_json::json!({"type": "interval", "a": "1", "b": "2"}));

    let parse = upos(&["certify", "x^2+"]);
    assert_eq!(code(&parse), 1);
    assert!(String::from_utf8_lossy(&parse.stderr).contains("offset"));

    let odd = upos(&["certify", "--kind", "pert", "x^3+1"]);
    assert_eq!(code(&odd), 1);
    assert!(String::from_utf8_lossy(&odd.stderr).contains("even-degree"));
}

#[test]
fn certify_stats_and_out_file() {
    let out = scratch("stats.json");
    let o = upos(&["certify", "--stats", "--out", out.to_str().unwrap(), "x^4 + 3*x + 5"]);
    assert_eq!(code(&o), 0);
    let err = String::from_utf8_lossy(&o.stderr);
    for key in ["d=4", "tau=", "b_exp=", "kappa=", "summands=", "output_bitsize="] {
        assert!(err.contains(key), "missing {key} in {err}");
    }
    assert!(o.stdout.is_empty());
    assert_eq!(code(&upos(&["verify", "x^4 + 3*x + 5", out.to_str().unwrap()])), 0);
}

#[test]
fn verify_exit_codes() {
    let cert = scratch("sq.json");
    assert_eq!(code(&upos(&["certify", "--out", cert.to_str().unwrap(), "x^2+1"])), 0);
    let c = cert.to_str().unwrap();
    assert_eq!(code(&upos(&["verify", "x^2+1", c])), 0);

    let rej = upos(&["verify", "x^2+2", c]);
    assert_eq!(code(&rej), 2);
    assert!(String::from_utf8_lossy(&rej.stderr).contains("coefficient mismatch at k = 0"));

    let text = std::fs::read_to_string(&cert).unwrap();
    let cut = scratch("cut.json");
    std::fs::write(&cut, &text[..text.len() / 2]).unwrap();
    assert_eq!(code(&upos(&["verify", "x^2+1", cut.to_str().unwrap()])), 1);
    assert_eq!(code(&upos(&["verify", "x^2+1", scratch("absent.json").to_str().unwrap()])), 1);
}

#[test]
fn pert_and_halfline_round_trip() {
    let pert = scratch("pert.json");
    assert_eq!(code(&upos(&["certify", "--kind", "pert", "--squarefree-witness", "--out", pert.to_str().unwrap(), "x^4+1"])), 0);
    assert_eq!(code(&upos(&["verify", "x^4+1", pert.to_str().unwrap()])), 0);

    let hl = scratch("hl.json");
    assert_eq!(code(&upos(&["certify", "--domain", "halfline", "--out", hl.to_str().unwrap(), "x^3 - x + 1"])), 0);
    assert_eq!(code(&upos(&["verify", "x^3 - x + 1", hl.to_str().unwrap()])), 0);
    assert_eq!(code(&upos(&["certify", "--domain", "halfline", "x - 1"])), 2);
}

#[test]
fn polynomial_from_file() {
    let f = scratch("poly.txt");
    std::fs::write(&f, "1 0 1\n").unwrap();
    assert_eq!(code(&upos(&["certify", f.to_str().unwrap()])), 0);
}

#[test]
fn witness_command() {
    let o = upos(&["witness", "--domain", "interval", "-2", "2", "x^2-1"]);
    assert_eq!(code(&o), 0);
    let w = stdout_json(&o);
    let t: f64 = {
        let s = w["t"].as_str().unwrap();
        match s.split_once('/') {
            Some((n, d)) => n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap(),
            None => s.parse().unwrap(),
        }
    };
    assert!(t * t < 1.0);
    assert_eq!(code(&upos(&["witness", "x^2+1"])), 2);
}

fn dyadic(s: &str) -> f64 {
    let (m, e) = s.split_once("*2^-").unwrap();
    m.parse::<f64>().unwrap() / 2f64.powi(e.parse().unwrap())
}

#[test]
fn karlin_command() {
    let o = upos(&["karlin", "--domain", "R", "--prec", "60", "x^4+1"]);
    assert_eq!(code(&o), 0);
    let doc = stdout_json(&o);
    let mut pts: Vec<f64> = ["karlin_x", "karlin_y"]
        .iter()
        .flat_map(|k| doc["payload"][k].as_array().unwrap().iter().map(|v| dyadic(v.as_str().unwrap())).collect::<Vec<_>>())
        .collect();
    pts.sort_by(f64::total_cmp);
    assert_eq!(pts.len(), 3);
    for (p, want) in pts.iter().zip([-1.0, 0.0, 1.0]) {
        assert!((p - want).abs() < 1e-12);
    }

    let hl = upos(&["karlin", "--domain", "halfline", "x+1"]);
    assert_eq!(code(&hl), 0);
    let doc = stdout_json(&hl);
    assert!(doc["payload"]["karlin_x"].as_array().unwrap().is_empty());
    assert!(doc["payload"]["karlin_y"].as_array().unwrap().is_empty());

    assert_eq!(code(&upos(&["karlin", "--domain", "R", "x^2-1"])), 2);
}

#[test]
fn bench_suites() {
    let o = upos(&["bench", "--suite", "wilkinson", "--degrees", "10:12:2"]);
    assert_eq!(code(&o), 0);
    let csv = String::from_utf8(o.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "degree,input_bitsize,output_bitsize,summands,epsilon_exp,kappa,time_ms");
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "10");
    assert!((first[1].parse::<i64>().unwrap() - 17).abs() <= 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("R^2"));

    let a = upos(&["bench", "--suite", "random-sos", "--nu", "3", "--degrees", "20:40:20", "--seed", "5", "--jobs", "2"]);
    let b = upos(&["bench", "--suite", "random-sos", "--nu", "3", "--degrees", "20:40:20", "--seed", "5"]);
    assert_eq!(code(&a), 0);
    let strip = |o: &Output| String::from_utf8_lossy(&o.stdout).lines().map(|l| l.rsplit_once(',').map_or(l, |(h, _)| h).to_string()).collect::<Vec<_>>();
    assert_eq!(strip(&a), strip(&b));

    assert_eq!(code(&upos(&["bench", "--suite", "nope"])), 1);
    let sollya = upos(&["bench", "--suite", "sollya"]);
    assert_eq!(code(&sollya), 1);
    assert!(String::from_utf8_lossy(&sollya.stderr).contains("--corpus"));
}

#[test]
fn bench_external_corpus() {
    let f = scratch("corpus.txt");
    std::fs::write(&f, "# a b polynomial\n0 1 x^2 + 1\n-1 1/2 x^4 - x + 2\n").unwrap();
    let o = upos(&["bench", "--suite", "sollya", "--corpus", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 3);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&upos(&["certify", "--domain", "interval", "1", "x"])), 1);
    assert_eq!(code(&upos(&["certify", "--domain", "disk", "x"])), 1);
    assert_eq!(code(&upos(&["frobnicate"])), 1);
    assert_eq!(code(&upos(&["--help"])), 0);
}
