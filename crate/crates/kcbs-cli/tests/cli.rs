use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn kcbs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kcbs"))
        .args(args)
        .env_remove("KCBS_THREADS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn verify_standard_basis() {
    let o = kcbs(&["verify"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).lines().any(|l| l == "ktilde_max 0.447214"));
}

#[test]
fn verify_json_block() {
    let o = kcbs(&["verify", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["noncontextual_bound"], 0.4);
    assert_eq!(v["pentagon"], true);
    assert!((v["ktilde_max"].as_f64().unwrap() - 0.447213595499958).abs() < 1e-12);
    assert!(stdout(&o).contains("\"noncontextual_bound\": 0.4"));
}

#[test]
fn verify_accepts_complex_and_real_amplitudes() {
    let dir = tempfile::tempdir().unwrap();
    let pi = std::f64::consts::PI;
    let z = (pi / 5.0).cos().sqrt();
    let (c2, s2) = ((2.0 * pi / 5.0).cos(), (2.0 * pi / 5.0).sin());
    let (c4, s4) = ((4.0 * pi / 5.0).cos(), (4.0 * pi / 5.0).sin());
    // The standard vectors, one carrying a global phase of i, one scaled.
    let body = format!(
        "[[1, 0, {z}], [{c4}, {m}, {z}], [[0, {c2}], [0, {s2}], [0, {z}]], [{c2}, {n}, {z}], [{a}, {b}, {c}]]",
        m = -s4,
        n = -s2,
        a = 3.0 * c4,
        b = 3.0 * s4,
        c = 3.0 * z,
    );
    let path = write(dir.path(), "basis.json", &body);
    let o = kcbs(&["verify", "--basis", &path, "--json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert!((v["ktilde_max"].as_f64().unwrap() - 0.447213595499958).abs() < 1e-12);
    assert!(v["basis"].is_array());
}

#[test]
fn verify_rejects_corrupted_basis() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "bad.json",
        "[[1,0,0],[0.1,1,0],[0,0,1],[1,1,0],[0,1,1]]",
    );
    let o = kcbs(&["verify", "--basis", &path]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("verify failed"));
    assert!(stdout(&o).contains("pentagon false"));
}

#[test]
fn verify_rejects_malformed_files() {
    let dir = tempfile::tempdir().unwrap();
    for (name, body) in [
        ("four.json", "[[1,0,0],[0,1,0],[0,0,1],[1,1,0]]"),
        ("zero.json", "[[0,0,0],[0,1,0],[0,0,1],[1,1,0],[0,1,1]]"),
        ("text.json", "not json"),
    ] {
        let path = write(dir.path(), name, body);
        let o = kcbs(&["verify", "--basis", &path]);
        assert_eq!(code(&o), 1, "{name}");
        assert!(stderr(&o).starts_with("error:"), "{name}: {}", stderr(&o));
    }
    assert_eq!(code(&kcbs(&["verify", "--basis", "/nonexistent/basis.json"])), 1);
}

#[test]
fn monogamy_default_certificate() {
    let o = kcbs(&["monogamy"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["bound"], 0.8);
    assert_eq!(v["mode"], "paper_abstract");
    assert_eq!(v["alpha"], serde_json::json!([2, 2]));
    assert_eq!(v["chordal"], serde_json::json!([true, true]));
}

#[test]
fn monogamy_mimic_mode() {
    let o = kcbs(&["monogamy", "--mode", "mimic"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["mode"], "mimic");
    assert_eq!(v["alpha"], serde_json::json!([3, 3]));
}

#[test]
fn monogamy_writes_certificate_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cert.json");
    let o = kcbs(&["monogamy", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), stdout(&o));
}

fn custom_graph(edges: &[(usize, usize)], parts: [&[usize]; 2]) -> String {
    let edges: Vec<Value> = edges
        .iter()
        .map(|&(u, v)| serde_json::json!({"u": u, "v": v, "kind": "exclusive"}))
        .collect();
    let labels: Vec<String> = (0..parts[0].len() + parts[1].len()).map(|i| i.to_string()).collect();
    serde_json::json!({"graph": {"labels": labels, "edges": edges}, "parts": parts}).to_string()
}

#[test]
fn monogamy_custom_non_chordal_part_fails() {
    let dir = tempfile::tempdir().unwrap();
    // Part 0 is a 4-cycle: not chordal.
    let body = custom_graph(&[(0, 1), (1, 2), (2, 3), (3, 0), (4, 5)], [&[0, 1, 2, 3], &[4, 5]]);
    let path = write(dir.path(), "c4.json", &body);
    let o = kcbs(&["monogamy", "--graph", &path]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("chordal"), "{}", stderr(&o));
    assert_eq!(json(&o)["mode"], "custom");
}

#[test]
fn monogamy_custom_chordal_passes() {
    let dir = tempfile::tempdir().unwrap();
    let body = custom_graph(&[(0, 1), (1, 2), (0, 2), (3, 4)], [&[0, 1, 2], &[3, 4]]);
    let path = write(dir.path(), "ok.json", &body);
    let o = kcbs(&["monogamy", "--graph", &path]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn monogamy_custom_bad_partition_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let body = custom_graph(&[(0, 1)], [&[0, 1], &[1]]);
    let path = write(dir.path(), "overlap.json", &body);
    assert_eq!(code(&kcbs(&["monogamy", "--graph", &path])), 1);
}

#[test]
fn simulate_ideal_run_is_secure() {
    let o = kcbs(&["simulate", "--rounds", "100000", "--seed", "7", "--eve", "absent", "--sacrifice", "0.1", "--json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    let rate = v["key_stats"]["key_rate_per_transmission"].as_f64().unwrap();
    assert!((rate - 0.55).abs() < 0.01, "{rate}");
    assert_eq!(v["security_report"]["verdict"], "secure");
    assert_eq!(v["config"]["seed"], 7);
    assert!(v["oracle"].is_null());
}

#[test]
fn simulate_intercept_resend_matches_oracle() {
    let o = kcbs(&[
        "simulate", "--rounds", "1000000", "--seed", "7", "--eve", "fixed:1", "--resend", "collapsed",
        "--sacrifice", "0.1", "--json",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    let kab = v["security_report"]["kab_estimate"].as_f64().unwrap();
    let m = v["security_report"]["sample_size"].as_f64().unwrap();
    let expected = v["oracle"]["kab_expected"].as_f64().unwrap();
    assert!((expected - 0.898142).abs() < 1e-6);
    let sigma = (expected * (1.0 - expected) / m).sqrt();
    assert!((kab - expected).abs() < 4.0 * sigma, "{kab} vs {expected}");
}

#[test]
fn simulate_small_sample_is_inconclusive() {
    let o = kcbs(&["simulate", "--rounds", "500", "--seed", "1"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("verdict inconclusive"));
}

#[test]
fn simulate_rejects_bad_flags() {
    for args in [
        &["simulate", "--rounds", "100", "--seed", "1", "--resend", "collapsed"][..],
        &["simulate", "--rounds", "100", "--seed", "1", "--eve", "absent", "--resend", "eigenstate"],
        &["simulate", "--rounds", "100", "--seed", "1", "--eve", "fixed:7"],
        &["simulate", "--rounds", "100", "--seed", "1", "--sacrifice", "0.9"],
        &["simulate", "--rounds", "0", "--seed", "1"],
        &["simulate", "--rounds", "100"],
        &["simulate", "--rounds", "100", "--seed", "1", "--mode", "sideways"],
        &["frobnicate"],
    ] {
        let o = kcbs(args);
        assert_eq!(code(&o), 1, "{args:?}: {}", stderr(&o));
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn simulate_rejects_bad_thread_count() {
    for bad in ["0", "-2", "many"] {
        let o = Command::new(env!("CARGO_BIN_EXE_kcbs"))
            .args(["simulate", "--rounds", "100", "--seed", "1"])
            .env("KCBS_THREADS", bad)
            .output()
            .unwrap();
        assert_eq!(code(&o), 1, "{bad}");
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(code(&kcbs(&["--help"])), 0);
    assert_eq!(code(&kcbs(&["simulate", "--help"])), 0);
}

fn simulate_files(dir: &Path, threads: &str, tag: &str, extra: &[&str]) -> (Vec<u8>, Vec<u8>) {
    let report = dir.join(format!("report-{tag}.json"));
    let csv = dir.join(format!("t-{tag}.csv"));
    let o = Command::new(env!("CARGO_BIN_EXE_kcbs"))
        .args(["simulate", "--rounds", "30000", "--seed", "11", "--out"])
        .arg(&report)
        .arg("--transcript")
        .arg(&csv)
        .args(extra)
        .env("KCBS_THREADS", threads)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    (std::fs::read(report).unwrap(), std::fs::read(csv).unwrap())
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    for (i, extra) in [
        &["--eve", "random"][..],
        &["--mode", "entangled", "--eve", "fixed:2", "--resend", "eigenstate"],
    ]
    .iter()
    .enumerate()
    {
        let one = simulate_files(dir.path(), "1", &format!("{i}-1"), extra);
        let four = simulate_files(dir.path(), "4", &format!("{i}-4"), extra);
        assert_eq!(one, four, "{extra:?}");
    }
}

#[test]
fn transcript_rows_match_rounds() {
    let dir = tempfile::tempdir().unwrap();
    let (report, csv) = simulate_files(dir.path(), "2", "rows", &["--eve", "fixed:0"]);
    let v: Value = serde_json::from_slice(&report).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert_eq!(text.lines().count() as u64, v["config"]["rounds"].as_u64().unwrap() + 1);
    assert!(text.starts_with("index,i,j,case,bob_outcome,alice_bit,bob_bit,eve_setting,eve_outcome,eve_guess\n"));
}

#[test]
fn human_summary_only_shows_report_quantities() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = kcbs(&["simulate", "--rounds", "20000", "--seed", "4", "--eve", "random", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let mut reals = Vec::new();
    collect_reals(&v, &mut reals);
    for line in stdout(&o).lines() {
        for word in line.split_whitespace().skip(1) {
            if let Ok(x) = word.parse::<f64>() {
                assert!(
                    reals.iter().any(|r| (r - x).abs() <= 5e-7 * r.abs().max(1.0)),
                    "{line}: {x} not in report"
                );
            }
        }
    }
}

fn collect_reals(v: &Value, out: &mut Vec<f64>) {
    match v {
        Value::Number(n) => out.push(n.as_f64().unwrap()),
        Value::Array(a) => a.iter().for_each(|x| collect_reals(x, out)),
        Value::Object(m) => m.values().for_each(|x| collect_reals(x, out)),
        _ => {}
    }
}
