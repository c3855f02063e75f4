use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const REFERENCE: [&str; 8] = ["--a", "0.2", "--b", "1.2", "--snr1-db", "10", "--snr2-db", "20"];

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_icbargain"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn with_reference<'a>(cmd: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![cmd];
    v.extend_from_slice(&REFERENCE);
    v.extend_from_slice(extra);
    v
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn f(v: &Value) -> f64 {
    v.as_str().expect("numbers are strings").parse().unwrap()
}

#[test]
fn reference_bargain_is_regular_with_expected_split() {
    let dir = TempDir::new().unwrap();
    let out = run(&with_reference("bargain", &["--scheme", "hk", "--p1", "0.5", "--p2", "0.5", "--solution", "both"]), dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_json(&dir.path().join("bargain.json"));
    assert_eq!(report["outcome"]["regular"], Value::Bool(true));
    assert_eq!(report["outcome"]["phase1"]["beta"], "0.05");
    assert_eq!(report["outcome"]["phase1"]["alpha"], "0");
    assert_eq!(report["exit_status"], 0);
    let r_bar = &report["outcome"]["spe"]["r_bar"];
    let nbs = &report["outcome"]["nbs"];
    assert!(f(&r_bar["r1"]) > f(&nbs["r1"]));
}

#[test]
fn non_regular_spe_request_exits_3() {
    let dir = TempDir::new().unwrap();
    let args = ["bargain", "--a", "1.5", "--b", "1.5", "--snr1-db", "10", "--snr2-db", "20", "--scheme", "hk", "--solution", "spe"];
    let out = run(&args, dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not regular"));
    let report = read_json(&dir.path().join("bargain.json"));
    assert_eq!(report["outcome"]["refusal"], "bargaining problem is not regular");
    assert_eq!(report["outcome"]["operating_point"], Value::Null);
    assert!(report["outcome"]["nbs"].is_object());
    assert_eq!(report["exit_status"], 3);
}

#[test]
fn non_regular_with_both_still_succeeds() {
    let dir = TempDir::new().unwrap();
    let args = ["bargain", "--a", "1.5", "--b", "1.5", "--snr1-db", "10", "--snr2-db", "20", "--solution", "both"];
    assert_eq!(run(&args, dir.path()).status.code(), Some(0));
}

#[test]
fn sweep_rows_are_monotone() {
    let dir = TempDir::new().unwrap();
    let out = run(&with_reference("sweep", &["--p1-from", "0.1", "--p1-to", "0.9", "--p1-step", "0.1", "--p2", "0.5"]), dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("sweep.csv"));
    assert_eq!(header[..4], ["p1", "p2", "status", "rbar_r1"]);
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[2][0], "0.300000");
    let r1: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(r1.windows(2).all(|w| w[1] > w[0]), "{r1:?}");
    assert!(rows.iter().all(|r| r[2] == "ok"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let commands: [(&str, &[&str], &[&str]); 3] = [
        ("simulate", &["--trials", "2000", "--seed", "7", "--svg"], &["simulate.csv", "simulate.json", "simulate.svg"]),
        ("sweep", &["--svg"], &["sweep.csv", "sweep.json", "sweep.svg"]),
        ("compare", &["--svg"], &["compare.csv", "compare.json", "compare.svg"]),
    ];
    for (cmd, extra, files) in commands {
        let args = with_reference(cmd, extra);
        assert_eq!(run(&args, dir.path()).status.code(), Some(0));
        let first: Vec<Vec<u8>> = files.iter().map(|f| std::fs::read(dir.path().join(f)).unwrap()).collect();
        assert_eq!(run(&args, dir.path()).status.code(), Some(0));
        for (name, bytes) in files.iter().zip(&first) {
            assert_eq!(&std::fs::read(dir.path().join(name)).unwrap(), bytes, "{cmd}: {name} changed");
        }
    }
}

#[test]
fn json_numbers_reproduce_csv_rates() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run(&with_reference("bargain", &[]), dir.path()).status.code(), Some(0));
    let report = read_json(&dir.path().join("bargain.json"));
    let (header, rows) = read_csv(&dir.path().join("bargain.csv"));
    let o = &report["outcome"];
    let expected = [
        ("r0_r1", &o["disagreement"]["r1"]),
        ("r0_r2", &o["disagreement"]["r2"]),
        ("rbar_r1", &o["spe"]["r_bar"]["r1"]),
        ("rbar_r2", &o["spe"]["r_bar"]["r2"]),
        ("rtilde_r1", &o["spe"]["r_tilde"]["r1"]),
        ("nbs_r2", &o["nbs"]["r2"]),
    ];
    for (column, value) in expected {
        let idx = header.iter().position(|h| h == column).unwrap();
        let x = f(value);
        assert_eq!(format!("{x:.6}"), rows[0][idx], "{column}");
        assert_eq!(format!("{x}"), value.as_str().unwrap());
    }
}

#[test]
fn db_inputs_echo_exact_linear_powers() {
    let dir = TempDir::new().unwrap();
    let args = ["region", "--a", "0.5", "--b", "0.5", "--snr1-db", "20", "--snr2-db", "30"];
    assert_eq!(run(&args, dir.path()).status.code(), Some(0));
    let report = read_json(&dir.path().join("region.json"));
    assert_eq!(report["inputs"]["power1"], "100");
    assert_eq!(report["inputs"]["power2"], "1000");
    assert_eq!(report["inputs"]["snr1_db"], "20");
}

#[test]
fn reported_artifacts_exist() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run(&with_reference("region", &["--svg"]), dir.path()).status.code(), Some(0));
    let report = read_json(&dir.path().join("region.json"));
    let paths = report["artifacts"].as_array().unwrap();
    assert_eq!(paths.len(), 4);
    for p in paths {
        assert!(Path::new(p.as_str().unwrap()).exists(), "{p}");
    }
    let svg = std::fs::read_to_string(dir.path().join("region.svg")).unwrap();
    assert!(svg.contains(r#"width="800" height="600""#));
}

#[test]
fn bad_input_exits_2() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run(&with_reference("bargain", &["--frobnicate"]), dir.path()).status.code(), Some(2));
    assert_eq!(run(&with_reference("bargain", &["--p1", "1.5"]), dir.path()).status.code(), Some(2));
    assert_eq!(run(&["bargain", "--a", "0.2"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&with_reference("bargain", &["--scheme", "cdma"]), dir.path()).status.code(), Some(2));
    let out = run(&with_reference("sweep", &["--p1-from", "0.0"]), dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_scenario_file_names_line_and_key() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("bad.toml");
    std::fs::write(&file, "a = 0.2\nb = 1.2\nsnr1_db = 10\nsnr2_db = \"loud\"\n").unwrap();
    let out = run(&["bargain", "--scenario", file.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4") && err.contains("snr2_db"), "{err}");

    std::fs::write(&file, "a = 0.2\nb = 1.2\nsnr1_db = 10\nsnr2_db = 20\nsnr3_db = 1\n").unwrap();
    let out = run(&["bargain", "--scenario", file.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("snr3_db"));
}

#[test]
fn flags_override_scenario_file() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("s.toml");
    std::fs::write(
        &file,
        "a = 0.2\nb = 1.2\nsnr1_db = 10\nsnr2_db = 20\np1 = 0.3\n\n[sweep]\nvariable = \"joint\"\nfrom = 0.1\nto = 0.5\nstep = 0.2\n",
    )
    .unwrap();
    let path = file.to_str().unwrap();
    assert_eq!(run(&["bargain", "--scenario", path, "--p1", "0.7"], dir.path()).status.code(), Some(0));
    let report = read_json(&dir.path().join("bargain.json"));
    assert_eq!(report["inputs"]["p1"], "0.7");
    assert_eq!(report["inputs"]["p2"], "0.5");

    assert_eq!(run(&["sweep", "--scenario", path], dir.path()).status.code(), Some(0));
    let (_, rows) = read_csv(&dir.path().join("sweep.csv"));
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[0] == r[1]));
}

#[test]
fn simulate_reports_equilibrium_play() {
    let dir = TempDir::new().unwrap();
    let out = run(&with_reference("simulate", &["--trials", "5000", "--seed", "1", "--grid-size", "51"]), dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let sim = &read_json(&dir.path().join("simulate.json"))["simulation"];
    assert_eq!(sim["play"]["round"], 1);
    assert_eq!(sim["monte_carlo"]["agreement_rounds"]["1"], 5000);
    for k in ["r1", "r2"] {
        assert!((f(&sim["monte_carlo"]["mean"][k]) - f(&sim["equilibrium"]["r_bar"][k])).abs() < 1e-9);
    }
    assert!(f(&sim["deviation_gain"]["user1"]) <= 1e-9 && f(&sim["deviation_gain"]["user2"]) <= 1e-9);
}

#[test]
fn simulate_without_agreement_stays_at_disagreement() {
    let dir = TempDir::new().unwrap();
    let args = ["simulate", "--a", "0.05", "--b", "0.5", "--snr1-db", "20", "--snr2-db", "10"];
    assert_eq!(run(&args, dir.path()).status.code(), Some(0));
    let report = read_json(&dir.path().join("simulate.json"));
    assert_eq!(report["outcome"]["phase1"]["status"], "disagreed");
    assert_eq!(report["simulation"], Value::Null);
}

#[test]
fn compare_reports_mixed_preferences() {
    let dir = TempDir::new().unwrap();
    let args = ["compare", "--a", "0.2", "--b", "1.2", "--snr1-db", "20", "--snr2-db", "30"];
    assert_eq!(run(&args, dir.path()).status.code(), Some(0));
    let report = read_json(&dir.path().join("compare.json"));
    assert_eq!(report["verdict"]["kind"], "mixed");
    assert_eq!(report["verdict"]["hk_preferred_by"], "u1");
    let (_, rows) = read_csv(&dir.path().join("compare.csv"));
    assert_eq!((rows[0][0].as_str(), rows[1][0].as_str()), ("hk", "tdm"));

    let args = ["compare", "--a", "0.1", "--b", "1.2", "--snr1-db", "20", "--snr2-db", "30"];
    assert_eq!(run(&args, dir.path()).status.code(), Some(0));
    assert_eq!(read_json(&dir.path().join("compare.json"))["verdict"]["kind"], "hk_dominates");
}

#[test]
fn negative_db_values_parse() {
    let dir = TempDir::new().unwrap();
    let args = ["bargain", "--a", "1", "--b", "1", "--snr1-db", "-3", "--snr2-db", "5", "--solution", "spe"];
    let out = run(&args, dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}
