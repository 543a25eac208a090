use std::process::Command;

use serde_json::Value;
use tscc::cli::dispatch;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("tscc").chain(args.iter().copied());
    let code = dispatch(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "stderr: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn rank_count_unrank() {
    assert_eq!(run(&["rank", "--beta", "6", "--p", "3", "--vector", "1011001001"]).1, "353\n");
    assert_eq!(run(&["count", "--beta", "6", "--p", "3", "--n", "10"]).1, "421\n");
    assert_eq!(
        run(&["unrank", "--beta", "6", "--p", "3", "--n", "10", "--m", "353"]).1,
        "1011001001\n"
    );
    for m in 1..=13 {
        let m = m.to_string();
        let (_, v, _) = run(&["unrank", "--beta", "3", "--p", "2", "--n", "4", "--m", &m]);
        let (_, r, _) = run(&["rank", "--beta", "3", "--p", "2", "--vector", v.trim()]);
        assert_eq!(r.trim(), m);
    }
}

#[test]
fn rank_errors_exit_2() {
    assert_eq!(run(&["rank", "--beta", "3", "--p", "2", "--vector", "0111"]).0, 2);
    assert_eq!(run(&["unrank", "--beta", "3", "--p", "2", "--n", "4", "--m", "14"]).0, 2);
    assert_eq!(run(&["count", "--beta", "3", "--p", "4", "--n", "4"]).0, 2);
    let (code, _, err) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"));
}

#[test]
fn simulate_trivial_golden() {
    let v = json(&[
        "simulate", "--construction", "trivial", "--alpha", "3", "--beta", "3", "--p", "2",
        "--n", "15", "--writes", "30", "--seed", "7",
    ]);
    assert_eq!(v["verdict"], "satisfied");
    assert!((v["achieved_rate"].as_f64().unwrap() - 2.0 / 9.0).abs() < 1e-12);
    assert_eq!(v["period"], 3);
    assert_eq!(v["cells"], 15);
}

#[test]
fn simulate_is_deterministic() {
    let args = [
        "simulate", "--construction", "space", "--beta", "3", "--p", "2", "--nprime", "6",
        "--writes", "50", "--seed", "42",
    ];
    let dir = tempfile::tempdir().unwrap();
    let t1 = dir.path().join("a.txt");
    let t2 = dir.path().join("b.txt");
    let a = run(&[&args[..], &["--trace", t1.to_str().unwrap()]].concat());
    let b = run(&[&args[..], &["--trace", t2.to_str().unwrap()]].concat());
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
    let ta = std::fs::read_to_string(&t1).unwrap();
    assert_eq!(ta, std::fs::read_to_string(&t2).unwrap());
    assert_eq!(ta.lines().count(), 51);

    let (code, out, _) = run(&[
        "verify", "--alpha", "1", "--beta", "3", "--p", "2", "--file", t1.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("satisfied"));
    // the same trace read with a tighter budget fails
    let (code, out, _) = run(&[
        "verify", "--alpha", "2", "--beta", "3", "--p", "1", "--file", t1.to_str().unwrap(),
    ]);
    assert_eq!(code, 3);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "violation");
    assert!(v["write"].as_u64().unwrap() >= 1);
}

#[test]
fn simulate_every_construction() {
    let cases: &[&[&str]] = &[
        &["--construction", "time", "--alpha", "4"],
        &["--construction", "time", "--alpha", "3", "--wom", "bitper", "--t", "3"],
        &["--construction", "timep", "--alpha", "5", "--p", "3"],
        &["--construction", "timep", "--alpha", "3", "--p", "2", "--wom", "bitper", "--t", "3", "--remark"],
        &["--construction", "dilute-time", "--alpha", "2", "--beta", "3", "--p", "2", "--nprime", "4"],
        &["--construction", "dilute-time", "--alpha", "3", "--beta", "3", "--p", "2", "--n", "8"],
        &["--construction", "dilute-space", "--alpha", "4", "--beta", "3", "--p", "1"],
        &["--construction", "coset", "--beta", "3", "--p", "2", "--n", "9"],
    ];
    for extra in cases {
        let args = [&["simulate", "--writes", "120", "--seed", "3"][..], extra].concat();
        let v = json(&args);
        assert_eq!(v["verdict"], "satisfied", "{extra:?}");
        assert!(v["theoretical_rate"].as_f64().unwrap() > 0.0);
    }
}

#[test]
fn simulate_parameter_errors() {
    let (code, _, err) = run(&[
        "simulate", "--construction", "timep", "--alpha", "2", "--p", "2", "--writes", "4",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("remark"));
    let (code, _, _) = run(&[
        "simulate", "--construction", "trivial", "--alpha", "2", "--beta", "3", "--p", "1",
        "--n", "10", "--writes", "4",
    ]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["simulate", "--construction", "time", "--wom", "bogus", "--writes", "4"]);
    assert_eq!(code, 2);
}

#[test]
fn wom_table_file() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("wom.txt");
    std::fs::write(
        &good,
        "2 2\nwrite 1\n00 1 -> 00\n00 2 -> 01\nwrite 2\n00 1 -> 00\n00 2 -> 10\n01 1 -> 11\n01 2 -> 01\n",
    )
    .unwrap();
    let wom = format!("file:{}", good.display());
    let v = json(&[
        "simulate", "--construction", "time", "--alpha", "3", "--wom", &wom, "--writes", "40",
    ]);
    assert_eq!(v["verdict"], "satisfied");

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "1 2\nwrite 1\n0 1 -> 0\n0 2 -> 1\nwrite 2\n0 1 -> 0\n1 1 -> 0\n").unwrap();
    let wom = format!("file:{}", bad.display());
    let (code, _, err) = run(&[
        "simulate", "--construction", "time", "--alpha", "3", "--wom", &wom, "--writes", "4",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("lowers a cell"), "{err}");
}

#[test]
fn capacity_and_bounds() {
    let v = json(&["capacity", "wwl", "--beta", "2", "--p", "1"]);
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert!(v["lambda_lower"].as_f64().unwrap() <= phi);
    assert!(v["lambda_upper"].as_f64().unwrap() >= phi);
    assert_eq!(v["M"], 2);

    let v = json(&["bounds", "--alpha", "2", "--beta", "2", "--p", "1"]);
    assert_eq!(v["upper"], 0.43431);
    assert_eq!(v["upper_provenance"], "2d-reference");
    let v = json(&["bounds", "--alpha", "1", "--beta", "3", "--p", "2", "--coset"]);
    assert_eq!(v["lower_provenance"], "coset");
}

#[test]
fn table_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let (code, _, _) = run(&[
        "table", "--grid", "alpha=4:8,beta=1,p=1", "--out", path.to_str().unwrap(), "--workers", "3",
    ]);
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "alpha,beta,p,t_opt,lower,upper,provenance");
    let lowers: Vec<f64> = lines
        .map(|l| l.split(',').nth(4).unwrap().parse().unwrap())
        .collect();
    for (got, want) in lowers.iter().zip([0.290, 0.256, 0.235, 0.216, 0.201]) {
        assert!((got - want).abs() <= 0.003);
    }
    let (_, stdout, _) = run(&["table", "--grid", "alpha=4:8,beta=1,p=1"]);
    assert_eq!(stdout, csv);
}

#[test]
fn count2d_and_findgood() {
    let v = json(&["count2d", "--a", "1", "--b", "2", "--p", "1", "--m", "1", "--n", "4"]);
    assert_eq!(v["count"], "8");
    let v = json(&["findgood", "--n", "8", "--beta", "3", "--p", "2"]);
    let j = v["j"].as_u64().unwrap();
    assert!(j <= v["j_bound"].as_u64().unwrap());
    assert_eq!(v["basis"].as_array().unwrap().len() as u64, j);
    assert_eq!(v["steps"].as_array().unwrap().len() as u64, j);
    assert_eq!(v["steps"][j as usize - 1]["Q_B"], 0.0);
    assert_eq!(v["mode"], "exhaustive");
}

#[test]
fn binary_honours_state_bit_limit() {
    let exe = env!("CARGO_BIN_EXE_tscc");
    let out = Command::new(exe)
        .args(["count2d", "--a", "2", "--b", "2", "--p", "1", "--m", "6", "--n", "6"])
        .env("TSCC_MAX_STATE_BITS", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("TSCC_MAX_STATE_BITS"));
    let out = Command::new(exe)
        .args(["count", "--beta", "6", "--p", "3", "--n", "10"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "421\n");
}
