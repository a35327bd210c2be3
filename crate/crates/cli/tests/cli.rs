use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tanglechain"))
        .args(args)
        .env_remove("TANGLECHAIN_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn gen(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let p = path.to_str().unwrap().to_string();
    let mut full = vec!["gen-state"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &p]);
    let o = run(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    p
}

fn report(path: &str, extra: &[&str]) -> (Output, serde_json::Value) {
    let mut args = vec!["tangles", path];
    args.extend_from_slice(extra);
    let o = run(&args);
    let v = serde_json::from_slice(&o.stdout).unwrap_or(serde_json::Value::Null);
    (o, v)
}

#[test]
fn gen_state_ghz_layout() {
    let o = run(&["gen-state", "--kind", "ghz", "--n", "4"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let amps = v["amplitudes"].as_array().unwrap();
    assert_eq!(amps.len(), 16);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for (i, a) in amps.iter().enumerate() {
        let want = if i == 0 || i == 15 { h } else { 0.0 };
        assert_eq!(a[0].as_f64().unwrap(), want);
        assert_eq!(a[1].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn gen_state_is_deterministic() {
    let a = run(&["gen-state", "--kind", "random", "--n", "5", "--seed", "7"]);
    let b = run(&["gen-state", "--kind", "random", "--n", "5", "--seed", "7"]);
    let c = run(&["gen-state", "--kind", "random", "--n", "5", "--seed", "8"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let from_env = Command::new(env!("CARGO_BIN_EXE_tanglechain"))
        .args(["gen-state", "--kind", "random", "--n", "5"])
        .env("TANGLECHAIN_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(from_env.stdout, a.stdout);
}

#[test]
fn gen_state_rejects_bad_requests() {
    assert_eq!(run(&["gen-state", "--kind", "w", "--n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["gen-state", "--kind", "basis", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["gen-state", "--kind", "ghz", "--n", "3", "--out", "/nonexistent/dir/x"]).status.code(), Some(2));
}

#[test]
fn tangles_of_canonical_states() {
    let dir = tempfile::tempdir().unwrap();
    let ghz3 = gen(dir.path(), "ghz3.json", &["--kind", "ghz", "--n", "3"]);
    let (o, v) = report(&ghz3, &[]);
    assert!(o.status.success());
    let l = &v["levels"][0];
    assert!((l["tangle"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(l["monogamy_residual"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["format_version"], 1);

    let w3 = gen(dir.path(), "w3.json", &["--kind", "w", "--n", "3"]);
    let (o, v) = report(&w3, &[]);
    assert!(o.status.success());
    let l = &v["levels"][0];
    assert!(l["tangle"].as_f64().unwrap().abs() < 1e-12);
    for r in l["reduced_tangles"].as_array().unwrap() {
        assert!((r["value"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    let ghz5 = gen(dir.path(), "ghz5.json", &["--kind", "ghz", "--n", "5"]);
    let out = dir.path().join("ghz5.report.json");
    let o = run(&["tangles", &ghz5, "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let l = &v["levels"][0];
    assert!((l["tangle"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    for r in l["reduced_tangles"].as_array().unwrap() {
        assert_eq!(r["value"].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn tangles_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"format_version\": 1, \"n\": 3}").unwrap();
    assert_eq!(report(bad.to_str().unwrap(), &[]).0.status.code(), Some(2));
    assert_eq!(report("/nonexistent.json", &[]).0.status.code(), Some(2));
    let two = gen(dir.path(), "two.json", &["--kind", "ghz", "--n", "2"]);
    assert_eq!(report(&two, &[]).0.status.code(), Some(2));
    let three = gen(dir.path(), "three.json", &["--kind", "ghz", "--n", "3"]);
    assert_eq!(report(&three, &["--level", "4"]).0.status.code(), Some(2));
    assert_eq!(report(&three, &["--mode", "bogus"]).0.status.code(), Some(2));
}

#[test]
fn tangles_modes_agree() {
    let dir = tempfile::tempdir().unwrap();
    let s = gen(dir.path(), "r4.json", &["--kind", "random", "--n", "4", "--seed", "3"]);
    let (_, a) = report(&s, &[]);
    let (_, b) = report(&s, &["--mode", "interpolated"]);
    let (x, y) = (&a["levels"][0]["tangle"], &b["levels"][0]["tangle"]);
    assert!((x.as_f64().unwrap() - y.as_f64().unwrap()).abs() < 1e-9);
    assert_eq!(b["config"]["modes"][1], "interpolated");
}

/// Finds a five-qubit seed whose canonical reduced power is clearly negative.
#[test]
fn tangles_flags_negative_reduced_powers() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..400 {
        let s = gen(dir.path(), "r5.json", &["--kind", "random", "--n", "5", "--seed", &seed.to_string()]);
        let (o, v) = report(&s, &[]);
        if o.status.code() == Some(3) {
            assert!(v["levels"][0]["reduced_tangles"]
                .as_array()
                .unwrap()
                .iter()
                .any(|r| r["violation"] == true));
            let (o, _) = report(&s, &["--reduced-invariant", "same-choice"]);
            assert!(o.status.success());
            return;
        }
        assert!(o.status.success());
    }
    panic!("no flagged state among 400 seeds");
}

#[test]
fn verify_suites() {
    let o = run(&["verify", "--suite", "invariance", "--trials", "200", "--seed", "1", "--level", "3", "--level", "4", "--tuples", "5"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
    let o = run(&["verify", "--suite", "product-vanishing", "--trials", "100"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = run(&["verify", "--suite", "transvection", "--trials", "100"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn verify_failure_prints_seed() {
    let o = run(&["verify", "--suite", "choice-independence", "--trials", "20", "--level", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("seed="));
    let o = run(&["verify", "--suite", "monogamy", "--trials", "5", "--tolerance", "1e-300"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_input_errors() {
    assert_eq!(run(&["verify", "--suite", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "monogamy", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "concurrence", "--level", "4"]).status.code(), Some(2));
}

#[test]
fn verify_json_lines() {
    let o = run(&["verify", "--suite", "concurrence", "--trials", "10", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&o).lines().next().unwrap()).unwrap();
    assert_eq!(v["suite"], "concurrence");
    assert_eq!(v["passed"], true);
}

#[test]
fn chain_export_levels() {
    let o = run(&["chain-export", "--level", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let i34 = text.split("poly I34\n").nth(1).unwrap();
    assert!(i34.contains("terms 12\n"));
    assert_eq!(run(&["chain-export", "--level", "3"]).stdout, o.stdout);

    let o = run(&["chain-export", "--level", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("format_version 1\npoly I4_4_0\n"));
    assert!(text.contains("poly I48\n"));

    let o = run(&["chain-export", "--level", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--expand"));
    assert_eq!(run(&["chain-export", "--level", "2"]).status.code(), Some(2));
}
