use std::process::Command;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_quadric-lab"));
    c.env("QUADRIC_LAB_THREADS", "2");
    c
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn verify_minimal_json() {
    let (code, out, _) = run(&["verify", "--n", "4", "--model", "minimal", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["summary"]["failed"], 0);
    let checks = v["checks"].as_array().unwrap();
    let spec = checks
        .iter()
        .find(|c| c["name"].as_str().unwrap().starts_with("principal curvatures"))
        .unwrap();
    assert_eq!(spec["computed"], "1 (x2), 0 (x3), -1 (x2)");
    assert_eq!(spec["pass"], true);
    assert!(checks.iter().all(|c| !c["anchor"].as_str().unwrap().is_empty()));
}

#[test]
fn verify_tube_reports_hopf_curvature() {
    let (code, out, _) = run(&["verify", "--n", "3", "--model", "tube", "--r", "0.5", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let hopf = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "Hopf principal curvature")
        .unwrap();
    let got: f64 = hopf["computed"].as_str().unwrap().parse().unwrap();
    assert!((got - 2.0 / 1f64.tanh()).abs() < 1e-12);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["verify", "--n", "2"]).0, 2);
    assert_eq!(run(&["verify", "--model", "tube"]).0, 2);
    assert_eq!(run(&["verify", "--model", "tube", "--r", "1", "--alpha", "3"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    let out = bin().args(["verify", "--n", "3", "--model", "minimal"]).env("QUADRIC_LAB_THREADS", "zero").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failing_tolerance_exits_1_with_report() {
    let (code, out, _) = run(&["verify", "--n", "3", "--model", "horocyclic", "--tol", "1e-300", "--format", "json"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["summary"]["failed"].as_u64().unwrap() > 0);
}

#[test]
fn json_is_deterministic() {
    let args = ["verify", "--n", "3", "--format", "json", "--seed", "11"];
    let a = run(&args).1;
    let b = bin().args(args).env("QUADRIC_LAB_THREADS", "1").output().unwrap().stdout;
    assert_eq!(a.as_bytes(), &b[..]);
    // 17 significant digits
    assert!(a.contains("e-") && a.contains("\"residual\": "));
}

#[test]
fn spectrum_table_and_sweep() {
    let (code, out, _) = run(&["spectrum", "--n", "5", "--model", "horocyclic"]);
    assert_eq!(code, 0);
    assert!(out.contains("| 2 | 1 | R xi |"), "{out}");
    assert!(out.contains("| 0 | 2 | C ⊖ Q |"));
    assert!(out.contains("| 1 | 3 | T1 |"));
    assert!(out.contains("| -1 | 3 | T-1 |"));
    assert!(out.contains("scalar curvature: -86"));

    let (code, csv, _) = run(&["spectrum", "--n", "4", "--model", "equidistant", "--sweep", "0.25,0.5,1,2"]);
    assert_eq!(code, 0);
    let mut rdr = csv::Reader::from_reader(csv.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    let alphas: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(alphas.windows(2).all(|w| w[1] > w[0]));
    let scalars: Vec<f64> = rows.iter().map(|r| r[5].parse().unwrap()).collect();
    assert!(scalars.iter().all(|s| (s + 52.0).abs() < 1e-9));
}

#[test]
fn writes_to_out_path() {
    let path = std::env::temp_dir().join(format!("quadric-lab-{}.md", std::process::id()));
    let (code, _, _) = run(&["verify", "--n", "3", "--model", "P", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(text.contains("complex hypersurface P"));
    assert!(text.contains("0 failed"));
}
