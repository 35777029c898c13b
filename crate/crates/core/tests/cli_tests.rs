use std::process::{Command, Output};

fn gatesplit(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gatesplit"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("GATESPLIT_THREADS", t),
        None => cmd.env_remove("GATESPLIT_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn fidelity_with_itself() {
    let out = gatesplit(&["fidelity", "--a", "cnot", "--b", "cnot"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["f_min"], 1.0);
    assert_eq!(v["formula_valid"], true);
}

#[test]
fn fidelity_reads_gate_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cz.json");
    let out = gatesplit(&["convert", "--gate", "cz", "--out", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    let out = gatesplit(&["fidelity", "--a", path.to_str().unwrap(), "--b", "identity4"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    // spectrum {1,1,1,-1}
    assert_eq!(v["d_max"], 2.0);
}

#[test]
fn exit_codes() {
    assert_eq!(gatesplit(&["--bogus"], None).status.code(), Some(2));
    assert_eq!(gatesplit(&["separate", "--dims", "2,2"], None).status.code(), Some(2));
    assert_eq!(gatesplit(&["fidelity", "--a", "cnot", "--b", "cnot"], Some("many")).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"dims\": [2], \"matrix\": 7}").unwrap();
    let out = gatesplit(&["fidelity", "--a", bad.to_str().unwrap(), "--b", "cnot"], None);
    assert_eq!(out.status.code(), Some(3));
    let diag: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(diag["error"], "data");
    assert!(out.stdout.is_empty());

    let far = dir.path().join("far.json");
    std::fs::write(&far, r#"{"dims":[1],"matrix":[[{"re":3,"im":0}]]}"#).unwrap();
    assert_eq!(gatesplit(&["convert", "--gate", far.to_str().unwrap()], None).status.code(), Some(3));
}

#[test]
fn separate_with_epsilon_reports_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let out = gatesplit(
        &["separate", "--target", "cnot", "--dims", "2,2", "--epsilon", "0.3", "--seed", "42", "--out", out_dir.to_str().unwrap()],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["epsilon_separable"], true);
    assert!(v["f_min"].as_f64().unwrap() >= 0.70);
    assert!(out_dir.join("convergence.csv").exists());
    assert!(out_dir.join("separation.json").exists());

    // a failing verdict is still a successful run
    let out = gatesplit(&["separate", "--target", "cnot", "--dims", "2,2", "--epsilon", "0.1", "--seed", "42"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["epsilon_separable"], false);
}

#[test]
fn no_side_files_without_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_gatesplit"))
        .args(["experiment", "figure2", "--samples", "20"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn output_is_identical_across_thread_counts() {
    let runs: [&[&str]; 3] = [
        &["separate", "--target", "swap", "--dims", "2,2", "--seed", "5"],
        &["experiment", "figure2", "--seed", "3"],
        &["theorem", "--trials", "30", "--dim", "4", "--seed", "7"],
    ];
    for args in runs {
        let reference = gatesplit(args, None);
        assert_eq!(reference.status.code(), Some(0));
        for t in ["1", "3", "0"] {
            let again = gatesplit(args, Some(t));
            assert_eq!(again.stdout, reference.stdout, "{args:?} with {t} threads");
        }
    }
}
