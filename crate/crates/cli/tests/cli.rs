use serde_json::{json, Value};
use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thetalift")).args(args).output().expect("binary runs")
}

fn run_json(args: &[&str]) -> (Value, i32) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}: {}", String::from_utf8_lossy(&out.stderr)));
    (v, out.status.code().unwrap())
}

#[test]
fn table1_example() {
    let (v, code) = run_json(&["table1", "--c1", "true", "--c2", "false"]);
    assert_eq!(code, 0);
    assert_eq!(v, json!({"R+": 1, "R-": 0, "R+'": 1, "R-'": 2}));
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["R+", "R-", "R+'", "R-'"]);
}

#[test]
fn theta_lift_example() {
    let (v, code) = run_json(&["theta-lift", "--e-h", "-1", "--m", "3", "--n", "3", "--p", "2", "--q", "1", "--mu", "5,3,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["present"], json!(true));
    assert_eq!(v["mu_prime"], json!(["5", "3", "-1"]));
    assert_eq!(v["variant"], json!("PLAIN"));
    assert!(v["convention"].as_str().unwrap().contains("+i"));
}

#[test]
fn parameter_document_on_stdin() {
    let doc = json!({
        "schema": 1,
        "case": {"e_h": -1, "m": 3, "n": 3, "p": 2, "q": 1, "eps_psi": "+i"},
        "payload": {"mu": ["5", "3", "1"]}
    });
    let mut child = Command::new(env!("CARGO_BIN_EXE_thetalift"))
        .args(["theta-lift", "--param", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(doc.to_string().as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["input"], doc);
    assert_eq!(v["mu_prime"], json!(["5", "3", "-1"]));
}

#[test]
fn input_errors_exit_2_with_diagnostics() {
    for args in [
        vec!["theta-lift", "--e-h", "2", "--m", "1", "--n", "1", "--p", "1", "--q", "0", "--mu", "1"],
        vec!["theta-lift", "--e-h", "-1", "--m", "1", "--n", "3", "--p", "1", "--q", "0", "--mu", "1"],
        vec!["hilbert", "--p", "4"],
        vec!["transfer-ratio", "--p", "3", "--a", "1", "--b", "1"],
        vec!["verify", "no-such-scenario"],
        vec!["kv", "--nu", "1,2", "--sign", "plus", "--m", "2"],
        vec!["no-such-command"],
        vec!["table1", "--c1", "yes", "--c2", "false"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).unwrap_or_else(|_| panic!("{args:?}: stderr is not JSON"));
        assert!(err["error"]["message"].as_str().is_some_and(|m| !m.is_empty()), "{args:?}");
    }
}

#[test]
fn verify_list_covers_the_registry() {
    let (v, code) = run_json(&["verify", "--list"]);
    assert_eq!(code, 0);
    let listed: Vec<&str> = v["scenarios"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    let names: Vec<String> = thetalift::exactverify::registry().into_iter().map(|s| s.name).collect();
    assert_eq!(listed, names);
}

#[test]
fn verify_single_scenarios() {
    let (v, code) = run_json(&["verify", "sp-gen:m=2,c=-3,eps=+i"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["passed"], json!(true));
    // A negative control is expected to fail; the run itself succeeds.
    let neg = thetalift::exactverify::registry().into_iter().find(|s| !s.expect_pass).unwrap();
    let (v, code) = run_json(&["verify", &neg.name]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], json!(false));
    assert_eq!(v["outcome_ok"], json!(true));
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["passed"] == json!(false)));
}

#[test]
fn verify_all_summarises_every_scenario() {
    let (v, code) = run_json(&["verify", "all"]);
    assert_eq!(code, 0, "{}", v["failures"]);
    let total = thetalift::exactverify::registry().len();
    assert_eq!(v["total"], json!(total));
    assert_eq!(v["ok"], json!(total));
    let names: Vec<&str> = v["reports"].as_array().unwrap().iter().map(|r| r["scenario"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn padic_commands() {
    let (v, code) = run_json(&["hilbert", "--p", "7"]);
    assert_eq!(code, 0);
    let pairs = v["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 16);
    assert!(pairs.iter().all(|r| r["symbol"] == r["oracle"]));
    let (v, code) = run_json(&["transfer-ratio", "--p", "5"]);
    assert_eq!(code, 0);
    let rows = v["division_pairs"].as_array().unwrap();
    assert!(!rows.is_empty() && rows.iter().all(|r| r["ratio"] == json!(-1)));
    let (v, code) = run_json(&["transfer-ratio", "--p", "3", "--a", "2", "--b", "3"]);
    assert_eq!((v["ratio"].clone(), code), (json!(-1), 0));
    let (v, code) = run_json(&["m1n1-ledger"]);
    assert_eq!(code, 0);
    assert_eq!(v["agrees"], json!(true));
}

#[test]
fn fock_and_spin() {
    for cmd in ["harmonic", "weight", "maximal"] {
        let (_, code) = run_json(&["fock", cmd, "--m", "2", "--n", "2", "--r", "1,1"]);
        assert_eq!(code, 0, "{cmd}");
    }
    let (v, code) = run_json(&["fock", "bracket", "--m", "1", "--n", "1", "--degree", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["failures"], json!([]));
    let (v, code) = run_json(&["spin-center", "--rank", "3"]);
    assert_eq!((v["u_value"].clone(), code), (json!(-1), 0));
}

#[test]
fn eps_flag_conjugates_characters() {
    let base = ["character", "--e-h", "-1", "--m", "2", "--n", "2", "--p", "1", "--q", "1", "--mu", "3,1"];
    let (plus, c1) = run_json(&base);
    let mut args = base.to_vec();
    args.extend(["--eps-psi", "-i"]);
    let (minus, c2) = run_json(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(minus["input"]["case"]["eps_psi"], json!("-i"));
    assert!(plus["values"].as_array().unwrap().iter().all(|r| r["conjugate"] == json!(true)));
    assert!(minus["values"].as_array().unwrap().iter().all(|r| r["conjugate"] == json!(true)));
}

#[test]
fn out_file_and_determinism() {
    let dir = std::env::temp_dir().join(format!("thetalift-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("hilbert.json");
    let a = run(&["hilbert", "--p", "5", "--out", path.to_str().unwrap()]);
    let b = run(&["hilbert", "--p", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}
