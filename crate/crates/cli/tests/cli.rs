use std::process::{Command, Output};

use serde_json::Value;

fn fracpow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracpow"))
        .args(args)
        .output()
        .unwrap()
}

fn json_ok(args: &[&str]) -> Value {
    let out = fracpow(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn expect_failure(args: &[&str], code: i32, kind: &str) {
    let out = fracpow(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}");
    assert!(out.stdout.is_empty(), "{args:?} wrote to stdout");
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], kind, "{args:?}");
    assert!(err["error"]["message"]
        .as_str()
        .is_some_and(|m| !m.is_empty()));
}

#[test]
fn decide_verdicts() {
    let v = json_ok(&["decide", "--m", "2:1,3:1"]);
    assert_eq!(v["verdict"], "impossible_by_theorem");
    let cert = &v["certificate"];
    assert_eq!(
        (cert["witness"]["p"].as_u64(), cert["witness"]["t"].as_u64()),
        (Some(2), Some(1))
    );
    assert_eq!(cert["recurrence"]["d_gcd"], 1);
    assert_eq!(cert["recurrence"]["A"], 2);
    assert_eq!(cert["contradiction"]["holds"], true);
    assert_eq!(
        json_ok(&["decide", "--m", "2:1,4:1"])["verdict"],
        "degenerate_gcd"
    );
    assert_eq!(
        json_ok(&["decide", "--m", "1:1,2:1"])["verdict"],
        "outside_hypothesis"
    );
}

#[test]
fn construct_then_count() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ruzsa.txt");
    let out = fracpow(&["construct", "--kind", "ruzsa", "--bound", "2000"]);
    assert!(out.status.success());
    std::fs::write(&path, &out.stdout).unwrap();
    let p = path.to_str().unwrap();
    let v = json_ok(&["count", "--m", "1:1,2:1", "--set", p, "--upto", "2000"]);
    let values = v["values"].as_array().unwrap();
    assert_eq!(values.len(), 2001);
    assert!(values.iter().all(|x| x == 1));
    assert_eq!(v["constant_from"], 0);
    expect_failure(
        &["count", "--m", "1:1,2:1", "--set", p, "--upto", "2001"],
        2,
        "usage",
    );

    let moser = fracpow(&["construct", "--kind", "moser", "--k", "3", "--bound", "50"]);
    let text = String::from_utf8(moser.stdout).unwrap();
    assert!(text.starts_with("# bound=50\n0\n1\n2\n9\n10\n11\n18\n"));
    let digit = json_ok(&[
        "--format",
        "json",
        "construct",
        "--kind",
        "digit",
        "--k",
        "3",
        "--period",
        "1",
        "--bound",
        "8",
    ]);
    assert_eq!(digit["elements"].as_array().unwrap().len(), 9);
}

#[test]
fn cyclo_commands() {
    let out = fracpow(&["cyclo", "phi", "1", "--format", "text"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1 - x\n");
    assert_eq!(json_ok(&["cyclo", "phi", "6"])["poly"], "1 - x + x^2");
    let e = json_ok(&["cyclo", "expand", "2", "2"]);
    assert_eq!(e["exps"], serde_json::json!([[4, "1"]]));
    let part = json_ok(&[
        "cyclo",
        "part",
        "--poly",
        "1,1,1",
        "--m",
        "2:1,3:1",
        "--with-inverse",
    ]);
    assert_eq!(
        part["part"]["exps"],
        serde_json::json!([[1, "-1"], [3, "1"]])
    );
    assert_eq!(part["residual"], serde_json::json!(["1"]));
}

#[test]
fn solve_and_enumerate() {
    let v = json_ok(&["solve", "--m", "2:1,3:1", "--cutoff", "4"]);
    assert_eq!(v["verified"], true);
    assert_eq!(v["solution"]["cutoff"], "2");
    assert_eq!(v["fractional_terms"][0], serde_json::json!(["1/2", "1"]));
    let v = json_ok(&[
        "solve",
        "--m",
        "2:1,4:1",
        "--rhs-prod",
        "2:-1",
        "--cutoff",
        "40",
    ]);
    assert!(v["fractional_terms"].as_array().unwrap().is_empty());
    let v = json_ok(&["enumerate", "--b", "2", "--thetas", "3/2", "--below", "10"]);
    assert_eq!(v["count"], 402);
    let v = json_ok(&["tau", "--upto", "3"]);
    assert_eq!(
        v["tau"],
        serde_json::json!([[1, "1"], [2, "-24"], [3, "252"]])
    );
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &["decide", "--m", "4:1,6:1", "--rhs-poly", "1,1"][..],
        &[
            "solve",
            "--m",
            "3:1,5:2",
            "--rhs-prod",
            "1:-1,2:1",
            "--cutoff",
            "15",
        ],
        &["enumerate", "--b", "3", "--thetas", "5/3,2", "--below", "4"],
    ] {
        let a = fracpow(args);
        let b = fracpow(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn error_paths() {
    expect_failure(&["solve", "--m", "3:1,2:1"], 2, "usage");
    expect_failure(&["solve", "--m", "1:1,2:1"], 1, "hypothesis");
    expect_failure(
        &["solve", "--m", "2:1,3:1", "--rhs-poly", "2,1"],
        1,
        "domain",
    );
    expect_failure(
        &[
            "solve",
            "--m",
            "2:1,3:1",
            "--rhs-poly",
            "1",
            "--rhs-prod",
            "1:1",
        ],
        2,
        "usage",
    );
    expect_failure(
        &["decide", "--m", "2:1,3:1", "--rhs-poly", "1,-1"],
        1,
        "domain",
    );
    expect_failure(
        &[
            "count",
            "--m",
            "1:1",
            "--set",
            "/nonexistent/set.txt",
            "--upto",
            "3",
        ],
        1,
        "io",
    );
    expect_failure(
        &["construct", "--kind", "digit", "--k", "3", "--bound", "9"],
        2,
        "usage",
    );
    expect_failure(
        &[
            "construct",
            "--kind",
            "digit",
            "--k",
            "1",
            "--period",
            "1",
            "--bound",
            "9",
        ],
        1,
        "domain",
    );
    expect_failure(
        &["enumerate", "--b", "2", "--thetas", "1/2", "--below", "3"],
        1,
        "domain",
    );
    expect_failure(&["cyclo", "phi", "0"], 2, "usage");
    expect_failure(&["frobnicate"], 2, "usage");
    expect_failure(&["--format", "yaml", "tau", "--upto", "3"], 2, "usage");

    let out = Command::new(env!("CARGO_BIN_EXE_fracpow"))
        .args(["tau", "--upto", "3"])
        .env("FRACPOW_SIEVE_LIMIT", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn sieve_limit_is_honoured() {
    let out = Command::new(env!("CARGO_BIN_EXE_fracpow"))
        .args(["decide", "--m", "1000003:1,1000004:1"])
        .env("FRACPOW_SIEVE_LIMIT", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "capacity");
}

#[test]
fn help_succeeds() {
    let out = fracpow(&["--help"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("enumerate"));
}
