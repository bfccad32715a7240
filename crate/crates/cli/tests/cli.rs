use std::process::{Command, Output};

use serde_json::Value;

fn pcf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn manifest(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn belyi_for_one_third() {
    let out = pcf(&["belyi", "--set", r#"{"points":["0","1","1/3"]}"#]);
    assert_eq!(out.status.code(), Some(0));
    let m = manifest(&out);
    assert_eq!(m["schema"], "pcf-run/1");
    assert_eq!(m["subcommand"], "belyi");
    assert_eq!(m["outcome"]["status"], "accepted");
    assert_eq!(m["result"]["belyi"]["beta"], "0,27/4,-27/2,27/4");
    assert_eq!(m["result"]["belyi"]["degree"], 3);
}

#[test]
fn table_case_e() {
    let out = pcf(&["table", "--case", "E"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &manifest(&out)["result"];
    let p: Vec<&str> = r["postcritical"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(p, ["-1", "0", "∞"]);
    // -1 and 0 swap, ∞ is fixed.
    assert_eq!(r["graph"], serde_json::json!([1, 0, 2]));
    assert_eq!(r["certificate"]["verdict"], true);
}

#[test]
fn orbit_of_z2_plus_1_is_infinite() {
    let out = pcf(&["orbit", "--poly", "1,0,1", "--budget", "64"]);
    assert_eq!(out.status.code(), Some(2));
    let m = manifest(&out);
    assert_eq!(m["outcome"]["status"], "negative");
    assert_eq!(m["result"]["finite"], false);
}

#[test]
fn orbit_of_chebyshev_is_finite() {
    let out = pcf(&["orbit", "--poly", "-2,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let pts = &manifest(&out)["result"]["postcritical"]["points"];
    assert_eq!(pts, &serde_json::json!(["-2", "2"]));
}

#[test]
fn runs_are_deterministic() {
    let args = ["construct", "--set", r#"{"points":["0","1"],"infinity":true}"#];
    let (a, b) = (pcf(&args), pcf(&args));
    assert_eq!(a.stdout, b.stdout);
    let args = ["thurston", "--points", r#"["0","1","inf","1/9"]"#, "--map", "0:1,1:2,2:3,3:0"];
    let (a, b) = (pcf(&args), pcf(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn digest_tracks_arguments() {
    let a = manifest(&pcf(&["table", "--case", "A"]));
    let b = manifest(&pcf(&["table", "--case", "B"]));
    assert_ne!(a["input_digest"], b["input_digest"]);
    assert_eq!(a["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn parse_errors_name_the_token() {
    let out = pcf(&["orbit", "--poly", "1,x,1"]);
    assert_eq!(out.status.code(), Some(1));
    let e = &manifest(&out)["error"];
    assert_eq!(e["kind"], "Parse");
    assert_eq!(e["token"], "x");
    assert_eq!(e["position"], 2);
}

#[test]
fn usage_errors_exit_one() {
    let out = pcf(&["table", "--case", "Z"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn thurston_three_cycle() {
    let out = pcf(&["thurston", "--points", r#"["0","1","inf"]"#, "--map", "0:1,1:2,2:0"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &manifest(&out)["result"];
    assert_eq!(r["realized"]["kind"], "fixture");
    assert_eq!(r["plan"]["verdict"], "Fixture");
    assert_eq!(r["plan"]["padded_count"], 6);
}

#[test]
fn passports() {
    let out = pcf(&["passport", "extend", "--parts", "[[2],[2],[2],[2]]", "--target", "rational"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &manifest(&out)["result"];
    assert_eq!(r["extends"], true);
    assert_eq!(r["constellation"]["genus"], 0);

    let out = pcf(&["passport", "realize", "--parts", "[[2,1],[2,1]]"]);
    assert_eq!(out.status.code(), Some(0));
    let c = &manifest(&out)["result"]["constellation"];
    assert_eq!(c["genus"], 0);
    // Over ∞ a polynomial is totally ramified.
    let closing = c["closing"].as_array().unwrap();
    assert_eq!(closing.len(), 1);
    assert_eq!(closing[0].as_array().unwrap().len(), 3);

    let out = pcf(&["passport", "dessin", "--parts", "[[2,1],[3],[2,1]]"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(manifest(&out)["result"]["genus"], 0);
}

#[test]
fn text_output() {
    let out = pcf(&["table", "--case", "C", "--output", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.lines().any(|l| l == "outcome.status: accepted"));
}
