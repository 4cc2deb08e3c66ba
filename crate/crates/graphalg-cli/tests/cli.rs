use std::path::PathBuf;
use std::process::Command;

use graphalg_cli::reports::{AnalyzeOut, CorpusLine, IdealsOut, LimitOut, RepOut, StandardFormOut};
use graphalg_cli::{run, Outcome};
use serde::de::DeserializeOwned;
use serde::Serialize;

fn corpus(name: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    dir.join(name).to_string_lossy().into_owned()
}

fn graphalg(args: &[&str]) -> Outcome {
    run(std::iter::once("graphalg").chain(args.iter().copied()))
}

/// Parses, re-emits and re-parses; the two parsed values must agree and
/// the emitted text must be stable.
fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(text: &str) -> T {
    let first: T = serde_json::from_str(text).unwrap();
    let emitted = serde_json::to_string_pretty(&first).unwrap();
    let second: T = serde_json::from_str(&emitted).unwrap();
    assert_eq!(first, second);
    assert_eq!(emitted, serde_json::to_string_pretty(&second).unwrap());
    first
}

#[test]
fn analyze_o2() {
    let out = graphalg(&["analyze", &corpus("o2.graph"), "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let a: AnalyzeOut = round_trip(&out.stdout);
    assert!(a.report.is_simple.holds);
    assert!(a.report.is_purely_infinite_simple.holds);
    assert!(a.implications_hold);
    assert!(out.stdout.contains("\"isPurelyInfiniteSimple\""));
}

#[test]
fn ideals_two_sinks() {
    let out = graphalg(&["ideals", &corpus("two-sinks.graph"), "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let i: IdealsOut = round_trip(&out.stdout);
    assert_eq!(i.invariants.len(), 4);
    assert_eq!(i.hasse, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
    assert!(i.ideal_correspondence);
    assert!(i.caveat.is_none());

    let dot = graphalg(&["ideals", &corpus("two-sinks.graph"), "--dot"]);
    assert!(dot.stdout.starts_with("digraph"));
    assert_eq!(dot.stdout.matches(" -> ").count(), 4);
}

#[test]
fn ideals_loop_has_caveat() {
    let out = graphalg(&["ideals", &corpus("loop.graph"), "--json"]);
    let i: IdealsOut = round_trip(&out.stdout);
    assert_eq!(i.invariants.len(), 2);
    assert!(!i.ideal_correspondence);
    assert!(i.caveat.is_some());
}

#[test]
fn rep_verify_edge() {
    let out = graphalg(&["rep-verify", &corpus("edge.graph"), "--mode", "ck", "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r: RepOut = round_trip(&out.stdout);
    assert!(r.report.all_pass());
    assert_eq!(r.dimension, Some(4));

    let t: RepOut =
        round_trip(&graphalg(&["rep-verify", &corpus("edge.graph"), "--mode", "toeplitz", "--json"]).stdout);
    assert_eq!(t.dimension, Some(5));
    let two: RepOut = round_trip(&graphalg(&["rep-verify", &corpus("two-sinks.graph"), "--json"]).stdout);
    assert_eq!(two.dimension, Some(8));
}

#[test]
fn standard_form_and_cocycle() {
    let o2 = corpus("o2.graph");
    let out = graphalg(&["standard-form", &o2, "a.~b", "b.a@b", "--json"]);
    let sf: StandardFormOut = round_trip(&out.stdout);
    assert_eq!((sf.beta1.as_str(), sf.beta2.as_str(), sf.cocycle), ("a", "b", 0));
    let c = graphalg(&["cocycle", &o2, "~a", "a.b@a"]);
    assert_eq!(c.stdout.trim(), "-1");
    let bad = graphalg(&["cocycle", &corpus("edge.graph"), "e", "e"]);
    assert_eq!(bad.code, 1);
}

#[test]
fn setcalc_on_fiber() {
    let out = graphalg(&["setcalc", "--graph", &corpus("o2.graph"), "--fiber", "u", "V(u; a) == V(b) | V(u; a, b)"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout.trim(), "true");
    assert_eq!(graphalg(&["setcalc", "--fiber", "u", "V(u)"]).code, 1);
}

#[test]
fn limit_check_default_chain() {
    let out = graphalg(&["limit-check", &corpus("two-sinks.graph"), "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let l: LimitOut = round_trip(&out.stdout);
    assert!(l.report.all_hold());
    assert_eq!(l.stages, 1);
}

#[test]
fn exit_codes() {
    assert_eq!(graphalg(&["analyze", "/no/such/file"]).code, 1);
    assert_eq!(graphalg(&["frobnicate"]).code, 1);
    assert_eq!(graphalg(&["--help"]).code, 0);
    assert_eq!(graphalg(&["analyze", &corpus("o2.graph"), "--cap", "1"]).code, 2);
}

#[test]
fn corpus_golden() {
    let dir = corpus("");
    let out = graphalg(&["corpus-run", &dir, "--json"]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    let lines: Vec<CorpusLine> = round_trip(&out.stdout);
    assert!(lines.len() >= 10);
    assert!(lines.iter().all(|l| l.pass), "{lines:?}");
}

#[test]
fn binary_prints_and_exits() {
    let out = Command::new(env!("CARGO_BIN_EXE_graphalg")).args(["corpus-run", &corpus("")]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 10);
    let out = Command::new(env!("CARGO_BIN_EXE_graphalg")).args(["analyze", "/no/such/file"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
