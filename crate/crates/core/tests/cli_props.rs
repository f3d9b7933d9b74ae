use std::process::{Command, Output};

use proptest::prelude::*;
use qtrank::cli::{format_coeffs, parse_coeffs};
use qtrank::poly::IntPoly;

fn qtrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtrank")).args(args).env_remove("QTRANK_WORKERS").output().unwrap()
}

fn body(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n")
}

proptest! {
    #[test]
    fn coefficient_lists_roundtrip(c in prop::collection::vec(-1_000_000i64..1_000_000, 0..10)) {
        let p = IntPoly::from_i64s(&c);
        prop_assert_eq!(parse_coeffs(&format_coeffs(&p)).unwrap(), p);
    }
}

#[test]
fn rank_bound_reports_json() {
    let out = qtrank(&["rank-bound", "--A", "1", "--B", "0,3,3", "--C", "0,0,0,1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let r = &v["result"];
    let omega = r["omega"].as_u64().unwrap();
    assert_eq!(r["bound"].as_u64().unwrap(), omega.saturating_sub(1).min(5));
    assert!(v["header"]["version"].is_string());
}

#[test]
fn sampled_census_is_byte_reproducible() {
    let args =
        ["census", "--kind", "sell", "--H", "2", "--mode", "sampled", "--N", "2000", "--seed", "11", "--no-wall-time"];
    let a = qtrank(&args);
    let mut with_workers = args.to_vec();
    with_workers.extend(["--workers", "2"]);
    let b = qtrank(&with_workers);
    assert!(a.status.success() && b.status.success());
    assert_eq!(body(&a), body(&b));
    assert_eq!(a.stdout, qtrank(&args).stdout);
}

#[test]
fn ffcount_csv_shape() {
    let out = qtrank(&["ffcount", "--kind", "m11", "--p", "5", "--check", "nu"]);
    assert!(out.status.success());
    let text = body(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "kind,p,target,brute,closed_form,derived,ratio");
    assert!(lines.count() > 0);
}

#[test]
fn exit_codes() {
    assert_eq!(qtrank(&["census", "--kind", "s0", "--H", "0"]).status.code(), Some(2));
    assert_eq!(qtrank(&["ffcount", "--kind", "sys1", "--p", "7"]).status.code(), Some(2));
    assert_eq!(qtrank(&["census", "--kind", "s0", "--H", "9", "--budget", "10"]).status.code(), Some(3));
    assert_eq!(qtrank(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        qtrank(&["census", "--kind", "s0", "--H", "1", "--out", "/nonexistent/dir/x.csv"]).status.code(),
        Some(1)
    );
}

#[test]
fn irr_count_matches_necklace_value() {
    let out = qtrank(&["irr-count", "--p", "3", "--n", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // (3^2 - 3) / 2 monic irreducible quadratics over F_3.
    assert_eq!(v["result"]["count"], 3);
}
