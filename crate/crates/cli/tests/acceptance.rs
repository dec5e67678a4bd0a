//! One PASS/FAIL line per acceptance criterion.
//!
//! Criteria 1 to 9 are the `check` suite; 10 drives the binary. Some
//! criteria are known to fail for reasons in the physics rather than the
//! code (see README). They are listed in `EXPECTED_FAIL`, still printed as
//! FAIL, and this target only errors when an outcome differs from that
//! record, in either direction.

use std::process::{Command, ExitCode};
use std::time::Instant;

use curlforce_cli::checks::{ids, run_check};

const EXPECTED_FAIL: [u8; 5] = [1, 2, 3, 8, 10];

fn curlforce(dir: &std::path::Path, args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_curlforce"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn cli_contract() -> (bool, String) {
    let dir = tempfile::tempdir().expect("temp dir");
    let dir = dir.path();
    let csv = dir.join("out/fig1_nonrel.csv");
    let first = curlforce(dir, &["run", "fig1_nonrel"]);
    let a = std::fs::read(&csv).unwrap_or_default();
    let second = curlforce(dir, &["run", "fig1_nonrel"]);
    let b = std::fs::read(&csv).unwrap_or_default();
    let identical = first.status.success() && second.status.success() && !a.is_empty() && a == b;

    let check = curlforce(dir, &["check"]).status.code();

    std::fs::write(dir.join("bad.json"), "{\"model\": \"kapitza\", ").expect("write");
    let malformed = curlforce(dir, &["run", "bad.json"]).status.code();

    (
        identical && check == Some(0) && malformed == Some(2),
        format!(
            "rerun byte-identical: {identical} ({} bytes); check exit {check:?} (want 0); malformed exit {malformed:?} (want 2)",
            a.len()
        ),
    )
}

fn main() -> ExitCode {
    let mut mismatches = Vec::new();
    let mut passed_count = 0;
    let mut report = |id: u8, passed: bool, line: String| {
        println!("{line}");
        passed_count += usize::from(passed);
        if passed == EXPECTED_FAIL.contains(&id) {
            mismatches.push(id);
        }
    };
    for id in ids() {
        let outcome = run_check(id).expect("listed id");
        report(id, outcome.passed, format!("criterion {}", outcome.line()));
    }
    let start = Instant::now();
    let (ok, detail) = cli_contract();
    let elapsed = start.elapsed().as_secs_f64();
    let ok = ok && elapsed < 10.0;
    report(
        10,
        ok,
        format!(
            "criterion [{}] 10 CLI contract ({elapsed:.2} s): {detail}",
            if ok { "PASS" } else { "FAIL" }
        ),
    );

    println!("{passed_count}/10 criteria pass");
    if mismatches.is_empty() {
        println!("outcomes match the expected record (known failures: {EXPECTED_FAIL:?})");
        ExitCode::SUCCESS
    } else {
        println!("outcome changed for criteria {mismatches:?}; update EXPECTED_FAIL or fix the regression");
        ExitCode::FAILURE
    }
}
