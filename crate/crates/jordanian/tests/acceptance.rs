//! End-to-end acceptance run: every headline property suite at full size,
//! one printed pass/fail line per criterion.

use jordanian::checks::{run_suite, SUITE_NAMES};

#[test]
fn acceptance() {
    let seed = 42;
    let max_n = 10;
    let mut all_ok = true;
    for (i, name) in SUITE_NAMES.iter().enumerate() {
        let report = run_suite(name, seed, max_n).expect("known suite");
        let status = if report.passed { "pass" } else { "FAIL" };
        println!("criterion {:2}: {status}  {name}", i + 1);
        if !report.passed {
            for case in &report.cases {
                if !case.passed {
                    println!("    failed case: {} — {}", case.name, case.detail);
                }
            }
        }
        all_ok &= report.passed;
    }
    assert!(all_ok, "one or more acceptance suites failed");
}
