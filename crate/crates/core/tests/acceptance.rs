//! The acceptance gate: runs every release criterion at its pinned
//! tolerance and prints one pass/fail line per criterion.

use bqsp_core::acceptance::{run_all, AcceptanceOptions};

#[test]
fn acceptance_criteria() {
    let opts = AcceptanceOptions::default();
    let results = run_all(&opts);
    let mut all_ok = true;
    for r in &results {
        println!(
            "[{}] criterion {:2} {:35} ({:7.2}s)  {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.seconds,
            r.details
        );
        all_ok &= r.passed;
    }
    assert!(all_ok, "acceptance criteria failed");
}
