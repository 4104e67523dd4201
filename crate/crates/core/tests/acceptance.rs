//! Acceptance matrix: one pass/fail line per criterion.
//!
//! Criterion 3 asks for exact equality at a fractional `t = MK/N`, where no
//! uncoded placement reaches the closed form (the minimum over placements is
//! `5F/2`, not `2F`). Its check runs unchanged and is reported as an expected
//! failure; any other failure, or criterion 3 unexpectedly passing, fails
//! this target.

use std::process::ExitCode;

use dexbound::reproduce::{run_all, DEFAULT_SEED};

const EXPECTED_FAILURES: &[u8] = &[3];

fn main() -> ExitCode {
    let outcomes = run_all(DEFAULT_SEED);
    let mut unexpected = 0;
    for o in &outcomes {
        let expected_fail = EXPECTED_FAILURES.contains(&o.id);
        let note = match (o.passed, expected_fail) {
            (false, true) => "  (expected failure)",
            (true, true) => "  (unexpected pass)",
            _ => "",
        };
        if o.passed == expected_fail {
            unexpected += 1;
        }
        println!("{}{note}", o.line());
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("{passed}/{} criteria passed, {unexpected} unexpected", outcomes.len());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
