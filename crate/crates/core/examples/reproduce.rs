//! Runs the named reproduction checks and prints one line per check.
//!
//!     cargo run --release --example reproduce            # quick profile
//!     cargo run --release --example reproduce -- full

use std::time::Instant;

use vdc::verify::{check_names, run_selected, Profile};

fn main() {
    let profile = match std::env::args().nth(1).as_deref() {
        Some("full") => Profile::Full,
        _ => Profile::Quick,
    };
    let mut failures = Vec::new();
    for name in check_names(profile) {
        let start = Instant::now();
        let report = run_selected(profile, |n| n == name);
        let c = &report.checks[0];
        let status = if c.passed { "PASS" } else { "FAIL" };
        println!(
            "{status} {name} ({:.2}s)\n    expected: {}\n    actual:   {}",
            start.elapsed().as_secs_f64(),
            c.expected,
            c.actual
        );
        if !c.passed {
            failures.push(name);
        }
    }
    println!("{} failing: {failures:?}", failures.len());
}
