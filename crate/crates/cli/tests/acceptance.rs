//! Full-tier verification, one PASS/FAIL line per acceptance criterion.
//!
//! Run with `cargo test -p loggp-cli --test acceptance -- --nocapture`.

use loggp_cli::report::Check;
use loggp_cli::verify::{run_suite, Tier};

fn describe(c: &Check) -> String {
    let relation = serde_json::to_value(c.relation).unwrap();
    let mut s = format!("{}={:.3e} ({} {:e})", c.name, c.metric, relation.as_str().unwrap(), c.tolerance);
    if let Some(e) = &c.error {
        s.push_str(&format!(" [{e}]"));
    }
    s
}

#[test]
fn acceptance_criteria() {
    let report = run_suite(&Tier::full(), 0, None);
    let mut failing = Vec::new();
    for criterion in 1..=10u8 {
        let checks: Vec<&Check> = report.checks.iter().filter(|c| c.criterion == Some(criterion)).collect();
        assert!(!checks.is_empty(), "criterion {criterion} has no checks");
        let ok = checks.iter().all(|c| c.passed);
        let detail: Vec<String> = checks.iter().map(|c| describe(c)).collect();
        println!("{} criterion {criterion}: {}", if ok { "PASS" } else { "FAIL" }, detail.join(", "));
        if !ok {
            failing.push(criterion);
        }
    }
    for c in report.checks.iter().filter(|c| c.criterion.is_none()) {
        println!("{} invariant: {}", if c.passed { "PASS" } else { "FAIL" }, describe(c));
    }
    let invariants_failing: Vec<&str> =
        report.checks.iter().filter(|c| c.criterion.is_none() && !c.passed).map(|c| c.name.as_str()).collect();
    assert!(failing.is_empty() && invariants_failing.is_empty(), "failing criteria {failing:?}, invariants {invariants_failing:?}");
}
