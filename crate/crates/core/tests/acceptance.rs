//! One line per acceptance criterion, then a single verdict.

use polyharm::acceptance::{run_criterion, CRITERIA};
use polyharm::Float128;

#[test]
fn acceptance() {
    println!();
    let mut failed = Vec::new();
    for (id, _) in CRITERIA {
        let result = run_criterion::<Float128>(id);
        println!("{}", result.line());
        for check in result.checks.iter().filter(|c| c.status != polyharm::acceptance::Status::Pass) {
            println!("    {:?} {}: {}", check.status, check.name, check.detail);
        }
        if !result.passed() {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
