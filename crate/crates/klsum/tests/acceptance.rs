//! The release gate: runs every numbered verification check and prints
//! one pass/fail line per check.  Run with `--nocapture` to watch the
//! lines appear as checks finish:
//!
//! ```text
//! cargo test --release -p klsum --test acceptance -- --nocapture
//! ```
//!
//! Checks 5 and 8 sweep hundreds of millions of Kloosterman terms and
//! dominate the runtime (a few minutes total on one core).

use klsum::cache::ResultCache;
use klsum::verify::{self, CriterionReport};

#[test]
fn all_acceptance_criteria_pass() {
    let mut cache = ResultCache::in_memory();
    let mut reports: Vec<CriterionReport> = Vec::new();
    let mut run = |report: CriterionReport| {
        println!("{}", report.render());
        reports.push(report);
    };

    run(verify::criterion_1());
    run(verify::criterion_2());
    run(verify::criterion_3());
    run(verify::criterion_4());
    run(verify::criterion_5_with_cache(&mut cache));
    run(verify::criterion_6());
    run(verify::criterion_7());
    run(verify::criterion_8_with_cache(&mut cache));

    let failures: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(CriterionReport::render)
        .collect();
    assert!(
        failures.is_empty(),
        "failed checks:\n{}",
        failures.join("\n")
    );
}
