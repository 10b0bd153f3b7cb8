use std::io::Write;
use std::time::Instant;

use chevlab::verify::{self, CriterionReport, DEFAULT_SEED};

/// Written straight to stderr so the lines survive output capture.
fn emit(r: &CriterionReport, start: Instant) {
    let line = format!("{}  [{:.1}s]\n", r.line(), start.elapsed().as_secs_f64());
    let _ = std::io::stderr().write_all(line.as_bytes());
}

#[test]
fn acceptance_criteria() {
    let mut reports: Vec<CriterionReport> = Vec::new();
    for id in 1..=8u8 {
        let start = Instant::now();
        let r = verify::run_criterion(id, DEFAULT_SEED);
        emit(&r, start);
        reports.push(r);
    }
    let start = Instant::now();
    let det = verify::determinism(&reports, DEFAULT_SEED);
    emit(&det, start);
    reports.push(det);
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(CriterionReport::line)
        .collect();
    assert!(failed.is_empty(), "failing criteria:\n{}", failed.join("\n"));
}
