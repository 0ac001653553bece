//! Acceptance gate: one test per criterion, each printing a PASS/FAIL line
//! (run with `--nocapture` to see the detail lines).

use sfmerton::verify::{self, SuiteReport};

fn run(criterion: usize, report: SuiteReport) {
    println!(
        "{} criterion {criterion} ({})",
        if report.passed { "PASS" } else { "FAIL" },
        report.name
    );
    for line in &report.details {
        println!("    {line}");
    }
    assert!(report.passed, "criterion {criterion} ({}) failed", report.name);
}

#[test]
fn criterion_1_put_call_parity() {
    run(1, verify::parity_suite(20260810));
}

#[test]
fn criterion_2_reduction_chain() {
    run(2, verify::reduction_suite());
}

#[test]
fn criterion_3_quadrature_oracle() {
    run(3, verify::oracle_suite(20260810));
}

#[test]
fn criterion_4_pde_residuals() {
    run(4, verify::pde_suite());
}

#[test]
fn criterion_5_boundary_behavior() {
    run(5, verify::boundary_suite());
}

#[test]
fn criterion_6_monte_carlo() {
    run(6, verify::monte_carlo_suite(20260810));
}

#[test]
fn criterion_7_table_ordering() {
    run(7, verify::table_suite());
}

#[test]
fn criterion_8_path_morphology() {
    run(8, verify::morphology_suite(20260810));
}
