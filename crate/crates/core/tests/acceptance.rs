//! Acceptance suite: one test per verification criterion, each printing
//! its pass/fail line (visible with `--nocapture`). Tolerances are pinned
//! inside `hornich_core::verify`.

use hornich_core::criteria::SamplingProfile;
use hornich_core::verify::{self, CheckResult};

fn assert_check(result: CheckResult) {
    println!("{}", result.line());
    assert!(result.passed, "{}", result.line());
}

#[test]
fn criterion_01_convex_pair_into_k() {
    let (result, report) = verify::criterion_1(&SamplingProfile::default());
    assert_check(result);
    // the region is the triangle 0 <= alpha, 2 beta, alpha+2 beta <= 2,
    // which holds exactly 9 strictly interior lattice cells at step 0.25
    assert_eq!(report.unwrap().tested_count, 9);
}

#[test]
fn criterion_02_convex_pair_into_c() {
    let (result, report) = verify::criterion_2(&SamplingProfile::default());
    assert_check(result);
    assert_eq!(report.unwrap().tested_count, 73);
}

#[test]
fn criterion_03_binomial_primitive_sharpness() {
    assert_check(verify::criterion_3(&SamplingProfile::default()));
}

#[test]
fn criterion_04_witness_closed_forms() {
    assert_check(verify::criterion_4());
}

#[test]
fn criterion_05_pointwise_matches_series_route() {
    assert_check(verify::criterion_5());
}

#[test]
fn criterion_06_hornich_algebra() {
    assert_check(verify::criterion_6());
}

#[test]
fn criterion_07_scaling_identities() {
    assert_check(verify::criterion_7(&SamplingProfile::default()));
}

#[test]
fn criterion_08_arc_bound_audit() {
    assert_check(verify::criterion_8(&SamplingProfile::default()));
}

#[test]
fn criterion_09_empirical_region_convexity() {
    let prof = SamplingProfile::default();
    let (c1, r1) = verify::criterion_1(&prof);
    let (c2, r2) = verify::criterion_2(&prof);
    assert!(c1.passed && c2.passed, "prerequisite scans failed");
    let reports: Vec<_> = r1.iter().chain(r2.iter()).collect();
    assert_check(verify::criterion_9(&reports));
}

#[test]
fn criterion_10_arc_minimum_mode_equality() {
    assert_check(verify::criterion_10());
}
