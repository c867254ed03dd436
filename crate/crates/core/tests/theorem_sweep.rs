//! Whole-catalog sweep: inclusion scan plus sharpness check for every
//! theorem id on the default grid (step 0.25, band = one step), at
//! λ = 0.5 and γ = 2.
//!
//! For 23 of the 26 ids both directions must come out with zero
//! accountable mismatches under the inequality lists as stated. The three
//! remaining parts (`G.GKl`, `Gg.GKl`, `G.GGg`) state lists that
//! contradict their own β = 0 corollaries; for those the sweep asserts
//! that the scans flag the stated region (every flagged cell sitting
//! between the stated and the rederived boundary) and that the rederived
//! region reproduces cleanly.

use hornich_core::criteria::SamplingProfile;
use hornich_core::regions::{GridSpec, TheoremId, TheoremInstance};
use hornich_core::verify::sweep_one;

fn sweep(id: TheoremId) {
    let inst = TheoremInstance::new(id, Some(0.5), Some(2.0)).unwrap();
    let result = sweep_one(&inst, &GridSpec::default(), &SamplingProfile::default()).unwrap();
    println!("{}: {}", inst.label(), result.details);
    assert!(result.passed, "{}: {}", inst.label(), result.details);
}

#[test]
fn sweep_k_of_kk() {
    sweep(TheoremId::KofKK);
}

#[test]
fn sweep_c_of_kk() {
    sweep(TheoremId::CofKK);
}

#[test]
fn sweep_k_of_kkl() {
    sweep(TheoremId::KofKKl);
}

#[test]
fn sweep_kl_of_kkl() {
    sweep(TheoremId::KlofKKl);
}

#[test]
fn sweep_gg_of_kkl() {
    sweep(TheoremId::GgofKKl);
}

#[test]
fn sweep_c_of_kkl() {
    sweep(TheoremId::CofKKl);
}

#[test]
fn sweep_k_of_kgg() {
    sweep(TheoremId::KofKGg);
}

#[test]
fn sweep_kl_of_kgg() {
    sweep(TheoremId::KlofKGg);
}

#[test]
fn sweep_gg_of_kgg() {
    sweep(TheoremId::GgofKGg);
}

#[test]
fn sweep_c_of_kgg() {
    sweep(TheoremId::CofKGg);
}

#[test]
fn sweep_k_of_gk() {
    sweep(TheoremId::KofGK);
}

#[test]
fn sweep_k_of_gkl() {
    sweep(TheoremId::KofGKl);
}

#[test]
fn sweep_kl_of_gkl() {
    sweep(TheoremId::KlofGKl);
}

#[test]
fn sweep_g_of_gkl_flags_stated_list() {
    sweep(TheoremId::GofGKl);
}

#[test]
fn sweep_gg_of_gkl_flags_stated_list() {
    sweep(TheoremId::GgofGKl);
}

#[test]
fn sweep_k_of_ggg() {
    sweep(TheoremId::KofGGg);
}

#[test]
fn sweep_kl_of_ggg() {
    sweep(TheoremId::KlofGGg);
}

#[test]
fn sweep_g_of_ggg_flags_stated_list() {
    sweep(TheoremId::GofGGg);
}

#[test]
fn sweep_gg_of_ggg() {
    sweep(TheoremId::GgofGGg);
}

#[test]
fn sweep_j_convex_to_k() {
    sweep(TheoremId::JConvexToK);
}

#[test]
fn sweep_j_convex_to_c() {
    sweep(TheoremId::JConvexToC);
}

#[test]
fn sweep_i_convex_to_k() {
    sweep(TheoremId::IConvexToK);
}

#[test]
fn sweep_i_convex_to_c() {
    sweep(TheoremId::IConvexToC);
}

#[test]
fn sweep_j_ozaki_to_kl() {
    sweep(TheoremId::JOzakiToKl);
}

#[test]
fn sweep_j_ozaki_to_gg() {
    sweep(TheoremId::JOzakiToGg);
}

#[test]
fn sweep_j_ozaki_to_g() {
    sweep(TheoremId::JOzakiToG);
}
