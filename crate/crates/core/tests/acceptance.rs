//! One test per acceptance criterion; each prints a PASS/FAIL line.

use k3series::acceptance::{self, CriterionResult};

const SEED: u64 = 0;

fn report(r: CriterionResult) {
    println!("{r}");
    assert!(r.pass, "{r}");
}

#[test]
fn criterion_1_kkv_table() {
    report(acceptance::criterion_1());
}

#[test]
fn criterion_2_identity_chain() {
    report(acceptance::criterion_2());
}

#[test]
fn criterion_3_integrality() {
    report(acceptance::criterion_3());
}

#[test]
fn criterion_4_strata_oracle() {
    report(acceptance::criterion_4(SEED));
}

#[test]
fn criterion_5_multiple_cover() {
    report(acceptance::criterion_5());
}

#[test]
fn criterion_6_yau_zaslow() {
    report(acceptance::criterion_6());
}

#[test]
fn criterion_7_vafa_witten() {
    report(acceptance::criterion_7(SEED));
}

#[test]
fn criterion_8_algebra_properties() {
    report(acceptance::criterion_8(SEED));
}
