//! One test per acceptance criterion. Each prints a PASS/FAIL line with its
//! items and fails when any item fails.

use ekr_core::reproduce::{run, QFilter};

fn criterion(id: u8) {
    let rep = run(id, &QFilter::default());
    println!("{} [{:.2} s]", rep.line(), rep.elapsed_secs);
    for item in &rep.items {
        println!("    {} {}: {}", if item.pass { "ok  " } else { "FAIL" }, item.label, item.detail);
    }
    assert!(!rep.items.is_empty(), "criterion {id} ran no items");
    assert!(rep.pass(), "{}", rep.line());
}

#[test]
fn criterion_1_derangement_census() {
    criterion(1);
}

#[test]
fn criterion_2_gl_unit_spectrum() {
    criterion(2);
}

#[test]
fn criterion_3_weighted_gl_eigenvalues() {
    criterion(3);
}

#[test]
fn criterion_4_weighted_sl_eigenvalues() {
    criterion(4);
}

#[test]
fn criterion_5_lp_ratios() {
    criterion(5);
}

#[test]
fn criterion_6_searched_maxima() {
    criterion(6);
}

#[test]
fn criterion_7_constructions() {
    criterion(7);
}

#[test]
fn criterion_8_canonical_vector_linear_algebra() {
    criterion(8);
}

#[test]
fn criterion_9_property_suites() {
    criterion(9);
}
