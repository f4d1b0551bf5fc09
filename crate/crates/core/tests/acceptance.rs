//! One line per acceptance criterion, written straight to stdout so it shows
//! without `--nocapture`.

use std::io::Write;
use std::sync::OnceLock;

use gorenstein::harness::suite::{self, CriterionReport};
use gorenstein::harness::CrossCheckRecord;

const SEED: u64 = 0;

fn emit(r: CriterionReport) {
    writeln!(std::io::stdout().lock(), "{}", r).unwrap();
    assert!(r.passed, "{}", r);
}

fn soundness_records() -> &'static [CrossCheckRecord] {
    static RECORDS: OnceLock<Vec<CrossCheckRecord>> = OnceLock::new();
    RECORDS.get_or_init(|| suite::soundness_records(5, 10, SEED).expect("sweep"))
}

#[test]
fn criterion_1_worked_example() {
    emit(suite::worked_example());
}

#[test]
fn criterion_2_duality() {
    emit(suite::duality_sweep());
}

#[test]
fn criterion_3_monomial_slp() {
    emit(suite::monomial_slp());
}

#[test]
fn criterion_4_hessian_equivalence() {
    emit(suite::criterion_equivalence(250, SEED));
}

#[test]
fn criterion_5_soundness() {
    emit(suite::soundness(soundness_records()));
}

#[test]
fn criterion_6_family1_ci() {
    emit(suite::ci_family1(soundness_records()));
}

#[test]
fn criterion_7_convention_invariance() {
    emit(suite::convention_invariance(100, SEED));
}

#[test]
fn criterion_8_failure_search() {
    let dir = tempfile::tempdir().unwrap();
    emit(suite::failure_discovery(&dir.path().join("codim4.jsonl"), SEED));
}
