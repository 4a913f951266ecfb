//! The acceptance suite: every exit criterion as its own test, printing one
//! pass/fail line. `hbf reproduce --all` drives the same code.

use hbf_cli::acceptance::run_criterion;
use hbf_cli::config::resolve;

fn check(id: u32) {
    let res = resolve(None, None, None, None).expect("default options resolve");
    let outcome = run_criterion(id, &res).expect("criterion runs");
    println!(
        "criterion {:>2}  {}  {:>8.2?}{}  {}\n              {}",
        outcome.id,
        if outcome.pass { "PASS" } else { "FAIL" },
        outcome.wall,
        outcome
            .limit
            .map_or(String::new(), |l| format!(" (limit {l:?})")),
        outcome.name,
        outcome.detail
    );
    assert!(outcome.pass, "criterion {id}: {}", outcome.detail);
}

#[test]
fn criterion_01_n12_subfield_classification() {
    check(1);
}

#[test]
fn criterion_02_n20_no_hyperbent() {
    check(2);
}

#[test]
fn criterion_03_n28_subfield_classification() {
    check(3);
}

#[test]
fn criterion_04_lambda_kloosterman_weil_identities() {
    check(4);
}

#[test]
fn criterion_05_classifications_match_direct_verdicts() {
    check(5);
}

#[test]
fn criterion_06_curve_count_consistency() {
    check(6);
}

#[test]
fn criterion_07_coset_sum_identity() {
    check(7);
}

#[test]
fn criterion_08_descent_identity() {
    check(8);
}

#[test]
fn criterion_09_diophantine_solution_sets() {
    check(9);
}

#[test]
fn criterion_10_property_suites() {
    check(10);
}
