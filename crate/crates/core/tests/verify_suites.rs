use holodd::exec::Execution;
use holodd::hamiltonian::{build_h1, build_h2, GateParams1Q, GateParams2Q, TimeDependentHamiltonian};
use holodd::harness::verify::{hamiltonian_suites, run_verify, VerifyContext};
use holodd::operators::{pauli_on, xxz_term, PauliAxis};

fn ctx() -> VerifyContext {
    VerifyContext { exec: Execution::Sequential, ..Default::default() }
}

// J^x_26 with the wrong sign.
fn h2_sign_flipped(p: &GateParams2Q) -> TimeDependentHamiltonian {
    let mut h = build_h2(p);
    let jx26 = 0.5 * p.phi2.cos() * (p.theta2 / 2.0).sin();
    let wrong = xxz_term(2, 6, -2.0 * jx26, 0.0, 6).unwrap();
    h.constant_part = &h.constant_part + &wrong;
    h
}

// A single-qubit field on qubit 1 anticommutes with two of the collective Paulis.
fn h1_with_field(p: &GateParams1Q) -> TimeDependentHamiltonian {
    let mut h = build_h1(p);
    h.constant_part = &h.constant_part + &pauli_on(PauliAxis::X, 1, 3).unwrap().scale_real(0.1);
    h
}

#[test]
fn default_builders_pass_every_suite() {
    let summary = run_verify(&ctx());
    for s in &summary.suites {
        println!("{s}");
    }
    assert!(summary.all_passed(), "failed: {:?}", summary.failed());
    assert!(summary.suites.len() >= 20);
}

#[test]
fn sign_error_in_h2_fails_projection_suite() {
    let c = VerifyContext { h2: h2_sign_flipped, ..ctx() };
    let suites = hamiltonian_suites(&c);
    let get = |n: &str| suites.iter().find(|s| s.name == n).unwrap();
    assert!(!get("hamiltonian.h2_projection").passed);
    assert!(get("hamiltonian.h1_projection").passed);
    assert!(get("hamiltonian.decoupling_compatibility").passed);
}

#[test]
fn non_commuting_term_fails_compatibility_suite() {
    let c = VerifyContext { h1: h1_with_field, ..ctx() };
    let suites = hamiltonian_suites(&c);
    let get = |n: &str| suites.iter().find(|s| s.name == n).unwrap();
    assert!(!get("hamiltonian.decoupling_compatibility").passed);
    assert!(get("hamiltonian.h2_projection").passed);
}
