//! Acceptance suite: one test per criterion, each printing a PASS line once
//! its assertions hold. Sampled criteria use a fixed seed so the run is
//! reproducible.

use std::process::Command;

use polarity_core::checks;
use polarity_core::fixtures;
use polarity_core::lattice::enumerate_stable;

const SEED: u64 = 0xA11CE;

fn assert_suite(report: &checks::SuiteReport) {
    assert!(
        report.passed(),
        "suite {} failed {} of {} checks:\n{}",
        report.name,
        report.failures.len(),
        report.checks,
        report.failures.join("\n")
    );
}

#[test]
fn c01_galois_closure_laws() {
    // every polarity with carriers up to 3: adjunction, union/intersection
    // exchange, triple-composition collapse, stable-implies-upset, and the
    // two decomposition identities
    let report = checks::galois_suite(3);
    assert_suite(&report);
    println!(
        "criterion 01 (galois/closure suite, {} checks): PASS",
        report.checks
    );
}

#[test]
fn c02_stable_lattice_oracle() {
    let neq3 = enumerate_stable(&fixtures::neq3()).unwrap();
    assert_eq!(neq3.len(), 8);
    let le2 = enumerate_stable(&fixtures::le2()).unwrap();
    assert_eq!(le2.len(), 2);
    // 100 seeded polarities with carriers up to 10 against the subset filter
    let report = checks::stable_lattice_suite(SEED, 100, 10);
    assert_suite(&report);
    println!(
        "criterion 02 (stable-lattice oracle, {} checks): PASS",
        report.checks
    );
}

#[test]
fn c03_operator_theorems() {
    // 200 seeded stable-sectioned structures: join/meet preservation per
    // coordinate, relation/operator roundtrips, first-order agreement, and
    // all 512 unary complete normal operators of the cube fixture
    let report = checks::operator_suite(SEED, 200);
    assert_suite(&report);
    println!(
        "criterion 03 (operator theorems, {} checks): PASS",
        report.checks
    );
}

#[test]
fn c04_adjunctions() {
    let report = checks::adjunction_suite();
    assert_suite(&report);
    println!(
        "criterion 04 (residual and box/diamond adjunctions, {} checks): PASS",
        report.checks
    );
}

#[test]
fn c05_canonical_extension() {
    // fixture lattices with the identity pair plus 50 seeded operator pairs
    let report = checks::canonical_suite(SEED, 50);
    assert_suite(&report);
    println!(
        "criterion 05 (canonical extensions, {} checks): PASS",
        report.checks
    );
}

#[test]
fn c06_morphism_duality() {
    // 100 seeded certified morphisms between the fixtures
    let report = checks::morphism_suite(SEED, 100);
    assert_suite(&report);
    println!(
        "criterion 06 (morphism duality, {} checks): PASS",
        report.checks
    );
}

#[test]
fn c07_inner_substructures_and_images() {
    // runs over every certified morphism between the fixtures
    let report = checks::inner_image_suite();
    assert_suite(&report);
    println!(
        "criterion 07 (inner substructures and images, {} checks): PASS",
        report.checks
    );
}

#[test]
fn c08_hom_duals() {
    // 50 seeded homomorphisms between lattices of up to six elements
    let report = checks::hom_dual_suite(SEED, 50);
    assert_suite(&report);
    println!(
        "criterion 08 (homomorphism duals, {} checks): PASS",
        report.checks
    );
}

#[test]
fn c09_direct_sums() {
    // all summand combinations up to three fixtures, plus the coproduct
    // factorization with exhaustive uniqueness
    let report = checks::sums_suite();
    assert_suite(&report);
    println!("criterion 09 (direct sums, {} checks): PASS", report.checks);
}

#[test]
fn c10_maximal_covering() {
    // includes a non-surjective yet covering instance and a failing witness
    let report = checks::maximal_covering_suite();
    assert_suite(&report);
    println!(
        "criterion 10 (maximal covering, {} checks): PASS",
        report.checks
    );
}

#[test]
fn c11_eps_reduction() {
    // all-plain paths agree verdict-for-verdict with the plain machinery on
    // every fixture and every candidate carrier-map pair
    let report = checks::eps_suite(SEED);
    assert_suite(&report);
    println!(
        "criterion 11 (eps reduction, {} checks): PASS",
        report.checks
    );
}

#[test]
fn c12_cli_surface() {
    // every subcommand has a golden-file test in tests/cli.rs; here the
    // self-check suite must pass at size 3 and be byte-deterministic
    let bin = env!("CARGO_BIN_EXE_polarity");
    let run = || {
        Command::new(bin)
            .args(["selfcheck", "--size", "3"])
            .output()
            .expect("binary runs")
    };
    let a = run();
    assert_eq!(
        a.status.code(),
        Some(0),
        "selfcheck failed:\n{}",
        String::from_utf8_lossy(&a.stdout)
    );
    let b = run();
    assert_eq!(a.stdout, b.stdout, "selfcheck output not deterministic");
    println!("criterion 12 (CLI selfcheck --size 3): PASS");
}
