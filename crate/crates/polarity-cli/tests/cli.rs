//! Golden-file tests for every subcommand, plus exit-code and determinism
//! checks. Set `BLESS=1` to regenerate the golden files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_polarity")
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn check_golden(name: &str, out: &Output, expect_code: i32) {
    assert_eq!(
        out.status.code(),
        Some(expect_code),
        "{name}: unexpected exit ({:?}); stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout.clone()).expect("utf8");
    let path = golden_dir().join(format!("{name}.txt"));
    if std::env::var_os("BLESS").is_some() {
        std::fs::create_dir_all(golden_dir()).unwrap();
        std::fs::write(&path, &stdout).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("{name}: golden file missing, run with BLESS=1"));
    assert_eq!(stdout, expected, "{name}: output differs from golden");
}

fn fx(name: &str) -> String {
    fixtures().join(name).to_str().unwrap().to_owned()
}

#[test]
fn validate_clean_fixture() {
    let out = run(&["validate", &fx("neq3.json")]);
    check_golden("validate_neq3", &out, 0);
}

#[test]
fn validate_flags_bad_sections() {
    let out = run(&["validate", &fx("bad_sections.json")]);
    check_golden("validate_bad_sections", &out, 1);
}

#[test]
fn validate_json_format() {
    let out = run(&["validate", "--format", "json", &fx("bad_sections.json")]);
    check_golden("validate_bad_sections_json", &out, 1);
}

#[test]
fn range_violation_exits_2_naming_tuple() {
    let out = run(&["validate", &fx("bad_range.json")]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("(2,0)"), "stderr: {stderr}");
}

#[test]
fn parse_error_exits_2() {
    let out = run(&["validate", &fx("broken.json")]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line"), "stderr: {stderr}");
}

#[test]
fn concepts_of_neq3_reports_eight() {
    let out = run(&["concepts", &fx("neq3.json")]);
    check_golden("concepts_neq3", &out, 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("elements: 8"));
}

#[test]
fn concepts_json() {
    let out = run(&["concepts", "--format", "json", &fx("le2.json")]);
    check_golden("concepts_le2_json", &out, 0);
}

#[test]
fn dual_of_omega_polarity_is_an_nlo() {
    let out = run(&["dual", &fx("le2.json")]);
    check_golden("dual_le2", &out, 0);
}

#[test]
fn dual_of_nlo_is_its_canonical_structure() {
    let out = run(&["dual", &fx("nlo_ch2.json")]);
    check_golden("dual_nlo_ch2", &out, 0);
}

#[test]
fn canonical_diagnostics_pass() {
    let out = run(&["canonical", &fx("nlo_n5.json")]);
    check_golden("canonical_nlo_n5", &out, 0);
    let out = run(&["canonical", "--format", "json", &fx("nlo_ch2.json")]);
    check_golden("canonical_nlo_ch2_json", &out, 0);
}

#[test]
fn check_morphism_identity_passes() {
    let out = run(&["check-morphism", &fx("id_le2.json")]);
    check_golden("check_morphism_id_le2", &out, 0);
}

#[test]
fn check_morphism_broken_fails_with_witness() {
    let out = run(&["check-morphism", &fx("swap_le2.json")]);
    check_golden("check_morphism_swap_le2", &out, 1);
}

#[test]
fn dual_hom_both_directions() {
    let out = run(&["dual-hom", &fx("id_le2.json")]);
    check_golden("dual_hom_id_le2", &out, 0);
    let out = run(&["dual-hom", &fx("hom_ch2_diamond.json")]);
    check_golden("dual_hom_ch2_diamond", &out, 0);
}

#[test]
fn sum_of_two_le2() {
    let out = run(&["sum", &fx("le2.json"), &fx("le2.json")]);
    check_golden("sum_le2_le2", &out, 0);
}

#[test]
fn sum_from_a_sum_spec_document() {
    let out = run(&["sum", &fx("sum_le2_empty2.json")]);
    check_golden("sum_spec_le2_empty2", &out, 0);
}

#[test]
fn concepts_accepts_plain_polarity_documents() {
    let out = run(&["concepts", &fx("le2_plain.json")]);
    check_golden("concepts_le2_plain", &out, 0);
}

#[test]
fn maximal_covering_verdicts() {
    let out = run(&["maximal-covering", &fx("covering_ch2.json")]);
    check_golden("maximal_covering_yes", &out, 0);
    let out = run(&["maximal-covering", &fx("noncovering_ch2.json")]);
    check_golden("maximal_covering_no", &out, 1);
}

#[test]
fn export_dot_neq3() {
    let out = run(&["export-dot", &fx("neq3.json")]);
    check_golden("export_dot_neq3", &out, 0);
}

#[test]
fn capacity_cap_exits_3() {
    let out = run(&["concepts", "--cap", "4", &fx("neq3.json")]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn selfcheck_small_size() {
    let out = run(&["selfcheck", "--size", "1"]);
    check_golden("selfcheck_size1", &out, 0);
}

#[test]
fn outputs_are_deterministic_across_runs() {
    let cases: Vec<Vec<String>> = vec![
        vec!["dual".into(), fx("nlo_n5.json")],
        vec!["concepts".into(), fx("neq3.json")],
        vec!["dual-hom".into(), fx("hom_ch2_diamond.json")],
        vec!["selfcheck".into(), "--size".into(), "1".into()],
    ];
    for args in cases {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = run(&refs);
        let b = run(&refs);
        assert_eq!(a.stdout, b.stdout, "nondeterministic output for {args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn roundtrip_parse_serialize_is_canonical() {
    use polarity_cli::document::{parse, serialize};
    for name in [
        "neq3.json",
        "le2.json",
        "empty2.json",
        "nlo_ch2.json",
        "nlo_n5.json",
        "id_le2.json",
        "swap_le2.json",
        "hom_ch2_diamond.json",
        "covering_ch2.json",
        "noncovering_ch2.json",
        "bad_sections.json",
    ] {
        let text = std::fs::read_to_string(fixtures().join(name)).unwrap();
        let doc = parse(&text).expect(name);
        let canonical = serialize(&doc);
        let reparsed = parse(&canonical).expect(name);
        assert_eq!(
            serialize(&reparsed),
            canonical,
            "{name} is not canonical after one pass"
        );
    }
}
