//! Corpus analysis against a hand-computed report.

mod common;

use std::fs;
use std::path::Path;

use common::minicorpus;
use prolint_core::corpus::{
    analyze_corpus, analyze_file, collect_operators, report_csv, report_json, Limits, Parsed, SkipReason,
};
use prolint_core::optable::{DialectOptions, OperatorTable, Profile};

#[test]
fn mini_corpus_matches_golden_report() {
    let dir = tempfile::tempdir().unwrap();
    let root = minicorpus::build(dir.path());
    let report = minicorpus::run(&root, 4);
    let got: serde_json::Value = serde_json::from_str(&report_json(&report).unwrap()).unwrap();
    let mut diffs = Vec::new();
    minicorpus::differences(&got, &minicorpus::golden(), "report", &mut diffs);
    assert!(diffs.is_empty(), "{}", diffs.join("\n"));
}

#[test]
fn report_does_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let root = minicorpus::build(dir.path());
    let one = report_json(&minicorpus::run(&root, 1)).unwrap();
    let eight = report_json(&minicorpus::run(&root, 8)).unwrap();
    assert_eq!(one, eight);
    assert_eq!(
        report_csv(&minicorpus::run(&root, 1)).unwrap(),
        report_csv(&minicorpus::run(&root, 3)).unwrap()
    );
}

#[test]
fn csv_has_one_row_per_file() {
    let dir = tempfile::tempdir().unwrap();
    let root = minicorpus::build(dir.path());
    let csv = report_csv(&minicorpus::run(&root, 2)).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 13);
    assert!(rows[0].starts_with("path,"));
    assert!(rows[1].starts_with("alpha/chain.pl,"));
}

#[test]
fn later_operator_definition_wins_with_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.pl");
    let b = dir.path().join("b.pl");
    fs::write(&a, ":- op(600, xfx, op_a).\n").unwrap();
    fs::write(&b, ":- op(500, xfx, op_a).\n").unwrap();
    let d = DialectOptions::swi();
    let base = OperatorTable::default_table(Profile::Swi);
    let got = collect_operators(&[a, b], &base, &d);
    assert_eq!(got.table.infix("op_a").map(|o| o.priority), Some(500));
    assert_eq!(got.warnings.len(), 1, "{:?}", got.warnings);
    assert!(got.warnings[0].contains("op_a"));
}

#[test]
fn empty_directory_gives_an_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let d = DialectOptions::swi();
    let base = OperatorTable::default_table(Profile::Swi);
    let r = analyze_corpus(dir.path(), &base, &d, &Limits::default(), None).unwrap();
    assert_eq!(r.totals.files, 0);
    assert_eq!(r.totals.parse_success_percent, 0.0);
    assert!(r.packages.is_empty());
    assert_eq!(r.histograms.max_subgoals, vec![0; 26]);
}

#[test]
fn two_megabyte_file_is_too_large() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.pl");
    fs::write(&path, "a.\n".repeat(700_000)).unwrap();
    let d = DialectOptions::swi();
    let base = OperatorTable::default_table(Profile::Swi);
    let s = analyze_file(&path, "big.pl", ".", &base, &d, &Limits::default(), None);
    assert_eq!((s.parsed, s.skip_reason), (Parsed::Skipped, Some(SkipReason::TooLarge)));
    assert_eq!(s.line_count, 0);
}

#[test]
fn top_level_files_form_their_own_package() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("x.pl"), "x.\n").unwrap();
    fs::create_dir(dir.path().join("pkg")).unwrap();
    fs::write(dir.path().join("pkg/y.pro"), "y.\n").unwrap();
    fs::write(dir.path().join("pkg/notes.txt"), "not prolog").unwrap();
    let packages = prolint_core::corpus::discover(Path::new(dir.path())).unwrap();
    let names: Vec<&str> = packages.keys().map(String::as_str).collect();
    assert_eq!(names, [".", "pkg"]);
    assert_eq!(packages["pkg"].len(), 1);
}
