//! Inference reaches a fixpoint on every fixture program.

mod common;

use common::inference::{fixpoint_failures, longest_line};
use common::programs::fixture_programs;

#[test]
fn inferred_settings_are_quiet() {
    let fixtures = fixture_programs();
    assert!(fixtures.len() >= 20);
    let failures: Vec<String> = fixtures.iter().flat_map(|(n, s)| fixpoint_failures(n, s)).collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn oracle_counts_characters() {
    assert_eq!(longest_line("ab\nécole\n"), 5);
    assert_eq!(longest_line("a\r\nbb\r\n"), 2);
    assert_eq!(longest_line(""), 0);
}
