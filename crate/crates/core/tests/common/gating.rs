//! Minimal programs that need exactly one dialect flag.

use prolint_core::lexer::tokenize;
use prolint_core::optable::{DialectOptions, OperatorTable, Profile};
use prolint_core::parser::parse_program;

/// (case name, flag, program).
pub const GATED: &[(&str, &str, &str)] = &[
    ("shebang", "shebang", "#!/usr/bin/env swipl\na.\n"),
    ("digit_groups", "digit_groups", "x(1_000).\n"),
    ("dicts", "dicts", "x(_{a: 1}).\n"),
    ("unicode_character_escape", "unicode_character_escape", "x('\\u2C6F').\n"),
    ("missing_closing_backslash", "missing_closing_backslash", "x('\\x41').\n"),
    ("single_quote_char_constant", "single_quote_char_constant", "x(0'').\n"),
    ("zero_arguments_compound", "allow_compounds_with_zero_arguments", "x :- X is pi().\n"),
    ("tab_in_quotes", "tab_in_quotes", "x('a\tb').\n"),
    ("integer_exponential_notation", "allow_integer_exponential_notation", "x(A) :- A = 1e3.\n"),
    ("a()", "allow_compounds_with_zero_arguments", "a().\n"),
    ("X = -", "allow_operator_as_operand", "x(X) :- X = - .\n"),
    ("[a :- b]", "allow_arg_precedence_geq_1000", "x([a :- b]).\n"),
    ("1e3", "allow_integer_exponential_notation", "x(1e3).\n"),
];

/// Whether `src` lexes and parses without error.
pub fn parses(src: &str, d: &DialectOptions, profile: Profile) -> bool {
    let table = OperatorTable::default_table(profile);
    tokenize(src, d).is_ok_and(|s| parse_program(&s, &table, d).is_ok())
}

/// Checks one case from both ends: iso plus the flag parses and plain iso
/// fails; swi parses and swi minus the flag fails.
pub fn check(flag: &str, src: &str) -> Result<(), String> {
    let iso = DialectOptions::iso();
    let swi = DialectOptions::swi();
    let iso_on = iso.with(flag, true).map_err(|e| e.to_string())?;
    let swi_off = swi.with(flag, false).map_err(|e| e.to_string())?;
    let results = [
        ("iso + flag", parses(src, &iso_on, Profile::Iso), true),
        ("iso", parses(src, &iso, Profile::Iso), false),
        ("swi", parses(src, &swi, Profile::Swi), true),
        ("swi - flag", parses(src, &swi_off, Profile::Swi), false),
    ];
    let wrong: Vec<String> = results
        .iter()
        .filter(|(_, got, want)| got != want)
        .map(|(what, got, _)| format!("{what}: parses={got}"))
        .collect();
    if wrong.is_empty() {
        Ok(())
    } else {
        Err(format!("{flag} on {src:?}: {}", wrong.join(", ")))
    }
}
