//! Inferring a style setting and checking with the result must be quiet.

use prolint_core::lexer::tokenize;
use prolint_core::optable::{DialectOptions, OperatorTable, Profile};
use prolint_core::options::{Setting, StyleOptions, STYLE_KEYS};
use prolint_core::parser::parse_program_recovering;
use prolint_core::style::check_style;

/// Longest line in characters, counted without the library.
pub fn longest_line(src: &str) -> usize {
    src.split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l).chars().count())
        .max()
        .unwrap_or(0)
}

/// Problems found when inferring each setting on its own and then checking
/// with the inferred value.
pub fn fixpoint_failures(name: &str, src: &str) -> Vec<String> {
    let d = DialectOptions::swi();
    let table = OperatorTable::default_table(Profile::Swi);
    let stream = tokenize(src, &d).expect("fixture lexes");
    let cst = parse_program_recovering(&stream, &table, &d, None).expect("no deadline").cst;
    let mut out = Vec::new();
    for key in STYLE_KEYS {
        let mut opts = StyleOptions::all_off();
        opts.set(key, "infer").expect("every style key supports infer");
        let (diags, inferred) = check_style(&cst, src, &opts, name);
        if !diags.is_empty() {
            out.push(format!("{name}: {key}=infer reported {} diagnostics", diags.len()));
        }
        if inferred.options.infer_keys().contains(&key) {
            out.push(format!("{name}: {key} still set to infer"));
        }
        let (again, _) = check_style(&cst, src, &inferred.options, name);
        for d in again {
            out.push(format!("{name}: {key} re-check: {d}"));
        }
        if key == "max_line_length" {
            let want = longest_line(src).max(1);
            if inferred.options.max_line_length != Setting::Check(want) {
                out.push(format!(
                    "{name}: inferred max_line_length {} but the longest line has {want} characters",
                    inferred.options.max_line_length
                ));
            }
        }
    }
    let (_, all) = check_style(&cst, src, &StyleOptions::all_infer(), name);
    let (again, _) = check_style(&cst, src, &all.options, name);
    for d in again {
        out.push(format!("{name}: all-infer re-check: {d}"));
    }
    out
}
