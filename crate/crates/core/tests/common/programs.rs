//! Random Prolog programs for round-trip and formatter properties, and the
//! hand-written fixture files.
//!
//! Generated programs always parse under the swi profile: operator terms
//! are fully parenthesized and tokens that could merge are separated by
//! layout.

use std::fs;
use std::path::PathBuf;

use proptest::prelude::*;

const ATOMS: &[&str] = &[
    "a", "foo", "bar_baz", "camelCase", "'hello world'", "'it''s'", "[]", "'[]'", "{}", "'\\n'", "!", ";",
];
const VARS: &[&str] = &["X", "Y", "_", "_Acc", "Foo", "List1"];
const NUMBERS: &[&str] = &["0", "42", "0x1F", "0'a", "0' ", "1.5", "2.0e3", "1_000", "1e10", "123456789012345678901234567890"];
const STRINGS: &[&str] = &["\"\"", "\"text\"", "\"say \"\"hi\"\"\"", "`codes`"];
const DICTS: &[&str] = &["_{a: 1}", "point{x: 1, y: 2}", "_{}"];
const INFIX: &[&str] = &["+", "-", "*", "=", "is", "<", "->", ";", ":", "=..", "\\==", "mod", ",", "|", "-->", ":-"];
const PREFIX: &[&str] = &["-", "\\+", "?-"];

/// Layout between two tokens; never empty.
pub fn layout() -> BoxedStrategy<String> {
    prop_oneof![
        6 => Just(" ".to_string()),
        2 => Just("\n    ".to_string()),
        1 => Just("\t".to_string()),
        1 => Just("  ".to_string()),
        1 => Just("\n".to_string()),
        1 => Just(" /* c */ ".to_string()),
        1 => Just(" % note\n".to_string()),
        1 => Just("\n\n".to_string()),
    ]
    .boxed()
}

/// Layout that may be empty, for places where gluing is harmless.
pub fn thin() -> BoxedStrategy<String> {
    prop_oneof![4 => Just(String::new()), 2 => layout()].boxed()
}

fn leaf() -> BoxedStrategy<String> {
    prop_oneof![
        4 => prop::sample::select(ATOMS).prop_map(str::to_string),
        3 => prop::sample::select(VARS).prop_map(str::to_string),
        2 => prop::sample::select(NUMBERS).prop_map(str::to_string),
        1 => prop::sample::select(STRINGS).prop_map(str::to_string),
        1 => prop::sample::select(DICTS).prop_map(str::to_string),
    ]
    .boxed()
}

fn join(items: Vec<(String, String)>, sep: &str) -> String {
    let mut out = String::new();
    for (i, (pad, item)) in items.into_iter().enumerate() {
        if i > 0 {
            out.push_str(sep);
        }
        out.push_str(&pad);
        out.push_str(&item);
    }
    out
}

pub fn term() -> BoxedStrategy<String> {
    leaf()
        .prop_recursive(4, 32, 4, |inner| {
            let arg = (thin(), inner.clone());
            prop_oneof![
                // f(A, B)
                (prop::sample::select(&["f", "g", "point", "'quoted f'"][..]), prop::collection::vec(arg.clone(), 1..4), thin())
                    .prop_map(|(f, args, end)| format!("{f}({}{end})", join(args, ","))),
                // [A, B | T]
                (prop::collection::vec(arg.clone(), 1..4), prop::option::of((thin(), inner.clone())), thin())
                    .prop_map(|(items, tail, end)| {
                        let tail = tail.map(|(p, t)| format!("|{p}{t}")).unwrap_or_default();
                        format!("[{}{tail}{end}]", join(items, ","))
                    }),
                // {A}
                (thin(), inner.clone(), thin()).prop_map(|(a, t, b)| format!("{{{a}{t}{b}}}")),
                // (L op R)
                (thin(), inner.clone(), layout(), prop::sample::select(INFIX), layout(), inner.clone(), thin())
                    .prop_map(|(a, l, p, op, q, r, b)| format!("({a}({l}){p}{op}{q}({r}){b})")),
                // (op (X))
                (prop::sample::select(PREFIX), layout(), inner.clone())
                    .prop_map(|(op, p, t)| format!("({op}{p}({t}))")),
            ]
        })
        .boxed()
}

fn head() -> BoxedStrategy<String> {
    prop_oneof![
        prop::sample::select(&["p", "foo", "camelCase", "'odd name'"][..]).prop_map(str::to_string),
        (prop::sample::select(&["p", "q", "count_items"][..]), prop::collection::vec((thin(), term()), 1..4))
            .prop_map(|(f, args)| format!("{f}({})", join(args, ","))),
    ]
    .boxed()
}

pub fn clause() -> BoxedStrategy<String> {
    prop_oneof![
        3 => (head(), thin()).prop_map(|(h, a)| format!("{h}{a}.")),
        4 => (head(), layout(), layout(), prop::collection::vec((layout(), term()), 1..5))
            .prop_map(|(h, a, b, goals)| {
                format!("{h}{a}:-{b}{}.", join(goals, ","))
            }),
        1 => (layout(), term()).prop_map(|(a, g)| format!(":-{a}{g}.")),
        1 => (head(), layout(), layout(), prop::collection::vec((layout(), term()), 1..3))
            .prop_map(|(h, a, b, body)| format!("{h}{a}-->{b}{}.", join(body, ","))),
    ]
    .boxed()
}

/// A whole program: clauses separated by layout that ends each clause.
pub fn program() -> BoxedStrategy<String> {
    let after_end = prop_oneof![
        4 => Just("\n".to_string()),
        1 => Just(" ".to_string()),
        1 => Just("\n\n".to_string()),
        1 => Just(" % done\n".to_string()),
        1 => Just("\t\n".to_string()),
    ];
    (
        prop::option::of(Just("#!/usr/bin/env swipl\n".to_string())),
        prop::collection::vec((clause(), after_end), 0..6),
        prop::option::of(Just("% trailing comment".to_string())),
    )
        .prop_map(|(shebang, clauses, tail)| {
            let mut s = shebang.unwrap_or_default();
            for (c, end) in clauses {
                s.push_str(&c);
                s.push_str(&end);
            }
            s.push_str(&tail.unwrap_or_default());
            s
        })
        .boxed()
}

pub fn fixtures_dir() -> PathBuf {
    // Both crates sit side by side under crates/.
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

/// Hand-written fixture programs as (file name, text), sorted by name.
pub fn fixture_programs() -> Vec<(String, String)> {
    let dir = fixtures_dir().join("programs");
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.expect("dir entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "pl"))
        .map(|p| {
            let name = p.file_name().expect("name").to_string_lossy().into_owned();
            (name, fs::read_to_string(&p).expect("fixture text"))
        })
        .collect();
    out.sort();
    out
}
