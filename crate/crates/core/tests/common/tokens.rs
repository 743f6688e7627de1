//! Tokenizer fixtures from the ISO token grammar and a maximal-munch
//! check.
//!
//! Expected tokens are written as `kind:text` items separated by ` | `,
//! where kind is one letter (see `kind_of`).

use prolint_core::lexer::{tokenize, TokenKind};
use prolint_core::optable::DialectOptions;

pub fn kind_of(c: char) -> TokenKind {
    match c {
        'N' => TokenKind::Name,
        'V' => TokenKind::Variable,
        'I' => TokenKind::Integer,
        'F' => TokenKind::Float,
        'D' => TokenKind::DoubleQuoted,
        'B' => TokenKind::BackQuoted,
        'C' => TokenKind::CharCodeConstant,
        'P' => TokenKind::OpenParen,
        'T' => TokenKind::OpenCt,
        'Q' => TokenKind::CloseParen,
        'L' => TokenKind::OpenList,
        'R' => TokenKind::CloseList,
        'O' => TokenKind::OpenCurly,
        'U' => TokenKind::CloseCurly,
        'K' => TokenKind::Comma,
        'H' => TokenKind::Bar,
        'E' => TokenKind::End,
        'X' => TokenKind::DictOpen,
        other => panic!("bad kind letter {other}"),
    }
}

pub fn expected(spec: &str) -> Vec<(TokenKind, String)> {
    if spec.is_empty() {
        return Vec::new();
    }
    spec.split(" | ")
        .map(|item| {
            let mut chars = item.chars();
            let k = chars.next().expect("kind");
            assert_eq!(chars.next(), Some(':'), "malformed item {item:?}");
            (kind_of(k), chars.as_str().to_string())
        })
        .collect()
}

#[derive(Clone, Copy)]
pub enum D {
    Iso,
    Swi,
}

pub fn dialect(d: D) -> DialectOptions {
    match d {
        D::Iso => DialectOptions::iso(),
        D::Swi => DialectOptions::swi(),
    }
}

use D::{Iso, Swi};

pub const FIXTURES: &[(&str, D, &str)] = &[
    // variables
    ("_a", Iso, "V:_a"),
    ("_", Iso, "V:_"),
    ("X", Iso, "V:X"),
    ("Xy_1", Iso, "V:Xy_1"),
    ("X1 _Y2", Iso, "V:X1 | V:_Y2"),
    ("__", Iso, "V:__"),
    // names
    ("abc", Iso, "N:abc"),
    ("aBC_9", Iso, "N:aBC_9"),
    ("!", Iso, "N:!"),
    ("!!", Iso, "N:! | N:!"),
    (";", Iso, "N:;"),
    (";;", Iso, "N:; | N:;"),
    ("a;b", Iso, "N:a | N:; | N:b"),
    ("[]", Iso, "L:[ | R:]"),
    ("{}", Iso, "O:{ | U:}"),
    ("=..", Iso, "N:=.."),
    ("X=..Y", Iso, "V:X | N:=.. | V:Y"),
    ("X=.Y", Iso, "V:X | N:=. | V:Y"),
    (":-", Iso, "N::-"),
    ("-->", Iso, "N:-->"),
    ("\\+", Iso, "N:\\+"),
    ("\\", Iso, "N:\\"),
    ("a:-b", Iso, "N:a | N::- | N:b"),
    ("a+b", Iso, "N:a | N:+ | N:b"),
    ("a+-b", Iso, "N:a | N:+- | N:b"),
    ("a- -b", Iso, "N:a | N:- | N:- | N:b"),
    ("X\\==Y", Iso, "V:X | N:\\== | V:Y"),
    ("a->b;c", Iso, "N:a | N:-> | N:b | N:; | N:c"),
    ("?-a.", Iso, "N:?- | N:a | E:."),
    ("a@<b", Iso, "N:a | N:@< | N:b"),
    ("- - -", Iso, "N:- | N:- | N:-"),
    ("...", Iso, "N:..."),
    ("a:b:c", Iso, "N:a | N:: | N:b | N:: | N:c"),
    ("p:-!,q.", Iso, "N:p | N::- | N:! | K:, | N:q | E:."),
    // quoted names
    ("'hello'", Iso, "N:'hello'"),
    ("'it''s'", Iso, "N:'it''s'"),
    ("''", Iso, "N:''"),
    ("',,'", Iso, "N:',,'"),
    ("'a\\nb'", Iso, "N:'a\\nb'"),
    ("'\\x41\\'", Iso, "N:'\\x41\\'"),
    ("'\\101\\'", Iso, "N:'\\101\\'"),
    ("'\\\\'", Iso, "N:'\\\\'"),
    ("'\\''", Iso, "N:'\\''"),
    ("'a\\\nb'", Iso, "N:'a\\\nb'"),
    ("'/*'", Iso, "N:'/*'"),
    ("'a' (b)", Iso, "N:'a' | P:( | N:b | Q:)"),
    ("'a'(b)", Iso, "N:'a' | T:( | N:b | Q:)"),
    ("'\\u2C6F'", Swi, "N:'\\u2C6F'"),
    ("'\\x41'", Swi, "N:'\\x41'"),
    // strings
    ("\"str\"", Iso, "D:\"str\""),
    ("\"a\"\"b\"", Iso, "D:\"a\"\"b\""),
    ("X = \"\"", Iso, "V:X | N:= | D:\"\""),
    ("\"%\"", Iso, "D:\"%\""),
    ("`bq`", Iso, "B:`bq`"),
    ("\"a\tb\"", Swi, "D:\"a\tb\""),
    // numbers
    ("0", Iso, "I:0"),
    ("123", Iso, "I:123"),
    ("0x1F", Iso, "I:0x1F"),
    ("0o17", Iso, "I:0o17"),
    ("0b101", Iso, "I:0b101"),
    ("0x", Iso, "I:0 | N:x"),
    ("0b2", Iso, "I:0 | N:b2"),
    ("0o8", Iso, "I:0 | N:o8"),
    ("0xg", Iso, "I:0 | N:xg"),
    ("-1", Iso, "N:- | I:1"),
    ("- 1", Iso, "N:- | I:1"),
    ("1.5", Iso, "F:1.5"),
    ("0.5", Iso, "F:0.5"),
    ("1.0e10", Iso, "F:1.0e10"),
    ("1.5E-3", Iso, "F:1.5E-3"),
    ("10.0e+2", Iso, "F:10.0e+2"),
    ("1.0e", Iso, "F:1.0 | N:e"),
    ("1.e", Iso, "I:1 | N:. | N:e"),
    ("12.x", Iso, "I:12 | N:. | N:x"),
    ("1e3", Iso, "I:1 | N:e3"),
    ("1e3", Swi, "F:1e3"),
    ("1_000", Iso, "I:1 | V:_000"),
    ("1_000", Swi, "I:1_000"),
    ("1_000_000", Swi, "I:1_000_000"),
    // character codes
    ("0'a", Iso, "C:0'a"),
    ("0'''", Iso, "C:0'''"),
    ("0'\\n", Iso, "C:0'\\n"),
    ("0'\\\\", Iso, "C:0'\\\\"),
    ("0' ", Iso, "C:0' "),
    ("0''", Swi, "C:0''"),
    // punctuation
    ("f(x)", Iso, "N:f | T:( | N:x | Q:)"),
    ("f (x)", Iso, "N:f | P:( | N:x | Q:)"),
    ("-(1)", Iso, "N:- | T:( | I:1 | Q:)"),
    ("- (1)", Iso, "N:- | P:( | I:1 | Q:)"),
    ("f(a,b)", Iso, "N:f | T:( | N:a | K:, | N:b | Q:)"),
    ("[a|T]", Iso, "L:[ | N:a | H:| | V:T | R:]"),
    ("[a,b]", Iso, "L:[ | N:a | K:, | N:b | R:]"),
    ("{a}", Iso, "O:{ | N:a | U:}"),
    ("f()", Swi, "N:f | T:( | Q:)"),
    ("A=B", Iso, "V:A | N:= | V:B"),
    // end token
    ("a.", Iso, "N:a | E:."),
    ("a.\n", Iso, "N:a | E:."),
    ("a.b", Iso, "N:a | N:. | N:b"),
    ("a.%c", Iso, "N:a | E:."),
    ("a. b", Iso, "N:a | E:. | N:b"),
    ("a.\tb", Iso, "N:a | E:. | N:b"),
    ("a\n.", Iso, "N:a | E:."),
    ("a /* */ .", Iso, "N:a | E:."),
    // layout and comments
    ("", Iso, ""),
    ("   \n\t", Iso, ""),
    ("/* c */ a", Iso, "N:a"),
    ("% c\na", Iso, "N:a"),
    ("a% comment", Iso, "N:a"),
    ("a/*x*/b", Iso, "N:a | N:b"),
    ("/*a/*b*/c*/", Iso, "N:c | N:*/"),
    ("/*a/*b*/c*/", Swi, ""),
    ("#!/bin/x\na.", Swi, "N:a | E:."),
    ("#!/bin/x\na.", Iso, "N:# | N:! | N:/ | N:bin | N:/ | N:x | N:a | E:."),
    // dicts
    ("a{b:1}", Swi, "N:a | X:{ | N:b | N:: | I:1 | U:}"),
    ("_{a:1}", Swi, "V:_ | X:{ | N:a | N:: | I:1 | U:}"),
    ("a{b:1}", Iso, "N:a | O:{ | N:b | N:: | I:1 | U:}"),
];

pub fn lex(src: &str, d: &DialectOptions) -> Result<Vec<(TokenKind, String)>, String> {
    tokenize(src, d)
        .map(|s| s.tokens.into_iter().map(|t| (t.kind, t.text)).collect())
        .map_err(|e| e.to_string())
}

/// No token may be followed by up to three characters that, together with
/// it, would lex as one longer token.
pub fn maximal_munch_violations(src: &str, d: &DialectOptions) -> Vec<String> {
    let Ok(stream) = tokenize(src, d) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for tok in &stream.tokens {
        let (start, end) = (tok.span.byte_start, tok.span.byte_end);
        let rest: Vec<usize> = src[end..]
            .char_indices()
            .map(|(i, c)| end + i + c.len_utf8())
            .take(3)
            .collect();
        for stop in rest {
            let longer = &src[start..stop];
            if let Ok(s) = tokenize(longer, d) {
                if s.tokens.len() == 1 && s.tokens[0].text == longer {
                    out.push(format!("{:?} could extend to {longer:?}", tok.text));
                }
            }
        }
    }
    out
}

