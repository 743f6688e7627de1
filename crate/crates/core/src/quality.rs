//! Naming rules checked on the AST: predicate names, variable names, and
//! a pattern gate for predicate names.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::ast::{Ast, AstWithOrigin};
use crate::diagnostic::{sort_diagnostics, Diagnostic};
use crate::lexer::is_alnum_char;
use crate::options::{NamingStyle, QualityOptions, Setting};
use crate::span::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentStyle {
    Underscore,
    CamelCase,
    SingleWord,
    Mixed,
}

impl IdentStyle {
    fn describe(self) -> &'static str {
        match self {
            IdentStyle::Underscore => "underscore style",
            IdentStyle::CamelCase => "camel case",
            IdentStyle::SingleWord => "a single word",
            IdentStyle::Mixed => "mixed underscore and camel case",
        }
    }
}

/// Splits an identifier on `_` and on lower-to-upper case changes and
/// classifies how the words are joined.
pub fn identifier_words(name: &str) -> (Vec<String>, IdentStyle) {
    let mut words = Vec::new();
    let mut current = String::new();
    let mut prev: Option<char> = None;
    for c in name.chars() {
        if c == '_' {
            if !current.is_empty() {
                words.push(std::mem::take(&mut current));
            }
        } else {
            if prev.is_some_and(char::is_lowercase) && c.is_uppercase() && !current.is_empty() {
                words.push(std::mem::take(&mut current));
            }
            current.push(c);
        }
        prev = Some(c);
    }
    if !current.is_empty() {
        words.push(current);
    }
    let core = name.trim_start_matches('_');
    let has_underscore = core.contains('_');
    let upper_after_first = core.chars().skip(1).any(char::is_uppercase);
    let style = if words.len() <= 1 {
        IdentStyle::SingleWord
    } else if has_underscore && !upper_after_first {
        IdentStyle::Underscore
    } else if !has_underscore {
        IdentStyle::CamelCase
    } else {
        IdentStyle::Mixed
    };
    (words, style)
}

fn is_identifier(name: &str) -> bool {
    !name.is_empty() && name.chars().all(is_alnum_char)
}

/// First occurrence of each distinct name, in file order.
struct Names {
    first: BTreeMap<String, SourceSpan>,
}

impl Names {
    fn new() -> Self {
        Self {
            first: BTreeMap::new(),
        }
    }

    fn add(&mut self, name: &str, span: SourceSpan) {
        self.first
            .entry(name.to_string())
            .and_modify(|s| {
                if span.byte_start < s.byte_start {
                    *s = span;
                }
            })
            .or_insert(span);
    }
}

fn naming(
    rule: &'static str,
    what: &str,
    names: &Names,
    setting: Setting<NamingStyle>,
    file: &str,
    out: &mut Vec<Diagnostic>,
) {
    let Setting::Check(want) = setting else {
        return;
    };
    let classified: Vec<(&String, SourceSpan, IdentStyle)> = names
        .first
        .iter()
        .filter(|(n, _)| is_identifier(n))
        .map(|(n, s)| (n, *s, identifier_words(n).1))
        .filter(|(_, _, st)| *st != IdentStyle::SingleWord)
        .collect();
    let expected = match want {
        NamingStyle::Underscore => Some(IdentStyle::Underscore),
        NamingStyle::CamelCase => Some(IdentStyle::CamelCase),
        NamingStyle::Consistent => {
            let count = |st| classified.iter().filter(|c| c.2 == st).count();
            let (u, c) = (count(IdentStyle::Underscore), count(IdentStyle::CamelCase));
            match u.cmp(&c) {
                std::cmp::Ordering::Greater => Some(IdentStyle::Underscore),
                std::cmp::Ordering::Less => Some(IdentStyle::CamelCase),
                std::cmp::Ordering::Equal => None,
            }
        }
    };
    for (name, span, style) in classified {
        match expected {
            Some(e) if style == e => {}
            Some(e) => out.push(Diagnostic::warning(
                rule,
                file,
                span,
                format!("{what} `{name}` uses {}; expected {}", style.describe(), e.describe()),
            )),
            None => out.push(Diagnostic::warning(
                rule,
                file,
                span,
                format!("{what} `{name}` uses {}; the file has no dominant naming style", style.describe()),
            )),
        }
    }
}

/// The predicate a clause defines, looking through module qualification.
fn head_of(clause: &Ast) -> Option<&Ast> {
    let mut head = match clause {
        Ast::Rule { head, .. } => head.as_ref(),
        Ast::Fact(t) => match t.as_ref() {
            Ast::Infix { op, left, .. } if op == "-->" => left.as_ref(),
            t => t,
        },
        _ => return None,
    };
    while let Ast::Infix { op, right, .. } = head {
        if op != ":" {
            break;
        }
        head = right;
    }
    Some(head)
}

fn functor_name(head: &Ast) -> Option<&str> {
    match head {
        Ast::Atom(a) => Some(a),
        Ast::Compound { functor, .. } => Some(functor),
        Ast::Infix { op, .. } | Ast::Prefix { op, .. } | Ast::Postfix { op, .. } => Some(op),
        _ => None,
    }
}

/// Runs the enabled naming rules over one file's AST.
pub fn check_quality(ast: &AstWithOrigin, opts: &QualityOptions, file: &str) -> Vec<Diagnostic> {
    let spans: HashMap<*const Ast, SourceSpan> = ast.nodes().map(|(n, s)| (n as *const Ast, s)).collect();
    let span_of = |n: &Ast| spans.get(&(n as *const Ast)).copied().unwrap_or_default();
    let mut predicates = Names::new();
    let mut variables = Names::new();
    let clauses: &[Ast] = match &ast.ast {
        Ast::Program(items) => items,
        other => std::slice::from_ref(other),
    };
    for clause in clauses {
        if let Some(head) = head_of(clause) {
            if let Some(name) = functor_name(head) {
                predicates.add(name, span_of(head));
            }
        }
        for node in clause.preorder() {
            if let Ast::Variable(v) = node {
                if !v.starts_with('_') {
                    variables.add(v, span_of(node));
                }
            }
        }
    }
    let mut out = Vec::new();
    naming("cov_3_1", "predicate", &predicates, opts.predicate_naming_style, file, &mut out);
    naming("cov_3_4", "variable", &variables, opts.variable_naming_style, file, &mut out);
    if let Some(re) = &opts.naming_convention_3_12 {
        for (name, span) in &predicates.first {
            if is_identifier(name) && !re.is_match(name) {
                out.push(Diagnostic::warning(
                    "cov_3_12",
                    file,
                    *span,
                    format!("predicate `{name}` does not match `{}`", re.as_str()),
                ));
            }
        }
    }
    sort_diagnostics(&mut out);
    out
}
