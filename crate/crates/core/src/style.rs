//! Layout rules checked against the CST and the raw source lines.
//!
//! Each rule is `off`, `check(value)` or `infer`. Inferred settings never
//! produce diagnostics; they report the value observed in the file, chosen
//! so that re-checking with it is clean.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::cst::{CstChild, CstLabel, CstNode};
use crate::diagnostic::{sort_diagnostics, Diagnostic};
use crate::lexer::{Token, TokenKind};
use crate::options::{IndentUnit, Setting, StyleOptions};
use crate::span::SourceSpan;

/// Line-indexed view of a source text. Lines are 1-based and exclude the
/// line terminator.
#[derive(Debug, Clone)]
pub struct SourceLines<'a> {
    text: &'a str,
    starts: Vec<usize>,
}

impl<'a> SourceLines<'a> {
    pub fn new(text: &'a str) -> Self {
        let mut starts = vec![0];
        starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
        if starts.len() > 1 && *starts.last().expect("nonempty") == text.len() {
            starts.pop();
        }
        if text.is_empty() {
            starts.clear();
        }
        Self { text, starts }
    }

    pub fn count(&self) -> usize {
        self.starts.len()
    }

    pub fn line(&self, n: usize) -> &'a str {
        let start = self.starts[n - 1];
        let end = self.starts.get(n).copied().unwrap_or(self.text.len());
        let raw = &self.text[start..end];
        let raw = raw.strip_suffix('\n').unwrap_or(raw);
        raw.strip_suffix('\r').unwrap_or(raw)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &'a str)> + '_ {
        (1..=self.count()).map(|n| (n, self.line(n)))
    }

    /// Span of characters `from..to` (1-based, exclusive end) on line `n`.
    pub fn span(&self, n: usize, from: usize, to: usize) -> SourceSpan {
        let line = self.line(n);
        let byte_at = |col: usize| {
            line.char_indices()
                .nth(col - 1)
                .map_or(line.len(), |(i, _)| i)
        };
        let base = self.starts[n - 1];
        SourceSpan::new(base + byte_at(from), base + byte_at(to), (n, from), (n, to))
    }

    /// Span of the whole line `n`.
    pub fn line_span(&self, n: usize) -> SourceSpan {
        self.span(n, 1, self.line(n).chars().count() + 1)
    }
}

/// Leading whitespace of the lines whose first token or comment is
/// preceded by whitespace only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndentedLine {
    pub line: usize,
    pub leading: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IndentationClass {
    NoIndentation,
    SpacesOnly,
    TabsOnly,
    Mixed,
}

/// Column of the first token or comment starting on each line.
fn first_columns(cst: &CstNode) -> BTreeMap<usize, usize> {
    let mut first = BTreeMap::new();
    let mut note = |span: SourceSpan| {
        first
            .entry(span.line_start)
            .and_modify(|c: &mut usize| *c = (*c).min(span.col_start))
            .or_insert(span.col_start);
    };
    for tok in cst.tokens() {
        for item in tok.layout_before.iter().filter(|i| i.is_comment()) {
            note(item.span);
        }
        note(tok.span);
    }
    for item in cst.trailing_layout().iter().filter(|i| i.is_comment()) {
        note(item.span);
    }
    first
}

pub fn indented_lines(cst: &CstNode, lines: &SourceLines) -> Vec<IndentedLine> {
    first_columns(cst)
        .into_iter()
        .filter(|&(_, col)| col > 1)
        .filter_map(|(line, col)| {
            let leading: String = lines.line(line).chars().take(col - 1).collect();
            leading
                .chars()
                .all(|c| c == ' ' || c == '\t')
                .then_some(IndentedLine { line, leading })
        })
        .collect()
}

pub fn indentation_class(indented: &[IndentedLine]) -> IndentationClass {
    let tabs = indented.iter().any(|l| l.leading.contains('\t'));
    let spaces = indented.iter().any(|l| l.leading.contains(' '));
    match (spaces, tabs) {
        (false, false) => IndentationClass::NoIndentation,
        (true, false) => IndentationClass::SpacesOnly,
        (false, true) => IndentationClass::TabsOnly,
        (true, true) => IndentationClass::Mixed,
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Per-clause size metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClauseMetrics {
    pub span: SourceSpan,
    pub subgoals: usize,
    pub lines: usize,
    pub is_directive: bool,
}

/// Subgoal and line counts for every parsed clause.
pub fn rule_metrics(cst: &CstNode) -> Vec<ClauseMetrics> {
    cst.clauses()
        .filter(|c| matches!(c.label, CstLabel::Clause | CstLabel::Directive))
        .map(|c| {
            let span = c.span();
            ClauseMetrics {
                span,
                subgoals: c
                    .rule_parts()
                    .map_or(0, |(_, _, body)| CstNode::body_goals(body).len()),
                lines: span.line_end - span.line_start + 1,
                is_directive: c.label == CstLabel::Directive,
            }
        })
        .collect()
}

/// Settings after inference: every `infer` slot is replaced by the value
/// observed, or by `off` when no value could be decided.
#[derive(Debug, Clone, PartialEq)]
pub struct InferredOptions {
    pub options: StyleOptions,
    /// Settings left undecided, with the reason.
    pub unresolved: Vec<(&'static str, String)>,
    /// `key = value` lines describing what was inferred.
    pub observations: Vec<String>,
}

struct Checker<'a> {
    cst: &'a CstNode,
    lines: &'a SourceLines<'a>,
    file: &'a str,
    diags: Vec<Diagnostic>,
    inferred: InferredOptions,
}

impl Checker<'_> {
    fn warn(&mut self, rule: &'static str, span: SourceSpan, message: impl Into<String>) {
        self.diags.push(Diagnostic::warning(rule, self.file, span, message));
    }

    fn observe(&mut self, key: &str, value: impl std::fmt::Display) {
        self.inferred.observations.push(format!("{key} = {value}"));
    }

    fn unresolved(&mut self, key: &'static str, why: &str) {
        self.inferred.unresolved.push((key, why.to_string()));
        self.inferred.observations.push(format!("{key} unresolved: {why}"));
    }

    /// Handles a yes/no rule: `violations` lists the offending spans.
    fn yes_no(
        &mut self,
        key: &'static str,
        rule: &'static str,
        setting: Setting<bool>,
        violations: Vec<SourceSpan>,
        message: &str,
    ) -> Setting<bool> {
        match setting {
            Setting::Check(true) => {
                for span in violations {
                    self.warn(rule, span, message);
                }
                setting
            }
            Setting::Infer => {
                let value = violations.is_empty();
                self.observe(key, if value { "yes" } else { "no" });
                Setting::Check(value)
            }
            other => other,
        }
    }

    fn indentation(&mut self, setting: Setting<IndentUnit>) -> Setting<IndentUnit> {
        let indented = indented_lines(self.cst, self.lines);
        match setting {
            Setting::Check(IndentUnit::Spaces(n)) => {
                for l in &indented {
                    let width = l.leading.chars().count();
                    let span = self.lines.span(l.line, 1, width + 1);
                    if l.leading.contains('\t') {
                        self.warn("cov_2_1", span, "indentation uses tabs; expected spaces");
                    } else if width % n as usize != 0 {
                        self.warn(
                            "cov_2_2",
                            span,
                            format!("indentation of {width} is not a multiple of {n}"),
                        );
                    }
                }
                setting
            }
            Setting::Check(IndentUnit::Tab) => {
                for l in &indented {
                    if l.leading.contains(' ') {
                        let span = self.lines.span(l.line, 1, l.leading.chars().count() + 1);
                        self.warn("cov_2_1", span, "indentation uses spaces; expected tabs");
                    }
                }
                setting
            }
            Setting::Off => setting,
            Setting::Infer => match indentation_class(&indented) {
                IndentationClass::NoIndentation => {
                    self.unresolved("indent", "no indented lines");
                    Setting::Off
                }
                IndentationClass::Mixed => {
                    self.unresolved("indent", "mixed tabs and spaces");
                    Setting::Off
                }
                IndentationClass::TabsOnly => {
                    self.observe("indent", "tab");
                    Setting::Check(IndentUnit::Tab)
                }
                IndentationClass::SpacesOnly => {
                    let g = indented.iter().fold(0, |g, l| gcd(g, l.leading.len()));
                    let unit = (1..=16).rev().find(|d| g % d == 0).unwrap_or(1) as u8;
                    self.observe("indent", unit);
                    Setting::Check(IndentUnit::Spaces(unit))
                }
            },
        }
    }

    fn line_length(&mut self, setting: Setting<usize>) -> Setting<usize> {
        match setting {
            Setting::Check(max) => {
                for (n, line) in self.lines.iter() {
                    let len = line.chars().count();
                    if len > max {
                        let span = self.lines.span(n, max + 1, len + 1);
                        self.warn("cov_2_3", span, format!("line is {len} characters long; limit is {max}"));
                    }
                }
                setting
            }
            Setting::Infer => {
                let max = self.lines.iter().map(|(_, l)| l.chars().count()).max().unwrap_or(0).max(1);
                self.observe("max_line_length", max);
                Setting::Check(max)
            }
            Setting::Off => setting,
        }
    }

    fn trailing_whitespace(&mut self, setting: Setting<bool>) -> Setting<bool> {
        let violations = self
            .lines
            .iter()
            .filter_map(|(n, line)| {
                let len = line.chars().count();
                let kept = line.trim_end_matches([' ', '\t']).chars().count();
                (kept < len).then(|| self.lines.span(n, kept + 1, len + 1))
            })
            .collect();
        self.yes_no(
            "no_trailing_whitespace",
            "style.trailing_whitespace",
            setting,
            violations,
            "trailing whitespace",
        )
    }

    fn clause_limits(&mut self, subgoals: Setting<usize>, rule_lines: Setting<usize>) -> (Setting<usize>, Setting<usize>) {
        let metrics: Vec<ClauseMetrics> = rule_metrics(self.cst).into_iter().filter(|m| !m.is_directive).collect();
        let mut limit = |key: &'static str, setting: Setting<usize>, value: fn(&ClauseMetrics) -> usize, floor: usize, what: &str| match setting {
            Setting::Check(max) => {
                for m in &metrics {
                    let v = value(m);
                    if v > max {
                        self.warn("cov_2_4", m.span, format!("clause has {v} {what}; limit is {max}"));
                    }
                }
                setting
            }
            Setting::Infer => {
                let max = metrics.iter().map(value).max().unwrap_or(0).max(floor);
                self.observe(key, max);
                Setting::Check(max)
            }
            Setting::Off => setting,
        };
        let s = limit("max_subgoals", subgoals, |m| m.subgoals, 0, "subgoals");
        let l = limit("max_rule_lines", rule_lines, |m| m.lines, 1, "lines");
        (s, l)
    }
}

/// Walks every node without recursion.
fn all_nodes(root: &CstNode) -> Vec<&CstNode> {
    let mut out = Vec::new();
    let mut stack = vec![root];
    while let Some(n) = stack.pop() {
        out.push(n);
        stack.extend(n.nodes());
    }
    out
}

fn arglist_comma_violations(cst: &CstNode) -> Vec<SourceSpan> {
    let mut spans = Vec::new();
    for node in all_nodes(cst) {
        if node.label != CstLabel::Compound {
            continue;
        }
        let mut kids = node.children.iter().peekable();
        while let Some(child) = kids.next() {
            if let CstChild::Token(t) = child {
                if t.kind == TokenKind::Comma {
                    let spaced = match kids.peek() {
                        Some(CstChild::Node(n)) => n.first_token().is_some_and(Token::has_layout_before),
                        _ => true,
                    };
                    if !spaced {
                        spans.push(t.span);
                    }
                }
            }
        }
    }
    spans.sort_by_key(|s| s.byte_start);
    spans
}

fn clause_newline_violations(cst: &CstNode) -> Vec<SourceSpan> {
    let toks = cst.tokens();
    toks.windows(2)
        .filter(|w| w[0].kind == TokenKind::End && w[1].span.line_start == w[0].span.line_end)
        .map(|w| w[0].span)
        .collect()
}

fn rules(cst: &CstNode) -> impl Iterator<Item = (&CstNode, &Token, Vec<(&CstNode, Option<&Token>)>)> {
    cst.clauses()
        .filter(|c| c.label == CstLabel::Clause)
        .filter_map(|c| c.rule_parts())
        .map(|(head, op, body)| (head, op, CstNode::body_goals(body)))
}

fn same_line(a: &Token, b: Option<&Token>) -> bool {
    b.is_some_and(|b| b.span.line_start == a.span.line_end)
}

fn rule_op_violations(cst: &CstNode) -> Vec<SourceSpan> {
    rules(cst)
        .filter(|(_, op, goals)| same_line(op, goals[0].0.first_token()))
        .map(|(_, op, _)| op.span)
        .collect()
}

fn subgoal_violations(cst: &CstNode) -> Vec<SourceSpan> {
    let mut spans = Vec::new();
    for (_, _, goals) in rules(cst) {
        if goals.len() < 2 {
            continue;
        }
        for pair in goals.windows(2) {
            if let Some(comma) = pair[0].1 {
                if same_line(comma, pair[1].0.first_token()) {
                    spans.push(comma.span);
                }
            }
        }
    }
    spans
}

fn is_atom(node: &CstNode, name: &str) -> bool {
    let n = node.unparen();
    n.label == CstLabel::Atom && n.first_token().is_some_and(|t| t.atom_value() == name)
}

fn indent_width(lines: &SourceLines, line: usize) -> usize {
    lines
        .line(line)
        .chars()
        .take_while(|c| *c == ' ' || *c == '\t')
        .count()
}

/// Lines holding goals between `repeat` and the next cut that are not
/// indented deeper than the `repeat` line.
pub fn check_repeat_cut_indent(cst: &CstNode, lines: &SourceLines) -> Vec<SourceSpan> {
    let first = first_columns(cst);
    let mut spans = Vec::new();
    for (_, _, goals) in rules(cst) {
        let mut repeat_width: Option<usize> = None;
        let mut flagged = BTreeSet::new();
        for (goal, _) in &goals {
            if is_atom(goal, "!") {
                repeat_width = None;
                continue;
            }
            let Some(tok) = goal.first_token() else { continue };
            if let Some(width) = repeat_width {
                let line = tok.span.line_start;
                let starts_line = first.get(&line) == Some(&tok.span.col_start);
                if starts_line && indent_width(lines, line) <= width && flagged.insert(line) {
                    spans.push(lines.span(line, 1, indent_width(lines, line) + 1).cover(tok.span));
                }
            }
            if is_atom(goal, "repeat") {
                repeat_width = Some(indent_width(lines, tok.span.line_start));
            }
        }
    }
    spans
}

/// Violation counts used by corpus statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct LayoutCounts {
    pub long_lines: usize,
    pub missing_space_after_comma: usize,
    pub trailing_whitespace_lines: usize,
    pub missing_newline_after_rule_op: usize,
    pub missing_newline_after_subgoal: usize,
    pub missing_newline_after_clause: usize,
}

pub fn layout_counts(cst: &CstNode, lines: &SourceLines, long_line_limit: usize) -> LayoutCounts {
    LayoutCounts {
        long_lines: lines.iter().filter(|(_, l)| l.chars().count() > long_line_limit).count(),
        missing_space_after_comma: arglist_comma_violations(cst).len(),
        trailing_whitespace_lines: lines
            .iter()
            .filter(|(_, l)| l.ends_with([' ', '\t']))
            .count(),
        missing_newline_after_rule_op: rule_op_violations(cst).len(),
        missing_newline_after_subgoal: subgoal_violations(cst).len(),
        missing_newline_after_clause: clause_newline_violations(cst).len(),
    }
}

/// Runs every enabled layout rule over one file.
pub fn check_style(cst: &CstNode, source: &str, opts: &StyleOptions, file: &str) -> (Vec<Diagnostic>, InferredOptions) {
    let lines = SourceLines::new(source);
    let mut c = Checker {
        cst,
        lines: &lines,
        file,
        diags: Vec::new(),
        inferred: InferredOptions {
            options: *opts,
            unresolved: Vec::new(),
            observations: Vec::new(),
        },
    };
    let mut out = *opts;
    out.indent = c.indentation(opts.indent);
    out.max_line_length = c.line_length(opts.max_line_length);
    (out.max_subgoals, out.max_rule_lines) = c.clause_limits(opts.max_subgoals, opts.max_rule_lines);
    out.space_after_arglist_comma = c.yes_no(
        "space_after_arglist_comma",
        "cov_2_5",
        opts.space_after_arglist_comma,
        arglist_comma_violations(cst),
        "missing space after argument-list comma",
    );
    out.newline_after_clause = c.yes_no(
        "newline_after_clause",
        "cov_2_6",
        opts.newline_after_clause,
        clause_newline_violations(cst),
        "clause is followed by another clause on the same line",
    );
    out.newline_after_rule_op = c.yes_no(
        "newline_after_rule_op",
        "cov_2_7",
        opts.newline_after_rule_op,
        rule_op_violations(cst),
        "missing newline after the rule operator",
    );
    out.newline_after_subgoal = c.yes_no(
        "newline_after_subgoal",
        "cov_2_7",
        opts.newline_after_subgoal,
        subgoal_violations(cst),
        "missing newline after subgoal",
    );
    out.indent_between_repeat_cut = c.yes_no(
        "indent_between_repeat_cut",
        "cov_2_14",
        opts.indent_between_repeat_cut,
        check_repeat_cut_indent(cst, &lines),
        "goal between repeat and cut is not indented deeper than repeat",
    );
    out.no_trailing_whitespace = c.trailing_whitespace(opts.no_trailing_whitespace);
    c.inferred.options = out;
    sort_diagnostics(&mut c.diags);
    (c.diags, c.inferred)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexer::tokenize;
    use crate::optable::{DialectOptions, OperatorTable, Profile};
    use crate::parser::parse_program_recovering;

    fn cst(src: &str) -> CstNode {
        let d = DialectOptions::swi();
        let toks = tokenize(src, &d).unwrap();
        parse_program_recovering(&toks, &OperatorTable::default_table(Profile::Swi), &d, None)
            .unwrap()
            .cst
    }

    fn only(key: &str, value: &str) -> StyleOptions {
        let mut o = StyleOptions::all_off();
        o.set(key, value).unwrap();
        o
    }

    fn rules_of(src: &str, opts: &StyleOptions) -> Vec<&'static str> {
        check_style(&cst(src), src, opts, "t.pl").0.into_iter().map(|d| d.rule_id).collect()
    }

    #[test]
    fn source_lines() {
        let l = SourceLines::new("ab\r\ncd\n");
        assert_eq!(l.count(), 2);
        assert_eq!(l.line(1), "ab");
        assert_eq!(l.line(2), "cd");
        assert_eq!(SourceLines::new("").count(), 0);
        assert_eq!(SourceLines::new("x").count(), 1);
        assert_eq!(l.span(2, 1, 3).byte_start, 4);
    }

    #[test]
    fn line_length_check_and_infer() {
        let src = format!("a.\n{}.\n", "b".repeat(99));
        assert_eq!(rules_of(&src, &only("max_line_length", "80")), vec!["cov_2_3"]);
        let (d, inf) = check_style(&cst(&src), &src, &only("max_line_length", "infer"), "t.pl");
        assert!(d.is_empty());
        assert_eq!(inf.options.max_line_length, Setting::Check(100));
    }

    #[test]
    fn arglist_comma() {
        assert_eq!(rules_of("x :- f(a,b).\n", &only("space_after_arglist_comma", "yes")), vec!["cov_2_5"]);
        assert!(rules_of("x :- f(a, b), [c,d].\n", &only("space_after_arglist_comma", "yes")).is_empty());
        assert!(rules_of("x :- f(a,b).\n", &only("space_after_arglist_comma", "no")).is_empty());
    }

    #[test]
    fn rule_op_and_subgoals() {
        assert_eq!(rules_of("p :- q.\n", &only("newline_after_rule_op", "yes")), vec!["cov_2_7"]);
        assert!(rules_of("p :- q.\n", &only("newline_after_subgoal", "yes")).is_empty());
        assert_eq!(rules_of("p :-\n    q, r,\n    s.\n", &only("newline_after_subgoal", "yes")), vec!["cov_2_7"]);
    }

    #[test]
    fn clause_newline() {
        assert_eq!(rules_of("a. b.\nc. % x\n", &only("newline_after_clause", "yes")), vec!["cov_2_6"]);
    }

    #[test]
    fn indentation() {
        let src = "p :-\n    a,\n      b,\n\tc.\n";
        assert_eq!(rules_of(src, &only("indent", "4")), vec!["cov_2_2", "cov_2_1"]);
        assert_eq!(rules_of(src, &only("indent", "tab")), vec!["cov_2_1", "cov_2_1"]);
        let (_, inf) = check_style(&cst(src), src, &only("indent", "infer"), "t.pl");
        assert_eq!(inf.options.indent, Setting::Off);
        assert_eq!(inf.unresolved[0].0, "indent");
        let src = "p :-\n    a,\n      b.\n";
        let (_, inf) = check_style(&cst(src), src, &only("indent", "infer"), "t.pl");
        assert_eq!(inf.options.indent, Setting::Check(IndentUnit::Spaces(2)));
    }

    #[test]
    fn clause_limits() {
        let src = ":- dynamic a/1, b/1, c/1.\na :- b, c, d.\ne.\n";
        assert_eq!(rules_of(src, &only("max_subgoals", "2")), vec!["cov_2_4"]);
        let m = rule_metrics(&cst(src));
        assert_eq!(m.iter().map(|m| m.subgoals).collect::<Vec<_>>(), vec![0, 3, 0]);
        let src = "positive(X) :-\n    X > 0.\n";
        let m = rule_metrics(&cst(src));
        assert_eq!((m[0].subgoals, m[0].lines), (1, 2));
    }

    #[test]
    fn repeat_cut() {
        let yes = only("indent_between_repeat_cut", "yes");
        assert!(rules_of("p :-\n    repeat,\n        work,\n    !.\n", &yes).is_empty());
        assert_eq!(rules_of("p :-\n    repeat,\n    work,\n    !.\n", &yes), vec!["cov_2_14"]);
        assert!(rules_of("p :-\n    work,\n    !.\n", &yes).is_empty());
    }

    #[test]
    fn trailing_whitespace() {
        assert_eq!(rules_of("a. \nb.\t\nc.\n", &only("no_trailing_whitespace", "yes")).len(), 2);
    }
}
