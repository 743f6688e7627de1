//! AST to text. Terms get the fewest parentheses the operator table
//! allows; clauses are laid out according to the style options, and
//! `format_source` carries comments over from the original file.

use std::collections::HashMap;

use thiserror::Error;

use crate::ast::{self, clause_to_ast, cst_to_ast, flatten_conjunction, quote_atom, quote_text, Ast, QuoteKind};
use crate::cst::{CstLabel, CstNode};
use crate::lexer::{is_alnum_char, is_graphic_char, tokenize, LayoutKind, LexError, TokenStream};
use crate::optable::{DialectOptions, OpDef, OperatorTable, Specifier};
use crate::options::{IndentUnit, Setting, StyleOptions};
use crate::parser::{parse_program, parse_program_recovering, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SerializeError {
    #[error("cannot serialize with `infer` settings: {}", .0.join(", "))]
    InferSetting(Vec<&'static str>),
    #[error("rule for `{0}` has an empty body")]
    EmptyBody(String),
    #[error("{0} is not a clause")]
    NotAClause(String),
    #[error("printed text does not parse back: {0}")]
    Reparse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error("syntax error at {0}")]
    Syntax(ParseError),
    #[error(transparent)]
    Serialize(#[from] SerializeError),
    #[error("formatted output would change the program: {0}")]
    Unstable(String),
}

/// Concrete layout choices derived from [`StyleOptions`]. Settings that are
/// off fall back to the canonical layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub indent: String,
    pub space_after_arglist_comma: bool,
    pub newline_after_clause: bool,
    pub newline_after_rule_op: bool,
    pub newline_after_subgoal: bool,
    pub indent_between_repeat_cut: bool,
}

impl Default for Layout {
    fn default() -> Self {
        Self {
            indent: "    ".into(),
            space_after_arglist_comma: true,
            newline_after_clause: true,
            newline_after_rule_op: true,
            newline_after_subgoal: true,
            indent_between_repeat_cut: true,
        }
    }
}

impl Layout {
    pub fn from_style(style: &StyleOptions) -> Result<Self, SerializeError> {
        let pending = style.infer_keys();
        if !pending.is_empty() {
            return Err(SerializeError::InferSetting(pending));
        }
        let flag = |s: Setting<bool>| s.checked().unwrap_or(true);
        Ok(Self {
            indent: style
                .indent
                .checked()
                .unwrap_or(IndentUnit::Spaces(4))
                .as_text(),
            space_after_arglist_comma: flag(style.space_after_arglist_comma),
            newline_after_clause: flag(style.newline_after_clause),
            newline_after_rule_op: flag(style.newline_after_rule_op),
            newline_after_subgoal: flag(style.newline_after_subgoal),
            indent_between_repeat_cut: flag(style.indent_between_repeat_cut),
        })
    }
}

fn is_quote(c: char) -> bool {
    matches!(c, '\'' | '"' | '`')
}

/// Whether two tokens written back to back would lex differently.
fn needs_space(prev: char, next: char) -> bool {
    (is_alnum_char(prev) && is_alnum_char(next))
        || (is_graphic_char(prev) && is_graphic_char(next))
        || (is_quote(prev) && prev == next)
        || (prev.is_ascii_digit() && next == '\'')
        || (next == '{' && (is_alnum_char(prev) || is_quote(prev)))
}

/// Writes one term as a single line of tokens.
struct TermWriter<'a> {
    out: String,
    /// The last token was a name, so a glued `(` would open an argument list.
    after_name: bool,
    table: &'a OperatorTable,
    dialect: &'a DialectOptions,
    arg_sep: &'static str,
}

impl<'a> TermWriter<'a> {
    fn new(table: &'a OperatorTable, dialect: &'a DialectOptions, layout: &Layout) -> Self {
        Self {
            out: String::new(),
            after_name: false,
            table,
            dialect,
            arg_sep: if layout.space_after_arglist_comma { ", " } else { "," },
        }
    }

    fn token(&mut self, text: &str, is_name: bool) {
        if let (Some(a), Some(b)) = (self.out.chars().next_back(), text.chars().next()) {
            if needs_space(a, b) {
                self.out.push(' ');
            }
        }
        self.out.push_str(text);
        self.after_name = is_name;
    }

    fn raw(&mut self, text: &str) {
        self.out.push_str(text);
        self.after_name = false;
    }

    fn open_paren(&mut self) {
        if self.after_name {
            self.out.push(' ');
        }
        self.raw("(");
    }

    fn infix_def(&self, op: &str) -> Option<OpDef> {
        if op == "." && self.dialect.dicts {
            return Some(OpDef::new(".", 0, Specifier::Yfx));
        }
        self.table.infix(op).cloned()
    }

    /// Priority of `t` as it will be printed.
    fn priority(&self, t: &Ast) -> u16 {
        match t {
            Ast::Infix { op, .. } => self.infix_def(op).map_or(0, |d| d.priority),
            Ast::Prefix { op, .. } => self.table.prefix(op).map_or(0, |d| d.priority),
            Ast::Postfix { op, .. } => self.table.postfix(op).map_or(0, |d| d.priority),
            _ => 0,
        }
    }

    fn is_bare_op(&self, t: &Ast) -> bool {
        matches!(t, Ast::Atom(a) if self.table.is_op(a))
    }

    fn parenthesized(&mut self, t: &Ast) {
        self.open_paren();
        self.term(t, 1200);
        self.raw(")");
    }

    /// An operand of an operator or a clause-level goal.
    fn operand(&mut self, t: &Ast, max: u16) {
        if self.is_bare_op(t) || self.priority(t) > max {
            self.parenthesized(t);
        } else {
            self.term(t, max);
        }
    }

    /// A compound argument.
    fn argument(&mut self, t: &Ast) {
        let max = if self.dialect.allow_arg_precedence_geq_1000 && !has_comma_on_spine(t) {
            1200
        } else {
            999
        };
        self.element(t, max);
    }

    /// A list element, dict value, or argument: bare operator atoms are
    /// fine here because a separator follows them.
    fn element(&mut self, t: &Ast, max: u16) {
        if self.priority(t) > max {
            self.parenthesized(t);
        } else {
            self.term(t, max);
        }
    }

    fn atom(&mut self, a: &str) {
        match a {
            "[]" | "{}" => self.token(a, false),
            _ => self.token(&quote_atom(a), true),
        }
    }

    fn functor(&mut self, f: &str) {
        let text = match f {
            "[]" | "{}" => format!("'{f}'"),
            _ => quote_atom(f),
        };
        self.token(&text, true);
        self.raw("(");
    }

    fn term(&mut self, t: &Ast, max: u16) {
        match t {
            Ast::Atom(a) => self.atom(a),
            Ast::Variable(v) => self.token(v, false),
            Ast::Integer { literal, .. } | Ast::Float { literal, .. } => self.token(literal, false),
            Ast::Str { text, quote } => {
                let q = match quote {
                    QuoteKind::Double => '"',
                    QuoteKind::Back => '`',
                };
                self.token(&quote_text(text, q), false);
            }
            Ast::Compound { functor, args } => self.compound(functor, args.iter()),
            Ast::List { elements, tail } => {
                self.token("[", false);
                for (i, e) in elements.iter().enumerate() {
                    if i > 0 {
                        self.raw(", ");
                    }
                    self.element(e, 999);
                }
                if let Some(tail) = tail {
                    self.raw("|");
                    self.element(tail, 999);
                }
                self.raw("]");
            }
            Ast::Curly(inner) => {
                self.token("{", false);
                self.term(inner, 1200);
                self.raw("}");
            }
            Ast::Dict { tag, pairs } => {
                self.term(tag, 0);
                self.raw("{");
                for (i, (k, v)) in pairs.iter().enumerate() {
                    if i > 0 {
                        self.raw(", ");
                    }
                    self.term(k, 0);
                    self.token(":", true);
                    self.raw(" ");
                    self.element(v, 999);
                }
                self.raw("}");
            }
            Ast::Infix {
                op, left, right, ..
            } => match self.infix_def(op) {
                Some(def) => self.infix(op, &def, left, right),
                None => self.compound(op, [left.as_ref(), right.as_ref()].into_iter()),
            },
            Ast::Prefix { op, arg, .. } => match self.table.prefix(op).cloned() {
                Some(def) => {
                    let (_, am) = def.specifier.arg_max(def.priority);
                    self.token(&quote_atom(op), true);
                    let glue = matches!(op.as_str(), "-" | "+")
                        && starts_with_letter(arg)
                        && !self.is_bare_op(arg)
                        && self.priority(arg) <= am;
                    if !glue {
                        self.raw(" ");
                    }
                    self.operand(arg, am);
                }
                None => self.compound(op, std::iter::once(arg.as_ref())),
            },
            Ast::Postfix { op, arg, .. } => match self.table.postfix(op).cloned() {
                Some(def) => {
                    let (lm, _) = def.specifier.arg_max(def.priority);
                    self.operand(arg, lm);
                    self.raw(" ");
                    self.token(&quote_atom(op), true);
                }
                None => self.compound(op, std::iter::once(arg.as_ref())),
            },
            Ast::Program(_) | Ast::Rule { .. } | Ast::Fact(_) | Ast::Directive(_) => {
                unreachable!("clause-level node inside a term (max {max})")
            }
        }
    }

    fn compound<'t>(&mut self, functor: &str, args: impl Iterator<Item = &'t Ast>) {
        self.functor(functor);
        for (i, a) in args.enumerate() {
            if i > 0 {
                self.raw(self.arg_sep);
            }
            self.argument(a);
        }
        self.raw(")");
    }

    fn infix(&mut self, op: &str, def: &OpDef, left: &Ast, right: &Ast) {
        let (lm, rm) = def.specifier.arg_max(def.priority);
        self.operand(left, lm);
        match op {
            "," => self.raw(", "),
            "|" => self.raw(" | "),
            "." | ":" => self.token(op, true),
            "/" if matches!((left, right), (Ast::Atom(_), Ast::Integer { .. })) => self.token(op, true),
            _ => {
                self.raw(" ");
                self.token(&quote_atom(op), true);
                self.raw(" ");
            }
        }
        self.operand(right, rm);
    }
}

fn has_comma_on_spine(t: &Ast) -> bool {
    match t {
        Ast::Infix {
            op, left, right, ..
        } => op == "," || has_comma_on_spine(left) || has_comma_on_spine(right),
        Ast::Prefix { arg, .. } | Ast::Postfix { arg, .. } => has_comma_on_spine(arg),
        _ => false,
    }
}

fn starts_with_letter(t: &Ast) -> bool {
    let first = match t {
        Ast::Atom(a) => a.chars().next(),
        Ast::Variable(v) => v.chars().next(),
        Ast::Compound { functor, .. } => functor.chars().next(),
        _ => None,
    };
    first.is_some_and(is_alnum_char)
}

/// A printed clause, with the line positions comments can attach to.
#[derive(Debug, Clone, Default)]
struct ClauseLines {
    lines: Vec<String>,
    /// Line index where goal `i` starts, if it is the first thing on it.
    goal_first: Vec<Option<usize>>,
    /// Line index that goal `i` (with its separator) ends, if any.
    goal_last: Vec<Option<usize>>,
    /// Line index ending with the rule operator, if any.
    op_end: Option<usize>,
}

/// Prints clause after clause, tracking `op/3` directives.
struct ClausePrinter<'a> {
    table: OperatorTable,
    dialect: &'a DialectOptions,
    layout: &'a Layout,
}

impl<'a> ClausePrinter<'a> {
    fn writer(&self) -> TermWriter<'_> {
        TermWriter::new(&self.table, self.dialect, self.layout)
    }

    fn clause(&mut self, clause: &Ast) -> Result<ClauseLines, SerializeError> {
        let printed = match clause {
            Ast::Rule { head, body } => {
                if body.is_empty() {
                    return Err(SerializeError::EmptyBody(head.to_term_string()));
                }
                self.rule(head, ":-", &body.iter().collect::<Vec<_>>())
            }
            Ast::Fact(t) => match t.as_ref() {
                Ast::Infix {
                    op, left, right, ..
                } if op == "-->" && self.table.infix("-->").is_some() => {
                    let goals = flatten_conjunction(right.as_ref().clone());
                    self.rule(left, "-->", &goals.iter().collect::<Vec<_>>())
                }
                t => {
                    let mut w = self.writer();
                    w.term(t, 1200);
                    w.token(".", true);
                    single(w.out)
                }
            },
            Ast::Directive(goal) => {
                let am = self
                    .table
                    .prefix(":-")
                    .map_or(1199, |d| d.specifier.arg_max(d.priority).1);
                let mut w = self.writer();
                w.token(":-", true);
                w.raw(" ");
                w.operand(goal, am);
                w.token(".", true);
                let out = w.out;
                for decl in ast::op_declarations(goal) {
                    let names: Vec<&str> = decl.names.iter().map(String::as_str).collect();
                    if let Ok(t) = self.table.apply_op_directive(decl.priority, &decl.specifier, &names) {
                        self.table = t;
                    }
                }
                single(out)
            }
            other => return Err(SerializeError::NotAClause(other.to_term_string())),
        };
        Ok(printed)
    }

    fn rule(&self, head: &Ast, op: &str, goals: &[&Ast]) -> ClauseLines {
        let (lm, rm) = self
            .table
            .infix(op)
            .map_or((1199, 1199), |d| d.specifier.arg_max(d.priority));
        let (clm, crm) = self
            .table
            .infix(",")
            .map_or((999, 1000), |d| d.specifier.arg_max(d.priority));
        let mut w = self.writer();
        w.operand(head, lm);
        w.raw(" ");
        w.token(op, true);
        let mut printed = ClauseLines {
            lines: vec![w.out],
            ..Default::default()
        };
        let n = goals.len();
        let mut in_repeat = false;
        for (i, goal) in goals.iter().enumerate() {
            let max = if n == 1 {
                rm
            } else if i + 1 < n {
                clm
            } else {
                crm
            };
            let mut w = self.writer();
            let is_comma = matches!(goal, Ast::Infix { op, .. } if op == ",");
            if is_comma && i + 1 == n {
                w.parenthesized(goal);
            } else {
                w.operand(goal, max);
            }
            w.raw(if i + 1 < n { "," } else { "." });

            let is_cut = matches!(goal, Ast::Atom(a) if a == "!");
            if is_cut {
                in_repeat = false;
            }
            let new_line = if i == 0 {
                self.layout.newline_after_rule_op
            } else {
                self.layout.newline_after_subgoal
            };
            if new_line {
                let depth = if in_repeat && self.layout.indent_between_repeat_cut { 2 } else { 1 };
                let last = printed.lines.len() - 1;
                if i == 0 {
                    printed.op_end = Some(last);
                } else {
                    printed.goal_last[i - 1] = Some(last);
                }
                printed.lines.push(format!("{}{}", self.layout.indent.repeat(depth), w.out));
                printed.goal_first.push(Some(last + 1));
            } else {
                let line = printed.lines.last_mut().expect("head line");
                line.push(' ');
                line.push_str(&w.out);
                printed.goal_first.push(None);
            }
            printed.goal_last.push(None);
            if matches!(goal, Ast::Atom(a) if a == "repeat") {
                in_repeat = true;
            }
        }
        printed.goal_last[n - 1] = Some(printed.lines.len() - 1);
        printed
    }
}

fn single(line: String) -> ClauseLines {
    ClauseLines {
        lines: vec![line],
        ..Default::default()
    }
}

/// Prints a single term with minimal parentheses, as it would appear in an
/// argument position limited to `max_priority`.
pub fn term_to_string(t: &Ast, max_priority: u16, table: &OperatorTable, dialect: &DialectOptions) -> String {
    let layout = Layout::default();
    let mut w = TermWriter::new(table, dialect, &layout);
    w.operand(t, max_priority);
    w.out
}

#[derive(Debug, Clone)]
struct Comment {
    text: String,
    blank_before: bool,
    is_line: bool,
}

#[derive(Debug, Clone, Default)]
struct ClauseComments {
    leading: Vec<Comment>,
    hoisted: Vec<Comment>,
    before: HashMap<usize, Vec<Comment>>,
    after: HashMap<usize, Vec<Comment>>,
    after_op: Vec<Comment>,
    trailing: Vec<Comment>,
    blank_before: bool,
}

/// Output text built line by line.
#[derive(Default)]
struct Out {
    text: String,
    line_open: bool,
    ends_with_line_comment: bool,
}

impl Out {
    fn start_line(&mut self, blank: bool) {
        if self.line_open {
            self.text.push('\n');
        }
        if blank && !self.text.is_empty() {
            self.text.push('\n');
        }
        self.line_open = true;
        self.ends_with_line_comment = false;
    }

    fn push(&mut self, s: &str) {
        self.text.push_str(s);
    }

    fn comment_line(&mut self, c: &Comment, indent: &str) {
        self.start_line(c.blank_before);
        self.push(indent);
        self.push(&c.text);
        self.ends_with_line_comment = c.is_line;
    }

    fn append(&mut self, c: &Comment) {
        self.push(" ");
        self.push(&c.text);
        self.ends_with_line_comment = c.is_line;
    }

    fn finish(mut self) -> String {
        if self.line_open {
            self.text.push('\n');
        }
        self.text
    }
}

fn clean_comment(text: &str) -> String {
    text.split('\n')
        .map(str::trim_end)
        .collect::<Vec<_>>()
        .join("\n")
}

fn render(
    shebang: Option<&str>,
    clauses: &[(ClauseLines, ClauseComments)],
    eof: &[Comment],
    layout: &Layout,
) -> String {
    let mut out = Out::default();
    if let Some(s) = shebang {
        out.start_line(false);
        out.push(s.trim_end());
    }
    for (ci, (printed, cc)) in clauses.iter().enumerate() {
        let n = printed.goal_first.len();
        let mut hoisted = cc.hoisted.clone();
        for g in 0..n {
            if printed.goal_first[g].is_none() {
                hoisted.extend(cc.before.get(&g).into_iter().flatten().cloned());
            }
            if printed.goal_last[g].is_none() {
                hoisted.extend(cc.after.get(&g).into_iter().flatten().cloned());
            }
        }
        if printed.op_end.is_none() {
            hoisted.extend(cc.after_op.iter().cloned());
        }
        let joinable = !layout.newline_after_clause
            && ci > 0
            && cc.leading.is_empty()
            && hoisted.is_empty()
            && !cc.blank_before
            && !out.ends_with_line_comment
            && out.line_open;
        for c in &cc.leading {
            out.comment_line(c, "");
        }
        for (i, c) in hoisted.iter().enumerate() {
            let blank = i == 0 && cc.blank_before;
            out.comment_line(&Comment { blank_before: blank, ..c.clone() }, "");
        }
        let last = printed.lines.len() - 1;
        for (li, line) in printed.lines.iter().enumerate() {
            let indent: String = line.chars().take_while(|c| *c == ' ' || *c == '\t').collect();
            for g in 0..n {
                if printed.goal_first[g] == Some(li) {
                    for c in cc.before.get(&g).into_iter().flatten() {
                        out.comment_line(&Comment { blank_before: false, ..c.clone() }, &indent);
                    }
                }
            }
            if li == 0 && joinable {
                out.push(" ");
            } else {
                out.start_line(li == 0 && hoisted.is_empty() && cc.blank_before);
            }
            out.push(line);
            if printed.op_end == Some(li) {
                cc.after_op.iter().for_each(|c| out.append(c));
            }
            for g in 0..n {
                if printed.goal_last[g] == Some(li) {
                    cc.after.get(&g).into_iter().flatten().for_each(|c| out.append(c));
                }
            }
            if li == last {
                cc.trailing.iter().for_each(|c| out.append(c));
            }
        }
    }
    for c in eof {
        out.comment_line(c, "");
    }
    out.finish()
}

/// Token positions inside one clause that comments can attach to, keyed by
/// byte offset.
struct Anchors {
    goal_first: HashMap<usize, usize>,
    goal_end: HashMap<usize, usize>,
    op: Option<usize>,
}

fn anchors(node: &CstNode) -> Anchors {
    let mut a = Anchors {
        goal_first: HashMap::new(),
        goal_end: HashMap::new(),
        op: None,
    };
    if let Some((_, op, body)) = node.rule_parts() {
        a.op = Some(op.span.byte_start);
        for (i, (goal, sep)) in CstNode::body_goals(body).into_iter().enumerate() {
            if let Some(t) = goal.first_token() {
                a.goal_first.insert(t.span.byte_start, i);
            }
            if let Some(t) = goal.last_token() {
                a.goal_end.insert(t.span.byte_start, i);
            }
            if let Some(t) = sep {
                a.goal_end.insert(t.span.byte_start, i);
            }
        }
    }
    a
}

/// Sorts every comment of the file into a clause slot.
fn collect_comments(
    stream: &TokenStream,
    cst: &CstNode,
) -> (Option<String>, Vec<ClauseComments>, Vec<Comment>) {
    let clauses: Vec<&CstNode> = cst.clauses().collect();
    let mut out: Vec<ClauseComments> = vec![ClauseComments::default(); clauses.len()];
    let mut eof = Vec::new();
    let mut shebang = None;
    let mut offset = 0;
    let toks = &stream.tokens;
    for (ci, node) in clauses.iter().enumerate() {
        let count = node.tokens().len();
        let anchors = anchors(node);
        for ti in offset..offset + count {
            let tok = &toks[ti];
            let mut newlines = 0;
            let mut any_newline = false;
            for item in &tok.layout_before {
                match item.kind {
                    LayoutKind::Newline => {
                        newlines += 1;
                        any_newline = true;
                    }
                    LayoutKind::Shebang => shebang = Some(item.text.clone()),
                    LayoutKind::Space | LayoutKind::Tab => {}
                    LayoutKind::LineComment | LayoutKind::BlockComment => {
                        let c = Comment {
                            text: clean_comment(&item.text),
                            blank_before: newlines >= 2,
                            is_line: item.kind == LayoutKind::LineComment,
                        };
                        newlines = 0;
                        if ti == offset {
                            if !any_newline && ci > 0 {
                                out[ci - 1].trailing.push(c);
                            } else {
                                out[ci].leading.push(c);
                            }
                            continue;
                        }
                        let slot = &mut out[ci];
                        if !any_newline {
                            let prev = toks[ti - 1].span.byte_start;
                            if let Some(&g) = anchors.goal_end.get(&prev) {
                                slot.after.entry(g).or_default().push(c);
                            } else if anchors.op == Some(prev) {
                                slot.after_op.push(c);
                            } else {
                                slot.hoisted.push(c);
                            }
                        } else if let Some(&g) = anchors.goal_first.get(&tok.span.byte_start) {
                            slot.before.entry(g).or_default().push(c);
                        } else {
                            slot.hoisted.push(c);
                        }
                    }
                }
            }
            if ti == offset {
                out[ci].blank_before = newlines >= 2;
            }
        }
        offset += count;
    }
    let mut newlines = 0;
    let mut any_newline = false;
    for item in &stream.eof.layout_before {
        match item.kind {
            LayoutKind::Newline => {
                newlines += 1;
                any_newline = true;
            }
            LayoutKind::Shebang => shebang = Some(item.text.clone()),
            LayoutKind::Space | LayoutKind::Tab => {}
            LayoutKind::LineComment | LayoutKind::BlockComment => {
                let c = Comment {
                    text: clean_comment(&item.text),
                    blank_before: newlines >= 2,
                    is_line: item.kind == LayoutKind::LineComment,
                };
                newlines = 0;
                match out.last_mut() {
                    Some(last) if !any_newline => last.trailing.push(c),
                    _ => eof.push(c),
                }
            }
        }
    }
    (shebang, out, eof)
}

/// Prints a whole program (or a single clause) without comments.
pub fn print_program(
    program: &Ast,
    style: &StyleOptions,
    table: &OperatorTable,
    dialect: &DialectOptions,
) -> Result<String, SerializeError> {
    let layout = Layout::from_style(style)?;
    let clauses: Vec<&Ast> = match program {
        Ast::Program(items) => items.iter().collect(),
        other => vec![other],
    };
    let mut printer = ClausePrinter {
        table: table.clone(),
        dialect,
        layout: &layout,
    };
    let mut printed = Vec::with_capacity(clauses.len());
    for c in clauses {
        printed.push((printer.clause(c)?, ClauseComments::default()));
    }
    Ok(render(None, &printed, &[], &layout))
}

/// Serializes an AST and parses the text back into a CST.
pub fn ast_to_cst(
    program: &Ast,
    style: &StyleOptions,
    table: &OperatorTable,
    dialect: &DialectOptions,
) -> Result<CstNode, SerializeError> {
    let text = print_program(program, style, table, dialect)?;
    let tokens = tokenize(&text, dialect).map_err(|e| SerializeError::Reparse(e.to_string()))?;
    parse_program(&tokens, table, dialect)
        .map(|o| o.cst)
        .map_err(|e| SerializeError::Reparse(e.to_string()))
}

/// Reformats a source file, keeping its comments. Fails on files with
/// syntax errors, and refuses output that would parse to a different AST.
pub fn format_source(
    source: &str,
    style: &StyleOptions,
    table: &OperatorTable,
    dialect: &DialectOptions,
) -> Result<String, FormatError> {
    let layout = Layout::from_style(style)?;
    let stream = tokenize(source, dialect)?;
    let outcome = parse_program_recovering(&stream, table, dialect, None).map_err(FormatError::Syntax)?;
    if let Some(e) = outcome.errors.first() {
        return Err(FormatError::Syntax(e.clone()));
    }
    let mut start = table.clone();
    for op in &outcome.deduced_ops {
        if let Ok(t) = start.apply_op(op.priority, op.specifier, &[&op.name]) {
            start = t;
        }
    }
    let (shebang, comments, eof) = collect_comments(&stream, &outcome.cst);
    let mut printer = ClausePrinter {
        table: start,
        dialect,
        layout: &layout,
    };
    let mut printed = Vec::with_capacity(comments.len());
    for (node, cc) in outcome.cst.clauses().zip(comments) {
        debug_assert!(node.label != CstLabel::Error);
        printed.push((printer.clause(&clause_to_ast(node))?, cc));
    }
    let text = render(shebang.as_deref(), &printed, &eof, &layout);

    let before = cst_to_ast(&outcome.cst).ast;
    let check = tokenize(&text, dialect)
        .map_err(|e| e.to_string())
        .and_then(|s| parse_program(&s, table, dialect).map_err(|e| e.to_string()));
    match check {
        Ok(o) if cst_to_ast(&o.cst).ast == before => Ok(text),
        Ok(_) => Err(FormatError::Unstable("the syntax tree differs".into())),
        Err(e) => Err(FormatError::Unstable(e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optable::Profile;

    fn fmt(src: &str) -> String {
        let d = DialectOptions::swi();
        format_source(src, &StyleOptions::default(), &OperatorTable::default_table(Profile::Swi), &d).unwrap()
    }

    #[test]
    fn rule_layout() {
        assert_eq!(fmt("p:-q."), "p :-\n    q.\n");
        assert_eq!(fmt("positive(X):-X>0,true."), "positive(X) :-\n    X > 0,\n    true.\n");
    }

    fn fmt_iso(src: &str) -> String {
        let d = DialectOptions::iso();
        format_source(src, &StyleOptions::default(), &OperatorTable::default_table(Profile::Iso), &d).unwrap()
    }

    #[test]
    fn minimal_parentheses() {
        assert_eq!(fmt("x((a:-b))."), "x(a :- b).\n");
        assert_eq!(fmt_iso("x((a:-b))."), "x((a :- b)).\n");
        assert_eq!(fmt("x(a=b, (c,d))."), "x(a = b, (c, d)).\n");
        assert_eq!(fmt("x((1+2)*3, 1+2*3, 1-(2-3), (1-2)-3)."), "x((1 + 2) * 3, 1 + 2 * 3, 1 - (2 - 3), 1 - 2 - 3).\n");
        assert_eq!(fmt("x(- 1, -(1), -a, - (-))."), "x(- 1, -(1), -a, - (-)).\n");
        assert_eq!(fmt("x(X = (-))."), "x(X = (-)).\n");
    }

    #[test]
    fn comments_survive() {
        let src = "% head\n\n%  two\nfoo(a). % t\n\nbar :- % op\n    % before\n    a, % after a\n    b.\n% end\n";
        let out = fmt(src);
        assert_eq!(out, src);
        assert_eq!(fmt(&out), out);
    }

    #[test]
    fn interior_comments_are_hoisted() {
        let out = fmt("foo(/* x */ a).\n");
        assert_eq!(out, "/* x */\nfoo(a).\n");
        assert_eq!(fmt(&out), out);
    }

    #[test]
    fn repeat_cut_indent() {
        let out = fmt("p :- repeat, read(X), X == end, !, q.");
        assert_eq!(out, "p :-\n    repeat,\n        read(X),\n        X == end,\n    !,\n    q.\n");
    }

    #[test]
    fn one_line_layout() {
        let mut s = StyleOptions::default();
        s.set("newline_after_rule_op", "no").unwrap();
        s.set("newline_after_subgoal", "no").unwrap();
        s.set("newline_after_clause", "no").unwrap();
        let d = DialectOptions::iso();
        let t = OperatorTable::default_table(Profile::Iso);
        let out = format_source("a :- b, c.\nd.\n", &s, &t, &d).unwrap();
        assert_eq!(out, "a :- b, c. d.\n");
    }

    #[test]
    fn infer_is_rejected() {
        let mut s = StyleOptions::default();
        s.set("indent", "infer").unwrap();
        let d = DialectOptions::iso();
        let t = OperatorTable::default_table(Profile::Iso);
        assert!(matches!(
            format_source("a.", &s, &t, &d),
            Err(FormatError::Serialize(SerializeError::InferSetting(_)))
        ));
    }

    #[test]
    fn quoting_and_gluing() {
        assert_eq!(fmt("x('hello world', 'it''s', [], '[]', \"s\\n\", a- -1, 0'a, a:b:c)."),
            "x('hello world', 'it\\'s', [], [], \"s\\n\", a - -1, 0'a, a:b:c).\n");
        assert_eq!(fmt(":- dynamic foo/1."), ":- dynamic foo/1.\n");
        assert_eq!(fmt("x --> y, \"ab\"."), "x -->\n    y,\n    \"ab\".\n");
    }
}
