//! Layout-free abstract terms and the conversion from the CST.

use num_bigint::BigInt;
use num_traits::Num;

use crate::cst::{CstLabel, CstNode};
use crate::lexer::{
    decode_quoted, is_alnum_char, is_graphic_char, is_small_letter_start, Token, TokenKind,
};
use crate::optable::{DialectOptions, Specifier};
use crate::span::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntNotation {
    Decimal,
    Hex,
    Octal,
    Binary,
    CharCode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FloatNotation {
    /// `1.5`
    Decimal,
    /// `1.5e3`
    Exponent,
    /// `1e3`
    IntegerExponent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuoteKind {
    Double,
    Back,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ast {
    Program(Vec<Ast>),
    Rule {
        head: Box<Ast>,
        body: Vec<Ast>,
    },
    Fact(Box<Ast>),
    Directive(Box<Ast>),
    Compound {
        functor: String,
        args: Vec<Ast>,
    },
    Atom(String),
    Variable(String),
    /// `literal` is the source spelling, including a leading `-` for
    /// negative numbers.
    Integer {
        literal: String,
        notation: IntNotation,
    },
    Float {
        literal: String,
        notation: FloatNotation,
    },
    Str {
        text: String,
        quote: QuoteKind,
    },
    Infix {
        op: String,
        spec: Specifier,
        left: Box<Ast>,
        right: Box<Ast>,
    },
    Prefix {
        op: String,
        spec: Specifier,
        arg: Box<Ast>,
    },
    Postfix {
        op: String,
        spec: Specifier,
        arg: Box<Ast>,
    },
    List {
        elements: Vec<Ast>,
        tail: Option<Box<Ast>>,
    },
    Curly(Box<Ast>),
    Dict {
        tag: Box<Ast>,
        pairs: Vec<(Ast, Ast)>,
    },
}

/// An AST together with the source span of every node. Spans are indexed
/// by the node's position in a pre-order walk (see [`Ast::preorder`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AstWithOrigin {
    pub ast: Ast,
    pub origin: Vec<SourceSpan>,
}

impl AstWithOrigin {
    /// Every node with its span, in pre-order.
    pub fn nodes(&self) -> impl Iterator<Item = (&Ast, SourceSpan)> {
        self.ast
            .preorder()
            .into_iter()
            .zip(self.origin.iter().copied())
    }
}

/// One `op(Priority, Specifier, Names)` declaration found in a directive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpDecl {
    pub priority: i64,
    pub specifier: String,
    pub names: Vec<String>,
}

impl Ast {
    /// Direct children in a fixed order.
    pub fn children(&self) -> Vec<&Ast> {
        match self {
            Ast::Program(items) => items.iter().collect(),
            Ast::Rule { head, body } => std::iter::once(head.as_ref()).chain(body.iter()).collect(),
            Ast::Fact(t) | Ast::Directive(t) | Ast::Curly(t) => vec![t],
            Ast::Compound { args, .. } => args.iter().collect(),
            Ast::Infix { left, right, .. } => vec![left, right],
            Ast::Prefix { arg, .. } | Ast::Postfix { arg, .. } => vec![arg],
            Ast::List { elements, tail } => elements.iter().chain(tail.as_deref()).collect(),
            Ast::Dict { tag, pairs } => std::iter::once(tag.as_ref())
                .chain(pairs.iter().flat_map(|(k, v)| [k, v]))
                .collect(),
            Ast::Atom(_)
            | Ast::Variable(_)
            | Ast::Integer { .. }
            | Ast::Float { .. }
            | Ast::Str { .. } => Vec::new(),
        }
    }

    pub fn preorder(&self) -> Vec<&Ast> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            out.push(node);
            let kids = node.children();
            stack.extend(kids.into_iter().rev());
        }
        out
    }

    /// Compact rendering in Prolog term syntax, e.g.
    /// `rule(compound(atom(positive),[variable('X')]),[...])`.
    pub fn to_term_string(&self) -> String {
        let mut out = String::new();
        self.write_term(&mut out);
        out
    }

    fn write_term(&self, out: &mut String) {
        let list = |out: &mut String, items: &[&Ast]| {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                item.write_term(out);
            }
            out.push(']');
        };
        match self {
            Ast::Program(items) => {
                out.push_str("program(");
                list(out, &items.iter().collect::<Vec<_>>());
                out.push(')');
            }
            Ast::Rule { head, body } => {
                out.push_str("rule(");
                head.write_term(out);
                out.push(',');
                list(out, &body.iter().collect::<Vec<_>>());
                out.push(')');
            }
            Ast::Fact(t) => wrap(out, "fact", |o| t.write_term(o)),
            Ast::Directive(t) => wrap(out, "directive", |o| t.write_term(o)),
            Ast::Curly(t) => wrap(out, "curly", |o| t.write_term(o)),
            Ast::Compound { functor, args } => {
                out.push_str("compound(atom(");
                out.push_str(&quote_atom(functor));
                out.push_str("),");
                list(out, &args.iter().collect::<Vec<_>>());
                out.push(')');
            }
            Ast::Atom(a) => wrap(out, "atom", |o| o.push_str(&quote_atom(a))),
            Ast::Variable(v) => wrap(out, "variable", |o| o.push_str(&quote_atom(v))),
            Ast::Integer { .. } => {
                let value = self
                    .integer_value()
                    .map(|v| v.to_string())
                    .unwrap_or_default();
                wrap(out, "integer", |o| o.push_str(&value));
            }
            Ast::Float { literal, .. } => {
                wrap(out, "float", |o| o.push_str(&literal.replace('_', "")))
            }
            Ast::Str { text, quote } => {
                let name = match quote {
                    QuoteKind::Double => "string",
                    QuoteKind::Back => "back_quoted",
                };
                wrap(out, name, |o| o.push_str(&quote_text(text, '"')));
            }
            Ast::Infix {
                op,
                spec,
                left,
                right,
            } => {
                out.push_str(&format!("infix({},{},", quote_atom(op), spec));
                left.write_term(out);
                out.push(',');
                right.write_term(out);
                out.push(')');
            }
            Ast::Prefix { op, spec, arg } => {
                out.push_str(&format!("prefix({},{},", quote_atom(op), spec));
                arg.write_term(out);
                out.push(')');
            }
            Ast::Postfix { op, spec, arg } => {
                out.push_str(&format!("postfix({},{},", quote_atom(op), spec));
                arg.write_term(out);
                out.push(')');
            }
            Ast::List { elements, tail } => {
                out.push_str("list(");
                list(out, &elements.iter().collect::<Vec<_>>());
                out.push(',');
                match tail {
                    Some(t) => t.write_term(out),
                    None => out.push_str("nil"),
                }
                out.push(')');
            }
            Ast::Dict { tag, pairs } => {
                out.push_str("dict(");
                tag.write_term(out);
                out.push_str(",[");
                for (i, (k, v)) in pairs.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    k.write_term(out);
                    out.push('-');
                    v.write_term(out);
                }
                out.push_str("])");
            }
        }
    }

    /// Indented rendering, one node per line, children two spaces deeper.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![(self, 0usize)];
        while let Some((node, depth)) = stack.pop() {
            out.push_str(&"  ".repeat(depth));
            out.push_str(&node.describe());
            out.push('\n');
            for child in node.children().into_iter().rev() {
                stack.push((child, depth + 1));
            }
        }
        out
    }

    fn describe(&self) -> String {
        match self {
            Ast::Program(_) => "program".into(),
            Ast::Rule { .. } => "rule".into(),
            Ast::Fact(_) => "fact".into(),
            Ast::Directive(_) => "directive".into(),
            Ast::Compound { functor, args } => {
                format!("compound {}/{}", quote_atom(functor), args.len())
            }
            Ast::Atom(a) => format!("atom {}", quote_atom(a)),
            Ast::Variable(v) => format!("variable {v}"),
            Ast::Integer { literal, .. } => format!(
                "integer {} ({literal})",
                self.integer_value()
                    .map(|v| v.to_string())
                    .unwrap_or_default()
            ),
            Ast::Float { literal, .. } => format!("float {literal}"),
            Ast::Str { text, quote } => match quote {
                QuoteKind::Double => format!("string {}", quote_text(text, '"')),
                QuoteKind::Back => format!("back_quoted {}", quote_text(text, '`')),
            },
            Ast::Infix { op, spec, .. } => format!("infix {} {spec}", quote_atom(op)),
            Ast::Prefix { op, spec, .. } => format!("prefix {} {spec}", quote_atom(op)),
            Ast::Postfix { op, spec, .. } => format!("postfix {} {spec}", quote_atom(op)),
            Ast::List { tail, .. } => {
                if tail.is_some() {
                    "list with tail".into()
                } else {
                    "list".into()
                }
            }
            Ast::Curly(_) => "curly".into(),
            Ast::Dict { .. } => "dict".into(),
        }
    }

    /// Numeric value of an integer node.
    pub fn integer_value(&self) -> Option<BigInt> {
        let Ast::Integer { literal, notation } = self else {
            return None;
        };
        let (negative, digits) = match literal.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, literal.as_str()),
        };
        let value = match notation {
            IntNotation::Decimal => BigInt::from_str_radix(&digits.replace('_', ""), 10).ok()?,
            IntNotation::Hex => BigInt::from_str_radix(&digits[2..], 16).ok()?,
            IntNotation::Octal => BigInt::from_str_radix(&digits[2..], 8).ok()?,
            IntNotation::Binary => BigInt::from_str_radix(&digits[2..], 2).ok()?,
            IntNotation::CharCode => BigInt::from(char_code_value(digits)? as u32),
        };
        Some(if negative { -value } else { value })
    }

    /// Name and arity of a callable term.
    pub fn indicator(&self) -> Option<(&str, usize)> {
        match self {
            Ast::Atom(a) => Some((a, 0)),
            Ast::Compound { functor, args } => Some((functor, args.len())),
            Ast::Infix { op, .. } => Some((op, 2)),
            Ast::Prefix { op, .. } | Ast::Postfix { op, .. } => Some((op, 1)),
            Ast::Curly(_) => Some(("{}", 1)),
            Ast::List { .. } => Some((".", 2)),
            _ => None,
        }
    }
}

fn wrap(out: &mut String, name: &str, inner: impl FnOnce(&mut String)) {
    out.push_str(name);
    out.push('(');
    inner(out);
    out.push(')');
}

/// Character denoted by a `0'c` literal (given without any sign).
fn char_code_value(literal: &str) -> Option<char> {
    let body = literal.strip_prefix("0'")?;
    match body {
        "'" | "''" => Some('\''),
        _ => decode_quoted(&format!("'{body}'"), &DialectOptions::swi())
            .ok()
            .and_then(|q| q.value.chars().next()),
    }
}

/// Writes an atom so that reading it back yields the same atom.
pub fn quote_atom(value: &str) -> String {
    if atom_needs_quotes(value) {
        quote_text(value, '\'')
    } else {
        value.to_string()
    }
}

pub fn atom_needs_quotes(value: &str) -> bool {
    if matches!(value, "[]" | "{}" | "!" | ";") {
        return false;
    }
    let mut chars = value.chars();
    let Some(first) = chars.next() else {
        return true;
    };
    if is_small_letter_start(first) {
        return !value.chars().all(is_alnum_char);
    }
    if is_graphic_char(first) {
        return value == "." || value.starts_with("/*") || !value.chars().all(is_graphic_char);
    }
    true
}

/// Surrounds `text` with `quote`, escaping where needed.
pub fn quote_text(text: &str, quote: char) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push(quote);
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c if c == quote => {
                out.push('\\');
                out.push(c);
            }
            c if c.is_control() => out.push_str(&format!("\\x{:x}\\", c as u32)),
            c => out.push(c),
        }
    }
    out.push(quote);
    out
}

fn op_text(tok: &Token) -> String {
    match tok.kind {
        TokenKind::Comma => ",".into(),
        TokenKind::Bar => "|".into(),
        _ => tok.atom_value(),
    }
}

fn number(tok: &Token, sign: &str) -> Ast {
    let literal = format!("{sign}{}", tok.text);
    match tok.kind {
        TokenKind::Float => {
            let notation = if !tok.text.contains('.') {
                FloatNotation::IntegerExponent
            } else if tok.text.contains(['e', 'E']) {
                FloatNotation::Exponent
            } else {
                FloatNotation::Decimal
            };
            Ast::Float { literal, notation }
        }
        TokenKind::CharCodeConstant => Ast::Integer {
            literal,
            notation: IntNotation::CharCode,
        },
        _ => {
            let notation = if tok.text.starts_with("0x") {
                IntNotation::Hex
            } else if tok.text.starts_with("0o") {
                IntNotation::Octal
            } else if tok.text.starts_with("0b") {
                IntNotation::Binary
            } else {
                IntNotation::Decimal
            };
            Ast::Integer { literal, notation }
        }
    }
}

/// Span tree mirroring [`Ast::children`], flattened later into pre-order.
struct Spans {
    span: SourceSpan,
    children: Vec<Spans>,
}

impl Spans {
    fn flatten(self, out: &mut Vec<SourceSpan>) {
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            out.push(node.span);
            stack.extend(node.children.into_iter().rev());
        }
    }
}

fn leaf_spans(span: SourceSpan) -> Spans {
    Spans {
        span,
        children: Vec::new(),
    }
}

/// Converts a term node (anything below clause level).
pub fn term_to_ast(node: &CstNode) -> Ast {
    convert_term(node).0
}

fn convert_term(node: &CstNode) -> (Ast, Spans) {
    let span = node.span();
    let first = || node.first_token().expect("term nodes own tokens");
    let leaf = |ast: Ast| (ast, leaf_spans(span));
    match node.label {
        CstLabel::Atom => leaf(Ast::Atom(first().atom_value())),
        CstLabel::EmptyList => leaf(Ast::Atom("[]".into())),
        CstLabel::EmptyCurly => leaf(Ast::Atom("{}".into())),
        CstLabel::Variable => leaf(Ast::Variable(first().text.clone())),
        CstLabel::Number => leaf(number(first(), "")),
        CstLabel::NegativeNumber => {
            let num = node.child_tokens().nth(1).expect("sign and number");
            leaf(number(num, "-"))
        }
        CstLabel::String | CstLabel::BackQuoted => {
            let tok = first();
            let text = decode_quoted(&tok.text, &DialectOptions::swi())
                .map_or_else(|_| tok.text.clone(), |q| q.value);
            let quote = if node.label == CstLabel::String {
                QuoteKind::Double
            } else {
                QuoteKind::Back
            };
            leaf(Ast::Str { text, quote })
        }
        CstLabel::Paren => convert_term(node.node(0).expect("parenthesized term")),
        CstLabel::Compound => {
            let (args, spans): (Vec<_>, Vec<_>) = node.nodes().map(convert_term).unzip();
            (
                Ast::Compound {
                    functor: first().atom_value(),
                    args,
                },
                Spans {
                    span,
                    children: spans,
                },
            )
        }
        CstLabel::List => {
            let has_tail = node.child_tokens().any(|t| t.kind == TokenKind::Bar);
            let (mut elements, spans): (Vec<_>, Vec<_>) = node.nodes().map(convert_term).unzip();
            let tail = if has_tail {
                elements.pop().map(Box::new)
            } else {
                None
            };
            (
                Ast::List { elements, tail },
                Spans {
                    span,
                    children: spans,
                },
            )
        }
        CstLabel::Curly => {
            let (inner, s) = convert_term(node.node(0).expect("curly term"));
            (
                Ast::Curly(Box::new(inner)),
                Spans {
                    span,
                    children: vec![s],
                },
            )
        }
        CstLabel::Dict => {
            let tag_tok = first();
            let tag = match tag_tok.kind {
                TokenKind::Variable => Ast::Variable(tag_tok.text.clone()),
                _ => Ast::Atom(tag_tok.atom_value()),
            };
            let mut children = vec![leaf_spans(tag_tok.span)];
            let mut pairs = Vec::new();
            for pair in node.nodes() {
                let key_tok = pair.first_token().expect("dict key");
                let key = match key_tok.kind {
                    TokenKind::Integer => number(key_tok, ""),
                    _ => Ast::Atom(key_tok.atom_value()),
                };
                let (value, vs) = convert_term(pair.node(0).expect("dict value"));
                children.push(leaf_spans(key_tok.span));
                children.push(vs);
                pairs.push((key, value));
            }
            (
                Ast::Dict {
                    tag: Box::new(tag),
                    pairs,
                },
                Spans { span, children },
            )
        }
        CstLabel::Infix => {
            let (left, ls) = convert_term(node.node(0).expect("left operand"));
            let (right, rs) = convert_term(node.node(1).expect("right operand"));
            (
                Ast::Infix {
                    op: op_text(node.op_token().expect("operator")),
                    spec: node.specifier.unwrap_or(Specifier::Xfx),
                    left: Box::new(left),
                    right: Box::new(right),
                },
                Spans {
                    span,
                    children: vec![ls, rs],
                },
            )
        }
        CstLabel::Prefix | CstLabel::Postfix => {
            let (arg, s) = convert_term(node.node(0).expect("operand"));
            let op = op_text(node.op_token().expect("operator"));
            let arg = Box::new(arg);
            let ast = if node.label == CstLabel::Prefix {
                Ast::Prefix {
                    op,
                    spec: node.specifier.unwrap_or(Specifier::Fy),
                    arg,
                }
            } else {
                Ast::Postfix {
                    op,
                    spec: node.specifier.unwrap_or(Specifier::Yf),
                    arg,
                }
            };
            (
                ast,
                Spans {
                    span,
                    children: vec![s],
                },
            )
        }
        CstLabel::PrologText
        | CstLabel::Clause
        | CstLabel::Directive
        | CstLabel::Error
        | CstLabel::DictPair => panic!("{} is not a term node", node.label.as_str()),
    }
}

/// Splits a body into its top-level conjuncts.
pub fn flatten_conjunction(body: Ast) -> Vec<Ast> {
    let mut goals = Vec::new();
    let mut rest = body;
    loop {
        match rest {
            Ast::Infix {
                op, left, right, ..
            } if op == "," => {
                goals.push(*left);
                rest = *right;
            }
            other => {
                goals.push(other);
                return goals;
            }
        }
    }
}

fn flatten_with_spans(body: Ast, spans: Spans) -> (Vec<Ast>, Vec<Spans>) {
    let mut goals = Vec::new();
    let mut goal_spans = Vec::new();
    let mut rest = (body, spans);
    loop {
        match rest {
            (
                Ast::Infix {
                    op, left, right, ..
                },
                mut s,
            ) if op == "," => {
                let rs = s.children.pop().expect("two operands");
                let ls = s.children.pop().expect("two operands");
                goals.push(*left);
                goal_spans.push(ls);
                rest = (*right, rs);
            }
            (other, s) => {
                goals.push(other);
                goal_spans.push(s);
                return (goals, goal_spans);
            }
        }
    }
}

/// Converts a clause or directive node.
pub fn clause_to_ast(node: &CstNode) -> Ast {
    convert_clause(node).0
}

fn convert_clause(node: &CstNode) -> (Ast, Spans) {
    let span = node.span();
    let term = node.clause_term().expect("clause node");
    let (ast, spans) = convert_term(term);
    match ast {
        Ast::Infix {
            op, left, right, ..
        } if op == ":-" => {
            let mut spans = spans;
            let bs = spans.children.pop().expect("body");
            let hs = spans.children.pop().expect("head");
            let (body, body_spans) = flatten_with_spans(*right, bs);
            let mut children = vec![hs];
            children.extend(body_spans);
            (Ast::Rule { head: left, body }, Spans { span, children })
        }
        Ast::Prefix { op, arg, .. } if op == ":-" => {
            let mut spans = spans;
            let s = spans.children.pop().expect("goal");
            (
                Ast::Directive(arg),
                Spans {
                    span,
                    children: vec![s],
                },
            )
        }
        other => (
            Ast::Fact(Box::new(other)),
            Spans {
                span,
                children: vec![spans],
            },
        ),
    }
}

/// Converts a whole `prolog_text` CST. Clauses that failed to parse are
/// left out.
pub fn cst_to_ast(cst: &CstNode) -> AstWithOrigin {
    crate::stack::with_big_stack(|| program_to_ast(cst))
}

fn program_to_ast(cst: &CstNode) -> AstWithOrigin {
    let (clauses, spans): (Vec<_>, Vec<_>) = cst
        .clauses()
        .filter(|c| c.label != CstLabel::Error)
        .map(convert_clause)
        .unzip();
    let mut origin = Vec::new();
    Spans {
        span: cst.span(),
        children: spans,
    }
    .flatten(&mut origin);
    AstWithOrigin {
        ast: Ast::Program(clauses),
        origin,
    }
}

/// Operator declarations in a directive goal: `op/3` calls, conjunctions of
/// them, and `op/3` entries in a `module/2` export list.
pub fn op_declarations(goal: &Ast) -> Vec<OpDecl> {
    let mut out = Vec::new();
    collect_op_decls(goal, true, &mut out);
    out
}

fn collect_op_decls(goal: &Ast, top: bool, out: &mut Vec<OpDecl>) {
    match goal {
        Ast::Compound { functor, args } if functor == "op" && args.len() == 3 => {
            let Some(priority) = args[0].integer_value().and_then(|v| i64::try_from(v).ok()) else {
                return;
            };
            let Ast::Atom(specifier) = &args[1] else {
                return;
            };
            let names = match &args[2] {
                Ast::Atom(a) => vec![a.clone()],
                Ast::List {
                    elements,
                    tail: None,
                } => elements
                    .iter()
                    .filter_map(|e| match e {
                        Ast::Atom(a) => Some(a.clone()),
                        _ => None,
                    })
                    .collect(),
                _ => return,
            };
            out.push(OpDecl {
                priority,
                specifier: specifier.clone(),
                names,
            });
        }
        Ast::Infix {
            op, left, right, ..
        } if op == "," && top => {
            collect_op_decls(left, true, out);
            collect_op_decls(right, true, out);
        }
        Ast::Compound { functor, args } if functor == "module" && args.len() == 2 && top => {
            if let Ast::List { elements, .. } = &args[1] {
                for e in elements {
                    collect_op_decls(e, false, out);
                }
            }
        }
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexer::tokenize;
    use crate::optable::OperatorTable;
    use crate::parser::parse_program;

    fn ast_of(src: &str) -> AstWithOrigin {
        let d = DialectOptions::swi();
        let toks = tokenize(src, &d).unwrap();
        let out = parse_program(&toks, &OperatorTable::default(), &d).unwrap();
        cst_to_ast(&out.cst)
    }

    #[test]
    fn positive_clause_example() {
        let a = ast_of("positive(X) :- X > 0.");
        assert_eq!(
            a.ast.to_term_string(),
            "program([rule(compound(atom(positive),[variable('X')]),[infix(>,xfx,variable('X'),integer(0))])])"
        );
    }

    #[test]
    fn facts_and_flattening() {
        assert_eq!(
            ast_of("a.").ast.to_term_string(),
            "program([fact(atom(a))])"
        );
        assert_eq!(
            ast_of("a :- b, c.").ast.to_term_string(),
            "program([rule(atom(a),[atom(b),atom(c)])])"
        );
        assert_eq!(
            ast_of("a :- (b, c), d.").ast.to_term_string(),
            "program([rule(atom(a),[infix(',',xfy,atom(b),atom(c)),atom(d)])])"
        );
    }

    #[test]
    fn origins_follow_preorder() {
        let a = ast_of("p(X) :-\n    q(X).\n");
        let nodes: Vec<_> = a.nodes().collect();
        assert_eq!(nodes.len(), a.origin.len());
        assert_eq!(nodes.len(), 6);
        let (q, span) = nodes[4];
        assert_eq!(q.indicator(), Some(("q", 1)));
        assert_eq!((span.line_start, span.col_start), (2, 5));
    }

    #[test]
    fn numbers() {
        let a = ast_of("x(0'a, -3, 0x1F, 1_000, - 1).");
        let Ast::Program(c) = &a.ast else { panic!() };
        let Ast::Fact(t) = &c[0] else { panic!() };
        let Ast::Compound { args, .. } = t.as_ref() else {
            panic!()
        };
        let vals: Vec<_> = args[..4]
            .iter()
            .map(|x| x.integer_value().unwrap().to_string())
            .collect();
        assert_eq!(vals, ["97", "-3", "31", "1000"]);
        assert!(matches!(&args[4], Ast::Prefix { op, .. } if op == "-"));
    }

    #[test]
    fn quoting() {
        assert_eq!(quote_atom("abc"), "abc");
        assert_eq!(quote_atom("a b"), "'a b'");
        assert_eq!(quote_atom("=.."), "=..");
        assert_eq!(quote_atom(","), "','");
        assert_eq!(quote_atom("|"), "'|'");
        assert_eq!(quote_atom("[]"), "[]");
        assert_eq!(quote_atom("Abc"), "'Abc'");
        assert_eq!(quote_atom("it's"), "'it\\'s'");
        assert_eq!(quote_atom(""), "''");
        assert_eq!(quote_atom("/*"), "'/*'");
    }

    #[test]
    fn op_decls() {
        let a = ast_of(
            ":- module(m, [p/1, op(700, xfx, ===)]).\n:- op(200, xfy, [^^, ++]), op(0, fx, $).\n",
        );
        let Ast::Program(c) = &a.ast else { panic!() };
        let decls: Vec<_> = c
            .iter()
            .flat_map(|d| match d {
                Ast::Directive(g) => op_declarations(g),
                _ => vec![],
            })
            .collect();
        assert_eq!(decls.len(), 3);
        assert_eq!(decls[1].names, vec!["^^".to_string(), "++".to_string()]);
    }
}
