//! Concrete syntax tree. Leaves are the lexer's tokens, so every byte of
//! the input (including layout) is owned by exactly one leaf.

use serde::Serialize;

use crate::lexer::{EndOfInput, LayoutItem, Token, TokenKind};
use crate::optable::Specifier;
use crate::span::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CstLabel {
    PrologText,
    Clause,
    Directive,
    /// Tokens of a clause that failed to parse, kept verbatim.
    Error,
    Atom,
    EmptyList,
    EmptyCurly,
    Variable,
    Number,
    NegativeNumber,
    String,
    BackQuoted,
    Compound,
    List,
    Curly,
    Dict,
    DictPair,
    Paren,
    Infix,
    Prefix,
    Postfix,
}

impl CstLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CstLabel::PrologText => "prolog_text",
            CstLabel::Clause => "clause",
            CstLabel::Directive => "directive",
            CstLabel::Error => "error",
            CstLabel::Atom => "atom",
            CstLabel::EmptyList => "empty_list",
            CstLabel::EmptyCurly => "empty_curly",
            CstLabel::Variable => "variable",
            CstLabel::Number => "number",
            CstLabel::NegativeNumber => "negative_number",
            CstLabel::String => "string",
            CstLabel::BackQuoted => "back_quoted",
            CstLabel::Compound => "compound",
            CstLabel::List => "list",
            CstLabel::Curly => "curly",
            CstLabel::Dict => "dict",
            CstLabel::DictPair => "dict_pair",
            CstLabel::Paren => "paren",
            CstLabel::Infix => "infix",
            CstLabel::Prefix => "prefix",
            CstLabel::Postfix => "postfix",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum CstChild {
    Node(CstNode),
    Token(Token),
    Eof(EndOfInput),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CstNode {
    pub label: CstLabel,
    pub priority: u16,
    /// Operator type for infix, prefix and postfix nodes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub specifier: Option<Specifier>,
    pub children: Vec<CstChild>,
}

impl CstNode {
    pub fn new(label: CstLabel, priority: u16, children: Vec<CstChild>) -> Self {
        Self {
            label,
            priority,
            specifier: None,
            children,
        }
    }

    pub fn with_specifier(mut self, specifier: Specifier) -> Self {
        self.specifier = Some(specifier);
        self
    }

    pub fn leaf(label: CstLabel, tok: Token) -> Self {
        Self::new(label, 0, vec![CstChild::Token(tok)])
    }

    /// Concatenates layout and token text of every leaf in order.
    pub fn to_source(&self) -> String {
        let mut out = String::new();
        self.write_source(&mut out);
        out
    }

    fn write_source(&self, out: &mut String) {
        for child in &self.children {
            match child {
                CstChild::Node(n) => n.write_source(out),
                CstChild::Token(t) => {
                    for item in &t.layout_before {
                        out.push_str(&item.text);
                    }
                    out.push_str(&t.text);
                }
                CstChild::Eof(e) => {
                    for item in &e.layout_before {
                        out.push_str(&item.text);
                    }
                }
            }
        }
    }

    /// All tokens under this node, in source order.
    pub fn tokens(&self) -> Vec<&Token> {
        let mut out = Vec::new();
        self.collect_tokens(&mut out);
        out
    }

    fn collect_tokens<'a>(&'a self, out: &mut Vec<&'a Token>) {
        for child in &self.children {
            match child {
                CstChild::Node(n) => n.collect_tokens(out),
                CstChild::Token(t) => out.push(t),
                CstChild::Eof(_) => {}
            }
        }
    }

    pub fn first_token(&self) -> Option<&Token> {
        self.children.iter().find_map(|c| match c {
            CstChild::Node(n) => n.first_token(),
            CstChild::Token(t) => Some(t),
            CstChild::Eof(_) => None,
        })
    }

    pub fn last_token(&self) -> Option<&Token> {
        self.children.iter().rev().find_map(|c| match c {
            CstChild::Node(n) => n.last_token(),
            CstChild::Token(t) => Some(t),
            CstChild::Eof(_) => None,
        })
    }

    /// Span from the first to the last token, excluding leading layout.
    pub fn span(&self) -> SourceSpan {
        match (self.first_token(), self.last_token()) {
            (Some(a), Some(b)) => a.span.cover(b.span),
            _ => self
                .children
                .iter()
                .find_map(|c| match c {
                    CstChild::Eof(e) => Some(e.span),
                    _ => None,
                })
                .unwrap_or_default(),
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = &CstNode> {
        self.children.iter().filter_map(|c| match c {
            CstChild::Node(n) => Some(n),
            _ => None,
        })
    }

    pub fn child_tokens(&self) -> impl Iterator<Item = &Token> {
        self.children.iter().filter_map(|c| match c {
            CstChild::Token(t) => Some(t),
            _ => None,
        })
    }

    pub fn node(&self, i: usize) -> Option<&CstNode> {
        self.nodes().nth(i)
    }

    /// Operator token of an infix, prefix or postfix node.
    pub fn op_token(&self) -> Option<&Token> {
        match self.label {
            CstLabel::Infix | CstLabel::Prefix | CstLabel::Postfix => self.child_tokens().next(),
            _ => None,
        }
    }

    /// The operator name of an infix/prefix/postfix node.
    pub fn op_name(&self) -> Option<String> {
        self.op_token().map(Token::atom_value)
    }

    /// Strips any number of enclosing parentheses.
    pub fn unparen(&self) -> &CstNode {
        let mut node = self;
        while node.label == CstLabel::Paren {
            match node.node(0) {
                Some(inner) => node = inner,
                None => break,
            }
        }
        node
    }

    /// Trailing layout of a `prolog_text` node.
    pub fn trailing_layout(&self) -> &[LayoutItem] {
        match self.children.last() {
            Some(CstChild::Eof(e)) => &e.layout_before,
            _ => &[],
        }
    }

    /// Clause-level children of a `prolog_text` node.
    pub fn clauses(&self) -> impl Iterator<Item = &CstNode> {
        self.nodes()
    }

    /// For a clause or directive node, the term before the end token.
    pub fn clause_term(&self) -> Option<&CstNode> {
        match self.label {
            CstLabel::Clause | CstLabel::Directive => self.node(0),
            _ => None,
        }
    }

    /// Whether a clause node is a rule (`Head :- Body` or `Head --> Body`)
    /// and, if so, its head, operator token and body.
    pub fn rule_parts(&self) -> Option<(&CstNode, &Token, &CstNode)> {
        let term = self.clause_term()?;
        if term.label != CstLabel::Infix {
            return None;
        }
        let op = term.op_token()?;
        if op.kind == TokenKind::Name && matches!(op.text.as_str(), ":-" | "-->") {
            Some((term.node(0)?, op, term.node(1)?))
        } else {
            None
        }
    }

    /// Flattens the top-level body conjunction of a rule, looking through
    /// parentheses on the right spine the same way the AST does.
    pub fn body_goals(body: &CstNode) -> Vec<(&CstNode, Option<&Token>)> {
        let mut goals = Vec::new();
        let mut node = body.unparen();
        loop {
            if node.label == CstLabel::Infix {
                if let Some(op) = node.op_token() {
                    if op.kind == TokenKind::Comma {
                        let left = node.node(0).expect("infix has two operands");
                        goals.push((left, Some(op)));
                        node = node.node(1).expect("infix has two operands").unparen();
                        continue;
                    }
                }
            }
            goals.push((node, None));
            break;
        }
        goals
    }

    /// Indented, one-node-per-line rendering including layout.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        self.dump_into(&mut out, 0);
        out
    }

    fn dump_into(&self, out: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        out.push_str(&format!(
            "{pad}{} (priority {})\n",
            self.label.as_str(),
            self.priority
        ));
        let pad = "  ".repeat(depth + 1);
        for child in &self.children {
            match child {
                CstChild::Node(n) => n.dump_into(out, depth + 1),
                CstChild::Token(t) => {
                    for item in &t.layout_before {
                        out.push_str(&format!("{pad}layout {:?} {:?}\n", item.kind, item.text));
                    }
                    out.push_str(&format!("{pad}token {} {:?}\n", t.kind.as_str(), t.text));
                }
                CstChild::Eof(e) => {
                    for item in &e.layout_before {
                        out.push_str(&format!("{pad}layout {:?} {:?}\n", item.kind, item.text));
                    }
                    out.push_str(&format!("{pad}end_of_input\n"));
                }
            }
        }
    }
}
