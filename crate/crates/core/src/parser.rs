//! Operator-precedence parser producing a lossless CST.
//!
//! Terms are parsed with one token of lookahead and explicit priority
//! threading. Each clause is parsed on its own; a clause that fails is kept
//! as an `error` node holding its raw tokens and parsing resumes after the
//! next end token. `op/3` directives take effect from the following clause.

use std::time::Instant;

use thiserror::Error;

use crate::ast;
use crate::cst::{CstChild, CstLabel, CstNode};
use crate::lexer::{Token, TokenKind, TokenStream};
use crate::optable::{DialectOptions, OpDef, OpError, OperatorTable, Specifier};
use crate::span::SourceSpan;

/// Nesting bound for terms; deeper input is rejected instead of risking
/// stack exhaustion.
pub const MAX_DEPTH: usize = 1000;

const DEDUCED_PRIORITY: u16 = 200;
const MAX_HYPOTHESES: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected {found}, expected {expected}")]
    Unexpected { found: String, expected: String },
    #[error("operator `{op}` has priority {priority} but at most {max} is allowed here")]
    Priority { op: String, priority: u16, max: u16 },
    #[error("operator `{0}` used as an operand must be parenthesized")]
    OperatorAsOperand(String),
    #[error("compound `{0}()` without arguments is not allowed")]
    ZeroArity(String),
    #[error("term nesting exceeds {MAX_DEPTH} levels")]
    TooDeep,
    #[error("invalid op/3 directive: {0}")]
    OpDirective(OpError),
    #[error("deadline exceeded")]
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}:{}: {kind}", span.line_start, span.col_start)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
}

#[derive(Debug, Clone)]
pub struct ParseOutcome {
    pub cst: CstNode,
    pub deduced_ops: Vec<OpDef>,
    pub table_final: OperatorTable,
    /// One entry per failed clause plus rejected op/3 directives.
    pub errors: Vec<ParseError>,
}

/// Parses a whole program and fails on the first syntax error.
pub fn parse_program(
    tokens: &TokenStream,
    table: &OperatorTable,
    dialect: &DialectOptions,
) -> Result<ParseOutcome, ParseError> {
    let outcome = parse_program_recovering(tokens, table, dialect, None)?;
    match outcome.errors.first() {
        Some(e) => Err(e.clone()),
        None => Ok(outcome),
    }
}

/// Parses a whole program, recovering from errors clause by clause. Only a
/// passed `deadline` makes this fail, with [`ParseErrorKind::Timeout`].
pub fn parse_program_recovering(
    tokens: &TokenStream,
    table: &OperatorTable,
    dialect: &DialectOptions,
    deadline: Option<Instant>,
) -> Result<ParseOutcome, ParseError> {
    crate::stack::with_big_stack(|| parse_all(tokens, table, dialect, deadline))
}

fn parse_all(
    tokens: &TokenStream,
    table: &OperatorTable,
    dialect: &DialectOptions,
    deadline: Option<Instant>,
) -> Result<ParseOutcome, ParseError> {
    let toks = &tokens.tokens;
    let mut table = table.clone();
    let mut deduced = Vec::new();
    let mut errors = Vec::new();
    let mut children = Vec::new();
    let mut pos = 0;
    while pos < toks.len() {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(ParseError {
                kind: ParseErrorKind::Timeout,
                span: toks[pos].span,
            });
        }
        let result = match parse_clause(toks, pos, &table, dialect) {
            Err(fail) if dialect.deduce_operators => deduce(toks, pos, &table, dialect, fail, 0),
            other => other.map(|ok| (ok, Vec::new())),
        };
        match result {
            Ok(((node, next), hypotheses)) => {
                for op in hypotheses {
                    table = table
                        .apply_op(op.priority, op.specifier, &[&op.name])
                        .expect("deduced operators are valid");
                    deduced.push(op);
                }
                if node.label == CstLabel::Directive {
                    table = apply_directive(&node, table, &mut errors);
                }
                children.push(CstChild::Node(node));
                pos = next;
            }
            Err(fail) => {
                let end = (fail.at.max(pos)..toks.len())
                    .find(|&i| toks[i].kind == TokenKind::End)
                    .map_or(toks.len(), |i| i + 1);
                let raw = toks[pos..end]
                    .iter()
                    .cloned()
                    .map(CstChild::Token)
                    .collect();
                children.push(CstChild::Node(CstNode::new(CstLabel::Error, 0, raw)));
                errors.push(fail.error);
                pos = end;
            }
        }
    }
    children.push(CstChild::Eof(tokens.eof.clone()));
    Ok(ParseOutcome {
        cst: CstNode::new(CstLabel::PrologText, 0, children),
        deduced_ops: deduced,
        table_final: table,
        errors,
    })
}

/// Parses one term of priority at most `max_priority` from the front of
/// `tokens`, returning it with the unconsumed rest.
pub fn parse_term<'t>(
    tokens: &'t [Token],
    max_priority: u16,
    table: &OperatorTable,
    dialect: &DialectOptions,
) -> Result<(CstNode, &'t [Token]), ParseError> {
    let mut p = Parser::new(tokens, table, dialect);
    let node = p
        .parse(max_priority.min(1200), Ctx::default())
        .map_err(|f| f.error)?;
    Ok((node, &tokens[p.pos..]))
}

/// Parses a dict term (`Tag{Key: Value, ...}`) spanning all of `tokens`.
pub fn parse_dict(
    tokens: &[Token],
    table: &OperatorTable,
    dialect: &DialectOptions,
) -> Result<CstNode, ParseError> {
    let mut p = Parser::new(tokens, table, dialect);
    let node = p.primary(0, Ctx::default()).map_err(|f| f.error)?;
    if node.label != CstLabel::Dict {
        let tok = &tokens[0];
        return Err(ParseError {
            kind: ParseErrorKind::Unexpected {
                found: describe(Some(tok)),
                expected: "dict".into(),
            },
            span: tok.span,
        });
    }
    if p.pos < tokens.len() {
        return Err(p.unexpected("end of dict").error);
    }
    Ok(node)
}

/// Applies the op/3 declarations found in a parsed directive.
fn apply_directive(
    node: &CstNode,
    mut table: OperatorTable,
    errors: &mut Vec<ParseError>,
) -> OperatorTable {
    let goal = match ast::clause_to_ast(node) {
        ast::Ast::Directive(goal) => goal,
        _ => return table,
    };
    for decl in ast::op_declarations(&goal) {
        let names: Vec<&str> = decl.names.iter().map(String::as_str).collect();
        match table.apply_op_directive(decl.priority, &decl.specifier, &names) {
            Ok(t) => table = t,
            Err(e) => errors.push(ParseError {
                kind: ParseErrorKind::OpDirective(e),
                span: node.span(),
            }),
        }
    }
    table
}

struct Fail {
    error: ParseError,
    /// Index of the offending token (may equal the token count at EOF).
    at: usize,
}

type PResult<T> = Result<T, Fail>;

fn parse_clause(
    toks: &[Token],
    start: usize,
    table: &OperatorTable,
    dialect: &DialectOptions,
) -> PResult<(CstNode, usize)> {
    let mut p = Parser::new(toks, table, dialect);
    p.pos = start;
    let term = p.parse(1200, Ctx::default())?;
    match p.peek() {
        Some(t) if t.kind == TokenKind::End => {}
        _ => return Err(p.clause_end_error(&term)),
    }
    let end = p.bump();
    let label = if term.label == CstLabel::Prefix && term.op_name().as_deref() == Some(":-") {
        CstLabel::Directive
    } else {
        CstLabel::Clause
    };
    let priority = term.priority;
    Ok((
        CstNode::new(
            label,
            priority,
            vec![CstChild::Node(term), CstChild::Token(end)],
        ),
        p.pos,
    ))
}

/// Tries to rescue a failed clause by assuming missing prefix or postfix
/// operator definitions. Returns the first combination that parses.
fn deduce(
    toks: &[Token],
    start: usize,
    table: &OperatorTable,
    dialect: &DialectOptions,
    fail: Fail,
    depth: usize,
) -> PResult<((CstNode, usize), Vec<OpDef>)> {
    if depth >= MAX_HYPOTHESES {
        return Err(fail);
    }
    let mut candidates = Vec::new();
    if fail.at > start {
        let prev = &toks[fail.at - 1];
        if prev.kind == TokenKind::Name && table.prefix(&prev.atom_value()).is_none() {
            candidates.push(OpDef::new(
                prev.atom_value(),
                DEDUCED_PRIORITY,
                Specifier::Fy,
            ));
        }
    }
    if let Some(tok) = toks.get(fail.at) {
        if tok.kind == TokenKind::Name
            && table.infix(&tok.atom_value()).is_none()
            && table.postfix(&tok.atom_value()).is_none()
        {
            candidates.push(OpDef::new(
                tok.atom_value(),
                DEDUCED_PRIORITY,
                Specifier::Yf,
            ));
        }
    }
    for op in candidates {
        let Ok(extended) = table.apply_op(op.priority, op.specifier, &[&op.name]) else {
            continue;
        };
        match parse_clause(toks, start, &extended, dialect) {
            Ok(done) => return Ok((done, vec![op])),
            Err(next) => {
                if let Ok((done, mut more)) =
                    deduce(toks, start, &extended, dialect, next, depth + 1)
                {
                    more.insert(0, op);
                    return Ok((done, more));
                }
            }
        }
    }
    Err(fail)
}

#[derive(Debug, Clone, Copy, Default)]
struct Ctx {
    /// Comma separates arguments here rather than acting as an operator.
    stop_comma: bool,
    /// Bar separates a list tail here.
    stop_bar: bool,
}

const ELEMENT_CTX: Ctx = Ctx {
    stop_comma: true,
    stop_bar: true,
};

enum Step {
    /// `left` was wrapped by a postfix operator or field access.
    Postfix(CstNode),
    /// An infix operator was consumed; its right operand comes next.
    Infix(CstNode, Token, u16, Specifier, u16),
    /// Nothing more binds at the current priority.
    Done(CstNode),
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    table: &'a OperatorTable,
    dialect: &'a DialectOptions,
    depth: usize,
}

fn describe(tok: Option<&Token>) -> String {
    match tok {
        None => "end of input".into(),
        Some(t) if t.kind == TokenKind::End => "end of clause".into(),
        Some(t) => format!("`{}`", t.text),
    }
}

fn can_start_term(tok: Option<&Token>) -> bool {
    tok.is_some_and(|t| {
        matches!(
            t.kind,
            TokenKind::Name
                | TokenKind::Variable
                | TokenKind::Integer
                | TokenKind::Float
                | TokenKind::DoubleQuoted
                | TokenKind::BackQuoted
                | TokenKind::CharCodeConstant
                | TokenKind::OpenParen
                | TokenKind::OpenCt
                | TokenKind::OpenList
                | TokenKind::OpenCurly
        )
    })
}

impl<'a> Parser<'a> {
    fn new(toks: &'a [Token], table: &'a OperatorTable, dialect: &'a DialectOptions) -> Self {
        Self {
            toks,
            pos: 0,
            table,
            dialect,
            depth: 0,
        }
    }

    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn peek_at(&self, offset: usize) -> Option<&'a Token> {
        self.toks.get(self.pos + offset)
    }

    fn peek_kind(&self) -> Option<TokenKind> {
        self.peek().map(|t| t.kind)
    }

    fn bump(&mut self) -> Token {
        let tok = self.toks[self.pos].clone();
        self.pos += 1;
        tok
    }

    fn here_span(&self) -> SourceSpan {
        match self.peek() {
            Some(t) => t.span,
            None => self.toks.last().map_or_else(SourceSpan::default, |t| {
                let mut s = t.span;
                s.byte_start = s.byte_end;
                s.line_start = s.line_end;
                s.col_start = s.col_end;
                s
            }),
        }
    }

    fn fail(&self, kind: ParseErrorKind) -> Fail {
        Fail {
            error: ParseError {
                kind,
                span: self.here_span(),
            },
            at: self.pos,
        }
    }

    fn unexpected(&self, expected: &str) -> Fail {
        self.fail(ParseErrorKind::Unexpected {
            found: describe(self.peek()),
            expected: expected.into(),
        })
    }

    fn expect(&mut self, kind: TokenKind, expected: &str) -> PResult<Token> {
        if self.peek_kind() == Some(kind) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(expected))
        }
    }

    /// Explains why a clause term is not followed by an end token.
    fn clause_end_error(&self, term: &CstNode) -> Fail {
        if let Some(tok) = self.peek() {
            let name = match tok.kind {
                TokenKind::Name => Some(tok.atom_value()),
                TokenKind::Comma => Some(",".to_string()),
                TokenKind::Bar => Some("|".to_string()),
                _ => None,
            };
            if let Some(op) =
                name.and_then(|n| self.table.infix(&n).or_else(|| self.table.postfix(&n)))
            {
                let (left_max, _) = op.specifier.arg_max(op.priority);
                return self.fail(ParseErrorKind::Priority {
                    op: op.name.clone(),
                    priority: term.priority,
                    max: left_max,
                });
            }
        }
        self.unexpected("operator or end of clause")
    }

    fn op_name_at(&self, tok: &Token, ctx: Ctx) -> Option<String> {
        match tok.kind {
            TokenKind::Name => Some(tok.atom_value()),
            TokenKind::Comma if !ctx.stop_comma => Some(",".into()),
            TokenKind::Bar if !ctx.stop_bar => Some("|".into()),
            _ => None,
        }
    }

    /// True for a bare atom that names an operator.
    fn is_bare_op_atom(&self, node: &CstNode) -> bool {
        node.label == CstLabel::Atom
            && node
                .first_token()
                .is_some_and(|t| t.kind == TokenKind::Name && self.table.is_op(&t.atom_value()))
    }

    fn check_operand(&self, node: &CstNode) -> PResult<()> {
        if !self.dialect.allow_operator_as_operand && self.is_bare_op_atom(node) {
            let tok = node.first_token().expect("atom has a token");
            return Err(Fail {
                error: ParseError {
                    kind: ParseErrorKind::OperatorAsOperand(tok.atom_value()),
                    span: tok.span,
                },
                at: self.pos,
            });
        }
        Ok(())
    }

    fn parse(&mut self, max: u16, ctx: Ctx) -> PResult<CstNode> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.fail(ParseErrorKind::TooDeep));
        }
        let result = self.parse_inner(max, ctx);
        self.depth -= 1;
        result
    }

    /// Operator-precedence loop. Pending infix operators are kept on an
    /// explicit stack so that long operator chains do not nest calls.
    fn parse_inner(&mut self, max: u16, ctx: Ctx) -> PResult<CstNode> {
        let mut pending: Vec<(CstNode, Token, u16, Specifier, u16)> = Vec::new();
        let mut max = max;
        let mut left = self.primary(max, ctx)?;
        loop {
            match self.extend(left, max, ctx)? {
                Step::Postfix(node) => left = node,
                Step::Infix(l, tok, priority, spec, rmax) => {
                    pending.push((l, tok, priority, spec, max));
                    max = rmax;
                    left = self.primary(max, ctx)?;
                }
                Step::Done(node) => {
                    let Some((l, tok, priority, spec, outer)) = pending.pop() else {
                        return Ok(node);
                    };
                    self.check_operand(&node)?;
                    left = CstNode::new(
                        CstLabel::Infix,
                        priority,
                        vec![
                            CstChild::Node(l),
                            CstChild::Token(tok),
                            CstChild::Node(node),
                        ],
                    )
                    .with_specifier(spec);
                    max = outer;
                }
            }
        }
    }

    /// Looks at the token after `left` and decides how to continue.
    fn extend(&mut self, left: CstNode, max: u16, ctx: Ctx) -> PResult<Step> {
        let Some(tok) = self.peek() else {
            return Ok(Step::Done(left));
        };
        if self.dialect.dicts && self.is_field_access(tok, &left) {
            let dot = self.bump();
            let key = self.primary(0, ctx)?;
            let node = CstNode::new(
                CstLabel::Infix,
                0,
                vec![
                    CstChild::Node(left),
                    CstChild::Token(dot),
                    CstChild::Node(key),
                ],
            )
            .with_specifier(Specifier::Yfx);
            return Ok(Step::Postfix(node));
        }
        let Some(name) = self.op_name_at(tok, ctx) else {
            return Ok(Step::Done(left));
        };
        if let Some(op) = self.table.infix(&name) {
            let (lmax, rmax) = op.specifier.arg_max(op.priority);
            if op.priority <= max && left.priority <= lmax && can_start_term(self.peek_at(1)) {
                self.check_operand(&left)?;
                let (priority, spec) = (op.priority, op.specifier);
                let op_tok = self.bump();
                return Ok(Step::Infix(left, op_tok, priority, spec, rmax));
            }
        }
        if let Some(op) = self.table.postfix(&name) {
            let (lmax, _) = op.specifier.arg_max(op.priority);
            if op.priority <= max && left.priority <= lmax {
                self.check_operand(&left)?;
                let (priority, spec) = (op.priority, op.specifier);
                let op_tok = self.bump();
                let node = CstNode::new(
                    CstLabel::Postfix,
                    priority,
                    vec![CstChild::Node(left), CstChild::Token(op_tok)],
                )
                .with_specifier(spec);
                return Ok(Step::Postfix(node));
            }
        }
        Ok(Step::Done(left))
    }

    fn is_field_access(&self, tok: &Token, left: &CstNode) -> bool {
        let base = matches!(left.label, CstLabel::Variable | CstLabel::Dict)
            || (left.label == CstLabel::Infix && left.op_name().as_deref() == Some("."));
        base && tok.is_name(".")
            && !tok.has_layout_before()
            && self.peek_at(1).is_some_and(|n| {
                !n.has_layout_before() && matches!(n.kind, TokenKind::Name | TokenKind::Variable)
            })
    }

    fn primary(&mut self, max: u16, ctx: Ctx) -> PResult<CstNode> {
        let Some(tok) = self.peek() else {
            return Err(self.unexpected("term"));
        };
        match tok.kind {
            TokenKind::Integer | TokenKind::Float | TokenKind::CharCodeConstant => {
                Ok(CstNode::leaf(CstLabel::Number, self.bump()))
            }
            TokenKind::Variable => {
                if self.dialect.dicts
                    && self
                        .peek_at(1)
                        .is_some_and(|t| t.kind == TokenKind::DictOpen)
                {
                    return self.dict();
                }
                Ok(CstNode::leaf(CstLabel::Variable, self.bump()))
            }
            TokenKind::DoubleQuoted => Ok(CstNode::leaf(CstLabel::String, self.bump())),
            TokenKind::BackQuoted => Ok(CstNode::leaf(CstLabel::BackQuoted, self.bump())),
            TokenKind::OpenParen | TokenKind::OpenCt => {
                let open = self.bump();
                let inner = self.parse(1200, Ctx::default())?;
                let close = self.expect(TokenKind::CloseParen, "`)`")?;
                Ok(CstNode::new(
                    CstLabel::Paren,
                    0,
                    vec![
                        CstChild::Token(open),
                        CstChild::Node(inner),
                        CstChild::Token(close),
                    ],
                ))
            }
            TokenKind::OpenList => {
                if self
                    .peek_at(1)
                    .is_some_and(|t| t.kind == TokenKind::CloseList)
                {
                    let open = self.bump();
                    let close = self.bump();
                    return Ok(CstNode::new(
                        CstLabel::EmptyList,
                        0,
                        vec![CstChild::Token(open), CstChild::Token(close)],
                    ));
                }
                self.list()
            }
            TokenKind::OpenCurly => {
                let open = self.bump();
                if self.peek_kind() == Some(TokenKind::CloseCurly) {
                    let close = self.bump();
                    return Ok(CstNode::new(
                        CstLabel::EmptyCurly,
                        0,
                        vec![CstChild::Token(open), CstChild::Token(close)],
                    ));
                }
                let inner = self.parse(1200, Ctx::default())?;
                let close = self.expect(TokenKind::CloseCurly, "`}`")?;
                Ok(CstNode::new(
                    CstLabel::Curly,
                    0,
                    vec![
                        CstChild::Token(open),
                        CstChild::Node(inner),
                        CstChild::Token(close),
                    ],
                ))
            }
            TokenKind::Name => self.name_primary(max, ctx),
            _ => Err(self.unexpected("term")),
        }
    }

    fn name_primary(&mut self, max: u16, ctx: Ctx) -> PResult<CstNode> {
        let tok = self.peek().expect("caller checked");
        let next = self.peek_at(1);
        match next.map(|t| t.kind) {
            Some(TokenKind::OpenCt) => return self.compound(),
            Some(TokenKind::DictOpen) if self.dialect.dicts => return self.dict(),
            Some(TokenKind::Integer | TokenKind::Float | TokenKind::CharCodeConstant)
                if tok.text == "-" && !next.is_some_and(Token::has_layout_before) =>
            {
                let minus = self.bump();
                let num = self.bump();
                return Ok(CstNode::new(
                    CstLabel::NegativeNumber,
                    0,
                    vec![CstChild::Token(minus), CstChild::Token(num)],
                ));
            }
            _ => {}
        }
        let value = tok.atom_value();
        if let Some(op) = self.table.prefix(&value) {
            if !self.prefix_op_is_atom() {
                let op = op.clone();
                if op.priority > max {
                    return Err(self.fail(ParseErrorKind::Priority {
                        op: op.name,
                        priority: op.priority,
                        max,
                    }));
                }
                let (_, arg_max) = op.specifier.arg_max(op.priority);
                let op_tok = self.bump();
                let arg = self.parse(arg_max, ctx)?;
                self.check_operand(&arg)?;
                return Ok(CstNode::new(
                    CstLabel::Prefix,
                    op.priority,
                    vec![CstChild::Token(op_tok), CstChild::Node(arg)],
                )
                .with_specifier(op.specifier));
            }
        }
        Ok(CstNode::leaf(CstLabel::Atom, self.bump()))
    }

    /// Decides whether the prefix operator at the cursor stands alone as an
    /// atom, judging by the token after it.
    fn prefix_op_is_atom(&self) -> bool {
        let Some(next) = self.peek_at(1) else {
            return true;
        };
        match next.kind {
            TokenKind::End
            | TokenKind::CloseParen
            | TokenKind::CloseList
            | TokenKind::CloseCurly
            | TokenKind::Comma
            | TokenKind::Bar => true,
            TokenKind::Name => {
                let name = next.atom_value();
                let infix_like =
                    self.table.infix(&name).is_some() || self.table.postfix(&name).is_some();
                let starts_term = self
                    .peek_at(2)
                    .is_some_and(|t| matches!(t.kind, TokenKind::OpenCt | TokenKind::DictOpen))
                    || (name == "-"
                        && self.peek_at(2).is_some_and(|t| {
                            !t.has_layout_before()
                                && matches!(
                                    t.kind,
                                    TokenKind::Integer
                                        | TokenKind::Float
                                        | TokenKind::CharCodeConstant
                                )
                        }));
                // `:- ;.` has nothing after the would-be infix operator, so
                // it can only be an operand.
                let has_right = self.peek_at(2).is_some_and(|t| {
                    !matches!(
                        t.kind,
                        TokenKind::End
                            | TokenKind::CloseParen
                            | TokenKind::CloseList
                            | TokenKind::CloseCurly
                            | TokenKind::Comma
                            | TokenKind::Bar
                    )
                });
                infix_like && self.table.prefix(&name).is_none() && !starts_term && has_right
            }
            _ => false,
        }
    }

    fn arg_ctx(&self) -> (u16, Ctx) {
        if self.dialect.allow_arg_precedence_geq_1000 {
            (
                1200,
                Ctx {
                    stop_comma: true,
                    stop_bar: false,
                },
            )
        } else {
            (999, Ctx::default())
        }
    }

    fn compound(&mut self) -> PResult<CstNode> {
        let name = self.bump();
        let open = self.bump();
        let mut children = vec![CstChild::Token(name.clone()), CstChild::Token(open)];
        if self.peek_kind() == Some(TokenKind::CloseParen) {
            if !self.dialect.allow_compounds_with_zero_arguments {
                return Err(self.fail(ParseErrorKind::ZeroArity(name.atom_value())));
            }
            children.push(CstChild::Token(self.bump()));
            return Ok(CstNode::new(CstLabel::Compound, 0, children));
        }
        let (max, ctx) = self.arg_ctx();
        loop {
            let arg = self.parse(max, ctx)?;
            children.push(CstChild::Node(arg));
            match self.peek_kind() {
                Some(TokenKind::Comma) => children.push(CstChild::Token(self.bump())),
                Some(TokenKind::CloseParen) => {
                    children.push(CstChild::Token(self.bump()));
                    return Ok(CstNode::new(CstLabel::Compound, 0, children));
                }
                _ => return Err(self.unexpected("`,` or `)`")),
            }
        }
    }

    fn list(&mut self) -> PResult<CstNode> {
        let mut children = vec![CstChild::Token(self.bump())];
        let max = if self.dialect.allow_arg_precedence_geq_1000 {
            1200
        } else {
            999
        };
        let ctx = ELEMENT_CTX;
        loop {
            children.push(CstChild::Node(self.parse(max, ctx)?));
            match self.peek_kind() {
                Some(TokenKind::Comma) => children.push(CstChild::Token(self.bump())),
                Some(TokenKind::Bar) => {
                    children.push(CstChild::Token(self.bump()));
                    children.push(CstChild::Node(self.parse(max, ctx)?));
                    let close = self.expect(TokenKind::CloseList, "`]`")?;
                    children.push(CstChild::Token(close));
                    break;
                }
                Some(TokenKind::CloseList) => {
                    children.push(CstChild::Token(self.bump()));
                    break;
                }
                _ => return Err(self.unexpected("`,`, `|` or `]`")),
            }
        }
        Ok(CstNode::new(CstLabel::List, 0, children))
    }

    fn dict(&mut self) -> PResult<CstNode> {
        let tag = self.bump();
        let open = self.bump();
        let mut children = vec![CstChild::Token(tag), CstChild::Token(open)];
        if self.peek_kind() == Some(TokenKind::CloseCurly) {
            children.push(CstChild::Token(self.bump()));
            return Ok(CstNode::new(CstLabel::Dict, 0, children));
        }
        let ctx = ELEMENT_CTX;
        loop {
            let key = match self.peek_kind() {
                Some(TokenKind::Name | TokenKind::Integer) => self.bump(),
                _ => return Err(self.unexpected("dict key")),
            };
            if !self.peek().is_some_and(|t| t.is_name(":")) {
                return Err(self.unexpected("`:`"));
            }
            let colon = self.bump();
            let value = self.parse(999, ctx)?;
            children.push(CstChild::Node(CstNode::new(
                CstLabel::DictPair,
                0,
                vec![
                    CstChild::Token(key),
                    CstChild::Token(colon),
                    CstChild::Node(value),
                ],
            )));
            match self.peek_kind() {
                Some(TokenKind::Comma) => children.push(CstChild::Token(self.bump())),
                Some(TokenKind::CloseCurly) => {
                    children.push(CstChild::Token(self.bump()));
                    return Ok(CstNode::new(CstLabel::Dict, 0, children));
                }
                _ => return Err(self.unexpected("`,` or `}`")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexer::tokenize;
    use crate::optable::Profile;

    fn parse_with(src: &str, d: &DialectOptions) -> Result<ParseOutcome, ParseError> {
        let toks = tokenize(src, d).unwrap();
        let table = OperatorTable::default_table(if d.dicts { Profile::Swi } else { Profile::Iso });
        parse_program(&toks, &table, d)
    }

    #[test]
    fn round_trip_simple() {
        let src = "positive(X) :- X > 0.\n% done\n";
        let out = parse_with(src, &DialectOptions::iso()).unwrap();
        assert_eq!(out.cst.to_source(), src);
    }

    #[test]
    fn priorities() {
        let d = DialectOptions::iso();
        assert!(parse_with("a = b = c.", &d).is_err());
        assert!(parse_with("a :- b :- c.", &d).is_err());
        assert!(parse_with("x = - .", &d).is_err());
        assert!(parse_with("x = (-).", &d).is_ok());
        assert!(parse_with("f(-, +).", &d).is_ok());
        assert!(parse_with("X = - 1, Y = -(1), Z = -a.", &d).is_ok());
        assert!(parse_with("- = x.", &d).is_err());
    }

    #[test]
    fn recovers_per_clause() {
        let d = DialectOptions::iso();
        let toks = tokenize("a.\nb c.\nd.\n", &d).unwrap();
        let out =
            parse_program_recovering(&toks, &OperatorTable::default_table(Profile::Iso), &d, None)
                .unwrap();
        assert_eq!(out.errors.len(), 1);
        let labels: Vec<_> = out.cst.clauses().map(|c| c.label).collect();
        assert_eq!(
            labels,
            vec![CstLabel::Clause, CstLabel::Error, CstLabel::Clause]
        );
        assert_eq!(out.cst.to_source(), "a.\nb c.\nd.\n");
    }

    #[test]
    fn op_directive_takes_effect_after_clause() {
        let d = DialectOptions::iso();
        assert!(parse_with(":- op(700, xfx, ===).\nx === y.\n", &d).is_ok());
        assert!(parse_with("x === y.\n", &d).is_err());
        let out = parse_with(
            ":- op(700, xfx, [===, =/=]), op(200, xfy, ^^).\na ^^ b =/= c.\n",
            &d,
        )
        .unwrap();
        assert!(out.table_final.infix("^^").is_some());
    }

    #[test]
    fn deduction() {
        let d = DialectOptions::iso();
        assert!(parse_with("a b.", &d).is_err());
        let d = d.with("deduce_operators", true).unwrap();
        let out = parse_with("a b.", &d).unwrap();
        assert_eq!(out.deduced_ops, vec![OpDef::new("a", 200, Specifier::Fy)]);
    }

    #[test]
    fn deadline_in_the_past_times_out() {
        let d = DialectOptions::iso();
        let toks = tokenize("a.", &d).unwrap();
        let err = parse_program_recovering(
            &toks,
            &OperatorTable::default_table(Profile::Iso),
            &d,
            Some(Instant::now()),
        )
        .unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Timeout);
    }

    #[test]
    fn too_deep_is_an_error_not_a_crash() {
        let d = DialectOptions::iso();
        let src = format!(
            "x({}a{}).",
            "f(".repeat(MAX_DEPTH + 5),
            ")".repeat(MAX_DEPTH + 5)
        );
        let err = parse_with(&src, &d).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::TooDeep);
    }

    #[test]
    fn dict_terms() {
        let d = DialectOptions::swi();
        let toks = tokenize("point{a: 1, b: X}", &d).unwrap();
        let node = parse_dict(&toks.tokens, &OperatorTable::default(), &d).unwrap();
        assert_eq!(node.nodes().count(), 2);
        assert!(parse_with("X = _{}.", &d).is_ok());
        assert!(parse_with("X = point{a:1}.", &DialectOptions::iso()).is_err());
        assert!(parse_with("X = P.a.", &d).is_ok());
    }
}
