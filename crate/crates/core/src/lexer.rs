//! Lossless tokenizer for ISO Prolog text with optional SWI-Prolog
//! extensions.
//!
//! Every token carries the layout (whitespace and comments) that precedes
//! it, and layout after the last token is kept on [`TokenStream::eof`], so
//! concatenating layout and token text in order reproduces the input.

use serde::Serialize;
use thiserror::Error;

use crate::optable::DialectOptions;
use crate::span::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LayoutKind {
    Space,
    Tab,
    Newline,
    LineComment,
    BlockComment,
    Shebang,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayoutItem {
    pub kind: LayoutKind,
    pub text: String,
    pub span: SourceSpan,
}

impl LayoutItem {
    pub fn is_comment(&self) -> bool {
        matches!(
            self.kind,
            LayoutKind::LineComment | LayoutKind::BlockComment
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Name,
    Variable,
    Integer,
    Float,
    DoubleQuoted,
    BackQuoted,
    CharCodeConstant,
    OpenParen,
    /// `(` directly after a name, with no layout in between.
    OpenCt,
    CloseParen,
    OpenList,
    CloseList,
    OpenCurly,
    CloseCurly,
    Comma,
    Bar,
    End,
    /// `{` directly after a dict tag (dicts dialect only).
    DictOpen,
}

impl TokenKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TokenKind::Name => "name",
            TokenKind::Variable => "variable",
            TokenKind::Integer => "integer",
            TokenKind::Float => "float",
            TokenKind::DoubleQuoted => "double_quoted",
            TokenKind::BackQuoted => "back_quoted",
            TokenKind::CharCodeConstant => "char_code_constant",
            TokenKind::OpenParen => "open_paren",
            TokenKind::OpenCt => "open_ct",
            TokenKind::CloseParen => "close_paren",
            TokenKind::OpenList => "open_list",
            TokenKind::CloseList => "close_list",
            TokenKind::OpenCurly => "open_curly",
            TokenKind::CloseCurly => "close_curly",
            TokenKind::Comma => "comma",
            TokenKind::Bar => "bar",
            TokenKind::End => "end",
            TokenKind::DictOpen => "dict_open",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: SourceSpan,
    pub layout_before: Vec<LayoutItem>,
}

impl Token {
    pub fn has_layout_before(&self) -> bool {
        !self.layout_before.is_empty()
    }

    /// The atom denoted by a name token, with quotes and escapes resolved.
    pub fn atom_value(&self) -> String {
        if self.kind == TokenKind::Name && self.text.starts_with('\'') {
            decode_quoted(&self.text, &DialectOptions::swi())
                .map(|q| q.value)
                .unwrap_or_else(|_| self.text.clone())
        } else {
            self.text.clone()
        }
    }

    pub fn is_name(&self, value: &str) -> bool {
        self.kind == TokenKind::Name && self.text == value
    }
}

/// Synthetic marker holding the layout that follows the last token.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct EndOfInput {
    pub layout_before: Vec<LayoutItem>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct TokenStream {
    pub tokens: Vec<Token>,
    pub eof: EndOfInput,
}

impl TokenStream {
    /// Reassembles the source text.
    pub fn to_source(&self) -> String {
        let mut out = String::new();
        for tok in &self.tokens {
            for item in &tok.layout_before {
                out.push_str(&item.text);
            }
            out.push_str(&tok.text);
        }
        for item in &self.eof.layout_before {
            out.push_str(&item.text);
        }
        out
    }

    /// Every layout item in source order, including trailing layout.
    pub fn layout_items(&self) -> impl Iterator<Item = &LayoutItem> {
        self.tokens
            .iter()
            .flat_map(|t| t.layout_before.iter())
            .chain(self.eof.layout_before.iter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexErrorKind {
    #[error("unterminated block comment")]
    UnterminatedBlockComment,
    #[error("unterminated quoted token")]
    UnterminatedQuoted,
    #[error("invalid escape sequence `{0}`")]
    InvalidEscape(String),
    #[error("character {0:?} is not allowed here")]
    InvalidCharacter(char),
    #[error("input is not valid UTF-8")]
    InvalidUtf8,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}:{}: {kind}", span.line_start, span.col_start)]
pub struct LexError {
    pub kind: LexErrorKind,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VariableClass {
    Anonymous,
    Named,
}

/// Classifies a variable token. Panics if `tok` is not a variable.
pub fn classify_variable(tok: &Token) -> VariableClass {
    assert_eq!(
        tok.kind,
        TokenKind::Variable,
        "classify_variable called on a {} token",
        tok.kind.as_str()
    );
    if tok.text == "_" {
        VariableClass::Anonymous
    } else {
        VariableClass::Named
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IndentRun {
    Spaces(usize),
    Tabs(usize),
}

/// Leading whitespace of physical line `line` (1-based), as runs of spaces
/// and tabs. Empty when the line starts with anything other than layout
/// whitespace, or does not exist.
pub fn layout_of_line(stream: &TokenStream, line: usize) -> Vec<IndentRun> {
    let mut runs = Vec::new();
    let mut expected_col = 1;
    for item in stream.layout_items() {
        if item.span.line_start < line {
            continue;
        }
        if item.span.line_start > line || item.span.col_start != expected_col {
            break;
        }
        match item.kind {
            LayoutKind::Space => {
                for c in item.text.chars() {
                    push_run(&mut runs, c);
                }
            }
            LayoutKind::Tab => {
                for c in item.text.chars() {
                    push_run(&mut runs, c);
                }
            }
            _ => break,
        }
        expected_col = item.span.col_end;
    }
    runs
}

fn push_run(runs: &mut Vec<IndentRun>, c: char) {
    match (runs.last_mut(), c) {
        (Some(IndentRun::Tabs(n)), '\t') => *n += 1,
        (Some(IndentRun::Spaces(n)), c) if c != '\t' => *n += 1,
        (_, '\t') => runs.push(IndentRun::Tabs(1)),
        _ => runs.push(IndentRun::Spaces(1)),
    }
}

/// Result of scanning the body of a quoted token.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Quoted {
    pub value: String,
    pub unicode_escapes: usize,
    pub unclosed_numeric_escapes: usize,
    pub literal_tabs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum QuotedError {
    Unterminated,
    InvalidEscape { offset: usize, text: String },
    InvalidChar { offset: usize, ch: char },
}

/// Decodes a complete quoted token (`'...'`, `"..."` or `` `...` ``).
pub fn decode_quoted(text: &str, dialect: &DialectOptions) -> Result<Quoted, String> {
    let quote = text.chars().next().ok_or("empty quoted token")?;
    match scan_quoted(text, quote, dialect) {
        Ok((len, q)) if len == text.len() => Ok(q),
        Ok(_) => Err("trailing characters after quoted token".into()),
        Err(QuotedError::Unterminated) => Err("unterminated quoted token".into()),
        Err(QuotedError::InvalidEscape { text, .. }) => Err(format!("invalid escape `{text}`")),
        Err(QuotedError::InvalidChar { ch, .. }) => Err(format!("invalid character {ch:?}")),
    }
}

/// Scans a quoted token starting at `src[0] == quote`. Returns the byte
/// length consumed (including both quotes) and the decoded content.
fn scan_quoted(
    src: &str,
    quote: char,
    dialect: &DialectOptions,
) -> Result<(usize, Quoted), QuotedError> {
    let mut out = Quoted::default();
    let mut chars = src.char_indices().peekable();
    chars.next();
    while let Some((i, c)) = chars.next() {
        match c {
            c if c == quote => {
                if let Some(&(_, next)) = chars.peek() {
                    if next == quote {
                        chars.next();
                        out.value.push(quote);
                        continue;
                    }
                }
                return Ok((i + c.len_utf8(), out));
            }
            '\\' => {
                let (consumed, decoded) = scan_escape(&src[i..], dialect, &mut out)
                    .map_err(|text| QuotedError::InvalidEscape { offset: i, text })?;
                if let Some(ch) = decoded {
                    out.value.push(ch);
                }
                // `consumed` counts the backslash itself
                let end = i + consumed;
                while let Some(&(j, _)) = chars.peek() {
                    if j >= end {
                        break;
                    }
                    chars.next();
                }
            }
            '\n' | '\r' => return Err(QuotedError::Unterminated),
            '\t' => {
                if !dialect.tab_in_quotes {
                    return Err(QuotedError::InvalidChar { offset: i, ch: c });
                }
                out.literal_tabs += 1;
                out.value.push(c);
            }
            c if c.is_control() => return Err(QuotedError::InvalidChar { offset: i, ch: c }),
            c => out.value.push(c),
        }
    }
    Err(QuotedError::Unterminated)
}

/// Scans one escape sequence at `src` (which starts with `\`). Returns the
/// consumed byte length and the character it denotes (None for a line
/// continuation).
fn scan_escape(
    src: &str,
    dialect: &DialectOptions,
    info: &mut Quoted,
) -> Result<(usize, Option<char>), String> {
    let rest = &src[1..];
    let mut it = rest.chars();
    let Some(c) = it.next() else {
        return Err("\\".into());
    };
    let simple = |ch: char| Ok((1 + c.len_utf8(), Some(ch)));
    match c {
        'a' => simple('\x07'),
        'b' => simple('\x08'),
        'f' => simple('\x0c'),
        'n' => simple('\n'),
        'r' => simple('\r'),
        't' => simple('\t'),
        'v' => simple('\x0b'),
        '\\' | '\'' | '"' | '`' => simple(c),
        '\n' => Ok((2, None)),
        '\r' if rest[1..].starts_with('\n') => Ok((3, None)),
        'x' => scan_numeric_escape(src, 2, 16, dialect, info),
        '0'..='7' => scan_numeric_escape(src, 1, 8, dialect, info),
        'u' | 'U' if dialect.unicode_character_escape => {
            let width = if c == 'u' { 4 } else { 8 };
            let digits: String = rest[1..].chars().take(width).collect();
            if digits.len() != width || !digits.chars().all(|d| d.is_ascii_hexdigit()) {
                return Err(format!("\\{c}{digits}"));
            }
            let code = u32::from_str_radix(&digits, 16).map_err(|_| format!("\\{c}{digits}"))?;
            let ch = char::from_u32(code).ok_or_else(|| format!("\\{c}{digits}"))?;
            info.unicode_escapes += 1;
            Ok((2 + width, Some(ch)))
        }
        other => Err(format!("\\{other}")),
    }
}

fn scan_numeric_escape(
    src: &str,
    digits_start: usize,
    radix: u32,
    dialect: &DialectOptions,
    info: &mut Quoted,
) -> Result<(usize, Option<char>), String> {
    let digits: String = src[digits_start..]
        .chars()
        .take_while(|c| c.is_digit(radix))
        .collect();
    let after = digits_start + digits.len();
    let shown = || src[..after.min(src.len())].to_string();
    if digits.is_empty() {
        return Err(shown());
    }
    let code = u32::from_str_radix(&digits, radix).map_err(|_| shown())?;
    let ch = char::from_u32(code).ok_or_else(shown)?;
    if src[after..].starts_with('\\') {
        Ok((after + 1, Some(ch)))
    } else if dialect.missing_closing_backslash {
        info.unclosed_numeric_escapes += 1;
        Ok((after, Some(ch)))
    } else {
        Err(shown())
    }
}

pub fn is_graphic_char(c: char) -> bool {
    matches!(
        c,
        '#' | '$'
            | '&'
            | '*'
            | '+'
            | '-'
            | '.'
            | '/'
            | ':'
            | '<'
            | '='
            | '>'
            | '?'
            | '@'
            | '^'
            | '~'
            | '\\'
    ) || (!c.is_ascii() && !c.is_alphanumeric() && !c.is_whitespace() && !c.is_control())
}

pub fn is_alnum_char(c: char) -> bool {
    c == '_' || c.is_alphanumeric()
}

/// Start of a variable: `_` or a capital letter.
pub fn is_variable_start(c: char) -> bool {
    c == '_' || c.is_uppercase() || (!c.is_ascii() && c.is_alphabetic() && is_titlecase(c))
}

fn is_titlecase(c: char) -> bool {
    !c.is_lowercase() && !c.is_uppercase() && c.to_lowercase().next() != Some(c)
}

/// Start of an unquoted letter-digit atom.
pub fn is_small_letter_start(c: char) -> bool {
    c.is_alphabetic() && !is_variable_start(c)
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
    dialect: &'a DialectOptions,
}

type Pos = (usize, usize, usize);

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_nth(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn mark(&self) -> Pos {
        (self.pos, self.line, self.col)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn bump_bytes(&mut self, n: usize) {
        let end = self.pos + n;
        while self.pos < end {
            self.bump();
        }
    }

    fn span_from(&self, (pos, line, col): Pos) -> SourceSpan {
        SourceSpan::new(pos, self.pos, (line, col), (self.line, self.col))
    }

    fn error(&self, kind: LexErrorKind, start: Pos) -> LexError {
        let mut span = self.span_from(start);
        if span.is_empty() {
            if let Some(c) = self.peek() {
                span.byte_end += c.len_utf8();
                span.col_end += 1;
            }
        }
        LexError { kind, span }
    }

    fn layout(&mut self) -> Result<Vec<LayoutItem>, LexError> {
        let mut items = Vec::new();
        loop {
            let start = self.mark();
            let Some(c) = self.peek() else { break };
            let kind = if self.pos == 0 && self.dialect.shebang && self.rest().starts_with("#!") {
                while matches!(self.peek(), Some(c) if c != '\n' && !self.rest().starts_with("\r\n"))
                {
                    self.bump();
                }
                LayoutKind::Shebang
            } else if c == '\n' {
                self.bump();
                LayoutKind::Newline
            } else if c == '\r' && self.peek_nth(1) == Some('\n') {
                self.bump();
                self.bump();
                LayoutKind::Newline
            } else if c == '\t' {
                while self.peek() == Some('\t') {
                    self.bump();
                }
                LayoutKind::Tab
            } else if c.is_whitespace() {
                while matches!(self.peek(), Some(c) if c.is_whitespace() && c != '\t' && c != '\n')
                    && !self.rest().starts_with("\r\n")
                {
                    self.bump();
                }
                LayoutKind::Space
            } else if c == '%' {
                while matches!(self.peek(), Some(c) if c != '\n')
                    && !self.rest().starts_with("\r\n")
                {
                    self.bump();
                }
                LayoutKind::LineComment
            } else if self.rest().starts_with("/*") {
                self.block_comment(start)?;
                LayoutKind::BlockComment
            } else {
                break;
            };
            items.push(LayoutItem {
                kind,
                text: self.src[start.0..self.pos].to_string(),
                span: self.span_from(start),
            });
        }
        Ok(items)
    }

    fn block_comment(&mut self, start: Pos) -> Result<(), LexError> {
        self.bump_bytes(2);
        let mut depth = 1usize;
        while depth > 0 {
            if self.rest().starts_with("*/") {
                self.bump_bytes(2);
                depth -= 1;
            } else if self.dialect.nested_block_comments && self.rest().starts_with("/*") {
                self.bump_bytes(2);
                depth += 1;
            } else if self.bump().is_none() {
                return Err(LexError {
                    kind: LexErrorKind::UnterminatedBlockComment,
                    span: self.span_from(start),
                });
            }
        }
        Ok(())
    }

    fn run(mut self) -> Result<TokenStream, LexError> {
        let mut tokens: Vec<Token> = Vec::new();
        loop {
            let layout = self.layout()?;
            let start = self.mark();
            let Some(c) = self.peek() else {
                return Ok(TokenStream {
                    tokens,
                    eof: EndOfInput {
                        layout_before: layout,
                        span: self.span_from(start),
                    },
                });
            };
            let prev = tokens.last();
            let glued = layout.is_empty() && prev.is_some();
            let kind = match c {
                '0'..='9' => self.number(start)?,
                c if is_variable_start(c) => {
                    self.bump();
                    self.eat_while(is_alnum_char);
                    TokenKind::Variable
                }
                c if is_small_letter_start(c) => {
                    self.bump();
                    self.eat_while(is_alnum_char);
                    TokenKind::Name
                }
                '\'' | '"' | '`' => {
                    self.quoted(c, start)?;
                    match c {
                        '\'' => TokenKind::Name,
                        '"' => TokenKind::DoubleQuoted,
                        _ => TokenKind::BackQuoted,
                    }
                }
                '(' => {
                    self.bump();
                    if glued && prev.is_some_and(|p| p.kind == TokenKind::Name) {
                        TokenKind::OpenCt
                    } else {
                        TokenKind::OpenParen
                    }
                }
                ')' => self.single(TokenKind::CloseParen),
                '[' => self.single(TokenKind::OpenList),
                ']' => self.single(TokenKind::CloseList),
                '{' => {
                    self.bump();
                    if self.dialect.dicts && glued && prev.is_some_and(is_dict_tag) {
                        TokenKind::DictOpen
                    } else {
                        TokenKind::OpenCurly
                    }
                }
                '}' => self.single(TokenKind::CloseCurly),
                ',' => self.single(TokenKind::Comma),
                '|' => self.single(TokenKind::Bar),
                '!' | ';' => self.single(TokenKind::Name),
                c if is_graphic_char(c) => {
                    self.eat_while(is_graphic_char);
                    let text = &self.src[start.0..self.pos];
                    if text == "." && self.at_end_follower() {
                        TokenKind::End
                    } else {
                        TokenKind::Name
                    }
                }
                c => return Err(self.error(LexErrorKind::InvalidCharacter(c), start)),
            };
            tokens.push(Token {
                kind,
                text: self.src[start.0..self.pos].to_string(),
                span: self.span_from(start),
                layout_before: layout,
            });
        }
    }

    fn single(&mut self, kind: TokenKind) -> TokenKind {
        self.bump();
        kind
    }

    fn eat_while(&mut self, pred: impl Fn(char) -> bool) {
        while matches!(self.peek(), Some(c) if pred(c)) {
            self.bump();
        }
    }

    fn at_end_follower(&self) -> bool {
        match self.peek() {
            None => true,
            Some(c) => c.is_whitespace() || c == '%',
        }
    }

    fn quoted(&mut self, quote: char, start: Pos) -> Result<(), LexError> {
        match scan_quoted(self.rest(), quote, self.dialect) {
            Ok((len, _)) => {
                self.bump_bytes(len);
                Ok(())
            }
            Err(QuotedError::Unterminated) => {
                let mut end = self.pos;
                for (i, c) in self.rest().char_indices() {
                    if i > 0 && (c == '\n' || c == '\r') {
                        break;
                    }
                    end = self.pos + i + c.len_utf8();
                }
                self.bump_bytes(end - self.pos);
                Err(LexError {
                    kind: LexErrorKind::UnterminatedQuoted,
                    span: self.span_from(start),
                })
            }
            Err(QuotedError::InvalidEscape { offset, text }) => {
                self.bump_bytes(offset);
                let at = self.mark();
                self.bump_bytes(text.len().min(self.rest().len()));
                Err(LexError {
                    kind: LexErrorKind::InvalidEscape(text),
                    span: self.span_from(at),
                })
            }
            Err(QuotedError::InvalidChar { offset, ch }) => {
                self.bump_bytes(offset);
                let at = self.mark();
                Err(self.error(LexErrorKind::InvalidCharacter(ch), at))
            }
        }
    }

    fn number(&mut self, start: Pos) -> Result<TokenKind, LexError> {
        let rest = self.rest();
        if rest.starts_with("0'") {
            if let Some(len) = self.char_code_len(start)? {
                self.bump_bytes(len);
                return Ok(TokenKind::CharCodeConstant);
            }
            self.bump();
            return Ok(TokenKind::Integer);
        }
        for (prefix, radix) in [("0x", 16), ("0o", 8), ("0b", 2)] {
            if rest.starts_with(prefix)
                && rest[2..].chars().next().is_some_and(|c| c.is_digit(radix))
            {
                self.bump_bytes(2);
                self.eat_while(|c| c.is_digit(radix));
                return Ok(TokenKind::Integer);
            }
        }
        self.digits();
        let rest = self.rest();
        if rest.starts_with('.') && rest[1..].starts_with(|c: char| c.is_ascii_digit()) {
            self.bump();
            self.eat_while(|c| c.is_ascii_digit());
            self.exponent();
            return Ok(TokenKind::Float);
        }
        if self.dialect.allow_integer_exponential_notation && self.exponent() {
            return Ok(TokenKind::Float);
        }
        Ok(TokenKind::Integer)
    }

    fn digits(&mut self) {
        self.eat_while(|c| c.is_ascii_digit());
        if self.dialect.digit_groups {
            while self.rest().starts_with('_')
                && self.rest()[1..].starts_with(|c: char| c.is_ascii_digit())
            {
                self.bump();
                self.eat_while(|c| c.is_ascii_digit());
            }
        }
    }

    /// Consumes an exponent part if a complete one follows.
    fn exponent(&mut self) -> bool {
        let rest = self.rest().as_bytes();
        if !matches!(rest.first(), Some(b'e' | b'E')) {
            return false;
        }
        let mut i = 1;
        if matches!(rest.get(1), Some(b'+' | b'-')) {
            i = 2;
        }
        if !rest.get(i).is_some_and(|b| b.is_ascii_digit()) {
            return false;
        }
        self.bump_bytes(i);
        self.eat_while(|c| c.is_ascii_digit());
        true
    }

    /// Length of a character code constant starting at `0'`, or None when
    /// the text only supports the integer `0`.
    fn char_code_len(&self, start: Pos) -> Result<Option<usize>, LexError> {
        let body = &self.rest()[2..];
        let Some(c) = body.chars().next() else {
            return Ok(None);
        };
        match c {
            '\'' => {
                if body[1..].starts_with('\'') {
                    Ok(Some(4))
                } else if self.dialect.single_quote_char_constant {
                    Ok(Some(3))
                } else {
                    Ok(None)
                }
            }
            '\\' => {
                let mut info = Quoted::default();
                match scan_escape(body, self.dialect, &mut info) {
                    Ok((_, None)) => Ok(None),
                    Ok((len, Some(_))) => Ok(Some(2 + len)),
                    Err(text) => {
                        let mut span = self.span_from(start);
                        span.byte_end = start.0 + 2 + text.len();
                        span.col_end = start.2 + 2 + text.chars().count();
                        Err(LexError {
                            kind: LexErrorKind::InvalidEscape(text),
                            span,
                        })
                    }
                }
            }
            '\t' if self.dialect.tab_in_quotes => Ok(Some(3)),
            c if c.is_control() => Ok(None),
            c => Ok(Some(2 + c.len_utf8())),
        }
    }
}

fn is_dict_tag(tok: &Token) -> bool {
    match tok.kind {
        TokenKind::Variable => true,
        TokenKind::Name => tok
            .text
            .chars()
            .next()
            .is_some_and(|c| c == '\'' || is_small_letter_start(c)),
        _ => false,
    }
}

/// Splits `source` into tokens.
pub fn tokenize(source: &str, dialect: &DialectOptions) -> Result<TokenStream, LexError> {
    Lexer {
        src: source,
        pos: 0,
        line: 1,
        col: 1,
        dialect,
    }
    .run()
}

/// Like [`tokenize`] but starting from raw bytes.
pub fn tokenize_bytes(bytes: &[u8], dialect: &DialectOptions) -> Result<TokenStream, LexError> {
    match std::str::from_utf8(bytes) {
        Ok(s) => tokenize(s, dialect),
        Err(e) => {
            let valid = &bytes[..e.valid_up_to()];
            let text = String::from_utf8_lossy(valid);
            let line = 1 + text.matches('\n').count();
            let col = 1 + text.rsplit('\n').next().map_or(0, |l| l.chars().count());
            Err(LexError {
                kind: LexErrorKind::InvalidUtf8,
                span: SourceSpan::new(
                    e.valid_up_to(),
                    e.valid_up_to() + 1,
                    (line, col),
                    (line, col + 1),
                ),
            })
        }
    }
}
