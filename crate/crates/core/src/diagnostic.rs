//! Findings reported by the style and quality checkers.

use std::fmt;

use serde::Serialize;

use crate::span::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

/// Every rule id a diagnostic can carry.
pub const RULES: &[(&str, &str)] = &[
    ("cov_2_1", "indentation uses one kind of whitespace"),
    ("cov_2_2", "indentation depth is a multiple of the indent unit"),
    ("cov_2_3", "line length limit"),
    ("cov_2_4", "subgoal and line limits per clause"),
    ("cov_2_5", "space after argument-list comma"),
    ("cov_2_6", "newline after each clause"),
    ("cov_2_7", "newline after the rule operator and after each subgoal"),
    ("cov_2_14", "goals between repeat and cut are indented"),
    ("style.trailing_whitespace", "no trailing whitespace"),
    ("cov_3_1", "consistent predicate naming"),
    ("cov_3_4", "consistent variable naming"),
    ("cov_3_12", "predicate names match the naming convention"),
    ("syntax.error", "file must parse"),
];

pub fn is_rule_id(id: &str) -> bool {
    RULES.iter().any(|(r, _)| *r == id)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub rule_id: &'static str,
    pub severity: Severity,
    pub message: String,
    pub file: String,
    pub span: SourceSpan,
}

impl Diagnostic {
    pub fn warning(rule_id: &'static str, file: &str, span: SourceSpan, message: impl Into<String>) -> Self {
        debug_assert!(is_rule_id(rule_id), "unregistered rule {rule_id}");
        Self {
            rule_id,
            severity: Severity::Warning,
            message: message.into(),
            file: file.to_string(),
            span,
        }
    }

    pub fn sort_key(&self) -> (&str, usize, &str, usize) {
        (&self.file, self.span.byte_start, self.rule_id, self.span.byte_end)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}: {} [{}] {}",
            self.file, self.span.line_start, self.span.col_start, self.severity, self.rule_id, self.message
        )
    }
}

/// Orders diagnostics by file, position and rule.
pub fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by(|a, b| {
        a.sort_key()
            .cmp(&b.sort_key())
            .then_with(|| a.message.cmp(&b.message))
    });
}
