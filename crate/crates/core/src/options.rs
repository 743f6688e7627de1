//! Style and quality rule settings.
//!
//! Every setting is `off`, `check(value)` or `infer`. Values are written
//! either bare (`80`, `yes`, `tab`) or wrapped (`check(80)`).

use std::fmt;

use regex::Regex;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OptionError {
    #[error("unknown option `{0}`")]
    UnknownKey(String),
    #[error("invalid value `{value}` for `{key}`: {reason}")]
    InvalidValue {
        key: String,
        value: String,
        reason: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Setting<T> {
    Off,
    Check(T),
    Infer,
}

impl<T: Copy> Setting<T> {
    pub fn checked(&self) -> Option<T> {
        match self {
            Setting::Check(v) => Some(*v),
            _ => None,
        }
    }

    pub fn is_infer(&self) -> bool {
        matches!(self, Setting::Infer)
    }
}

impl<T: fmt::Display> fmt::Display for Setting<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Setting::Off => f.write_str("off"),
            Setting::Infer => f.write_str("infer"),
            Setting::Check(v) => write!(f, "check({v})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndentUnit {
    Spaces(u8),
    Tab,
}

impl IndentUnit {
    pub fn as_text(self) -> String {
        match self {
            IndentUnit::Spaces(n) => " ".repeat(n as usize),
            IndentUnit::Tab => "\t".into(),
        }
    }
}

impl fmt::Display for IndentUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndentUnit::Spaces(n) => write!(f, "{n}"),
            IndentUnit::Tab => f.write_str("tab"),
        }
    }
}

/// Displays booleans the way they are configured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct YesNo(pub bool);

impl fmt::Display for YesNo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.0 { "yes" } else { "no" })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StyleOptions {
    pub indent: Setting<IndentUnit>,
    pub max_line_length: Setting<usize>,
    pub max_subgoals: Setting<usize>,
    pub max_rule_lines: Setting<usize>,
    pub space_after_arglist_comma: Setting<bool>,
    pub newline_after_clause: Setting<bool>,
    pub newline_after_rule_op: Setting<bool>,
    pub newline_after_subgoal: Setting<bool>,
    pub indent_between_repeat_cut: Setting<bool>,
    pub no_trailing_whitespace: Setting<bool>,
}

impl Default for StyleOptions {
    fn default() -> Self {
        Self {
            indent: Setting::Check(IndentUnit::Spaces(4)),
            max_line_length: Setting::Check(80),
            max_subgoals: Setting::Off,
            max_rule_lines: Setting::Off,
            space_after_arglist_comma: Setting::Check(true),
            newline_after_clause: Setting::Check(true),
            newline_after_rule_op: Setting::Check(true),
            newline_after_subgoal: Setting::Check(true),
            indent_between_repeat_cut: Setting::Check(true),
            no_trailing_whitespace: Setting::Check(true),
        }
    }
}

pub const STYLE_KEYS: [&str; 10] = [
    "indent",
    "max_line_length",
    "max_subgoals",
    "max_rule_lines",
    "space_after_arglist_comma",
    "newline_after_clause",
    "newline_after_rule_op",
    "newline_after_subgoal",
    "indent_between_repeat_cut",
    "no_trailing_whitespace",
];

fn invalid(key: &str, value: &str, reason: impl Into<String>) -> OptionError {
    OptionError::InvalidValue {
        key: key.into(),
        value: value.into(),
        reason: reason.into(),
    }
}

/// Splits `off`, `infer`, `check(x)` and bare `x`.
fn parse_setting<T>(
    key: &str,
    raw: &str,
    inner: impl Fn(&str) -> Result<T, String>,
) -> Result<Setting<T>, OptionError> {
    let raw = raw.trim();
    match raw {
        "off" => return Ok(Setting::Off),
        "infer" => return Ok(Setting::Infer),
        _ => {}
    }
    let value = raw
        .strip_prefix("check(")
        .and_then(|r| r.strip_suffix(')'))
        .unwrap_or(raw)
        .trim();
    inner(value).map(Setting::Check).map_err(|e| invalid(key, raw, e))
}

fn parse_bool(v: &str) -> Result<bool, String> {
    match v {
        "yes" | "true" => Ok(true),
        "no" | "false" => Ok(false),
        _ => Err("expected yes or no".into()),
    }
}

fn parse_bounded(lo: usize, hi: usize) -> impl Fn(&str) -> Result<usize, String> {
    move |v| match v.parse::<usize>() {
        Ok(n) if (lo..=hi).contains(&n) => Ok(n),
        _ => Err(format!("expected an integer in {lo}..{hi}")),
    }
}

fn parse_indent(v: &str) -> Result<IndentUnit, String> {
    if v == "tab" {
        return Ok(IndentUnit::Tab);
    }
    match v.parse::<u8>() {
        Ok(n) if (1..=16).contains(&n) => Ok(IndentUnit::Spaces(n)),
        _ => Err("expected tab or an integer in 1..16".into()),
    }
}

impl StyleOptions {
    /// Every setting switched off.
    pub fn all_off() -> Self {
        Self {
            indent: Setting::Off,
            max_line_length: Setting::Off,
            max_subgoals: Setting::Off,
            max_rule_lines: Setting::Off,
            space_after_arglist_comma: Setting::Off,
            newline_after_clause: Setting::Off,
            newline_after_rule_op: Setting::Off,
            newline_after_subgoal: Setting::Off,
            indent_between_repeat_cut: Setting::Off,
            no_trailing_whitespace: Setting::Off,
        }
    }

    /// Every setting in infer mode.
    pub fn all_infer() -> Self {
        Self {
            indent: Setting::Infer,
            max_line_length: Setting::Infer,
            max_subgoals: Setting::Infer,
            max_rule_lines: Setting::Infer,
            space_after_arglist_comma: Setting::Infer,
            newline_after_clause: Setting::Infer,
            newline_after_rule_op: Setting::Infer,
            newline_after_subgoal: Setting::Infer,
            indent_between_repeat_cut: Setting::Infer,
            no_trailing_whitespace: Setting::Infer,
        }
    }

    pub fn is_key(key: &str) -> bool {
        STYLE_KEYS.contains(&key)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), OptionError> {
        match key {
            "indent" => self.indent = parse_setting(key, value, parse_indent)?,
            "max_line_length" => self.max_line_length = parse_setting(key, value, parse_bounded(1, 10_000))?,
            "max_subgoals" => self.max_subgoals = parse_setting(key, value, parse_bounded(0, 100_000))?,
            "max_rule_lines" => self.max_rule_lines = parse_setting(key, value, parse_bounded(1, 1_000_000))?,
            "space_after_arglist_comma" => self.space_after_arglist_comma = parse_setting(key, value, parse_bool)?,
            "newline_after_clause" => self.newline_after_clause = parse_setting(key, value, parse_bool)?,
            "newline_after_rule_op" => self.newline_after_rule_op = parse_setting(key, value, parse_bool)?,
            "newline_after_subgoal" => self.newline_after_subgoal = parse_setting(key, value, parse_bool)?,
            "indent_between_repeat_cut" => self.indent_between_repeat_cut = parse_setting(key, value, parse_bool)?,
            "no_trailing_whitespace" => self.no_trailing_whitespace = parse_setting(key, value, parse_bool)?,
            _ => return Err(OptionError::UnknownKey(key.into())),
        }
        Ok(())
    }

    /// Current settings as `key = value` pairs, in [`STYLE_KEYS`] order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let b = |s: Setting<bool>| match s {
            Setting::Check(v) => Setting::Check(YesNo(v)).to_string(),
            Setting::Off => "off".into(),
            Setting::Infer => "infer".into(),
        };
        vec![
            ("indent", self.indent.to_string()),
            ("max_line_length", self.max_line_length.to_string()),
            ("max_subgoals", self.max_subgoals.to_string()),
            ("max_rule_lines", self.max_rule_lines.to_string()),
            ("space_after_arglist_comma", b(self.space_after_arglist_comma)),
            ("newline_after_clause", b(self.newline_after_clause)),
            ("newline_after_rule_op", b(self.newline_after_rule_op)),
            ("newline_after_subgoal", b(self.newline_after_subgoal)),
            ("indent_between_repeat_cut", b(self.indent_between_repeat_cut)),
            ("no_trailing_whitespace", b(self.no_trailing_whitespace)),
        ]
    }

    /// Names of settings in infer mode.
    pub fn infer_keys(&self) -> Vec<&'static str> {
        self.entries()
            .into_iter()
            .filter(|(_, v)| v == "infer")
            .map(|(k, _)| k)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamingStyle {
    Underscore,
    CamelCase,
    /// Whichever style the majority of the file's identifiers use.
    Consistent,
}

impl fmt::Display for NamingStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NamingStyle::Underscore => "underscore",
            NamingStyle::CamelCase => "camel_case",
            NamingStyle::Consistent => "consistent",
        })
    }
}

fn parse_naming(v: &str) -> Result<NamingStyle, String> {
    match v {
        "underscore" => Ok(NamingStyle::Underscore),
        "camel_case" => Ok(NamingStyle::CamelCase),
        "consistent" => Ok(NamingStyle::Consistent),
        _ => Err("expected underscore, camel_case or consistent".into()),
    }
}

pub const DEFAULT_PREDICATE_NAME_PATTERN: &str = "^[a-z][a-zA-Z0-9_]*$";

#[derive(Debug, Clone)]
pub struct QualityOptions {
    pub predicate_naming_style: Setting<NamingStyle>,
    pub variable_naming_style: Setting<NamingStyle>,
    /// Predicate names must match this pattern when set.
    pub naming_convention_3_12: Option<Regex>,
}

impl Default for QualityOptions {
    fn default() -> Self {
        Self {
            predicate_naming_style: Setting::Check(NamingStyle::Consistent),
            variable_naming_style: Setting::Check(NamingStyle::Consistent),
            naming_convention_3_12: Some(Regex::new(DEFAULT_PREDICATE_NAME_PATTERN).expect("valid default pattern")),
        }
    }
}

impl PartialEq for QualityOptions {
    fn eq(&self, other: &Self) -> bool {
        self.predicate_naming_style == other.predicate_naming_style
            && self.variable_naming_style == other.variable_naming_style
            && self.naming_convention_3_12.as_ref().map(Regex::as_str)
                == other.naming_convention_3_12.as_ref().map(Regex::as_str)
    }
}

pub const QUALITY_KEYS: [&str; 4] = [
    "predicate_naming_style",
    "variable_naming_style",
    "naming_convention_3_12",
    "naming_convention_3_12_pattern",
];

impl QualityOptions {
    pub fn all_off() -> Self {
        Self {
            predicate_naming_style: Setting::Off,
            variable_naming_style: Setting::Off,
            naming_convention_3_12: None,
        }
    }

    pub fn is_key(key: &str) -> bool {
        QUALITY_KEYS.contains(&key)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), OptionError> {
        let no_infer = |s: Setting<NamingStyle>| match s {
            Setting::Infer => Err(invalid(key, value, "infer is not supported for naming rules")),
            other => Ok(other),
        };
        match key {
            "predicate_naming_style" => {
                self.predicate_naming_style = no_infer(parse_setting(key, value, parse_naming)?)?;
            }
            "variable_naming_style" => {
                self.variable_naming_style = no_infer(parse_setting(key, value, parse_naming)?)?;
            }
            "naming_convention_3_12" => {
                let on = parse_setting(key, value, |v| match v {
                    "enabled" | "yes" => Ok(true),
                    "no" => Ok(false),
                    _ => Err("expected off or enabled".to_string()),
                })?;
                self.naming_convention_3_12 = match on {
                    Setting::Check(true) => Some(
                        self.naming_convention_3_12
                            .clone()
                            .unwrap_or_else(|| Regex::new(DEFAULT_PREDICATE_NAME_PATTERN).expect("valid pattern")),
                    ),
                    Setting::Infer => return Err(invalid(key, value, "infer is not supported")),
                    _ => None,
                };
            }
            "naming_convention_3_12_pattern" => {
                let re = Regex::new(value.trim()).map_err(|e| invalid(key, value, e.to_string()))?;
                self.naming_convention_3_12 = Some(re);
            }
            _ => return Err(OptionError::UnknownKey(key.into())),
        }
        Ok(())
    }
}
