//! Settings from `.prolintrc` files, the environment and the command line.
//!
//! A config file is a flat list of `key = value` lines; `#` starts a
//! comment. Keys are dialect flags, style and quality options, corpus
//! limits, `dialect` and `format`. Later sources override earlier ones:
//! profile defaults, then the config file, then command-line flags.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use prolint_core::corpus::Limits;
use prolint_core::optable::{DialectOptions, OperatorTable, Profile};
use prolint_core::options::{QualityOptions, StyleOptions};
use thiserror::Error;

pub const CONFIG_FILE: &str = ".prolintrc";
pub const CONFIG_ENV: &str = "PROLINT_CONFIG";

const LIMIT_KEYS: [&str; 4] = ["timeout_seconds", "max_bytes", "max_lines", "long_line_limit"];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}:{line}: expected `key = value`, found `{text}`")]
    Syntax { origin: String, line: usize, text: String },
    #[error("{origin}: unknown option `{key}`")]
    UnknownKey { origin: String, key: String },
    #[error("{origin}: invalid value `{value}` for `{key}`: {reason}")]
    Invalid {
        origin: String,
        key: String,
        value: String,
        reason: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

/// One `key = value` setting and where it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub origin: String,
}

impl Entry {
    pub fn new(key: &str, value: &str, origin: &str) -> Self {
        Self {
            key: key.trim().to_string(),
            value: value.trim().to_string(),
            origin: origin.to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Config {
    pub profile: Profile,
    pub dialect: DialectOptions,
    pub style: StyleOptions,
    pub quality: QualityOptions,
    pub limits: Limits,
    pub format: OutputFormat,
    /// Config file that was loaded, if any.
    pub source: Option<PathBuf>,
}

impl Config {
    pub fn table(&self) -> OperatorTable {
        OperatorTable::default_table(self.profile)
    }
}

/// Splits config text into entries.
pub fn parse_config_text(text: &str, origin: &str) -> Result<Vec<Entry>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match line.split_once('=') {
            Some((k, v)) if !k.trim().is_empty() => out.push(Entry::new(k, v, &format!("{origin}:{}", i + 1))),
            _ => {
                return Err(ConfigError::Syntax {
                    origin: origin.into(),
                    line: i + 1,
                    text: line.into(),
                })
            }
        }
    }
    Ok(out)
}

/// Parses a `--set key=value` argument.
pub fn parse_set_arg(arg: &str) -> Result<Entry, ConfigError> {
    match arg.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok(Entry::new(k, v, "--set")),
        _ => Err(ConfigError::Syntax {
            origin: "--set".into(),
            line: 1,
            text: arg.into(),
        }),
    }
}

/// Looks for `.prolintrc` in `start` and its ancestors.
pub fn discover(start: &Path) -> Option<PathBuf> {
    let start = if start.is_file() { start.parent()? } else { start };
    // `f.pl` has an empty parent.
    let start = if start.as_os_str().is_empty() { Path::new(".") } else { start };
    let start = start.canonicalize().ok()?;
    start.ancestors().map(|d| d.join(CONFIG_FILE)).find(|p| p.is_file())
}

/// Picks the config file: an explicit path, then `PROLINT_CONFIG`, then
/// discovery from `target`.
pub fn locate(explicit: Option<&Path>, env: Option<&str>, target: &Path) -> Option<PathBuf> {
    if let Some(p) = explicit {
        return Some(p.to_path_buf());
    }
    if let Some(e) = env.filter(|e| !e.is_empty()) {
        return Some(PathBuf::from(e));
    }
    discover(target)
}

pub fn load_file(path: &Path) -> Result<Vec<Entry>, ConfigError> {
    let text = fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    parse_config_text(&text, &path.display().to_string())
}

fn invalid(e: &Entry, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        origin: e.origin.clone(),
        key: e.key.clone(),
        value: e.value.clone(),
        reason: reason.into(),
    }
}

fn bool_value(e: &Entry) -> Result<bool, ConfigError> {
    match e.value.as_str() {
        "yes" | "true" | "on" => Ok(true),
        "no" | "false" | "off" => Ok(false),
        _ => Err(invalid(e, "expected yes or no")),
    }
}

fn number<T: std::str::FromStr>(e: &Entry) -> Result<T, ConfigError> {
    e.value.parse().map_err(|_| invalid(e, "expected a non-negative number"))
}

/// Builds a config from entries in increasing precedence. The `dialect`
/// key picks the profile before any flag is applied, so flags always
/// refine the profile no matter where they appear.
pub fn build(entries: &[Entry], source: Option<PathBuf>) -> Result<Config, ConfigError> {
    let mut profile = Profile::Swi;
    for e in entries.iter().filter(|e| e.key == "dialect") {
        profile = e.value.parse().map_err(|r: String| invalid(e, r))?;
    }
    let mut cfg = Config {
        profile,
        dialect: DialectOptions::profile(profile),
        style: StyleOptions::default(),
        quality: QualityOptions::default(),
        limits: Limits::default(),
        format: OutputFormat::Text,
        source,
    };
    for e in entries {
        let key = e.key.as_str();
        if key == "dialect" {
            continue;
        } else if DialectOptions::FLAGS.contains(&key) {
            let v = bool_value(e)?;
            cfg.dialect.set(key, v).expect("flag is registered");
        } else if StyleOptions::is_key(key) {
            cfg.style.set(key, &e.value).map_err(|err| invalid(e, reason(err)))?;
        } else if QualityOptions::is_key(key) {
            cfg.quality.set(key, &e.value).map_err(|err| invalid(e, reason(err)))?;
        } else if LIMIT_KEYS.contains(&key) {
            match key {
                "timeout_seconds" => {
                    let secs: f64 = number(e)?;
                    if !secs.is_finite() || secs <= 0.0 {
                        return Err(invalid(e, "expected a positive number of seconds"));
                    }
                    cfg.limits.timeout = Duration::from_secs_f64(secs);
                }
                "max_bytes" => cfg.limits.max_bytes = number(e)?,
                "max_lines" => cfg.limits.max_lines = number(e)?,
                _ => cfg.limits.long_line_limit = number(e)?,
            }
        } else if key == "format" {
            cfg.format = match e.value.as_str() {
                "text" => OutputFormat::Text,
                "json" => OutputFormat::Json,
                _ => return Err(invalid(e, "expected text or json")),
            };
        } else {
            return Err(ConfigError::UnknownKey {
                origin: e.origin.clone(),
                key: e.key.clone(),
            });
        }
    }
    Ok(cfg)
}

fn reason(e: prolint_core::options::OptionError) -> String {
    match e {
        prolint_core::options::OptionError::InvalidValue { reason, .. } => reason,
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use prolint_core::options::Setting;

    #[test]
    fn file_then_flags() {
        let mut entries = parse_config_text("# comment\nmax_line_length = 100\ndicts = no\n\ndialect = iso\n", "rc").unwrap();
        entries.push(parse_set_arg("max_line_length=120").unwrap());
        let cfg = build(&entries, None).unwrap();
        assert_eq!(cfg.profile, Profile::Iso);
        assert_eq!(cfg.style.max_line_length, Setting::Check(120));
        assert!(!cfg.dialect.dicts);
    }

    #[test]
    fn flags_refine_profile_regardless_of_order() {
        let entries = vec![Entry::new("dicts", "yes", "a"), Entry::new("dialect", "iso", "b")];
        let cfg = build(&entries, None).unwrap();
        assert!(cfg.dialect.dicts);
        assert!(!cfg.dialect.digit_groups);
    }

    #[test]
    fn errors() {
        assert!(matches!(build(&[Entry::new("colour", "red", "x")], None), Err(ConfigError::UnknownKey { .. })));
        assert!(matches!(build(&[Entry::new("indent", "99", "x")], None), Err(ConfigError::Invalid { .. })));
        assert!(matches!(parse_config_text("just words\n", "x"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(build(&[Entry::new("timeout_seconds", "0", "x")], None), Err(ConfigError::Invalid { .. })));
    }
}
