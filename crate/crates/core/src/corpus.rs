//! Batch analysis of a directory of packages: per-file layout metrics,
//! dialect feature usage, and aggregate histograms.
//!
//! Each immediate subdirectory of the corpus root is one package. Operator
//! definitions are collected from all files of a package before any of its
//! files is analyzed, since a file may use operators declared elsewhere in
//! the package.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;
use walkdir::WalkDir;

use crate::ast::{op_declarations, term_to_ast, Ast};
use crate::cst::{CstLabel, CstNode};
use crate::lexer::{decode_quoted, tokenize, LayoutKind, TokenKind, TokenStream};
use crate::optable::{DialectOptions, OpClass, OperatorTable};
use crate::parser::{parse_program_recovering, parse_term, ParseErrorKind};
use crate::style::{indentation_class, indented_lines, layout_counts, rule_metrics, IndentationClass, SourceLines};

pub const PROLOG_EXTENSIONS: [&str; 3] = ["pl", "pro", "prolog"];
pub const HISTOGRAM_BINS: usize = 26;
pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read corpus directory {path}: {source}")]
    Walk {
        path: String,
        #[source]
        source: walkdir::Error,
    },
    #[error("CSV output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON output failed: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Limits {
    #[serde(rename = "timeout_seconds", serialize_with = "as_seconds")]
    pub timeout: Duration,
    pub max_bytes: u64,
    pub max_lines: usize,
    pub long_line_limit: usize,
}

fn as_seconds<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            timeout: Duration::from_secs(10),
            max_bytes: 1024 * 1024,
            max_lines: 20_000,
            long_line_limit: 80,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    Shebang,
    DigitGroups,
    Dicts,
    UnicodeCharacterEscape,
    MissingClosingBackslash,
    SingleQuoteCharConstant,
    ZeroArgumentsCompound,
    TabInQuotes,
    IntegerExponentialNotation,
}

impl Feature {
    pub const ALL: [Feature; 9] = [
        Feature::Shebang,
        Feature::DigitGroups,
        Feature::Dicts,
        Feature::UnicodeCharacterEscape,
        Feature::MissingClosingBackslash,
        Feature::SingleQuoteCharConstant,
        Feature::ZeroArgumentsCompound,
        Feature::TabInQuotes,
        Feature::IntegerExponentialNotation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Feature::Shebang => "shebang",
            Feature::DigitGroups => "digit_groups",
            Feature::Dicts => "dicts",
            Feature::UnicodeCharacterEscape => "unicode_character_escape",
            Feature::MissingClosingBackslash => "missing_closing_backslash",
            Feature::SingleQuoteCharConstant => "single_quote_char_constant",
            Feature::ZeroArgumentsCompound => "zero_arguments_compound",
            Feature::TabInQuotes => "tab_in_quotes",
            Feature::IntegerExponentialNotation => "integer_exponential_notation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parsed {
    Yes,
    No,
    Skipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    TooLarge,
    TooLong,
    Timeout,
    Unreadable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileStats {
    pub path: String,
    pub package: String,
    pub line_count: usize,
    pub parsed: Parsed,
    pub skip_reason: Option<SkipReason>,
    pub syntax_errors: usize,
    pub clause_count: usize,
    pub fact_only: bool,
    pub max_subgoals: usize,
    pub max_rule_lines: usize,
    pub long_line_count: usize,
    pub indentation_class: IndentationClass,
    pub missing_space_after_comma_count: usize,
    pub trailing_whitespace_line_count: usize,
    pub missing_newline_after_rule_op_count: usize,
    pub missing_newline_after_subgoal_count: usize,
    pub missing_newline_after_clause_count: usize,
    pub feature_counts: BTreeMap<Feature, usize>,
}

impl FileStats {
    fn empty(path: &str, package: &str) -> Self {
        Self {
            path: path.into(),
            package: package.into(),
            line_count: 0,
            parsed: Parsed::Yes,
            skip_reason: None,
            syntax_errors: 0,
            clause_count: 0,
            fact_only: false,
            max_subgoals: 0,
            max_rule_lines: 0,
            long_line_count: 0,
            indentation_class: IndentationClass::NoIndentation,
            missing_space_after_comma_count: 0,
            trailing_whitespace_line_count: 0,
            missing_newline_after_rule_op_count: 0,
            missing_newline_after_subgoal_count: 0,
            missing_newline_after_clause_count: 0,
            feature_counts: Feature::ALL.iter().map(|f| (*f, 0)).collect(),
        }
    }

    fn skipped(mut self, reason: SkipReason) -> Self {
        self.parsed = Parsed::Skipped;
        self.skip_reason = Some(reason);
        self
    }
}

/// Counts uses of dialect features in a token stream and its CST.
pub fn detect_features(stream: &TokenStream, cst: Option<&CstNode>, dialect: &DialectOptions) -> BTreeMap<Feature, usize> {
    let mut counts: BTreeMap<Feature, usize> = Feature::ALL.iter().map(|f| (*f, 0)).collect();
    let mut bump = |f: Feature, n: usize| *counts.get_mut(&f).expect("all features present") += n;
    for item in stream.layout_items() {
        if item.kind == LayoutKind::Shebang {
            bump(Feature::Shebang, 1);
        }
    }
    for tok in &stream.tokens {
        match tok.kind {
            TokenKind::Integer if tok.text.contains('_') => bump(Feature::DigitGroups, 1),
            TokenKind::Float if !tok.text.contains('.') => bump(Feature::IntegerExponentialNotation, 1),
            TokenKind::CharCodeConstant if tok.text == "0''" => bump(Feature::SingleQuoteCharConstant, 1),
            TokenKind::Name | TokenKind::DoubleQuoted | TokenKind::BackQuoted
                if tok.text.starts_with(['\'', '"', '`']) =>
            {
                if let Ok(q) = decode_quoted(&tok.text, dialect) {
                    bump(Feature::UnicodeCharacterEscape, q.unicode_escapes);
                    bump(Feature::MissingClosingBackslash, q.unclosed_numeric_escapes);
                    bump(Feature::TabInQuotes, q.literal_tabs);
                }
            }
            _ => {}
        }
    }
    if let Some(cst) = cst {
        let mut stack = vec![cst];
        while let Some(node) = stack.pop() {
            match node.label {
                CstLabel::Dict => bump(Feature::Dicts, 1),
                CstLabel::Compound if node.nodes().next().is_none() => bump(Feature::ZeroArgumentsCompound, 1),
                _ => {}
            }
            stack.extend(node.nodes());
        }
    }
    counts
}

/// Operators collected from a package, with warnings about unreadable
/// files and conflicting redefinitions.
#[derive(Debug, Clone)]
pub struct CollectedOperators {
    pub table: OperatorTable,
    pub warnings: Vec<String>,
}

/// Folds the `op/3` directives of `files` (in sorted path order) into
/// `base`. Only clauses starting with `:-` are parsed.
pub fn collect_operators(files: &[PathBuf], base: &OperatorTable, dialect: &DialectOptions) -> CollectedOperators {
    let mut files = files.to_vec();
    files.sort();
    let mut table = base.clone();
    let mut warnings = Vec::new();
    let mut seen: BTreeMap<(String, OpClass), (u16, String, String)> = BTreeMap::new();
    for path in &files {
        let shown = path.display().to_string();
        let source = match fs::read(path) {
            Ok(bytes) => String::from_utf8_lossy(strip_bom(&bytes)).into_owned(),
            Err(e) => {
                warnings.push(format!("{shown}: cannot read: {e}"));
                continue;
            }
        };
        let stream = match tokenize(&source, dialect) {
            Ok(s) => s,
            Err(e) => {
                warnings.push(format!("{shown}: {e}"));
                continue;
            }
        };
        let toks = &stream.tokens;
        let mut start = 0;
        while start < toks.len() {
            let end = (start..toks.len())
                .find(|&i| toks[i].kind == TokenKind::End)
                .unwrap_or(toks.len() - 1);
            if toks[start].is_name(":-") {
                if let Ok((node, _)) = parse_term(&toks[start..end], 1200, &table, dialect) {
                    if let Ast::Prefix { op, arg, .. } = term_to_ast(&node) {
                        if op == ":-" {
                            for decl in op_declarations(&arg) {
                                let names: Vec<&str> = decl.names.iter().map(String::as_str).collect();
                                match table.apply_op_directive(decl.priority, &decl.specifier, &names) {
                                    Ok(t) => {
                                        table = t;
                                        let spec = decl.specifier.parse::<crate::optable::Specifier>().expect("validated");
                                        for name in &decl.names {
                                            let key = (name.clone(), spec.class());
                                            let now = (decl.priority as u16, decl.specifier.clone(), shown.clone());
                                            if let Some(prev) = seen.get(&key) {
                                                if (prev.0, &prev.1) != (now.0, &now.1) {
                                                    warnings.push(format!(
                                                        "operator `{name}` redefined from op({}, {}) in {} to op({}, {}) in {shown}",
                                                        prev.0, prev.1, prev.2, now.0, now.1
                                                    ));
                                                }
                                            }
                                            seen.insert(key, now);
                                        }
                                    }
                                    Err(e) => warnings.push(format!("{shown}: {e}")),
                                }
                            }
                        }
                    }
                }
            }
            start = end + 1;
        }
    }
    CollectedOperators { table, warnings }
}

fn strip_bom(bytes: &[u8]) -> &[u8] {
    bytes.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(bytes)
}

/// Analyzes one file's text. `deadline` bounds the parse.
pub fn analyze_source(
    path: &str,
    package: &str,
    source: &str,
    table: &OperatorTable,
    dialect: &DialectOptions,
    limits: &Limits,
    deadline: Option<Instant>,
) -> FileStats {
    let mut stats = FileStats::empty(path, package);
    let lines = SourceLines::new(source);
    stats.line_count = lines.count();
    if stats.line_count > limits.max_lines {
        return stats.skipped(SkipReason::TooLong);
    }
    let stream = match tokenize(source, dialect) {
        Ok(s) => s,
        Err(_) => {
            stats.parsed = Parsed::No;
            stats.syntax_errors = 1;
            return stats;
        }
    };
    let outcome = match parse_program_recovering(&stream, table, dialect, deadline) {
        Ok(o) => o,
        Err(e) if e.kind == ParseErrorKind::Timeout => return FileStats::empty(path, package).skipped(SkipReason::Timeout),
        Err(_) => unreachable!("only timeouts fail a recovering parse"),
    };
    if deadline.is_some_and(|d| Instant::now() >= d) {
        return FileStats::empty(path, package).skipped(SkipReason::Timeout);
    }
    let cst = &outcome.cst;
    stats.syntax_errors = outcome.errors.len();
    if stats.syntax_errors > 0 {
        stats.parsed = Parsed::No;
    }
    let metrics = rule_metrics(cst);
    stats.clause_count = metrics.len();
    let rules = cst
        .clauses()
        .filter(|c| c.label == CstLabel::Clause && c.rule_parts().is_some())
        .count();
    stats.fact_only = stats.parsed == Parsed::Yes && stats.clause_count > 0 && rules == 0;
    let clauses = metrics.iter().filter(|m| !m.is_directive);
    stats.max_subgoals = clauses.clone().map(|m| m.subgoals).max().unwrap_or(0);
    stats.max_rule_lines = clauses.map(|m| m.lines).max().unwrap_or(0);
    stats.indentation_class = indentation_class(&indented_lines(cst, &lines));
    let counts = layout_counts(cst, &lines, limits.long_line_limit);
    stats.long_line_count = counts.long_lines;
    stats.missing_space_after_comma_count = counts.missing_space_after_comma;
    stats.trailing_whitespace_line_count = counts.trailing_whitespace_lines;
    stats.missing_newline_after_rule_op_count = counts.missing_newline_after_rule_op;
    stats.missing_newline_after_subgoal_count = counts.missing_newline_after_subgoal;
    stats.missing_newline_after_clause_count = counts.missing_newline_after_clause;
    stats.feature_counts = detect_features(&stream, Some(cst), dialect);
    stats
}

/// Analyzes one file on disk, applying the size limits before reading it
/// in full.
pub fn analyze_file(
    path: &Path,
    display: &str,
    package: &str,
    table: &OperatorTable,
    dialect: &DialectOptions,
    limits: &Limits,
    deadline: Option<Instant>,
) -> FileStats {
    let stats = FileStats::empty(display, package);
    match fs::metadata(path) {
        Ok(m) if m.len() > limits.max_bytes => return stats.skipped(SkipReason::TooLarge),
        Ok(_) => {}
        Err(_) => return stats.skipped(SkipReason::Unreadable),
    }
    let started = Instant::now();
    let deadline = deadline.or(Some(started + limits.timeout));
    match fs::read(path) {
        Ok(bytes) => {
            let text = String::from_utf8_lossy(strip_bom(&bytes));
            analyze_source(display, package, &text, table, dialect, limits, deadline)
        }
        Err(_) => stats.skipped(SkipReason::Unreadable),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Share {
    pub files: usize,
    pub percent: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeatureTotal {
    pub occurrences: usize,
    pub packages: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PackageSummary {
    pub name: String,
    pub files: usize,
    pub parsed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub operator_warnings: Vec<String>,
    pub features: BTreeMap<Feature, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Histograms {
    /// Bins 0..=24 plus a final 25+ bin.
    pub max_subgoals: Vec<usize>,
    pub max_rule_lines: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Totals {
    pub files: usize,
    pub parsed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub files_with_clauses: usize,
    pub fact_only_files: usize,
    pub lines: usize,
    pub long_lines: usize,
    pub missing_space_after_comma: usize,
    pub trailing_whitespace_lines: usize,
    pub missing_newline_after_rule_op: usize,
    pub missing_newline_after_subgoal: usize,
    pub missing_newline_after_clause: usize,
    /// Parsed files over files that were not skipped, in percent.
    pub parse_success_percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusReport {
    pub version: u32,
    pub limits: Limits,
    pub totals: Totals,
    pub files: Vec<FileStats>,
    pub packages: Vec<PackageSummary>,
    pub histograms: Histograms,
    pub indentation: BTreeMap<IndentationClass, Share>,
    pub features: BTreeMap<Feature, FeatureTotal>,
}

fn percent(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        (part as f64 * 10_000.0 / whole as f64).round() / 100.0
    }
}

fn bin(v: usize) -> usize {
    v.min(HISTOGRAM_BINS - 1)
}

/// Folds file statistics into a report. The result does not depend on the
/// order of `stats`.
pub fn aggregate(stats: Vec<FileStats>, limits: &Limits, operator_warnings: &BTreeMap<String, Vec<String>>) -> CorpusReport {
    let mut files = stats;
    files.sort_by(|a, b| (&a.package, &a.path).cmp(&(&b.package, &b.path)));
    let count = |p: Parsed| files.iter().filter(|f| f.parsed == p).count();
    let (parsed, failed, skipped) = (count(Parsed::Yes), count(Parsed::No), count(Parsed::Skipped));
    let with_clauses: Vec<&FileStats> = files.iter().filter(|f| f.clause_count > 0).collect();
    let sum = |f: fn(&FileStats) -> usize| files.iter().map(f).sum::<usize>();
    let totals = Totals {
        files: files.len(),
        parsed,
        failed,
        skipped,
        files_with_clauses: with_clauses.len(),
        fact_only_files: files.iter().filter(|f| f.fact_only).count(),
        lines: sum(|f| f.line_count),
        long_lines: sum(|f| f.long_line_count),
        missing_space_after_comma: sum(|f| f.missing_space_after_comma_count),
        trailing_whitespace_lines: sum(|f| f.trailing_whitespace_line_count),
        missing_newline_after_rule_op: sum(|f| f.missing_newline_after_rule_op_count),
        missing_newline_after_subgoal: sum(|f| f.missing_newline_after_subgoal_count),
        missing_newline_after_clause: sum(|f| f.missing_newline_after_clause_count),
        parse_success_percent: percent(parsed, parsed + failed),
    };
    let mut histograms = Histograms {
        max_subgoals: vec![0; HISTOGRAM_BINS],
        max_rule_lines: vec![0; HISTOGRAM_BINS],
    };
    for f in &with_clauses {
        histograms.max_subgoals[bin(f.max_subgoals)] += 1;
        histograms.max_rule_lines[bin(f.max_rule_lines)] += 1;
    }
    let classes = [
        IndentationClass::NoIndentation,
        IndentationClass::SpacesOnly,
        IndentationClass::TabsOnly,
        IndentationClass::Mixed,
    ];
    let indentation = classes
        .iter()
        .map(|&c| {
            let n = with_clauses.iter().filter(|f| f.indentation_class == c).count();
            (c, Share { files: n, percent: percent(n, with_clauses.len()) })
        })
        .collect();
    let mut by_package: BTreeMap<&str, Vec<&FileStats>> = BTreeMap::new();
    for f in &files {
        by_package.entry(&f.package).or_default().push(f);
    }
    for name in operator_warnings.keys() {
        by_package.entry(name).or_default();
    }
    let packages: Vec<PackageSummary> = by_package
        .iter()
        .map(|(name, fs)| PackageSummary {
            name: name.to_string(),
            files: fs.len(),
            parsed: fs.iter().filter(|f| f.parsed == Parsed::Yes).count(),
            failed: fs.iter().filter(|f| f.parsed == Parsed::No).count(),
            skipped: fs.iter().filter(|f| f.parsed == Parsed::Skipped).count(),
            operator_warnings: operator_warnings.get(*name).cloned().unwrap_or_default(),
            features: Feature::ALL
                .iter()
                .map(|&feat| (feat, fs.iter().map(|f| f.feature_counts.get(&feat).copied().unwrap_or(0)).sum()))
                .collect(),
        })
        .collect();
    let features = Feature::ALL
        .iter()
        .map(|&feat| {
            let total = FeatureTotal {
                occurrences: packages.iter().map(|p| p.features[&feat]).sum(),
                packages: packages.iter().filter(|p| p.features[&feat] > 0).count(),
            };
            (feat, total)
        })
        .collect();
    CorpusReport {
        version: REPORT_VERSION,
        limits: *limits,
        totals,
        files,
        packages,
        histograms,
        indentation,
        features,
    }
}

/// Finds Prolog files below `root`, grouped by package in sorted order.
pub fn discover(root: &Path) -> Result<BTreeMap<String, Vec<PathBuf>>, CorpusError> {
    let mut packages: BTreeMap<String, Vec<PathBuf>> = BTreeMap::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(|e| CorpusError::Walk {
            path: root.display().to_string(),
            source: e,
        })?;
        let path = entry.path();
        let is_prolog = path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| PROLOG_EXTENSIONS.contains(&e));
        if !entry.file_type().is_file() || !is_prolog {
            continue;
        }
        let rel = path.strip_prefix(root).unwrap_or(path);
        let mut parts = rel.components();
        let package = match (parts.next(), parts.next()) {
            (Some(first), Some(_)) => first.as_os_str().to_string_lossy().into_owned(),
            _ => ".".to_string(),
        };
        packages.entry(package).or_default().push(path.to_path_buf());
    }
    Ok(packages)
}

/// Deadline override per file; used to force timeouts in tests.
pub type DeadlineHook<'a> = &'a (dyn Fn(&Path) -> Option<Instant> + Sync);

/// Runs the whole pipeline over a corpus directory. Files are analyzed in
/// parallel; the report is the same for any thread count.
pub fn analyze_corpus(
    root: &Path,
    base: &OperatorTable,
    dialect: &DialectOptions,
    limits: &Limits,
    deadline_hook: Option<DeadlineHook>,
) -> Result<CorpusReport, CorpusError> {
    let packages = discover(root)?;
    let mut jobs = Vec::new();
    let mut warnings = BTreeMap::new();
    for (name, files) in &packages {
        let collected = collect_operators(files, base, dialect);
        warnings.insert(name.clone(), collected.warnings);
        for f in files {
            jobs.push((name.clone(), f.clone(), collected.table.clone()));
        }
    }
    let stats: Vec<FileStats> = jobs
        .par_iter()
        .map(|(package, path, table)| {
            let display = path
                .strip_prefix(root)
                .unwrap_or(path)
                .to_string_lossy()
                .replace('\\', "/");
            let deadline = deadline_hook.and_then(|h| h(path));
            analyze_file(path, &display, package, table, dialect, limits, deadline)
        })
        .collect();
    Ok(aggregate(stats, limits, &warnings))
}

pub fn report_json(report: &CorpusReport) -> Result<String, CorpusError> {
    Ok(serde_json::to_string_pretty(report)? + "\n")
}

pub fn report_csv(report: &CorpusReport) -> Result<String, CorpusError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = vec![
        "path",
        "package",
        "line_count",
        "parsed",
        "skip_reason",
        "syntax_errors",
        "clause_count",
        "fact_only",
        "max_subgoals",
        "max_rule_lines",
        "long_line_count",
        "indentation_class",
        "missing_space_after_comma_count",
        "trailing_whitespace_line_count",
        "missing_newline_after_rule_op_count",
        "missing_newline_after_subgoal_count",
        "missing_newline_after_clause_count",
    ];
    header.extend(Feature::ALL.iter().map(|f| f.as_str()));
    w.write_record(&header)?;
    let plain = |v: &dyn erased::Plain| v.plain();
    for f in &report.files {
        let mut row = vec![
            f.path.clone(),
            f.package.clone(),
            f.line_count.to_string(),
            plain(&f.parsed),
            f.skip_reason.map(|r| plain(&r)).unwrap_or_default(),
            f.syntax_errors.to_string(),
            f.clause_count.to_string(),
            f.fact_only.to_string(),
            f.max_subgoals.to_string(),
            f.max_rule_lines.to_string(),
            f.long_line_count.to_string(),
            plain(&f.indentation_class),
            f.missing_space_after_comma_count.to_string(),
            f.trailing_whitespace_line_count.to_string(),
            f.missing_newline_after_rule_op_count.to_string(),
            f.missing_newline_after_subgoal_count.to_string(),
            f.missing_newline_after_clause_count.to_string(),
        ];
        row.extend(Feature::ALL.iter().map(|k| f.feature_counts.get(k).copied().unwrap_or(0).to_string()));
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields"))
}

mod erased {
    use serde::Serialize;

    /// Renders a unit enum variant by its serialized name.
    pub trait Plain {
        fn plain(&self) -> String;
    }

    impl<T: Serialize> Plain for T {
        fn plain(&self) -> String {
            match serde_json::to_value(self) {
                Ok(serde_json::Value::String(s)) => s,
                Ok(other) => other.to_string(),
                Err(_) => String::new(),
            }
        }
    }
}

/// Plain-text summary for terminals.
pub fn report_text(report: &CorpusReport) -> String {
    let t = &report.totals;
    let mut out = String::new();
    let _ = writeln!(out, "files: {} (parsed {}, failed {}, skipped {})", t.files, t.parsed, t.failed, t.skipped);
    let _ = writeln!(out, "parse success: {:.2}%", t.parse_success_percent);
    let _ = writeln!(out, "files with clauses: {} (fact only: {})", t.files_with_clauses, t.fact_only_files);
    let _ = writeln!(
        out,
        "lines: {} (longer than {}: {})",
        t.lines, report.limits.long_line_limit, t.long_lines
    );
    let _ = writeln!(out, "missing space after comma: {}", t.missing_space_after_comma);
    let _ = writeln!(out, "lines with trailing whitespace: {}", t.trailing_whitespace_lines);
    let _ = writeln!(out, "missing newline after rule operator: {}", t.missing_newline_after_rule_op);
    let _ = writeln!(out, "missing newline after subgoal: {}", t.missing_newline_after_subgoal);
    let _ = writeln!(out, "missing newline after clause: {}", t.missing_newline_after_clause);
    let _ = writeln!(out, "\nindentation:");
    for (class, share) in &report.indentation {
        let _ = writeln!(out, "  {:<16} {:>6} {:>7.2}%", erased::Plain::plain(class), share.files, share.percent);
    }
    for (title, bins) in [
        ("max subgoals", &report.histograms.max_subgoals),
        ("max lines per rule", &report.histograms.max_rule_lines),
    ] {
        let _ = writeln!(out, "\n{title}:");
        for (i, n) in bins.iter().enumerate().filter(|(_, n)| **n > 0) {
            let label = if i == HISTOGRAM_BINS - 1 { "25+".to_string() } else { i.to_string() };
            let _ = writeln!(out, "  {label:>4} {n:>6}");
        }
    }
    let _ = writeln!(out, "\nfeatures (occurrences, packages of {}):", report.packages.len());
    for (feat, total) in &report.features {
        let _ = writeln!(out, "  {:<30} {:>6} {:>4}", feat.as_str(), total.occurrences, total.packages);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optable::Profile;

    fn stats(src: &str) -> FileStats {
        let d = DialectOptions::swi();
        let t = OperatorTable::default_table(Profile::Swi);
        analyze_source("t.pl", "p", src, &t, &d, &Limits::default(), None)
    }

    #[test]
    fn small_file() {
        let s = stats("a.\nb :- c,\n  d.\n");
        assert_eq!((s.clause_count, s.max_subgoals, s.max_rule_lines), (2, 2, 2));
        assert_eq!(s.indentation_class, IndentationClass::SpacesOnly);
        assert!(!s.fact_only);
        let e = stats("");
        assert_eq!((e.parsed, e.clause_count, e.fact_only), (Parsed::Yes, 0, false));
        assert_eq!(e.indentation_class, IndentationClass::NoIndentation);
    }

    #[test]
    fn features() {
        let s = stats("#!/usr/bin/env swipl\nx(A) :- A is pi(), B = 1e3, C = 1.0e3, D = 1_000, E = 0'', F = _{a: 1}, G = \"\\u2C6F\\x41\".\n");
        let f = &s.feature_counts;
        assert_eq!(f[&Feature::Shebang], 1);
        assert_eq!(f[&Feature::ZeroArgumentsCompound], 1);
        assert_eq!(f[&Feature::IntegerExponentialNotation], 1);
        assert_eq!(f[&Feature::DigitGroups], 1);
        assert_eq!(f[&Feature::SingleQuoteCharConstant], 1);
        assert_eq!(f[&Feature::Dicts], 1);
        assert_eq!(f[&Feature::UnicodeCharacterEscape], 1);
        assert_eq!(f[&Feature::MissingClosingBackslash], 1);
    }

    #[test]
    fn limits_and_timeout() {
        let d = DialectOptions::swi();
        let t = OperatorTable::default_table(Profile::Swi);
        let limits = Limits { max_lines: 2, ..Limits::default() };
        let s = analyze_source("t.pl", "p", "a.\nb.\nc.\n", &t, &d, &limits, None);
        assert_eq!(s.skip_reason, Some(SkipReason::TooLong));
        let past = Instant::now() - Duration::from_millis(1);
        let s = analyze_source("t.pl", "p", "a.\n", &t, &d, &Limits::default(), Some(past));
        assert_eq!(s.skip_reason, Some(SkipReason::Timeout));
        assert_eq!((s.clause_count, s.line_count), (0, 0));
    }

    #[test]
    fn histogram_binning() {
        let mut a = stats("a :- b, c, d.\n");
        a.path = "a.pl".into();
        let mut b = stats(&format!("a :- {}.\n", vec!["b"; 30].join(", ")));
        b.path = "b.pl".into();
        let r = aggregate(vec![b, a], &Limits::default(), &BTreeMap::new());
        assert_eq!(r.histograms.max_subgoals[3], 1);
        assert_eq!(r.histograms.max_subgoals[25], 1);
        assert_eq!(r.files[0].path, "a.pl");
    }
}
