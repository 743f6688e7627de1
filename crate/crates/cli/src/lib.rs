//! The `prolint` command line: lint, format, corpus statistics and debug
//! dumps of tokens, concrete trees and abstract trees.
//!
//! Exit codes: 0 clean, 1 violations (or files that would be reformatted),
//! 2 lex or parse errors, 3 usage or configuration errors.

pub mod config;

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use prolint_core::ast::cst_to_ast;
use prolint_core::corpus::{self, PROLOG_EXTENSIONS};
use prolint_core::diagnostic::{sort_diagnostics, Diagnostic, Severity};
use prolint_core::lexer::tokenize;
use prolint_core::parser::{parse_program, parse_program_recovering};
use prolint_core::printer::{format_source, FormatError, SerializeError};
use prolint_core::quality::check_quality;
use prolint_core::span::SourceSpan;
use prolint_core::style::check_style;
use rayon::prelude::*;
use serde::Serialize;
use walkdir::WalkDir;

use config::{Config, ConfigError, Entry, OutputFormat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_SYNTAX: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "prolint", version, about = "Style checker, formatter and corpus statistics for Prolog")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Config file to use instead of discovering `.prolintrc`.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Dialect profile.
    #[arg(long, global = true, value_parser = ["iso", "swi"])]
    dialect: Option<String>,
    /// Override one option, e.g. `--set max_line_length=100`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output format.
    #[arg(long, global = true, value_parser = ["text", "json"])]
    format: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check files for style and naming violations.
    Lint {
        /// Files or directories; `-` reads standard input.
        #[arg(default_value = ".")]
        paths: Vec<PathBuf>,
    },
    /// Reformat files.
    Fmt {
        #[arg(default_value = ".")]
        paths: Vec<PathBuf>,
        /// Rewrite files in place.
        #[arg(long, group = "mode")]
        write: bool,
        /// Print a unified diff.
        #[arg(long, group = "mode")]
        diff: bool,
        /// Exit with 1 if any file would change.
        #[arg(long, group = "mode")]
        check: bool,
    },
    /// Corpus statistics for a directory of packages.
    Stats {
        dir: PathBuf,
        /// Print the JSON report.
        #[arg(long)]
        json: bool,
        /// Write per-file statistics as CSV (`-` for standard output).
        #[arg(long, value_name = "OUT")]
        csv: Option<PathBuf>,
    },
    /// Print the token list.
    Tokens { file: PathBuf },
    /// Print the abstract syntax tree of each clause.
    Ast { file: PathBuf },
    /// Print the concrete syntax tree, layout included.
    Cst { file: PathBuf },
}

/// Output sinks and standard input, so the driver can run in-process.
pub struct Io<'a> {
    pub stdin: &'a mut dyn Read,
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, io: &mut Io) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                io.out.write_all(text.as_bytes())
            } else {
                io.err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let target = match &cli.command {
        Command::Lint { paths } | Command::Fmt { paths, .. } => paths.first().cloned(),
        Command::Stats { dir, .. } => Some(dir.clone()),
        Command::Tokens { file } | Command::Ast { file } | Command::Cst { file } => Some(file.clone()),
    }
    .filter(|p| p.as_os_str() != "-")
    .unwrap_or_else(|| PathBuf::from("."));
    let cfg = match load_config(&cli.global, &target) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(io.err, "prolint: {e}");
            return EXIT_USAGE;
        }
    };
    let result = match cli.command {
        Command::Lint { paths } => cmd_lint(&paths, &cfg, io),
        Command::Fmt {
            paths,
            write,
            diff,
            check,
        } => {
            let mode = if write {
                FmtMode::Write
            } else if diff {
                FmtMode::Diff
            } else if check {
                FmtMode::Check
            } else {
                FmtMode::Stdout
            };
            cmd_fmt(&paths, &cfg, mode, io)
        }
        Command::Stats { dir, json, csv } => cmd_stats(&dir, json, csv.as_deref(), &cfg, io),
        Command::Tokens { file } => cmd_tokens(&file, &cfg, io),
        Command::Ast { file } => cmd_ast(&file, &cfg, io),
        Command::Cst { file } => cmd_cst(&file, &cfg, io),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io.err, "prolint: {e}");
            EXIT_USAGE
        }
    }
}

fn load_config(g: &GlobalArgs, target: &Path) -> Result<Config, ConfigError> {
    let env = std::env::var(config::CONFIG_ENV).ok();
    let file = config::locate(g.config.as_deref(), env.as_deref(), target);
    let mut entries = match &file {
        Some(p) => config::load_file(p)?,
        None => Vec::new(),
    };
    if let Some(d) = &g.dialect {
        entries.push(Entry::new("dialect", d, "--dialect"));
    }
    for s in &g.set {
        entries.push(config::parse_set_arg(s)?);
    }
    if let Some(f) = &g.format {
        entries.push(Entry::new("format", f, "--format"));
    }
    config::build(&entries, file)
}

#[derive(Debug, thiserror::Error)]
enum UsageError {
    #[error("{0}: no such file or directory")]
    Missing(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}: not a directory")]
    NotADirectory(String),
    #[error("{0}")]
    Corpus(#[from] corpus::CorpusError),
    #[error("formatting needs concrete settings, but these are set to infer: {}", .0.join(", "))]
    Infer(Vec<&'static str>),
}

/// An input file, or standard input.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Input {
    Stdin,
    File(PathBuf),
}

impl Input {
    fn display(&self) -> String {
        match self {
            Input::Stdin => "<stdin>".into(),
            Input::File(p) => p.display().to_string(),
        }
    }
}

fn expand(paths: &[PathBuf]) -> Result<Vec<Input>, UsageError> {
    let mut out = Vec::new();
    for p in paths {
        if p.as_os_str() == "-" {
            out.push(Input::Stdin);
        } else if p.is_dir() {
            for entry in WalkDir::new(p).sort_by_file_name() {
                let entry = entry.map_err(|e| UsageError::Io {
                    path: p.display().to_string(),
                    source: e.into(),
                })?;
                let is_prolog = entry
                    .path()
                    .extension()
                    .and_then(|e| e.to_str())
                    .is_some_and(|e| PROLOG_EXTENSIONS.contains(&e));
                if entry.file_type().is_file() && is_prolog {
                    out.push(Input::File(entry.into_path()));
                }
            }
        } else if p.is_file() {
            out.push(Input::File(p.clone()));
        } else {
            return Err(UsageError::Missing(p.display().to_string()));
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Raw text of an input, or a description of why it is unusable.
enum Text {
    Ok(String),
    NotUtf8,
}

fn read_input(input: &Input, stdin: &mut dyn Read) -> Result<Text, UsageError> {
    let bytes = match input {
        Input::Stdin => {
            let mut b = Vec::new();
            stdin.read_to_end(&mut b).map_err(|e| UsageError::Io {
                path: "<stdin>".into(),
                source: e,
            })?;
            b
        }
        Input::File(p) => fs::read(p).map_err(|e| UsageError::Io {
            path: p.display().to_string(),
            source: e,
        })?,
    };
    let bytes = bytes.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(&bytes).to_vec();
    Ok(match String::from_utf8(bytes) {
        Ok(s) => Text::Ok(s),
        Err(_) => Text::NotUtf8,
    })
}

/// Findings for one file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileReport {
    pub diagnostics: Vec<Diagnostic>,
    pub syntax_error: bool,
    /// Settings resolved by inference, as `key = value`.
    pub notes: Vec<String>,
}

fn syntax_diag(file: &str, span: SourceSpan, message: String) -> Diagnostic {
    Diagnostic {
        rule_id: "syntax.error",
        severity: Severity::Error,
        message,
        file: file.to_string(),
        span,
    }
}

/// Lints one source text.
pub fn lint_source(file: &str, source: &str, cfg: &Config) -> FileReport {
    let stream = match tokenize(source, &cfg.dialect) {
        Ok(s) => s,
        Err(e) => {
            return FileReport {
                diagnostics: vec![syntax_diag(file, e.span, e.kind.to_string())],
                syntax_error: true,
                notes: Vec::new(),
            }
        }
    };
    let outcome = parse_program_recovering(&stream, &cfg.table(), &cfg.dialect, None)
        .expect("no deadline, so parsing cannot time out");
    let mut diagnostics: Vec<Diagnostic> = outcome
        .errors
        .iter()
        .map(|e| syntax_diag(file, e.span, e.kind.to_string()))
        .collect();
    let (style, inferred) = check_style(&outcome.cst, source, &cfg.style, file);
    diagnostics.extend(style);
    diagnostics.extend(check_quality(&cst_to_ast(&outcome.cst), &cfg.quality, file));
    sort_diagnostics(&mut diagnostics);
    let mut notes = Vec::new();
    let resolved = inferred.options.entries();
    for key in cfg.style.infer_keys() {
        if let Some((k, why)) = inferred.unresolved.iter().find(|(k, _)| *k == key) {
            notes.push(format!("{k} could not be inferred: {why}"));
        } else if let Some((k, v)) = resolved.iter().find(|(k, _)| *k == key) {
            notes.push(format!("inferred {k} = {v}"));
        }
    }
    FileReport {
        syntax_error: !outcome.errors.is_empty(),
        diagnostics,
        notes,
    }
}

#[derive(Serialize)]
struct JsonDiagnostic<'a> {
    file: &'a str,
    line: usize,
    col: usize,
    end_line: usize,
    end_col: usize,
    rule: &'a str,
    severity: Severity,
    message: &'a str,
}

impl<'a> From<&'a Diagnostic> for JsonDiagnostic<'a> {
    fn from(d: &'a Diagnostic) -> Self {
        Self {
            file: &d.file,
            line: d.span.line_start,
            col: d.span.col_start,
            end_line: d.span.line_end,
            end_col: d.span.col_end,
            rule: d.rule_id,
            severity: d.severity,
            message: &d.message,
        }
    }
}

/// Renders lint results in the configured format.
pub fn render_diagnostics(diags: &[Diagnostic], format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => diags.iter().map(|d| format!("{d}\n")).collect(),
        OutputFormat::Json => {
            let items: Vec<JsonDiagnostic> = diags.iter().map(JsonDiagnostic::from).collect();
            serde_json::to_string_pretty(&items).expect("diagnostics serialize") + "\n"
        }
    }
}

fn cmd_lint(paths: &[PathBuf], cfg: &Config, io: &mut Io) -> Result<i32, UsageError> {
    let inputs = expand(paths)?;
    let mut texts = Vec::with_capacity(inputs.len());
    for input in &inputs {
        texts.push((input.display(), read_input(input, io.stdin)?));
    }
    let reports: Vec<FileReport> = texts
        .par_iter()
        .map(|(name, text)| match text {
            Text::Ok(src) => lint_source(name, src, cfg),
            Text::NotUtf8 => FileReport {
                diagnostics: vec![syntax_diag(name, SourceSpan::default(), "input is not valid UTF-8".into())],
                syntax_error: true,
                notes: Vec::new(),
            },
        })
        .collect();
    let all: Vec<Diagnostic> = reports.iter().flat_map(|r| r.diagnostics.iter().cloned()).collect();
    let _ = io.out.write_all(render_diagnostics(&all, cfg.format).as_bytes());
    for ((name, _), r) in texts.iter().zip(&reports) {
        for n in &r.notes {
            let _ = writeln!(io.err, "{name}: {n}");
        }
    }
    Ok(if reports.iter().any(|r| r.syntax_error) {
        EXIT_SYNTAX
    } else if all.is_empty() {
        EXIT_OK
    } else {
        EXIT_VIOLATIONS
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FmtMode {
    Stdout,
    Write,
    Diff,
    Check,
}

fn cmd_fmt(paths: &[PathBuf], cfg: &Config, mode: FmtMode, io: &mut Io) -> Result<i32, UsageError> {
    let infer = cfg.style.infer_keys();
    if !infer.is_empty() {
        return Err(UsageError::Infer(infer));
    }
    let inputs = expand(paths)?;
    let table = cfg.table();
    let mut code = EXIT_OK;
    for input in &inputs {
        let name = input.display();
        let src = match read_input(input, io.stdin)? {
            Text::Ok(s) => s,
            Text::NotUtf8 => {
                let _ = writeln!(io.err, "{name}: input is not valid UTF-8");
                code = EXIT_SYNTAX;
                continue;
            }
        };
        let formatted = match format_source(&src, &cfg.style, &table, &cfg.dialect) {
            Ok(f) => f,
            Err(FormatError::Serialize(SerializeError::InferSetting(keys))) => return Err(UsageError::Infer(keys)),
            Err(e) => {
                let _ = writeln!(io.err, "{name}:{e}");
                code = EXIT_SYNTAX;
                continue;
            }
        };
        match mode {
            FmtMode::Stdout => {
                let _ = io.out.write_all(formatted.as_bytes());
            }
            FmtMode::Write => match input {
                Input::File(p) if formatted != src => fs::write(p, &formatted).map_err(|e| UsageError::Io {
                    path: name.clone(),
                    source: e,
                })?,
                Input::File(_) => {}
                Input::Stdin => {
                    let _ = io.out.write_all(formatted.as_bytes());
                }
            },
            FmtMode::Diff => {
                if formatted != src {
                    let diff = similar::TextDiff::from_lines(&src, &formatted)
                        .unified_diff()
                        .header(&name, &name)
                        .to_string();
                    let _ = io.out.write_all(diff.as_bytes());
                }
            }
            FmtMode::Check => {
                if formatted != src {
                    let _ = writeln!(io.out, "would reformat {name}");
                    if code == EXIT_OK {
                        code = EXIT_VIOLATIONS;
                    }
                }
            }
        }
    }
    Ok(code)
}

fn cmd_stats(dir: &Path, json: bool, csv: Option<&Path>, cfg: &Config, io: &mut Io) -> Result<i32, UsageError> {
    if !dir.is_dir() {
        return Err(UsageError::NotADirectory(dir.display().to_string()));
    }
    let report = corpus::analyze_corpus(dir, &cfg.table(), &cfg.dialect, &cfg.limits, None)?;
    for p in &report.packages {
        for w in &p.operator_warnings {
            let _ = writeln!(io.err, "{}: {w}", p.name);
        }
    }
    if let Some(out) = csv {
        let text = corpus::report_csv(&report)?;
        if out.as_os_str() == "-" {
            let _ = io.out.write_all(text.as_bytes());
        } else {
            fs::write(out, text).map_err(|e| UsageError::Io {
                path: out.display().to_string(),
                source: e,
            })?;
        }
    }
    if json || cfg.format == OutputFormat::Json {
        let _ = io.out.write_all(corpus::report_json(&report)?.as_bytes());
    } else if csv.is_none_or(|p| p.as_os_str() != "-") {
        let _ = io.out.write_all(corpus::report_text(&report).as_bytes());
    }
    Ok(EXIT_OK)
}

fn read_debug_input(file: &Path, io: &mut Io) -> Result<Result<String, i32>, UsageError> {
    let input = if file.as_os_str() == "-" {
        Input::Stdin
    } else if file.is_file() {
        Input::File(file.to_path_buf())
    } else {
        return Err(UsageError::Missing(file.display().to_string()));
    };
    Ok(match read_input(&input, io.stdin)? {
        Text::Ok(s) => Ok(s),
        Text::NotUtf8 => {
            let _ = writeln!(io.err, "{}: input is not valid UTF-8", input.display());
            Err(EXIT_SYNTAX)
        }
    })
}

fn cmd_tokens(file: &Path, cfg: &Config, io: &mut Io) -> Result<i32, UsageError> {
    let src = match read_debug_input(file, io)? {
        Ok(s) => s,
        Err(code) => return Ok(code),
    };
    let stream = match tokenize(&src, &cfg.dialect) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(io.err, "{}:{e}", file.display());
            return Ok(EXIT_SYNTAX);
        }
    };
    if cfg.format == OutputFormat::Json {
        let text = serde_json::to_string_pretty(&stream.tokens).expect("tokens serialize");
        let _ = writeln!(io.out, "{text}");
    } else {
        for t in &stream.tokens {
            let s = t.span;
            let _ = writeln!(
                io.out,
                "{}:{}-{}:{} {} {:?}",
                s.line_start,
                s.col_start,
                s.line_end,
                s.col_end,
                t.kind.as_str(),
                t.text
            );
        }
    }
    Ok(EXIT_OK)
}

fn parse_for_dump(file: &Path, cfg: &Config, io: &mut Io) -> Result<Result<prolint_core::cst::CstNode, i32>, UsageError> {
    let src = match read_debug_input(file, io)? {
        Ok(s) => s,
        Err(code) => return Ok(Err(code)),
    };
    let stream = match tokenize(&src, &cfg.dialect) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(io.err, "{}:{e}", file.display());
            return Ok(Err(EXIT_SYNTAX));
        }
    };
    Ok(match parse_program(&stream, &cfg.table(), &cfg.dialect) {
        Ok(o) => Ok(o.cst),
        Err(e) => {
            let _ = writeln!(io.err, "{}:{e}", file.display());
            Err(EXIT_SYNTAX)
        }
    })
}

fn cmd_ast(file: &Path, cfg: &Config, io: &mut Io) -> Result<i32, UsageError> {
    let cst = match parse_for_dump(file, cfg, io)? {
        Ok(c) => c,
        Err(code) => return Ok(code),
    };
    if let prolint_core::ast::Ast::Program(clauses) = cst_to_ast(&cst).ast {
        for c in &clauses {
            let _ = writeln!(io.out, "{}", c.to_term_string());
        }
    }
    Ok(EXIT_OK)
}

fn cmd_cst(file: &Path, cfg: &Config, io: &mut Io) -> Result<i32, UsageError> {
    match parse_for_dump(file, cfg, io)? {
        Ok(c) => {
            let _ = io.out.write_all(c.dump().as_bytes());
            Ok(EXIT_OK)
        }
        Err(code) => Ok(code),
    }
}
