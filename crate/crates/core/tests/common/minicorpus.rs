//! The twelve-file mini corpus. Ten files are checked in; the two that
//! trip the size limits are generated, and `gamma/slow.pl` gets a deadline
//! that has already passed.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use prolint_core::corpus::{analyze_corpus, CorpusReport, Limits};
use prolint_core::optable::{DialectOptions, OperatorTable, Profile};

use super::programs::fixtures_dir;

fn copy_tree(from: &Path, to: &Path) {
    fs::create_dir_all(to).expect("create dir");
    for entry in fs::read_dir(from).expect("read dir") {
        let entry = entry.expect("dir entry");
        let target = to.join(entry.file_name());
        if entry.file_type().expect("file type").is_dir() {
            copy_tree(&entry.path(), &target);
        } else {
            fs::copy(entry.path(), target).expect("copy");
        }
    }
}

/// Builds the corpus under `dir` and returns its root.
pub fn build(dir: &Path) -> PathBuf {
    let root = dir.join("corpus");
    copy_tree(&fixtures_dir().join("minicorpus"), &root);
    // Just over 1 MiB, in few lines.
    let filler = format!("big('{}').\n", "x".repeat(1000));
    fs::write(root.join("gamma/huge.pl"), filler.repeat(1100)).expect("write huge.pl");
    fs::write(root.join("gamma/tall.pl"), "a.\n".repeat(25_000)).expect("write tall.pl");
    root
}

pub fn run(root: &Path, threads: usize) -> CorpusReport {
    let d = DialectOptions::swi();
    let base = OperatorTable::default_table(Profile::Swi);
    let hook = |p: &Path| p.ends_with("gamma/slow.pl").then(Instant::now);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(|| analyze_corpus(root, &base, &d, &Limits::default(), Some(&hook)))
        .expect("corpus analysis")
}

pub fn golden() -> serde_json::Value {
    let text = fs::read_to_string(fixtures_dir().join("minicorpus.golden.json")).expect("golden report");
    serde_json::from_str(&text).expect("golden JSON")
}

/// Field paths where `got` and `want` differ.
pub fn differences(got: &serde_json::Value, want: &serde_json::Value, at: &str, out: &mut Vec<String>) {
    use serde_json::Value;
    match (got, want) {
        (Value::Object(g), Value::Object(w)) => {
            for k in g.keys().chain(w.keys().filter(|k| !g.contains_key(*k))) {
                match (g.get(k), w.get(k)) {
                    (Some(a), Some(b)) => differences(a, b, &format!("{at}.{k}"), out),
                    (a, b) => out.push(format!("{at}.{k}: got {a:?}, want {b:?}")),
                }
            }
        }
        (Value::Array(g), Value::Array(w)) if g.len() == w.len() => {
            for (i, (a, b)) in g.iter().zip(w).enumerate() {
                differences(a, b, &format!("{at}[{i}]"), out);
            }
        }
        (a, b) if a != b => out.push(format!("{at}: got {a}, want {b}")),
        _ => {}
    }
}
