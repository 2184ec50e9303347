//! The `.crisp` script language, its runner and the example corpus sweeps.

pub mod report;
pub mod run;
pub mod sweeps;
pub mod syntax;

pub use run::{exit_code, run, run_env, Env, Report, RunOptions, Status};
pub use syntax::{parse_script, ParseError, Script};

use std::path::{Path, PathBuf};

/// The corpus shipped in `examples/`.
pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples")
}

/// Every `.crisp` file of the corpus, sorted by name.
pub fn corpus_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .map(|d| d.filter_map(|e| e.ok().map(|e| e.path())).collect())
        .unwrap_or_default();
    files.retain(|p| p.extension().is_some_and(|e| e == "crisp"));
    files.sort();
    files
}

/// Parses and runs one corpus file by stem, e.g. `"trivial_extension"`.
pub fn load_corpus(stem: &str, opts: &RunOptions) -> Result<(Env, Vec<Report>), String> {
    let path = corpus_dir().join(format!("{stem}.crisp"));
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let script = parse_script(&text).map_err(|e| format!("{}:{e}", path.display()))?;
    Ok(run_env(&script, opts))
}
