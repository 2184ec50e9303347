use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use crisp_cli::report::document;
use crisp_cli::{exit_code, parse_script, run, RunOptions, Status};
use crisp_core::engine::budget::SearchBudget;

/// Runs a `.crisp` script and prints one line per command.
#[derive(Parser, Debug)]
#[command(name = "crisp", version)]
struct Args {
    /// Script to run.
    file: PathBuf,
    #[arg(long)]
    budget_rank: Option<usize>,
    #[arg(long)]
    budget_degree: Option<u32>,
    #[arg(long)]
    budget_candidates: Option<usize>,
    #[arg(long)]
    time_limit_ms: Option<u64>,
    /// Seed for randomized probes; verdicts never depend on it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report document here.
    #[arg(long)]
    emit_json: Option<PathBuf>,
    /// Worker threads for the engine (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let d = SearchBudget::default();
    let budget = match SearchBudget::new(
        args.budget_rank.unwrap_or(d.max_rank),
        args.budget_degree.unwrap_or(d.max_degree),
        args.budget_candidates.unwrap_or(d.max_candidates),
        args.time_limit_ms.unwrap_or(d.time_limit_ms),
    ) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let opts = RunOptions { budget, seed: args.seed };
    let text = match std::fs::read_to_string(&args.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{}: {e}", args.file.display());
            return ExitCode::from(1);
        }
    };
    let script = match parse_script(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{}:{e}", args.file.display());
            return ExitCode::from(1);
        }
    };
    let reports = run(&script, &opts);
    for r in &reports {
        let tag = match &r.status {
            Status::Ok => "ok",
            Status::Violation => "VIOLATION",
            Status::Error(_) => "error",
        };
        println!("[{tag}] {} => {} ({:.1} ms)", r.command, r.summary, r.timing_ms);
    }
    if let Some(path) = &args.emit_json {
        let doc = document(&text, &reports, &opts, true);
        let out = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
        if let Err(e) = std::fs::write(path, out) {
            eprintln!("{}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    ExitCode::from(exit_code(&reports) as u8)
}
