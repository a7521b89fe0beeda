//! `harmonics <task> [--config path] [--seed n] [--jobs k] [--out dir]`
//!
//! Exit codes: 0 success, 1 a checking task ran and failed, 2 malformed
//! input, 3 violated hypothesis, 4 exhausted resource cap.

mod config;
mod tasks;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use harmonics::Error;
use serde_json::{json, Value};

use config::{ExperimentConfig, Task};

#[derive(Parser, Debug)]
#[command(name = "harmonics", version, about = "Group-ring inverses, random walks and Bernoulli-factor checks")]
struct Cli {
    task: Task,
    /// TOML or JSON experiment configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    jobs: Option<usize>,
    /// Output directory; overrides the configured one.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::GroupMismatch(_) | Error::InvalidGroup(_) => 2,
        Error::Hypothesis(_) | Error::Window(_) | Error::InsufficientData(_) => 3,
        Error::CapExceeded { .. } | Error::AdaptiveDepthExceeded { .. } => 4,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match exit_code(e) {
        2 => "parse",
        3 => "hypothesis",
        _ => "resource_cap",
    }
}

fn write_outputs(dir: &Path, report: &Value, csv: &[(&str, String)]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    std::fs::write(dir.join("report.json"), text)?;
    for (name, body) in csv {
        std::fs::write(dir.join(name), body)?;
    }
    Ok(())
}

fn fail(code: u8, msg: &str) -> ExitCode {
    eprintln!("harmonics: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = match &cli.config {
        Some(path) => match ExperimentConfig::load(path) {
            Ok(c) => c,
            Err(msg) => return fail(2, &msg),
        },
        None => ExperimentConfig::default(),
    };
    if let Some(task) = cfg.task {
        if task != cli.task {
            return fail(2, &format!("config is for task `{task}` but `{}` was requested", cli.task));
        }
    }
    cfg.task = Some(cli.task);
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            return fail(2, &format!("--jobs: {e}"));
        }
    }
    let out = cli.out.clone().or_else(|| cfg.output.clone()).unwrap_or_else(|| PathBuf::from("out"));

    let header = json!({
        "tool": "harmonics",
        "version": env!("CARGO_PKG_VERSION"),
        "config_hash": cfg.hash(),
        "task": cli.task,
        "seed": cfg.seed,
    });
    let (report, csv, code) = match tasks::run(cli.task, &cfg) {
        Ok(outcome) => {
            let failed = outcome.pass == Some(false);
            let mut report = header;
            report["status"] = json!(if failed { "failed" } else { "ok" });
            report["result"] = outcome.result;
            (report, outcome.csv, u8::from(failed))
        }
        Err(e) => {
            let mut report = header;
            report["status"] = json!("error");
            report["error"] = json!({ "kind": error_kind(&e), "message": e.to_string() });
            eprintln!("harmonics: {e}");
            (report, Vec::new(), exit_code(&e))
        }
    };
    if let Err(e) = write_outputs(&out, &report, &csv) {
        return fail(4, &format!("writing {}: {e}", out.display()));
    }
    // a closed stdout is not an error; the report is already on disk
    let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    ExitCode::from(code)
}
