//! The `manip3d` command line.
//!
//! Exit codes: 0 on success, 1 for bad input or failed validation, 2 for
//! configuration problems. Errors go to stderr as one JSON object per line.

mod config;
mod curate;
mod evaluate;
mod preview;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::error::Error;

pub use config::{ClusterConfig, Config, EvaluateConfig, SelectConfig};

#[derive(Debug, Parser)]
#[command(name = "manip3d", version, about = "3D object manipulation preview, evaluation and pair curation")]
pub struct Cli {
    /// JSON config file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Validate inputs and compute results without writing anything.
    #[arg(long, global = true)]
    pub dry_run: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render a preview of objects moved in 3D.
    Preview(preview::PreviewArgs),
    /// Score a manifest of edits against ground truth.
    Evaluate(evaluate::EvaluateArgs),
    /// Cluster camera tokens into camera-static clips.
    Cluster(curate::ClusterArgs),
    /// Pick the frame pair with the largest object motion in each clip.
    Select(curate::SelectArgs),
    /// Mark pairs whose motion passes the displacement thresholds.
    Filter(curate::FilterArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Preview(_) => "preview",
            Command::Evaluate(_) => "evaluate",
            Command::Cluster(_) => "cluster",
            Command::Select(_) => "select",
            Command::Filter(_) => "filter",
        }
    }
}

/// A failed command: the exit code and the error behind it.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub error: Error,
}

impl Failure {
    fn input(error: Error) -> Self {
        Self { code: 1, error }
    }

    fn config(error: Error) -> Self {
        Self { code: 2, error }
    }
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure::input(error)
    }
}

pub(crate) type CmdResult<T = ()> = std::result::Result<T, Failure>;

pub(crate) struct Ctx {
    pub config: Config,
    pub dry_run: bool,
}

/// Runs the CLI on the process arguments and returns the exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or_default().trim_start_matches("error: ");
            diagnostic("args", 2, "usage", first);
            return 2;
        }
    };
    let name = cli.command.name();
    match execute(cli) {
        Ok(()) => 0,
        Err(f) => {
            diagnostic(name, f.code, f.error.kind(), &f.error.to_string());
            f.code
        }
    }
}

fn diagnostic(command: &str, code: i32, kind: &str, message: &str) {
    let record = serde_json::json!({
        "level": "error",
        "command": command,
        "exit_code": code,
        "kind": kind,
        "message": message,
    });
    eprintln!("{record}");
}

pub fn execute(cli: Cli) -> CmdResult {
    let mut config = match &cli.config {
        Some(path) => Config::read(path).map_err(Failure::config)?,
        None => Config::default(),
    };
    if cli.threads.is_some() {
        config.threads = cli.threads;
    }
    let threads = match config.threads {
        Some(0) => {
            return Err(Failure::config(Error::InvalidParameter("threads must be >= 1".into())))
        }
        Some(n) => n,
        None => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::config(Error::InvalidParameter(e.to_string())))?;
    let mut ctx = Ctx {
        config,
        dry_run: cli.dry_run,
    };
    pool.install(|| match cli.command {
        Command::Preview(a) => preview::run(&mut ctx, a),
        Command::Evaluate(a) => evaluate::run(&mut ctx, a),
        Command::Cluster(a) => curate::run_cluster(&mut ctx, a),
        Command::Select(a) => curate::run_select(&mut ctx, a),
        Command::Filter(a) => curate::run_filter(&mut ctx, a),
    })
}

/// Writes `bytes` to `path`, or stdout when no path is given. Nothing is
/// written in dry-run mode.
pub(crate) fn emit(ctx: &Ctx, path: Option<&Path>, bytes: &[u8]) -> CmdResult {
    if ctx.dry_run {
        return Ok(());
    }
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Error::io(p, e))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| Error::io("<stdout>", e))?;
        }
    }
    Ok(())
}

/// One-line JSON note on stdout describing what a dry run validated.
pub(crate) fn dry_run_note(ctx: &Ctx, command: &str, detail: serde_json::Value) {
    if ctx.dry_run {
        println!("{}", serde_json::json!({"dry_run": true, "command": command, "detail": detail}));
    }
}
