use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use iwacoh_cli::report::Report;
use iwacoh_cli::run::run_tasks;
use iwacoh_cli::suites::SUITES;
use iwacoh_cli::workspace::{DegreeRange, Task, TaskKind, Workspace, WorkspaceError};

#[derive(Parser)]
#[command(name = "iwacoh", version, about = "Exact group cohomology over Z/p^e: cochains, Tate cohomology, compact support and towers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the cohomology tasks of a workspace.
    Cohomology(Common),
    /// Run the Tate cohomology tasks of a workspace.
    Tate(Common),
    /// Run the Shapiro tasks of a workspace.
    Shapiro(Common),
    /// Run the finite duality tasks of a workspace.
    Duality(Common),
    /// Run the tower tasks of a workspace.
    Tower(Common),
    /// Run the compact support tasks of a workspace.
    Compact(Common),
    /// Run verification suites, from a workspace or directly.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Suites to run when no workspace is given (repeatable, comma separated).
        #[arg(long = "suite", value_delimiter = ',')]
        suites: Vec<String>,
    },
}

#[derive(Args)]
struct Common {
    /// Workspace JSON file.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Inclusive degree range a..b overriding the task degrees.
    #[arg(long = "degree-range", allow_hyphen_values = true)]
    degree_range: Option<DegreeRange>,
    /// Write the JSON report to this path.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Run tasks on separate threads; the report order is unchanged.
    #[arg(long)]
    parallel: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let invalid = e.downcast_ref::<WorkspaceError>().is_some();
            ExitCode::from(if invalid { 2 } else { 1 })
        }
    }
}

fn load(path: Option<&Path>, kind: &str) -> Result<Workspace> {
    let path = path.with_context(|| format!("the {kind} command needs --input"))?;
    Ok(Workspace::load(path)?)
}

fn execute(cli: Cli) -> Result<u8> {
    let (kind, common, suites) = match cli.command {
        Command::Cohomology(c) => ("cohomology", c, None),
        Command::Tate(c) => ("tate", c, None),
        Command::Shapiro(c) => ("shapiro", c, None),
        Command::Duality(c) => ("duality", c, None),
        Command::Tower(c) => ("tower", c, None),
        Command::Compact(c) => ("compact", c, None),
        Command::Verify { common, suites } => ("verify", common, Some(suites)),
    };
    let (ws, tasks) = match (&common.input, suites) {
        (None, Some(suites)) => {
            let suites = if suites.is_empty() { SUITES.iter().map(|s| s.to_string()).collect() } else { suites };
            if let Some(s) = suites.iter().find(|s| !SUITES.contains(&s.as_str())) {
                return Err(WorkspaceError::Validation { field: "--suite".into(), message: format!("unknown suite '{s}'") }.into());
            }
            let tasks = suites.into_iter().map(|s| Task { name: s.clone(), kind: TaskKind::Verify { suites: vec![s] } }).collect();
            (Workspace::parse(r#"{"schema": "iwacoh-workspace/1", "ring": {"p": 2, "e": 1}}"#)?, tasks)
        }
        (input, _) => {
            let ws = load(input.as_deref(), kind)?;
            let tasks: Vec<Task> = ws.tasks.iter().filter(|t| t.kind.name() == kind).cloned().collect();
            (ws, tasks)
        }
    };
    let tasks: Vec<Task> = match common.degree_range {
        Some(r) => tasks.into_iter().map(|t| Task { kind: t.kind.with_degrees(r), ..t }).collect(),
        None => tasks,
    };
    let report: Report = run_tasks(&ws, &tasks, common.seed, common.parallel);
    print!("{}", report.to_text());
    if let Some(path) = &common.report {
        std::fs::write(path, report.to_json()).with_context(|| format!("cannot write report to {}", path.display()))?;
    }
    Ok(report.exit_code() as u8)
}
