//! Command-line front end: every computation as a grid job with JSON-lines
//! or CSV output.

mod job;
mod output;

use std::io::Write;

use clap::{CommandFactory, Parser};

pub use job::{Command, Format, JobSpec};
use output::emit;

#[derive(Debug, Parser)]
#[command(name = "fracspec", version, about = "Spectral counting on fractal strings and horns")]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    /// Read the job from a JSON file instead of the command line.
    #[arg(long, value_name = "FILE")]
    job: Option<std::path::PathBuf>,

    #[command(subcommand)]
    command: Option<job::CliCommand>,
}

/// Usage error: message plus exit code 2.
struct UsageError(String);

fn usage_text() -> String {
    Cli::command().render_usage().to_string()
}

fn parse(argv: &[String]) -> std::result::Result<JobSpec, std::result::Result<String, UsageError>> {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return Err(match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Ok(e.to_string()),
                _ => Err(UsageError(e.to_string())),
            });
        }
    };
    let job = match (cli.job, cli.command) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Err(UsageError(format!("error: cannot read {}: {e}\n", path.display()))))?;
            serde_json::from_str::<JobSpec>(&text)
                .map_err(|e| Err(UsageError(format!("error: invalid job file: {e}\n"))))?
        }
        (None, Some(cmd)) => cmd.into_job(),
        _ => return Err(Err(UsageError(format!("error: give a subcommand or --job FILE\n\n{}\n", usage_text())))),
    };
    job.validate()
        .map_err(|msg| Err(UsageError(format!("error: {msg}\n\n{}\n", usage_text()))))?;
    Ok(job)
}

/// Runs the program on `argv` (including the program name), writing rows to
/// `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<O: Write, E: Write>(argv: &[String], out: &mut O, err: &mut E) -> i32 {
    let job = match parse(argv) {
        Ok(job) => job,
        Err(Ok(text)) => {
            let _ = write!(out, "{text}");
            return 0;
        }
        Err(Err(UsageError(msg))) => {
            let _ = write!(err, "{msg}");
            return 2;
        }
    };
    let rows = match job.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| job.execute()),
            Err(e) => {
                let _ = writeln!(err, "error: cannot start {n} worker threads: {e}");
                return 1;
            }
        },
        None => job.execute(),
    };
    let (rows, failure) = rows;
    if let Err(e) = emit(&rows, job.format(), out) {
        let _ = writeln!(err, "error: write failed: {e}");
        return 1;
    }
    match failure {
        Some(e) => {
            let _ = writeln!(err, "error: {}: {e}", e.kind());
            1
        }
        None => 0,
    }
}
