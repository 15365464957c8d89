use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use frontlab_cli::{run, CliError, Command, RunConfig};

/// Traveling fronts of damped bistable wave equations: speed, profile,
/// spectrum, Evans function, resolvent bounds and PDE cross-checks.
///
/// Exit status: 0 success, 1 usage or configuration error, 2 structural
/// hypotheses fail, 3 numerical failure.
#[derive(Debug, Parser)]
#[command(name = "frontlab", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// JSON run configuration (or a summary.json from an earlier run).
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: the config's `output`, else ./frontlab-out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for the randomized resolvent trials.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&args) {
        Ok(summary) => {
            // a closed stdout (e.g. piped into `head`) is not an error
            let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("frontlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn execute(args: &Args) -> Result<frontlab_cli::summary::Summary, CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", args.config.display())))?;
    let cfg = RunConfig::parse(&text)?;
    run(args.command, &cfg, args.seed, args.out.as_deref())
}
