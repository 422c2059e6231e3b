use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qqm_cli::{execute, report, Options};

/// Quaternionic quantum mechanics toolkit.
#[derive(Parser)]
#[command(name = "qqm", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write its CSV artifacts.
    Run {
        /// Scenario file path.
        file: PathBuf,
        /// Repeat grid-based residual checks on N refinement levels.
        #[arg(long, default_value_t = 1, value_name = "N")]
        grid_refine: usize,
        /// Override every upper-bound threshold with this value.
        #[arg(long, value_name = "X")]
        tolerance: Option<f64>,
        /// Suppress the per-check report on stdout.
        #[arg(long)]
        quiet: bool,
    },
}

fn main() -> ExitCode {
    // QQM_THREADS caps internal parallelism (default: all cores).
    if let Ok(threads) = std::env::var("QQM_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        } else {
            eprintln!("QQM_THREADS must be a positive integer, ignoring `{threads}`");
        }
    }

    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            file,
            grid_refine,
            tolerance,
            quiet,
        } => {
            let options = Options {
                grid_refine: grid_refine.max(1),
                tolerance,
            };
            match execute(&file, &options) {
                Ok(outcome) => {
                    if !quiet {
                        for row in &outcome.rows {
                            println!("{}", report::render_row(row));
                        }
                        for f in &outcome.files {
                            println!("wrote {}", f.display());
                        }
                        let failed = outcome.rows.iter().filter(|r| !r.passed()).count();
                        if failed == 0 {
                            println!("all checks passed");
                        } else {
                            println!("{failed} check(s) failed");
                        }
                    }
                    if outcome.all_pass {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
    }
}
