use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod input;

use input::CliError;

/// Linear network coding over delayed acyclic networks.
///
/// Every subcommand reads one JSON problem file and writes a JSON report.
/// Exit status: 0 when the verdict passes, 1 when it fails, 2 when the
/// input cannot be used.
#[derive(Debug, Parser)]
#[command(name = "tnc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Pretty-print the report (compact JSON otherwise).
    #[arg(long, global = true, conflicts_with = "json")]
    pretty: bool,
    /// Compact JSON output (the default).
    #[arg(long, global = true)]
    json: bool,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Use a random network with random kernels (drawn from --seed)
    /// instead of an input file.
    #[arg(long, global = true)]
    random_net: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a problem file and summarize it.
    Validate {
        input: Option<PathBuf>,
        /// Print the unit-delay version of the network as a problem file
        /// instead of the summary.
        #[arg(long)]
        dump_normalized: bool,
    },
    /// Min-cut between every source and every sink.
    Mincut { input: Option<PathBuf> },
    /// Transfer matrix and delay bounds.
    Transfer { input: Option<PathBuf> },
    /// Simulate random inputs and compare with the transfer matrix.
    Simulate {
        input: Option<PathBuf>,
        /// Number of time slots to simulate.
        #[arg(long, default_value_t = 16)]
        slots: usize,
    },
    /// Zero-interference and invertibility conditions, and f(D).
    Feasibility {
        input: Option<PathBuf>,
        /// Also search for the smallest block length avoiding the roots of f.
        #[arg(long)]
        find_plan: bool,
        /// Smallest block length to consider (default d_max + 1).
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long, default_value_t = 12)]
        max_ext_degree: u32,
    },
    /// Run one transform block through the network.
    Transform {
        input: Option<PathBuf>,
        /// Block length; otherwise the file's `n`, otherwise the smallest
        /// feasible one.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 12)]
        max_ext_degree: u32,
    },
    /// Three-unicast alignment: search for kernels, or check given ones.
    Align {
        input: Option<PathBuf>,
        /// Check the file's own kernels instead of searching.
        #[arg(long)]
        verify_only: bool,
        /// Half block length: blocks are 2n + 1 long. Default: the file's
        /// `n`, else 3.
        #[arg(long)]
        n: Option<usize>,
        /// Random kernel draws to try.
        #[arg(long, default_value_t = 500)]
        budget: usize,
        /// Largest extension degree of the operating field.
        #[arg(long, default_value_t = 48)]
        max_ext_degree: u32,
        /// Encode/decode trials on the result.
        #[arg(long, default_value_t = 10)]
        trials: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = commands::run(&cli.command, &cli.common);
    match outcome {
        Ok(report) => {
            let text = if cli.common.pretty {
                serde_json::to_string_pretty(&report.value)
            } else {
                serde_json::to_string(&report.value)
            }
            .expect("reports are plain JSON");
            let written = match &cli.common.output {
                Some(path) => std::fs::write(path, format!("{text}\n")).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    let mut out = std::io::stdout().lock();
                    match writeln!(out, "{text}") {
                        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.to_string()),
                        _ => Ok(()),
                    }
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if report.pass { 0 } else { 1 })
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
