//! `pcd2d` — partially cooperative D2D coded caching harness.
//!
//! Exit codes: 0 success, 1 validation error, 2 decode/invariant failure.
//! Reports and CSV go to stdout or `--out`; timing goes to stderr so output
//! stays byte-reproducible.

use std::io::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use pcd2d_cli::config::{self, NumOrString, RawOptions};
use pcd2d_cli::{simulate, sweep, verify, HarnessError};

#[derive(Parser)]
#[command(
    name = "pcd2d",
    about = "Partially cooperative D2D coded caching: simulation, verification, trade-off sweeps",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct CommonArgs {
    /// Number of users K
    #[arg(long = "K")]
    users: Option<usize>,
    /// Number of selfish (non-transmitting) users S
    #[arg(long = "S")]
    selfish_count: Option<usize>,
    /// Number of library files N
    #[arg(long = "N")]
    files: Option<usize>,
    /// Caching parameter: a value (2), range (0-3), or list (1,3)
    #[arg(long)]
    t: Option<String>,
    /// File size in symbols; padded up to a multiple of the
    /// subpacketization F (default: F)
    #[arg(long = "B")]
    file_size: Option<usize>,
    /// Seed for deterministic library and demand generation
    #[arg(long)]
    seed: Option<u64>,
    /// Field order: auto, 256, or 65536
    #[arg(long)]
    field: Option<String>,
    /// Selfish users: comma list (4,5), none, or all-subsets
    #[arg(long)]
    selfish: Option<String>,
    /// Demands: comma list (1,2,3), exhaustive, or random:<count>
    #[arg(long)]
    demands: Option<String>,
    /// Delivery mode: independent (default) or coordinated
    #[arg(long)]
    mode: Option<String>,
    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Grid samples for sweeps
    #[arg(long = "grid-points")]
    grid_points: Option<usize>,
    /// Largest K for exhaustive verification (2..=6)
    #[arg(long = "max-k")]
    max_k: Option<usize>,
    /// TOML config file; keys mirror these flag names, flags win
    #[arg(long)]
    config: Option<PathBuf>,
}

impl CommonArgs {
    fn resolve(self) -> Result<RawOptions, HarnessError> {
        let flags = RawOptions {
            users: self.users,
            selfish_count: self.selfish_count,
            files: self.files,
            t: self.t.map(NumOrString::Str),
            file_size: self.file_size,
            seed: self.seed,
            field: self.field.map(NumOrString::Str),
            selfish: self.selfish,
            demands: self.demands,
            mode: self.mode,
            out: self.out,
            grid_points: self.grid_points,
            max_k: self.max_k,
        };
        match &self.config {
            Some(path) => Ok(flags.merged_over(RawOptions::load_file(path)?)),
            None => Ok(flags),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run placement, delivery, and decoding end to end
    Simulate(CommonArgs),
    /// Exhaustively verify decodability on all small instances
    Verify(CommonArgs),
    /// Sweep the achievable memory-load trade-off to CSV
    Tradeoff(CommonArgs),
    /// Sweep the cut-set lower bound to CSV
    Bound {
        #[command(flatten)]
        common: CommonArgs,
        /// Also print the per-cut bound terms for every grid point to stderr
        #[arg(long = "debug-terms")]
        debug_terms: bool,
    },
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), HarnessError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| HarnessError::Validation(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            std::io::stdout()
                .flush()
                .map_err(|e| HarnessError::Validation(format!("stdout: {e}")))
        }
    }
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Simulate(args) => {
            let raw = args.resolve()?;
            let cfg = config::resolve_simulate(&raw)?;
            let outcome = simulate::cmd_simulate(&cfg)?;
            emit(&raw.out, &outcome.report)
        }
        Command::Verify(args) => {
            let raw = args.resolve()?;
            let cfg = config::resolve_verify(&raw)?;
            let outcome = verify::cmd_verify(&cfg)?;
            emit(&raw.out, &outcome.report)
        }
        Command::Tradeoff(args) => {
            let raw = args.resolve()?;
            let cfg = config::resolve_sweep(&raw)?;
            let csv = sweep::cmd_tradeoff(&cfg)?;
            emit(&raw.out, &csv)
        }
        Command::Bound {
            common,
            debug_terms,
        } => {
            let raw = common.resolve()?;
            let cfg = config::resolve_sweep(&raw)?;
            let (csv, debug) = sweep::cmd_bound(&cfg, debug_terms)?;
            if debug_terms {
                eprint!("{debug}");
            }
            emit(&raw.out, &csv)
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    let started = Instant::now();
    match run(cli) {
        Ok(()) => {
            eprintln!("wall_time_ms={}", started.elapsed().as_millis());
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
