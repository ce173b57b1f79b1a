use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use levi_disc::commands::{run, Command, Outcome, EXIT_ERROR};
use levi_disc::pipeline::Overrides;

#[derive(Parser)]
#[command(name = "levi-disc", version, about = "Stationary discs of CR quadrics: classify, search, construct, verify")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(clap::Args)]
struct Common {
    /// Rank-test tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Random directions per search round
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Boundary grid size, a power of two
    #[arg(long, global = true)]
    fourier_n: Option<usize>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Export sampled boundary values as CSV
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Record wall-clock time in the report
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Levi generating, nondegenerate, strongly nondegenerate, strongly pseudoconvex
    Classify { fixture: PathBuf },
    /// Search for a non-defective stationary pair and verify its disc
    FindPair {
        fixture: PathBuf,
        /// Save the constructed disc for check-disc
        #[arg(long)]
        disc_out: Option<PathBuf>,
    },
    /// Verify a disc file, or the disc for the fixture's params
    CheckDisc {
        fixture: PathBuf,
        #[arg(long)]
        disc: Option<PathBuf>,
    },
    /// Fraction of random admissible pairs judged defective
    Sweep {
        fixture: PathBuf,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Only sample λ = 0
        #[arg(long)]
        lambda_zero: bool,
    },
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(outcome: &Outcome, common: &Common, disc_out: Option<&PathBuf>) -> Result<()> {
    let text = match common.format {
        Format::Json => outcome.report.to_json(),
        Format::Text => outcome.report.to_text(),
    };
    match &common.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    if let (Some(path), Some(table)) = (&common.csv, &outcome.boundary) {
        let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        table.write_csv(file).with_context(|| format!("writing {}", path.display()))?;
    }
    if let (Some(path), Some(disc)) = (disc_out, &outcome.disc_file) {
        let mut json = serde_json::to_string_pretty(disc)?;
        json.push('\n');
        fs::write(path, json).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = &cli.common;
    let overrides = Overrides { tol: c.tol, seed: c.seed, samples: c.samples, fourier_n: c.fourier_n };
    let started = Instant::now();
    let result = (|| -> Result<(Outcome, Option<&PathBuf>)> {
        Ok(match &cli.command {
            Cmd::Classify { fixture } => (run(&Command::Classify, &read(fixture)?, &overrides), None),
            Cmd::FindPair { fixture, disc_out } => {
                (run(&Command::FindPair, &read(fixture)?, &overrides), disc_out.as_ref())
            }
            Cmd::CheckDisc { fixture, disc } => {
                let disc = disc.as_ref().map(read).transpose()?;
                (run(&Command::CheckDisc { disc }, &read(fixture)?, &overrides), None)
            }
            Cmd::Sweep { fixture, trials, lambda_zero } => {
                let cmd = Command::Sweep { trials: *trials, lambda_zero: *lambda_zero };
                (run(&cmd, &read(fixture)?, &overrides), None)
            }
        })
    })();
    let (mut outcome, disc_out) = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("levi-disc: {e:#}");
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    if c.timing {
        outcome.report.wall_time_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    }
    if let Err(e) = emit(&outcome, c, disc_out) {
        eprintln!("levi-disc: {e:#}");
        return ExitCode::from(EXIT_ERROR as u8);
    }
    if let Some(err) = &outcome.report.error {
        eprintln!("levi-disc: {}: {}", err.kind, err.message);
    }
    ExitCode::from(outcome.exit_code as u8)
}
