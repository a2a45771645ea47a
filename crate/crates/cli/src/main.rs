//! `finsler-iso`: isoperimetric profiles, Wulff shapes and weighted cone
//! inequalities from the command line.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context as _, Result};
use clap::{Parser, Subcommand};

use commands::*;
use config::{merge, Format, RunConfig};

const DEFAULT_RESOLUTION: usize = 4096;

#[derive(Debug, Parser)]
#[command(name = "finsler-iso", version, about = "Sharp isoperimetry in gauge spaces and weighted cones")]
struct Cli {
    /// JSON run configuration with global settings and per-command sections.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (stdout by default).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Master seed of all random instances [default: 0].
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Direction count for balls, Wulff shapes and curved shapes [default: 4096].
    #[arg(long, global = true)]
    resolution: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Model profile I_{N,D}(v) and its minimizing ξ.
    Profile(ProfileArgs),
    /// Rigidity record of an interval set in a one-dimensional space.
    Residual(ResidualArgs),
    /// Smoothness, reversibility and axis values of a gauge and its dual.
    GaugeInfo(GaugeArgs),
    /// Vertices of the Wulff shape.
    Wulff(GaugeArgs),
    /// Isoperimetric quotient of a set inside a weighted cone.
    ConeReport(ConeReportArgs),
    /// Brunn–Minkowski slack or the midpoint-set trace.
    BmCheck(BmArgs),
    /// Forward Minkowski content ladder.
    MinkContent(ContentArgs),
    /// Coarea inequality for a radial profile.
    Coarea(CoareaArgs),
    /// Runs the verification battery.
    Verify(VerifyArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Profile(_) => "profile",
            Command::Residual(_) => "residual",
            Command::GaugeInfo(_) => "gauge-info",
            Command::Wulff(_) => "wulff",
            Command::ConeReport(_) => "cone-report",
            Command::BmCheck(_) => "bm-check",
            Command::MinkContent(_) => "mink-content",
            Command::Coarea(_) => "coarea",
            Command::Verify(_) => "verify",
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    if let Ok(n) = std::env::var("FINSLER_ISO_THREADS") {
        let n: usize = n.parse().context("FINSLER_ISO_THREADS must be a positive integer")?;
        anyhow::ensure!(n > 0, "FINSLER_ISO_THREADS must be a positive integer");
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let file = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let name = cli.command.name();
    let section = file.section(name);
    let ctx = Settings {
        seed: cli.seed.or(file.seed).unwrap_or(0),
        resolution: cli.resolution.or(file.resolution).unwrap_or(DEFAULT_RESOLUTION),
    };
    anyhow::ensure!(ctx.resolution >= 8, "resolution must be at least 8");
    let format = cli.format.or(file.format).unwrap_or(Format::Json);
    let out = cli.out.clone().or_else(|| file.out.clone());
    let report = match &cli.command {
        Command::Profile(a) => cmd_profile(&merge(a, section)?),
        Command::Residual(a) => cmd_residual(&merge(a, section)?),
        Command::GaugeInfo(a) => cmd_gauge_info(&merge(a, section)?, ctx),
        Command::Wulff(a) => cmd_wulff(&merge(a, section)?, ctx),
        Command::ConeReport(a) => cmd_cone_report(&merge(a, section)?, ctx),
        Command::BmCheck(a) => cmd_bm_check(&merge(a, section)?, ctx),
        Command::MinkContent(a) => cmd_mink_content(&merge(a, section)?, ctx),
        Command::Coarea(a) => cmd_coarea(&merge(a, section)?, ctx),
        Command::Verify(a) => cmd_verify(&merge(a, section)?, ctx),
    }?;
    let bytes = output::render(&report, name, ctx.seed, ctx.resolution, format)?;
    output::write(&bytes, out.as_deref())?;
    Ok(report.ok || name != "verify")
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
