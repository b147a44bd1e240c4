//! `rumor`: generate populations, run spreading sweeps, fit and invert the
//! growth law.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use commands::Ctx;
use config::{Command, JobConfig, Profile};

#[derive(Parser)]
#[command(name = "rumor", version, about = "Rumor spreading simulation and growth-law fitting")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON job configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Population and ensemble sizes preset; overrides the config.
    #[arg(long, global = true, value_enum)]
    profile: Option<Profile>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Args, Default)]
struct Point {
    #[arg(long)]
    p_ii: Option<f64>,
    #[arg(long)]
    p_ip: Option<f64>,
    #[arg(long)]
    p_usg: Option<f64>,
}

#[derive(Args)]
struct Input {
    /// Series CSV with columns n,f_mean,f_std,n_samples.
    #[arg(long)]
    input: PathBuf,
    /// Seed fraction; defaults to f(0) of the series.
    #[arg(long)]
    p_ii: Option<f64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build one population and report how well it matches the target distributions.
    GenPop,
    /// Run one ensemble and fit the growth law to it.
    Simulate(Point),
    /// Run an ensemble and a fit at every point of the parameter grid.
    Sweep,
    /// Fit the growth law to a series CSV.
    Fit(Input),
    /// Predict the curve and the times to reach 10%..90%.
    Predict(Point),
    /// Infer P_USG and P_IP from a series CSV.
    Infer(Input),
    /// Check the USG polynomials against the per-USG coefficient table.
    ValidateTables,
}

fn resolve(cli: Cli) -> Result<(Command, Ctx)> {
    let c = &cli.common;
    let mut job = match &c.config {
        Some(path) => JobConfig::load(path)?,
        None => JobConfig::default(),
    };
    if let Some(p) = c.profile {
        p.apply(&mut job);
    }
    if let Some(s) = c.seed {
        job.master_seed = s;
    }
    if let Some(o) = &c.out {
        job.output_dir = o.clone();
    }
    let (command, point, input) = match cli.command {
        Cmd::GenPop => (Command::GenPop, None, None),
        Cmd::Simulate(p) => (Command::Simulate, Some(p), None),
        Cmd::Sweep => (Command::Sweep, None, None),
        Cmd::Fit(i) => (Command::Fit, None, Some(i)),
        Cmd::Predict(p) => (Command::Predict, Some(p), None),
        Cmd::Infer(i) => (Command::Infer, None, Some(i)),
        Cmd::ValidateTables => (Command::ValidateTables, None, None),
    };
    if let Some(p) = point {
        let any = p.p_ii.is_some() || p.p_ip.is_some() || p.p_usg.is_some();
        job.spread.p_ii = p.p_ii.unwrap_or(job.spread.p_ii);
        job.spread.p_ip = p.p_ip.unwrap_or(job.spread.p_ip);
        job.spread.p_usg = p.p_usg.unwrap_or(job.spread.p_usg);
        if any {
            // an explicit point replaces the configured grid
            job.grid = None;
        }
    }
    let job = job.finish(command)?;
    let (input, p_ii) = match input {
        Some(i) => (Some(i.input), i.p_ii),
        None => (None, None),
    };
    Ok((
        command,
        Ctx {
            job,
            report_dir: c.out.clone(),
            input,
            p_ii,
        },
    ))
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(n) = cli.common.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .context("configuring the thread pool")?;
    }
    let (command, ctx) = resolve(cli)?;
    commands::run(command, &ctx)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
