mod commands;
mod config;
mod error;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;
use error::CliError;

/// Profile curves and revolved surfaces with prescribed mean curvature.
#[derive(Parser, Debug)]
#[command(name = "singrev", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample the profile curve as CSV.
    Trace(Args),
    /// Locate and classify the singular points.
    Singularities(Args),
    /// Decide periodicity under the period `L`.
    Periodicity(Args),
    /// Constants c1, c2 that make the profile L-periodic.
    SolveConstants(Args),
    /// Plot the profile curve as SVG.
    Plot(Args),
    /// Revolve the profile into an OBJ mesh.
    Mesh(Args),
}

#[derive(clap::Args, Debug)]
struct Args {
    /// Configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output file (default: the path from the config, else stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of profile samples.
    #[arg(long)]
    samples: Option<usize>,
    /// Number of angular steps of the mesh.
    #[arg(long)]
    theta: Option<usize>,
    /// Quadrature tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

impl Args {
    fn load(&self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::load(&self.config)?;
        if let Some(n) = self.samples {
            cfg.samples = n;
        }
        if let Some(n) = self.theta {
            cfg.n_theta = n;
        }
        if let Some(tol) = self.tol {
            if !(tol > 0.0) {
                return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
            }
            cfg.tol.quad = tol;
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Trace(args) => {
            let cfg = args.load()?;
            let csv = commands::trace(&cfg)?;
            commands::emit(args.out.as_deref().or(cfg.trace_out.as_deref()), &csv)
        }
        Command::Singularities(args) => {
            let cfg = args.load()?;
            let (text, report) = commands::singularities(&cfg)?;
            report_and_summary(&args, &cfg, &text, &report)
        }
        Command::Periodicity(args) => {
            let cfg = args.load()?;
            let (text, report) = commands::periodicity(&cfg)?;
            report_and_summary(&args, &cfg, &text, &report)
        }
        Command::SolveConstants(args) => {
            let cfg = args.load()?;
            let (text, report) = commands::solve_constants(&cfg)?;
            report_and_summary(&args, &cfg, &text, &report)
        }
        Command::Plot(args) => {
            let cfg = args.load()?;
            let svg = commands::plot(&cfg)?;
            commands::emit(args.out.as_deref().or(cfg.plot_out.as_deref()), &svg)
        }
        Command::Mesh(args) => {
            let cfg = args.load()?;
            let obj = commands::mesh(&cfg)?;
            commands::emit(args.out.as_deref().or(cfg.mesh_out.as_deref()), &obj)
        }
    }
}

/// Prints the summary; the JSON report goes to `--out` or `report_out`, if set.
fn report_and_summary(args: &Args, cfg: &RunConfig, text: &str, report: &str) -> Result<(), CliError> {
    commands::emit(None, text)?;
    match args.out.as_deref().or(cfg.report_out.as_deref()) {
        Some(path) => commands::emit(Some(path), report),
        None => Ok(()),
    }
}

fn fail(code: &str, message: &str, exit: u8) -> ExitCode {
    let line = message.replace('\n', " ");
    eprintln!("singrev: error[{code}]: {}", line.trim());
    ExitCode::from(exit)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                let _ = e.print();
                return ExitCode::from(2);
            }
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            return fail("E_USAGE", first.trim_start_matches("error: "), 2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e.code(), &e.to_string(), e.exit_code() as u8),
    }
}
