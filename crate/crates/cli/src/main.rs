//! `boxwave`: reports, sweeps and replication tables for free-particle box states.

mod commands;
mod replicate;
mod sink;

use std::path::PathBuf;
use std::process::ExitCode;

use boxwave::{MatrixElements, Numerics};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "boxwave", version, about = "Uncertainty relations for free-particle states on a periodic box")]
struct Cli {
    #[command(flatten)]
    numerics: NumericArgs,

    /// Directory for output files when no explicit path is given; stdout otherwise.
    #[arg(long, global = true, env = "BOXWAVE_OUT_DIR")]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct NumericArgs {
    /// Gauss-Legendre panels (16 nodes each) for window integrals.
    #[arg(long, global = true, default_value_t = 64)]
    panels: usize,
    /// Grid points per box length for the density-minimum scan.
    #[arg(long, global = true, default_value_t = 4096)]
    x_grid: usize,
    /// Grid points per box length for the Judge shift scan.
    #[arg(long, global = true, default_value_t = 1024)]
    gamma_grid: usize,
    /// Time samples per recurrence period for the max-min bound.
    #[arg(long, global = true, default_value_t = 2048)]
    time_samples: usize,
    /// Sine modes kept when projecting a profile (overridden by a state document's `truncation` key).
    #[arg(long, global = true, default_value_t = 256)]
    truncation: usize,
    /// How sine-mode momentum matrix elements are computed.
    #[arg(long, global = true, value_enum, default_value_t = MatrixArg::Quadrature)]
    matrix_elements: MatrixArg,
    /// Seed for the randomized rows of `replicate`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum MatrixArg {
    Quadrature,
    SelectionRule,
}

impl NumericArgs {
    fn numerics(&self) -> Numerics {
        Numerics {
            panels: self.panels.max(1),
            x_grid: self.x_grid.max(8),
            gamma_grid: self.gamma_grid.max(8),
            time_samples: self.time_samples.max(2),
            truncation: self.truncation.max(1),
            matrix_elements: match self.matrix_elements {
                MatrixArg::Quadrature => MatrixElements::Quadrature,
                MatrixArg::SelectionRule => MatrixElements::SelectionRule,
            },
            ..Numerics::default()
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowArg {
    /// `[x_lo, x_lo + L]` for plane waves, the moving window for Bloch-sine states.
    Auto,
    Base,
    MovingNode,
    MinCut,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Recompute the closed-form values and compare; exits non-zero on any mismatch.
    Replicate {
        /// CSV file for the table (the table is always printed).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// All bound prescriptions and the uncertainty report for one state at one time.
    Report {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, value_enum, default_value_t = WindowArg::Auto)]
        window: WindowArg,
        /// Cut point for the cut bound; defaults to the window start.
        #[arg(long, allow_negative_numbers = true)]
        cut: Option<f64>,
        /// Structured-text (TOML) report.
        #[arg(long)]
        out: Option<PathBuf>,
        /// CSV file with one row per bound prescription.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Sweep one parameter and write one CSV row per point.
    Scan {
        #[arg(long)]
        spec: PathBuf,
        /// One of L, b, k, t, K.
        #[arg(long)]
        axis: String,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        /// Evaluation time for axes other than t.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, value_enum, default_value_t = WindowArg::Auto)]
        window: WindowArg,
        /// Also compute the time-maximized bound (one full period scan per point).
        #[arg(long)]
        maxmin: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sampled densities over time, rows (t, x, density).
    Evolve {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 16)]
        frames: usize,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        /// Last frame time; defaults to one recurrence period (exclusive).
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let numerics = cli.numerics.numerics();
    let dir = cli.out_dir.as_deref();
    match cli.command {
        Command::Replicate { out } => {
            replicate::run(&numerics, cli.numerics.seed, sink::resolve(out, dir, "replicate.csv").as_deref())
        }
        Command::Report {
            spec,
            t,
            window,
            cut,
            out,
            csv,
        } => {
            commands::report(
                &spec,
                t,
                window,
                cut,
                &numerics,
                sink::resolve(out, dir, "report.toml").as_deref(),
                csv.as_deref(),
            )?;
            Ok(true)
        }
        Command::Scan {
            spec,
            axis,
            from,
            to,
            steps,
            t,
            window,
            maxmin,
            out,
        } => {
            let plan = commands::ScanPlan {
                axis,
                from,
                to,
                steps,
                t,
                window,
                maxmin,
            };
            commands::scan(&spec, &plan, &numerics, sink::resolve(out, dir, "scan.csv").as_deref())?;
            Ok(true)
        }
        Command::Evolve {
            spec,
            frames,
            grid,
            t_end,
            out,
        } => {
            commands::evolve(&spec, frames, grid, t_end, &numerics, sink::resolve(out, dir, "evolve.csv").as_deref())?;
            Ok(true)
        }
    }
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
