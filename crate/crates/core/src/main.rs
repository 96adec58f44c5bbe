use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tripoint::cli::{self, Report, RunOptions, EXIT_ERROR};
use tripoint::descriptor::Task;
use tripoint::Error;

/// Verify three-points contraction conditions and run fixed-point orbits.
#[derive(Parser)]
#[command(name = "tripoint", version)]
struct Args {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of every distance table.
    Validate { spec: PathBuf },
    /// Check the contraction condition of the map.
    Verify {
        spec: PathBuf,
        /// Also compute the comparability constant κ.
        #[arg(long)]
        kappa: bool,
    },
    /// List the fixed points of the map.
    Fixpoints { spec: PathBuf },
    /// Run the orbit from a start point and check its error bounds.
    Iterate {
        spec: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
        #[arg(long, default_value_t = tripoint::single::DEFAULT_ORBIT_TOL)]
        tol: f64,
    },
    /// Scan the ratio over a uniform grid on an interval.
    Scan {
        spec: PathBuf,
        /// Number of grid intervals.
        #[arg(long, default_value_t = 128)]
        grid: usize,
    },
    /// Run a built-in example.
    Fixture { name: FixtureName },
}

#[derive(Clone, Copy, ValueEnum)]
enum FixtureName {
    Table1,
    Example35,
}

fn load(path: &PathBuf, task: Task, options: RunOptions) -> Result<Report, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Structural(format!("cannot read {}: {e}", path.display())))?;
    cli::run(&cli::load_problem(&text, task, options)?)
}

fn execute(command: Command) -> Result<Report, Error> {
    let opts = RunOptions::default();
    match command {
        Command::Validate { spec } => load(&spec, Task::Validate, opts),
        Command::Verify { spec, kappa } => load(&spec, Task::Verify, RunOptions { kappa, ..opts }),
        Command::Fixpoints { spec } => load(&spec, Task::Fixpoints, opts),
        Command::Iterate {
            spec,
            from,
            max_iter,
            tol,
        } => load(
            &spec,
            Task::Iterate,
            RunOptions {
                from: Some(from),
                max_iter,
                tol,
                ..opts
            },
        ),
        Command::Scan { spec, grid } => load(&spec, Task::Scan, RunOptions { grid, ..opts }),
        Command::Fixture { name } => match name {
            FixtureName::Table1 => cli::table1_report(),
            FixtureName::Example35 => cli::example35_report(),
        },
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(args.command) {
        Ok(report) => {
            if args.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
