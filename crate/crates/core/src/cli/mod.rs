//! Command-line front end: problem loading, task dispatch and reports.
//!
//! A [`ProblemSpec`] pairs a parsed problem file with the task chosen on the
//! command line. [`run`] returns a [`Report`]; its
//! [`exit_code`](Report::exit_code) is 0 or 1, and any [`Error`] maps to 2.

mod builtin;
mod report;
mod tasks;

pub use builtin::{example35_report, table1_report};
pub use report::{
    Cell, NamedValue, Report, ReportTable, Trace, Verdict, WitnessEntry, SCHEMA_VERSION,
};

use crate::descriptor::{ProblemFile, Task};
use crate::error::{Error, Result};

/// Exit code for structural and domain errors.
pub const EXIT_ERROR: i32 = 2;

/// Knobs that come from command-line flags rather than the problem file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    /// Start label for `iterate`.
    pub from: Option<String>,
    pub max_iter: usize,
    pub tol: f64,
    /// Number of grid intervals for `scan`.
    pub grid: usize,
    /// Run the comparability check alongside `verify`.
    pub kappa: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            from: None,
            max_iter: 100,
            tol: crate::single::DEFAULT_ORBIT_TOL,
            grid: 128,
            kappa: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub task: Task,
    pub file: ProblemFile,
    pub options: RunOptions,
}

/// Parses `text` as a problem file for `task`.
///
/// A `"task"` field in the file, when present, must agree with `task`.
pub fn load_problem(text: &str, task: Task, options: RunOptions) -> Result<ProblemSpec> {
    let file: ProblemFile = serde_json::from_str(text)
        .map_err(|e| Error::structural(format!("malformed problem file: {e}")))?;
    if let Some(t) = file.task {
        if t != task {
            return Err(Error::structural(format!(
                "problem file is for task {:?}, not {:?}",
                t.name(),
                task.name()
            )));
        }
    }
    Ok(ProblemSpec {
        task,
        file,
        options,
    })
}

pub fn run(spec: &ProblemSpec) -> Result<Report> {
    match spec.task {
        Task::Validate => tasks::validate(&spec.file),
        Task::Verify => tasks::verify(&spec.file, &spec.options),
        Task::Fixpoints => tasks::fixpoints(&spec.file),
        Task::Iterate => tasks::iterate(&spec.file, &spec.options),
        Task::Scan => tasks::scan(&spec.file, &spec.options),
        Task::Table1 => table1_report(),
        Task::Example35 => example35_report(),
    }
}
