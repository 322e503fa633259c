//! Problem-file driver for the `ellkit` kernels: parsing, dispatch,
//! deterministic reports and the exit-code contract.
//!
//! Exit codes: 0 success, 1 false verdict or failed invariant, 2 malformed
//! input, 3 precision or budget exhausted.

pub mod problem;
pub mod report;
pub mod tasks;

use ellkit::selftest::{self, Outcome, SelftestConfig};
use ellkit::stats;
use ellkit::Error;

pub use problem::{Config, Overrides, ProblemFile};
pub use report::{Report, Status, TaskReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Malformed(String),
    #[error(transparent)]
    Lib(#[from] Error),
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            CliError::Malformed(_) => Status::Malformed,
            CliError::Lib(e) if e.is_precision() => Status::Undecided,
            CliError::Lib(Error::Invariant(_) | Error::HypothesisViolated(_)) => Status::Fail,
            CliError::Lib(_) => Status::Malformed,
        }
    }
}

fn echo(cfg: &Config) -> Vec<(String, String)> {
    let mut out = vec![
        ("ring".to_string(), cfg.params.header()),
        ("degree".to_string(), cfg.degree.to_string()),
        ("seed".to_string(), cfg.seed.to_string()),
    ];
    if let Some(l) = cfg.level {
        out.push(("level".to_string(), l.to_string()));
    }
    out
}

/// Runs every block of `problem` named `command`, in file order.
pub fn run(command: &str, problem: &ProblemFile, overrides: &Overrides) -> Result<Report, CliError> {
    if !problem::TASKS.contains(&command) {
        return Err(CliError::Malformed(format!("unknown subcommand `{command}`")));
    }
    let cfg = problem.config(overrides)?;
    let blocks: Vec<_> = problem.blocks.iter().filter(|b| b.name == command).collect();
    if blocks.is_empty() {
        return Err(CliError::Malformed(format!("problem file has no [{command}] block")));
    }
    stats::reset_op_count();
    let tasks = blocks
        .iter()
        .enumerate()
        .map(|(k, b)| {
            let (status, message, lines) = match tasks::run_block(b, &cfg) {
                Ok(v) if v.pass => (Status::Pass, None, v.lines),
                Ok(v) => (Status::Fail, None, v.lines),
                Err(e) => (e.status(), Some(e.to_string()), Vec::new()),
            };
            TaskReport { index: k + 1, task: command.to_string(), status, message, lines }
        })
        .collect();
    Ok(Report::new(command, echo(&cfg), tasks, stats::op_count()))
}

pub fn run_text(command: &str, text: &str, overrides: &Overrides) -> Result<Report, CliError> {
    run(command, &ProblemFile::parse(text)?, overrides)
}

/// Runs the named suites, or all of them when `only` is empty.
pub fn run_selftest(config: &SelftestConfig, only: &[String]) -> Result<Report, CliError> {
    if let Some(bad) = only.iter().find(|n| !selftest::suite_names().contains(&n.as_str())) {
        return Err(CliError::Malformed(format!("unknown suite `{bad}`")));
    }
    stats::reset_op_count();
    let r = match only {
        [] => selftest::run(config),
        names => selftest::SelftestReport {
            suites: names.iter().filter_map(|n| selftest::run_suite(n, config)).collect(),
        },
    };
    let mut echo = vec![
        ("profile".to_string(), config.profile.as_str().to_string()),
        ("seed".to_string(), config.seed.to_string()),
    ];
    if let Some(n) = config.precision {
        echo.push(("precision".to_string(), n.to_string()));
    }
    if let Some(m) = config.mutation {
        echo.push(("mutation".to_string(), format!("{m:?}")));
    }
    let tasks = r
        .suites
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let (status, message) = match &s.outcome {
                Outcome::Pass => (Status::Pass, None),
                Outcome::Fail(m) => (Status::Fail, Some(m.clone())),
                Outcome::Undecided(m) => (Status::Undecided, Some(m.clone())),
            };
            TaskReport {
                index: k + 1,
                task: s.name.to_string(),
                status,
                message,
                lines: vec![format!("criterion {}; {} checks", s.criterion, s.checks)],
            }
        })
        .collect();
    Ok(Report::new("selftest", echo, tasks, stats::op_count()))
}
