//! Self-test suites for the acceptance criteria, with deterministic
//! randomized instances and mutation runs.

use std::fmt;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::fault::{self, Fault};

mod formal_suites;
mod honesty;
mod mellin_suites;
mod oracle;
mod tate_suites;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    Quick,
    Full,
}

impl Profile {
    pub fn parse(s: &str) -> Option<Profile> {
        match s {
            "quick" => Some(Profile::Quick),
            "full" => Some(Profile::Full),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Profile::Quick => "quick",
            Profile::Full => "full",
        }
    }

    fn pick(&self, quick: usize, full: usize) -> usize {
        match self {
            Profile::Quick => quick,
            Profile::Full => full,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SelftestConfig {
    pub profile: Profile,
    pub seed: u64,
    /// Overrides every suite's working precision.
    pub precision: Option<u32>,
    pub mutation: Option<Fault>,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig { profile: Profile::Quick, seed: 0, precision: None, mutation: None }
    }
}

pub fn parse_mutation(s: &str) -> Option<Fault> {
    match s {
        "phi-sign" => Some(Fault::PhiSignError),
        "ledger-off-by-one" => Some(Fault::LedgerOffByOne),
        "unsaturated-lattice" => Some(Fault::UnsaturatedLattice),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    /// Precision or size budget ran out before a verdict.
    Undecided(String),
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub criterion: u8,
    pub outcome: Outcome,
    pub checks: u64,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct SelftestReport {
    pub suites: Vec<SuiteReport>,
}

impl SelftestReport {
    /// 1 if any invariant failed, else 3 if any suite was undecided, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.suites.iter().any(|s| matches!(s.outcome, Outcome::Fail(_))) {
            1
        } else if self.suites.iter().any(|s| matches!(s.outcome, Outcome::Undecided(_))) {
            3
        } else {
            0
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Outcome::Pass => write!(f, "[{}] {}: pass ({} checks)", self.criterion, self.name, self.checks),
            Outcome::Fail(m) => write!(f, "[{}] {}: FAIL: {m}", self.criterion, self.name),
            Outcome::Undecided(m) => write!(f, "[{}] {}: undecided: {m}", self.criterion, self.name),
        }
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            writeln!(f, "{s}")?;
        }
        write!(f, "exit={}", self.exit_code())
    }
}

/// Why a suite stopped.
#[derive(Debug)]
pub(crate) enum Stop {
    Violated(String),
    Lib(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Lib(e)
    }
}

pub(crate) type Check = std::result::Result<(), Stop>;

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(Stop::Violated(msg()))
    }
}

/// Shared state handed to a suite.
pub(crate) struct Ctx {
    pub profile: Profile,
    pub precision: Option<u32>,
    pub seed: u64,
    pub rng: ChaCha8Rng,
    pub checks: u64,
}

impl Ctx {
    pub fn prec(&self, default: u32) -> u32 {
        self.precision.unwrap_or(default)
    }

    pub fn count(&self, quick: usize, full: usize) -> usize {
        self.profile.pick(quick, full)
    }
}

type SuiteFn = fn(&mut Ctx) -> Check;

const SUITES: [(&str, u8, SuiteFn); 9] = [
    ("phi-laws", 1, tate_suites::phi_laws),
    ("unit-cert", 2, tate_suites::unit_cert),
    ("graded", 3, tate_suites::graded),
    ("hopf-explog", 4, formal_suites::hopf_explog),
    ("torsion-density", 5, formal_suites::torsion_density),
    ("identities", 6, formal_suites::identities),
    ("mellin-loci", 7, mellin_suites::mellin_loci),
    ("base-change", 8, mellin_suites::base_change),
    ("precision-honesty", 9, honesty::precision_honesty),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.0).collect()
}

/// Runs one suite by name under `config`.
pub fn run_suite(name: &str, config: &SelftestConfig) -> Option<SuiteReport> {
    let (name, criterion, body) = SUITES.iter().find(|s| s.0 == name).copied()?;
    let start = Instant::now();
    let mut ctx = Ctx {
        profile: config.profile,
        precision: config.precision,
        seed: config.seed,
        rng: ChaCha8Rng::seed_from_u64(config.seed.wrapping_mul(0x9e37_79b9).wrapping_add(criterion as u64)),
        checks: 0,
    };
    let result = fault::with_fault(config.mutation, || body(&mut ctx));
    let outcome = match result {
        Ok(()) => Outcome::Pass,
        Err(Stop::Violated(m)) => Outcome::Fail(m),
        Err(Stop::Lib(e)) if e.is_precision() => Outcome::Undecided(e.to_string()),
        Err(Stop::Lib(e)) => Outcome::Fail(format!("unexpected error: {e}")),
    };
    Some(SuiteReport { name, criterion, outcome, checks: ctx.checks, seconds: start.elapsed().as_secs_f64() })
}

pub fn run(config: &SelftestConfig) -> SelftestReport {
    SelftestReport { suites: SUITES.iter().filter_map(|s| run_suite(s.0, config)).collect() }
}
