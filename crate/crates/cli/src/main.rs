use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ellkit::padic::ExtensionKind;
use ellkit::selftest::{parse_mutation, Profile, SelftestConfig};
use ellkit_cli::{tasks::parse_poly, CliError, Overrides, Report};

#[derive(Parser)]
#[command(name = "ellkit", version, about = "Exact ell-adic kernels driven by problem files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify that g generates the unit ideal under sigma
    UnitCert(TaskArgs),
    /// Sigma-stable closure and its grading in A/M^n
    GradeCheck(TaskArgs),
    /// Equal-moduli test on an integer characteristic polynomial
    WeilCheck(TaskArgs),
    /// exp/log round trip on a polydisc
    Explog(TaskArgs),
    /// Hopf identities of a group-ring element
    GroupLawCheck(TaskArgs),
    /// Torsion-ideal membership against vanishing at torsion characters
    Torsion(TaskArgs),
    /// Binomial valuations and prosystem divisibility
    Divisibility(TaskArgs),
    /// Build the Mellin complex and its fibers
    Mellin(TaskArgs),
    /// Torsion census of a cohomology jumping locus
    Jump(TaskArgs),
    /// Compare a jumping locus with a quasi-linear set
    VerifyQlin(TaskArgs),
    /// Apply the inversion twist
    Twist(TaskArgs),
    /// Run the built-in invariant suites
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct TaskArgs {
    /// Problem file
    file: PathBuf,
    #[arg(long)]
    prime: Option<u64>,
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long)]
    degree: Option<u32>,
    #[arg(long)]
    level: Option<u32>,
    /// Extension kind: trivial, unramified or eisenstein
    #[arg(long)]
    kind: Option<String>,
    /// Defining polynomial, e.g. `x^2+x+1` or `1,1,1`
    #[arg(long)]
    ext_poly: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Also write the report as JSON (`-` for stdout instead of text)
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value = "quick")]
    profile: String,
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// phi-sign, ledger-off-by-one or unsaturated-lattice
    #[arg(long)]
    mutate: Option<String>,
    /// Run only these suites
    #[arg(long = "suite")]
    suites: Vec<String>,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn name(c: &Command) -> &'static str {
    match c {
        Command::UnitCert(_) => "unit-cert",
        Command::GradeCheck(_) => "grade-check",
        Command::WeilCheck(_) => "weil-check",
        Command::Explog(_) => "explog",
        Command::GroupLawCheck(_) => "group-law-check",
        Command::Torsion(_) => "torsion",
        Command::Divisibility(_) => "divisibility",
        Command::Mellin(_) => "mellin",
        Command::Jump(_) => "jump",
        Command::VerifyQlin(_) => "verify-qlin",
        Command::Twist(_) => "twist",
        Command::Selftest(_) => "selftest",
    }
}

fn overrides(a: &TaskArgs) -> Result<Overrides, CliError> {
    let kind = a
        .kind
        .as_deref()
        .map(|k| k.parse::<ExtensionKind>())
        .transpose()
        .map_err(|e| CliError::Malformed(e.to_string()))?;
    Ok(Overrides {
        prime: a.prime,
        kind,
        ext_poly: a.ext_poly.as_deref().map(parse_poly).transpose()?,
        precision: a.precision,
        degree: a.degree,
        level: a.level,
        seed: a.seed,
    })
}

fn run_task(command: &str, a: &TaskArgs) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(&a.file)
        .map_err(|e| CliError::Malformed(format!("cannot read {}: {e}", a.file.display())))?;
    ellkit_cli::run_text(command, &text, &overrides(a)?)
}

fn run_selftest(a: &SelftestArgs) -> Result<Report, CliError> {
    let profile = Profile::parse(&a.profile).ok_or_else(|| CliError::Malformed(format!("unknown profile `{}`", a.profile)))?;
    let mutation = match &a.mutate {
        Some(m) => Some(parse_mutation(m).ok_or_else(|| CliError::Malformed(format!("unknown mutation `{m}`")))?),
        None => None,
    };
    if a.precision == Some(0) {
        return Err(CliError::Malformed("precision must be at least 1".into()));
    }
    let cfg = SelftestConfig { profile, seed: a.seed, precision: a.precision, mutation };
    ellkit_cli::run_selftest(&cfg, &a.suites)
}

/// Writes to stdout, ignoring a closed pipe.
fn out(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn emit(report: &Report, json: Option<&PathBuf>) -> Result<(), CliError> {
    match json {
        Some(p) if p.as_os_str() == "-" => out(&report.to_json()),
        Some(p) => {
            out(&report.to_string());
            std::fs::write(p, report.to_json() + "\n")
                .map_err(|e| CliError::Malformed(format!("cannot write {}: {e}", p.display())))?;
        }
        None => out(&report.to_string()),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = name(&cli.command);
    let (result, json) = match &cli.command {
        Command::Selftest(a) => (run_selftest(a), a.json.as_ref()),
        Command::UnitCert(a)
        | Command::GradeCheck(a)
        | Command::WeilCheck(a)
        | Command::Explog(a)
        | Command::GroupLawCheck(a)
        | Command::Torsion(a)
        | Command::Divisibility(a)
        | Command::Mellin(a)
        | Command::Jump(a)
        | Command::VerifyQlin(a)
        | Command::Twist(a) => (run_task(command, a), a.json.as_ref()),
    };
    let code = match result.and_then(|r| emit(&r, json).map(|_| r.exit)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("ellkit {command}: {e}");
            e.status().exit_code()
        }
    };
    ExitCode::from(code as u8)
}
