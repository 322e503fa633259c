//! Acceptance criteria 1-9: one line per criterion, nonzero exit on any failure.

use std::sync::Arc;
use std::time::Instant;

use ellkit::fault::Fault;
use ellkit::formal::exp_minus_one;
use ellkit::mellin::{jumping_locus_of, MonodromyData};
use ellkit::padic::{binom_valuation, PadicScalar, RingParams};
use ellkit::selftest::{run_suite, Outcome, Profile, SelftestConfig};
use ellkit::tate::{certify_unit_ideal, SigmaAction, TruncatedSeries};
use num_rational::Ratio;

const SEED: u64 = 20_240_611;

struct Criterion {
    id: u8,
    suite: &'static str,
    limit_s: f64,
    direct: fn() -> Result<String, String>,
}

fn q(ell: u64, n: u32) -> Arc<RingParams> {
    RingParams::trivial(ell, n).unwrap()
}

fn none() -> Result<String, String> {
    Ok(String::new())
}

fn worked_certificate() -> Result<String, String> {
    let p = q(5, 20);
    let g = TruncatedSeries::from_int_terms(&p, 1, 4, &[(&[0], 1), (&[1], 1)]).map_err(|e| e.to_string())?;
    let sigma = SigmaAction::diagonal_ints(&p, &[6]).map_err(|e| e.to_string())?;
    let cert = certify_unit_ideal(&g, &sigma, 5).map_err(|e| e.to_string())?;
    match (cert.len(), cert.verify()) {
        (1, Ok(true)) => Ok("worked instance length 1".into()),
        (n, v) => Err(format!("worked instance: length {n}, replay {v:?}")),
    }
}

fn exp_of_five() -> Result<String, String> {
    let p = q(5, 12);
    let x = exp_minus_one(&PadicScalar::from_int(&p, 5), Ratio::from_integer(1)).map_err(|e| e.to_string())?;
    let e = PadicScalar::one(&p).add(&x).representative_mod(3).map_err(|e| e.to_string())?;
    if e == [81] {
        Ok("exp(5) = 81 mod 125".into())
    } else {
        Err(format!("exp(5) mod 125 = {e:?}"))
    }
}

fn ord_two() -> Result<String, String> {
    match binom_valuation(2, 3, 4) {
        Ok(1) => Ok("ord_2 C(8,4) = 1".into()),
        other => Err(format!("ord_2 C(8,4) = {other:?}")),
    }
}

fn trivial_locus() -> Result<String, String> {
    let r = jumping_locus_of(&MonodromyData::trivial(3, 1, 1), 0, 0, 2).map_err(|e| e.to_string())?;
    let line = r.to_string();
    if line == "sigma i=0 j=0 level=2: [[0]]; generic=[0,0]; euler=0" {
        Ok("trivial rank 1 locus = {1}".into())
    } else {
        Err(line)
    }
}

fn honesty() -> Result<String, String> {
    let targets = [
        (Fault::PhiSignError, "phi-laws"),
        (Fault::LedgerOffByOne, "unit-cert"),
        (Fault::UnsaturatedLattice, "mellin-loci"),
    ];
    for (fault, suite) in targets {
        let cfg = SelftestConfig { profile: Profile::Full, seed: SEED, precision: None, mutation: Some(fault) };
        let r = run_suite(suite, &cfg).unwrap();
        if !matches!(r.outcome, Outcome::Fail(_)) {
            return Err(format!("{fault:?} not caught by {suite}: {r}"));
        }
    }
    let low = SelftestConfig { profile: Profile::Quick, seed: SEED, precision: Some(1), mutation: None };
    let r = run_suite("hopf-explog", &low).unwrap();
    if !matches!(r.outcome, Outcome::Undecided(_)) {
        return Err(format!("N=1 run not undecided: {r}"));
    }
    Ok("3 mutations caught; N=1 undecided".into())
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, suite: "phi-laws", limit_s: 30.0, direct: none },
    Criterion { id: 2, suite: "unit-cert", limit_s: 60.0, direct: worked_certificate },
    Criterion { id: 3, suite: "graded", limit_s: 60.0, direct: none },
    Criterion { id: 4, suite: "hopf-explog", limit_s: 30.0, direct: exp_of_five },
    Criterion { id: 5, suite: "torsion-density", limit_s: 120.0, direct: none },
    Criterion { id: 6, suite: "identities", limit_s: 30.0, direct: ord_two },
    Criterion { id: 7, suite: "mellin-loci", limit_s: 120.0, direct: trivial_locus },
    Criterion { id: 8, suite: "base-change", limit_s: 120.0, direct: none },
    Criterion { id: 9, suite: "precision-honesty", limit_s: 60.0, direct: honesty },
];

fn main() {
    let cfg = SelftestConfig { profile: Profile::Full, seed: SEED, precision: None, mutation: None };
    let mut failed = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let report = run_suite(c.suite, &cfg).expect("suite exists");
        let direct = (c.direct)();
        let secs = start.elapsed().as_secs_f64();
        let mut problems = Vec::new();
        match &report.outcome {
            Outcome::Pass => {}
            Outcome::Fail(m) => problems.push(format!("fail: {m}")),
            Outcome::Undecided(m) => problems.push(format!("undecided: {m}")),
        }
        if let Err(m) = &direct {
            problems.push(m.clone());
        }
        if secs > c.limit_s {
            problems.push(format!("{secs:.1} s over {} s", c.limit_s));
        }
        let extra = direct.ok().filter(|s| !s.is_empty()).map(|s| format!("; {s}")).unwrap_or_default();
        if problems.is_empty() {
            println!(
                "criterion {}: PASS  {} ({} checks{extra}) {secs:.2} s <= {} s",
                c.id, c.suite, report.checks, c.limit_s
            );
        } else {
            failed += 1;
            println!("criterion {}: FAIL  {}: {}", c.id, c.suite, problems.join("; "));
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
