use super::{ensure, run_suite, Check, Ctx, Outcome, Profile, SelftestConfig};
use crate::fault::Fault;

const MUTATIONS: [(Fault, &str); 3] = [
    (Fault::PhiSignError, "phi-laws"),
    (Fault::LedgerOffByOne, "unit-cert"),
    (Fault::UnsaturatedLattice, "mellin-loci"),
];

/// Each injected fault is caught by its suite, and at `N = 1` no suite
/// reports a failure while the exp/log suite reports a precision shortfall.
pub(crate) fn precision_honesty(ctx: &mut Ctx) -> Check {
    for (fault, suite) in MUTATIONS {
        let config = SelftestConfig { profile: Profile::Quick, seed: ctx.seed, precision: None, mutation: Some(fault) };
        let report = run_suite(suite, &config).expect("known suite");
        ensure(matches!(report.outcome, Outcome::Fail(_)), || format!("{fault:?} not detected by {suite}: {report}"))?;
        ctx.checks += 1;
    }
    let starved = SelftestConfig { profile: Profile::Quick, seed: ctx.seed, precision: Some(1), mutation: None };
    for name in super::suite_names() {
        if name == "precision-honesty" {
            continue;
        }
        let report = run_suite(name, &starved).expect("known suite");
        ensure(!matches!(report.outcome, Outcome::Fail(_)), || format!("false verdict at N = 1: {report}"))?;
        if matches!(name, "hopf-explog" | "unit-cert") {
            ensure(matches!(report.outcome, Outcome::Undecided(_)), || format!("{name} decided at N = 1: {report}"))?;
        }
        ctx.checks += 1;
    }
    Ok(())
}
