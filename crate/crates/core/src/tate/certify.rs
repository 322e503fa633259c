use std::fmt;

use super::monomial::Exponent;
use super::phi::{phi_operator, stratum};
use super::series::TruncatedSeries;
use super::sigma::{apply_matrix, Diagonalization, SigmaAction};
use crate::error::{Error, Result};
use crate::fault::{self, Fault};
use crate::padic::PadicScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateStep {
    pub exponent: Exponent,
    /// `v_lambda(1 - alpha^m)`.
    pub stratum: i64,
    /// Digits booked against the precision ledger.
    pub loss: i64,
}

/// A sequence of `Phi`-applications carrying `g_0` to `1`.
#[derive(Clone, Debug)]
pub struct UnitCertificate {
    /// `g_0`, rewritten in eigen-coordinates when `sigma` was diagonalized.
    pub start: TruncatedSeries,
    pub sigma: SigmaAction,
    pub change_of_basis: Option<Diagonalization>,
    pub steps: Vec<CertificateStep>,
    /// Declared precision of the final element: `N - sum(loss)`.
    pub residual: i64,
    pub final_element: TruncatedSeries,
}

impl UnitCertificate {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Re-runs the listed steps from `start`.
    pub fn replay(&self) -> Result<TruncatedSeries> {
        let mut g = self.start.clone();
        for s in &self.steps {
            g = phi_operator(&g, &s.exponent, &self.sigma)?;
        }
        Ok(g)
    }

    /// Replays and checks that the result is `1` to at least the declared
    /// residual precision.
    pub fn verify(&self) -> Result<bool> {
        let g = self.replay()?;
        Ok(g.eq_within_precision(&self.final_element) && is_one_to(&g, self.residual))
    }
}

impl fmt::Display for UnitCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, s) in self.steps.iter().enumerate() {
            writeln!(f, "step {}: m={} loss={}", j + 1, s.exponent, s.loss)?;
        }
        write!(f, "residual={}", self.residual)
    }
}

fn is_one_to(g: &TruncatedSeries, prec: i64) -> bool {
    let one = PadicScalar::one(g.params());
    g.terms().all(|(e, c)| {
        let ok = if e.is_zero() { c.eq_within_precision(&one) } else { c.is_zero() };
        ok && c.abs_precision() >= prec
    }) && !g.constant_term().is_zero()
}

/// Reduces `g_0` to `1` by successive `Phi`-applications, one per
/// surviving monomial, ordered by stratum and then monomial order.
pub fn certify_unit_ideal(g0: &TruncatedSeries, sigma: &SigmaAction, max_steps: usize) -> Result<UnitCertificate> {
    let p = g0.params().clone();
    let n_prec = p.precision() as i64;
    if sigma.dim() != g0.nvars() {
        return Err(Error::DimensionMismatch { expected: g0.nvars(), found: sigma.dim() });
    }
    if !g0.constant_term().eq_within_precision(&PadicScalar::one(&p)) {
        return Err(Error::HypothesisViolated("g0(0) must be 1".into()));
    }
    let (sigma, change_of_basis, start) = if sigma.is_diagonal() {
        (sigma.clone(), None, g0.clone())
    } else {
        let dg = sigma.diagonalize()?;
        let start = apply_matrix(g0, &dg.inverse)?;
        (dg.diagonal.clone(), Some(dg), start)
    };

    let mut strata = std::collections::BTreeMap::new();
    for n in Exponent::all_up_to(g0.nvars(), g0.degree()).into_iter().skip(1) {
        let w = stratum(&sigma, &n)?;
        strata.insert(n, w);
    }
    let mut order: Vec<(i64, Exponent)> = start
        .support()
        .into_iter()
        .filter(|n| !n.is_zero())
        .map(|n| (strata[&n], n))
        .collect();
    order.sort();
    let needed: i64 = order.iter().map(|(w, _)| *w).sum();
    if needed >= n_prec {
        return Err(Error::PrecisionBudgetExceeded { needed, available: n_prec });
    }

    let mut g = start.clone();
    let mut steps = Vec::new();
    for (w, n) in order {
        if g.coeff(&n).is_zero() {
            continue;
        }
        if steps.len() >= max_steps {
            return Err(Error::BudgetExceeded(format!("more than {max_steps} steps")));
        }
        g = phi_operator(&g, &n, &sigma)?;
        let loss = if fault::active(Fault::LedgerOffByOne) { (w - 1).max(0) } else { w };
        steps.push(CertificateStep { exponent: n, stratum: w, loss });
    }
    let residual = n_prec - steps.iter().map(|s| s.loss).sum::<i64>();
    Ok(UnitCertificate { start, sigma, change_of_basis, steps, residual, final_element: g })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::RingParams;

    #[test]
    fn one_plus_t() {
        let p = RingParams::trivial(5, 20).unwrap();
        let s = SigmaAction::diagonal_ints(&p, &[6]).unwrap();
        let g = TruncatedSeries::from_int_terms(&p, 1, 4, &[(&[0], 1), (&[1], 1)]).unwrap();
        let c = certify_unit_ideal(&g, &s, 100).unwrap();
        assert_eq!(c.to_string(), "step 1: m=[1] loss=1\nresidual=19");
        assert!(c.verify().unwrap());
    }

    #[test]
    fn shared_factor_kills_both() {
        let p = RingParams::trivial(5, 20).unwrap();
        let s = SigmaAction::diagonal_ints(&p, &[5, 5]).unwrap();
        let g = TruncatedSeries::from_int_terms(&p, 2, 3, &[(&[0, 0], 1), (&[1, 0], 1), (&[0, 1], 1)]).unwrap();
        let c = certify_unit_ideal(&g, &s, 100).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.steps[0].exponent, Exponent(vec![1, 0]));
        assert!(c.verify().unwrap());
    }

    #[test]
    fn trivial_input_gives_empty_certificate() {
        let p = RingParams::trivial(5, 20).unwrap();
        let s = SigmaAction::diagonal_ints(&p, &[6, 11]).unwrap();
        let c = certify_unit_ideal(&TruncatedSeries::one(&p, 2, 3), &s, 10).unwrap();
        assert!(c.is_empty());
        assert_eq!(c.residual, 20);
    }

    #[test]
    fn budget_refused_up_front() {
        let p = RingParams::trivial(5, 3).unwrap();
        let s = SigmaAction::diagonal_ints(&p, &[6]).unwrap();
        let g = TruncatedSeries::from_int_terms(&p, 1, 3, &[(&[0], 1), (&[1], 1), (&[2], 1), (&[3], 1)]).unwrap();
        assert!(matches!(certify_unit_ideal(&g, &s, 10), Err(Error::PrecisionBudgetExceeded { needed: 3, available: 3 })));
    }

    #[test]
    fn non_diagonal_through_eigenbasis() {
        let p = RingParams::trivial(7, 16).unwrap();
        let s = SigmaAction::from_int_matrix(&p, &[vec![3, 1], vec![2, 4]]).unwrap();
        let g = TruncatedSeries::from_int_terms(&p, 2, 2, &[(&[0, 0], 1), (&[1, 0], 1), (&[0, 2], 3)]).unwrap();
        let c = certify_unit_ideal(&g, &s, 100).unwrap();
        assert!(c.change_of_basis.is_some());
        assert!(c.verify().unwrap());
    }
}
