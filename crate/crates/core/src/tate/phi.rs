use super::monomial::Exponent;
use super::series::TruncatedSeries;
use super::sigma::{sigma_apply, SigmaAction};
use crate::error::{Error, Result};
use crate::fault::{self, Fault};
use crate::padic::PadicScalar;

/// `1 - alpha^m`, refusing when it cannot be told apart from zero.
fn denominator(sigma: &SigmaAction, m: &Exponent) -> Result<(PadicScalar, PadicScalar)> {
    let am = sigma.alpha_pow(m)?;
    let d = PadicScalar::one(sigma.params()).sub(&am);
    if d.is_zero() {
        return Err(Error::DenominatorIndistinguishableFromZero);
    }
    Ok((am, d))
}

/// `(sigma(g) - alpha^m g) / (1 - alpha^m)`, evaluated coefficientwise as
/// `g_n (alpha^n - alpha^m) / (1 - alpha^m)`.
pub fn phi_operator(g: &TruncatedSeries, m: &Exponent, sigma: &SigmaAction) -> Result<TruncatedSeries> {
    if !sigma.is_diagonal() {
        return Err(Error::NotDiagonal);
    }
    if m.nvars() != g.nvars() || sigma.dim() != g.nvars() {
        return Err(Error::DimensionMismatch { expected: g.nvars(), found: m.nvars().min(sigma.dim()) });
    }
    let (am, d) = denominator(sigma, m)?;
    let mut out = TruncatedSeries::zero(g.params(), g.nvars(), g.degree());
    for (n, c) in g.terms() {
        let an = sigma.alpha_pow(n)?;
        let num = if fault::active(Fault::PhiSignError) { an.add(&am) } else { an.sub(&am) };
        out.set(n.clone(), c.mul(&num).checked_div(&d)?);
    }
    Ok(out)
}

/// The same operator computed through `sigma_apply`, as a cross-check of
/// the coefficientwise form.
pub fn phi_operator_by_substitution(g: &TruncatedSeries, m: &Exponent, sigma: &SigmaAction) -> Result<TruncatedSeries> {
    let (am, d) = denominator(sigma, m)?;
    let num = sigma_apply(g, sigma)?.sub(&g.scale(&am))?;
    let dinv = d.inverse()?;
    Ok(num.scale(&dinv))
}

/// `v_lambda(1 - alpha^n)` in uniformizer digits.
pub fn stratum(sigma: &SigmaAction, n: &Exponent) -> Result<i64> {
    let d = PadicScalar::one(sigma.params()).sub(&sigma.alpha_pow(n)?);
    if let Some(v) = d.digit_valuation() {
        return Ok(v);
    }
    match sigma.int_eigenvalues() {
        Some(alphas) if int_power_is_one(alphas, n) => Err(Error::HypothesisViolated(format!("alpha^{n} = 1"))),
        _ => Err(Error::DenominatorIndistinguishableFromZero),
    }
}

fn int_power_is_one(alphas: &[i64], n: &Exponent) -> bool {
    let mut negative = false;
    for (&a, &k) in alphas.iter().zip(&n.0) {
        if k == 0 {
            continue;
        }
        if a.abs() != 1 {
            return false;
        }
        negative ^= a < 0 && k % 2 == 1;
    }
    !negative
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::RingParams;

    #[test]
    fn kills_target_coefficient() {
        let p = RingParams::trivial(5, 12).unwrap();
        let s = SigmaAction::diagonal_ints(&p, &[6]).unwrap();
        let g = TruncatedSeries::from_int_terms(&p, 1, 4, &[(&[0], 1), (&[2], 1), (&[3], 1)]).unwrap();
        let r = phi_operator(&g, &Exponent(vec![2]), &s).unwrap();
        // (216 - 36) / (1 - 36) = -36/7
        let want = PadicScalar::from_ratio(&p, -36, 7).unwrap();
        assert!(r.coeff(&Exponent(vec![3])).eq_within_precision(&want));
        assert!(r.coeff(&Exponent(vec![2])).is_zero());
        assert!(r.constant_term().eq_within_precision(&PadicScalar::one(&p)));
        let alt = phi_operator_by_substitution(&g, &Exponent(vec![2]), &s).unwrap();
        assert!(alt.eq_within_precision(&r));
    }

    #[test]
    fn one_plus_t_collapses() {
        let p = RingParams::trivial(5, 12).unwrap();
        let s = SigmaAction::diagonal_ints(&p, &[6]).unwrap();
        let g = TruncatedSeries::from_int_terms(&p, 1, 4, &[(&[0], 1), (&[1], 1)]).unwrap();
        let r = phi_operator(&g, &Exponent(vec![1]), &s).unwrap();
        assert!(r.eq_within_precision(&TruncatedSeries::one(&p, 1, 4)));
    }

    #[test]
    fn unit_root_of_one_refused() {
        let p = RingParams::trivial(5, 12).unwrap();
        let s = SigmaAction::diagonal_ints(&p, &[1]).unwrap();
        let g = TruncatedSeries::one(&p, 1, 2);
        assert!(matches!(
            phi_operator(&g, &Exponent(vec![1]), &s),
            Err(Error::DenominatorIndistinguishableFromZero)
        ));
        assert!(matches!(stratum(&s, &Exponent(vec![1])), Err(Error::HypothesisViolated(_))));
        let low = RingParams::trivial(5, 1).unwrap();
        let s6 = SigmaAction::diagonal_ints(&low, &[6]).unwrap();
        assert!(matches!(stratum(&s6, &Exponent(vec![1])), Err(Error::DenominatorIndistinguishableFromZero)));
    }
}
