use std::collections::HashMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use super::oracle;
use super::{ensure, Check, Ctx};
use crate::exact::{EchelonBasis, Rationals};
use crate::padic::{PadicScalar, RingParams, Valuation};
use crate::tate::{
    certify_unit_ideal, graded_closure_check, phi_operator, phi_operator_by_substitution, stratum,
    weil_condition_check, Exponent, SigmaAction, TruncatedSeries,
};

fn val_ge(a: &Valuation, b: &Valuation) -> bool {
    match (a, b) {
        (Valuation::Infinite, _) => true,
        (_, Valuation::Infinite) => false,
        (Valuation::Finite(x), Valuation::Finite(y)) => x >= y,
    }
}

fn oracle_ge(a: Option<u64>, b: Option<u64>) -> bool {
    match (a, b) {
        (None, _) => true,
        (_, None) => false,
        (Some(x), Some(y)) => x >= y,
    }
}

fn random_unit(rng: &mut impl Rng, ell: u64, bound: i64) -> i64 {
    loop {
        let a = rng.gen_range(2..=bound);
        if !(a as u64).is_multiple_of(ell) {
            return if rng.gen_bool(0.5) { a } else { -a };
        }
    }
}

fn random_series(
    rng: &mut impl Rng,
    p: &Arc<RingParams>,
    b: usize,
    d: u32,
    density: f64,
    bound: i64,
    constant: Option<i64>,
) -> crate::Result<(TruncatedSeries, Vec<(Exponent, i64)>)> {
    let mut terms = Vec::new();
    for e in Exponent::all_up_to(b, d) {
        let c = match (e.is_zero(), constant) {
            (true, Some(c)) => c,
            _ if rng.gen_bool(density) => rng.gen_range(-bound..=bound),
            _ => 0,
        };
        if c != 0 {
            terms.push((e, c));
        }
    }
    let g = TruncatedSeries::from_terms(
        p,
        b,
        d,
        terms.iter().map(|(e, c)| (e.clone(), PadicScalar::from_int(p, *c as i128))),
    )?;
    Ok((g, terms))
}

/// Constant term, vanishing target coefficient, contraction on eligible
/// coefficients, and agreement with the substitution form.
pub(crate) fn phi_laws(ctx: &mut Ctx) -> Check {
    let n_prec = ctx.prec(16);
    for _ in 0..ctx.count(200, 1000) {
        let rng = &mut ctx.rng;
        let ell = [2u64, 3, 5][rng.gen_range(0..3)];
        let b = rng.gen_range(1..=3usize);
        let d = rng.gen_range(1..=6u32);
        let p = RingParams::trivial(ell, n_prec)?;
        let bound = ell.pow(3) as i64;
        let alphas: Vec<i64> = (0..b).map(|_| random_unit(rng, ell, bound)).collect();
        let monos: Vec<Exponent> = Exponent::all_up_to(b, d).into_iter().filter(|e| !e.is_zero()).collect();
        let (m, vm) = loop {
            let m = monos[rng.gen_range(0..monos.len())].clone();
            if let Some(v) = oracle::one_minus_power(ell, &alphas, &m.0) {
                break (m, v);
            }
        };
        let c0 = random_unit(rng, ell, bound);
        let (g, _) = random_series(rng, &p, b, d, 0.75, bound, Some(c0))?;
        let sigma = SigmaAction::diagonal_ints(&p, &alphas)?;
        let h = phi_operator(&g, &m, &sigma)?;
        let tag = || format!("ell={ell} alpha={alphas:?} m={m} g={}", g.to_string().replace('\n', " | "));

        ensure(stratum(&sigma, &m)? == vm as i64, || format!("stratum disagrees with v(1 - alpha^m): {}", tag()))?;
        ensure(h.constant_term().eq_within_precision(&g.constant_term()), || {
            format!("constant term not preserved: {}", tag())
        })?;
        ensure(h.coeff(&m).is_zero(), || format!("target coefficient survives: {}", tag()))?;
        let via_sub = phi_operator_by_substitution(&g, &m, &sigma)?;
        ensure(h.eq_within_precision(&via_sub), || format!("coefficientwise and substitution forms differ: {}", tag()))?;
        for n in Exponent::all_up_to(b, d) {
            let vn = oracle::one_minus_power(ell, &alphas, &n.0);
            if !oracle_ge(vn, Some(vm)) {
                continue;
            }
            let (hv, gv) = (h.coeff(&n).valuation(), g.coeff(&n).valuation());
            ensure(val_ge(&hv, &gv), || format!("contraction fails at n={n}: {hv:?} < {gv:?}: {}", tag()))?;
            ctx.checks += 1;
        }
        ctx.checks += 1;
    }
    Ok(())
}

fn check_certificate(ctx: &mut Ctx, g0: &TruncatedSeries, alphas: &[i64], max_steps: usize) -> Check {
    let p = g0.params().clone();
    let ell = p.prime();
    let sigma = SigmaAction::diagonal_ints(&p, alphas)?;
    let cert = certify_unit_ideal(g0, &sigma, max_steps)?;
    let tag = || format!("ell={ell} alpha={alphas:?} g0={}", g0.to_string().replace('\n', " | "));
    ensure(cert.len() <= max_steps, || format!("{} steps exceed {max_steps}: {}", cert.len(), tag()))?;
    ensure(cert.verify()?, || format!("replay does not reach 1: {}", tag()))?;
    let mut g = cert.start.clone();
    let mut booked = 0i64;
    for s in &cert.steps {
        g = phi_operator_by_substitution(&g, &s.exponent, &sigma)?;
        let w = oracle::one_minus_power(ell, alphas, &s.exponent.0)
            .ok_or_else(|| super::Stop::Violated(format!("step at {} has alpha^m = 1", s.exponent)))?;
        ensure(s.stratum == w as i64 && s.loss == w as i64, || {
            format!("ledger books {} for m={} but v(1 - alpha^m) = {w}: {}", s.loss, s.exponent, tag())
        })?;
        booked += w as i64;
    }
    ensure(cert.residual == p.precision() as i64 - booked, || format!("residual {} is not N - {booked}: {}", cert.residual, tag()))?;
    ensure(g.eq_within_precision(&cert.final_element), || format!("substitution replay differs: {}", tag()))?;
    let one = TruncatedSeries::one(&p, g0.nvars(), g0.degree());
    ensure(g.eq_within_precision(&one), || format!("final element is not 1: {}", tag()))?;
    ctx.checks += 1;
    Ok(())
}

/// Unit certificates for `1 + (element of M)` under diagonal `sigma` with
/// equal-modulus integer eigenvalues.
pub(crate) fn unit_cert(ctx: &mut Ctx) -> Check {
    let p = RingParams::trivial(5, ctx.prec(20))?;
    let g = TruncatedSeries::from_int_terms(&p, 1, 4, &[(&[0], 1), (&[1], 1)])?;
    let cert = certify_unit_ideal(&g, &SigmaAction::diagonal_ints(&p, &[6])?, 5)?;
    ensure(cert.len() == 1, || format!("worked instance has {} steps", cert.len()))?;
    check_certificate(ctx, &g, &[6], 5)?;

    let n_prec = ctx.prec(20);
    let mut done = 0;
    while done < ctx.count(30, 100) {
        let rng = &mut ctx.rng;
        let ell = [3u64, 5, 7][rng.gen_range(0..3)];
        let b = rng.gen_range(1..=2usize);
        let d = rng.gen_range(1..=3u32);
        let a = loop {
            let a = rng.gen_range(2..=12i64);
            if !(a as u64).is_multiple_of(ell) {
                break a;
            }
        };
        let alphas: Vec<i64> = (0..b).map(|_| if rng.gen_bool(0.5) { a } else { -a }).collect();
        ensure(weil_condition_check(&oracle::charpoly(&alphas))?.pass(), || {
            format!("eigenvalues {alphas:?} fail the equal-modulus condition")
        })?;
        let p = RingParams::trivial(ell, n_prec)?;
        let (g0, terms) = random_series(rng, &p, b, d, 0.5, (ell * ell) as i64, Some(1))?;
        let needed: u64 = terms
            .iter()
            .filter(|(e, _)| !e.is_zero())
            .map(|(e, _)| oracle::one_minus_power(ell, &alphas, &e.0).unwrap_or(0))
            .sum();
        if ctx.precision.is_none() && needed >= n_prec as u64 {
            continue;
        }
        let max_steps = Exponent::all_up_to(b, d).len();
        check_certificate(ctx, &g0, &alphas, max_steps)?;
        done += 1;
    }
    Ok(())
}

/// `sigma = diag(ell, ..., ell)`: closures are graded, and agree with the
/// span of the homogeneous parts of the generators.
pub(crate) fn graded(ctx: &mut Ctx) -> Check {
    let n_prec = ctx.prec(24);
    for _ in 0..ctx.count(30, 100) {
        let rng = &mut ctx.rng;
        let ell = [2u64, 3, 5][rng.gen_range(0..3)];
        let b = rng.gen_range(1..=3usize);
        let n = rng.gen_range(2..=5u32);
        // integer coefficients of size <= 5 lift uniquely once ell^N > 2 * 5^2
        let needed = oracle::digits_above(ell, &50.into());
        if n_prec < needed {
            return Err(super::Stop::Lib(crate::Error::PrecisionBudgetExceeded {
                needed: needed as i64,
                available: n_prec as i64,
            }));
        }
        let p = RingParams::trivial(ell, n_prec)?;
        let sigma = SigmaAction::diagonal_ints(&p, &vec![ell as i64; b])?;
        let monos = Exponent::all_up_to(b, n - 1);
        let index: HashMap<Exponent, usize> = monos.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let k = rng.gen_range(1..=3usize);
        let mut gens = Vec::new();
        let mut gen_terms = Vec::new();
        for _ in 0..k {
            let (g, t) = random_series(rng, &p, b, n - 1, 0.4, 5, None)?;
            gens.push(g);
            gen_terms.push(t);
        }
        let verdict = graded_closure_check(&gens, &sigma, n)?;

        let width = monos.len();
        let vec_of = |terms: &[(Exponent, i64)], deg: Option<u32>| -> Vec<BigRational> {
            let mut v = vec![BigRational::zero(); width];
            for (e, c) in terms {
                if deg.is_none_or(|d| e.degree() == d) {
                    v[index[e]] = BigRational::from_integer((*c).into());
                }
            }
            v
        };
        let mut span = EchelonBasis::new(Rationals, width);
        let mut homog = EchelonBasis::new(Rationals, width);
        for t in &gen_terms {
            span.insert(&vec_of(t, None));
            for d in 0..n {
                homog.insert(&vec_of(t, Some(d)));
            }
        }
        let tag = || format!("ell={ell} b={b} n={n} gens={gen_terms:?}");
        ensure(verdict.graded && verdict.closure_is_stable && verdict.components_in_closure, || {
            format!("closure not certified graded: {}", tag())
        })?;
        ensure(verdict.closure_dim == homog.dim(), || {
            format!("closure dim {} but homogeneous parts span {}: {}", verdict.closure_dim, homog.dim(), tag())
        })?;
        ensure(verdict.input_dim == span.dim(), || format!("input dim mismatch: {}", tag()))?;
        ensure(verdict.input_span_stable == (span.dim() == homog.dim()), || format!("stability misreported: {}", tag()))?;
        for poly in &verdict.closure_basis {
            let mut v = vec![BigRational::zero(); width];
            for (e, c) in poly {
                let i = *index.get(e).ok_or_else(|| super::Stop::Violated(format!("basis monomial {e} out of range")))?;
                v[i] = c.clone();
            }
            ensure(homog.contains(&v), || format!("closure basis vector outside the oracle span: {}", tag()))?;
        }
        ctx.checks += 1;

        // negative control: two homogeneous pieces in one generator
        let top = rng.gen_range(1..n);
        let mut e_top = Exponent::zero(b);
        e_top.0[rng.gen_range(0..b)] = top;
        let control = TruncatedSeries::from_terms(
            &p,
            b,
            n - 1,
            [(Exponent::zero(b), PadicScalar::one(&p)), (e_top.clone(), PadicScalar::from_int(&p, 2))],
        )?;
        let v = graded_closure_check(&[control], &sigma, n)?;
        ensure(!v.input_span_stable && v.closure_dim == 2 && v.graded, || {
            format!("control 1 + 2 T^{e_top} misreported at ell={ell} n={n}")
        })?;
        ctx.checks += 1;
    }
    Ok(())
}
