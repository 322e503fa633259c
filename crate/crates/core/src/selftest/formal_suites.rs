use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::Ratio;
use rand::Rng;

use super::oracle;
use super::{ensure, Check, Ctx, Stop};
use crate::error::Error;
use crate::formal::{
    comultiply, ell_power_isogeny, evaluate_at_character, exp_minus_one, group_law, inversion_twist,
    log_one_plus, lowest_surviving_degree, prosystem_divisibility_check, reduce_mod_torsion_ideal,
    torsion_ideal_membership, torsion_points,
};
use crate::padic::{binom_valuation, PadicScalar, RingParams, Valuation};
use crate::tate::{Exponent, TruncatedSeries};

fn random_series(rng: &mut impl Rng, p: &Arc<RingParams>, b: usize, d: u32) -> crate::Result<TruncatedSeries> {
    let mut terms = Vec::new();
    for e in Exponent::all_up_to(b, d) {
        if rng.gen_bool(0.6) {
            terms.push((e, PadicScalar::from_int(p, rng.gen_range(-20..=20))));
        }
    }
    TruncatedSeries::from_terms(p, b, d, terms)
}

/// `Y_i -> a_i`, `Y'_i -> c_i` for a series in `2b` variables.
fn substitute_pairs(
    g: &TruncatedSeries,
    first: &[TruncatedSeries],
    second: &[TruncatedSeries],
) -> crate::Result<TruncatedSeries> {
    let images: Vec<TruncatedSeries> = first.iter().chain(second).cloned().collect();
    g.substitute(&images)
}

fn law(x: &TruncatedSeries, y: &TruncatedSeries) -> crate::Result<TruncatedSeries> {
    x.add(y)?.add(&x.mul(y)?)
}

fn check_exp_of_five(ctx: &mut Ctx) -> Check {
    let p = RingParams::trivial(5, ctx.prec(12))?;
    let x = exp_minus_one(&PadicScalar::from_int(&p, 5), Ratio::from_integer(1))?;
    if x.abs_precision() < 3 {
        return Err(Stop::Lib(Error::PrecisionBudgetExceeded { needed: 3, available: x.abs_precision() }));
    }
    let diff = x.sub(&PadicScalar::from_int(&p, 80));
    let ok = diff.is_zero() || matches!(diff.valuation(), Valuation::Finite(v) if v >= Ratio::from_integer(3));
    ensure(ok, || format!("exp(5) - 81 = {diff} is not divisible by 125"))?;
    ctx.checks += 1;
    Ok(())
}

/// Counit, coassociativity, multiplicativity of the comultiplication,
/// isogeny composition, the inversion involution, and exp/log round trips.
pub(crate) fn hopf_explog(ctx: &mut Ctx) -> Check {
    check_exp_of_five(ctx)?;
    let n_prec = ctx.prec(12);
    for _ in 0..ctx.count(10, 40) {
        let rng = &mut ctx.rng;
        let ell = [2u64, 3, 5][rng.gen_range(0..3)];
        let b = rng.gen_range(1..=2usize);
        let d = rng.gen_range(1..=4u32);
        let p = RingParams::trivial(ell, n_prec)?;
        let g = random_series(rng, &p, b, d)?;
        let h = random_series(rng, &p, b, d)?;
        let tag = || format!("ell={ell} g={}", g.to_string().replace('\n', " | "));
        let var = |n: usize, i: usize| TruncatedSeries::variable(&p, n, d, i);

        let dg = comultiply(&g)?;
        let xs: Vec<TruncatedSeries> = (0..b).map(|i| var(b, i)).collect();
        let zeros = vec![TruncatedSeries::zero(&p, b, d); b];
        ensure(substitute_pairs(&dg, &xs, &zeros)?.eq_within_precision(&g), || format!("counit fails: {}", tag()))?;
        ensure(substitute_pairs(&dg, &zeros, &xs)?.eq_within_precision(&g), || format!("right counit fails: {}", tag()))?;

        let z = |k: usize, i: usize| var(3 * b, k * b + i);
        let left_first: Vec<TruncatedSeries> = (0..b).map(|i| law(&z(0, i), &z(1, i))).collect::<crate::Result<_>>()?;
        let left_second: Vec<TruncatedSeries> = (0..b).map(|i| z(2, i)).collect();
        let right_first: Vec<TruncatedSeries> = (0..b).map(|i| z(0, i)).collect();
        let right_second: Vec<TruncatedSeries> = (0..b).map(|i| law(&z(1, i), &z(2, i))).collect::<crate::Result<_>>()?;
        let lhs = substitute_pairs(&dg, &left_first, &left_second)?;
        let rhs = substitute_pairs(&dg, &right_first, &right_second)?;
        ensure(lhs.eq_within_precision(&rhs), || format!("coassociativity fails: {}", tag()))?;

        let dgh = comultiply(&g.mul(&h)?)?;
        ensure(dgh.eq_within_precision(&dg.mul(&comultiply(&h)?)?), || format!("comultiplication not multiplicative: {}", tag()))?;

        let a = rng.gen_range(1..=2u32);
        let c = rng.gen_range(1..=3 - a);
        let two_step = ell_power_isogeny(&ell_power_isogeny(&g, a)?, c)?;
        ensure(two_step.eq_within_precision(&ell_power_isogeny(&g, a + c)?), || {
            format!("[ell^{a}] o [ell^{c}] != [ell^{}]: {}", a + c, tag())
        })?;

        ensure(inversion_twist(&inversion_twist(&g)?)?.eq_within_precision(&g), || format!("[-1] is not an involution: {}", tag()))?;
        let one = TruncatedSeries::one(&p, b, d);
        for (i, x) in xs.iter().enumerate() {
            let tx = inversion_twist(x)?;
            let prod = one.add(x)?.mul(&one.add(&tx)?)?;
            ensure(prod.eq_within_precision(&one), || format!("(1 + X_{i}) [-1](1 + X_{i}) != 1 at ell={ell}"))?;
        }
        ctx.checks += 1;

        // exp/log on the disc of radius ell^(-k)
        let k = if ell == 2 { rng.gen_range(2..=3i64) } else { rng.gen_range(1..=2i64) };
        let r = Ratio::from_integer(k);
        let scale = (ell as i128).pow(k as u32);
        let t = PadicScalar::from_int(&p, scale * rng.gen_range(1..=50));
        let s = PadicScalar::from_int(&p, scale * rng.gen_range(1..=50));
        let et = exp_minus_one(&t, r)?;
        let es = exp_minus_one(&s, r)?;
        ensure(log_one_plus(&et, r)?.eq_within_precision(&t), || format!("log(exp({t})) != {t} at ell={ell}"))?;
        let sum = group_law(std::slice::from_ref(&et), std::slice::from_ref(&es));
        ensure(exp_minus_one(&t.add(&s), r)?.eq_within_precision(&sum[0]), || {
            format!("exp is not a homomorphism at t={t}, s={s}, ell={ell}")
        })?;
        ensure(log_one_plus(&sum[0], r)?.eq_within_precision(&t.add(&s)), || format!("log of a product at ell={ell}"))?;
        ctx.checks += 1;
    }
    Ok(())
}

fn red_is_zero(c: &PadicScalar, cap: i64) -> bool {
    c.digit_valuation().is_none_or(|v| v >= cap)
}

/// Over every 0/1 combination of monomials of degree <= 4: vanishing at
/// all `ell^n`-torsion characters iff membership in `J_n`.
pub(crate) fn torsion_density(ctx: &mut Ctx) -> Check {
    let n_prec = ctx.prec(12);
    let mut configs = vec![];
    for ell in [2u64, 3] {
        for b in 1..=2usize {
            for n in 1..=2u32 {
                if ctx.profile == super::Profile::Quick && b == 2 && n == 2 {
                    continue;
                }
                configs.push((ell, b, n));
            }
        }
    }
    for (ell, b, n) in configs {
        let d = 4;
        let p = RingParams::trivial(ell, n_prec)?;
        let e = (ell - 1) * ell.pow(n - 1);
        let pc = RingParams::cyclotomic(ell, n, n_prec * e as u32)?;
        let monos = Exponent::all_up_to(b, d);
        // nonzero values and reduction coefficients stay below these bounds,
        // so a zero flag at this precision is an honest zero
        let l1 = oracle::reduction_l1(ell.pow(n), d as usize);
        let red_bound: BigInt = monos.iter().map(|m| m.0.iter().map(|&a| l1[a as usize].clone()).product::<BigInt>()).sum();
        let val_bound = BigInt::from(monos.len() as u64 * 2u64.pow(d));
        let needed = oracle::digits_above(ell, &red_bound.max(val_bound));
        if n_prec < needed {
            return Err(Stop::Lib(Error::PrecisionBudgetExceeded { needed: needed as i64, available: n_prec as i64 }));
        }
        let chars = torsion_points(&pc, n, b)?;
        let side = ell.pow(n) as usize;
        let width = side.pow(b as u32);
        let flat = |k: &[u32]| k.iter().fold(0usize, |acc, &x| acc * side + x as usize);
        let cap = PadicScalar::zero(&p).abs_precision();
        let mut vals: Vec<Vec<PadicScalar>> = Vec::new();
        let mut reds: Vec<Vec<PadicScalar>> = Vec::new();
        for m in &monos {
            let x = TruncatedSeries::from_terms(&p, b, d, [(m.clone(), PadicScalar::one(&p))])?;
            vals.push(chars.iter().map(|c| evaluate_at_character(&x, c)).collect::<crate::Result<_>>()?);
            let mut r = vec![PadicScalar::zero(&p); width];
            for (k, c) in reduce_mod_torsion_ideal(&x, n)? {
                r[flat(&k)] = c;
            }
            reds.push(r);
        }
        let mut val_sum = vec![PadicScalar::zero(&pc); chars.len()];
        let mut red_sum = vec![PadicScalar::zero(&p); width];
        let mut pattern: u64 = 0;
        let total: u64 = 1 << monos.len();
        let samples: Vec<u64> = (0..8).map(|_| ctx.rng.gen_range(0..total)).collect();
        for step in 0..total {
            if step > 0 {
                let j = step.trailing_zeros() as usize;
                pattern ^= 1 << j;
                let adding = pattern & (1 << j) != 0;
                for (s, v) in val_sum.iter_mut().zip(&vals[j]) {
                    *s = if adding { s.add(v) } else { s.sub(v) };
                }
                for (s, v) in red_sum.iter_mut().zip(&reds[j]) {
                    *s = if adding { s.add(v) } else { s.sub(v) };
                }
            }
            let vanishes = val_sum.iter().all(|v| v.is_zero());
            let member = red_sum.iter().all(|c| red_is_zero(c, cap));
            ensure(vanishes == member, || {
                format!("ell={ell} b={b} n={n} pattern={pattern:#b}: vanishes={vanishes} member={member}")
            })?;
            ctx.checks += 1;
            if samples.contains(&step) {
                let g = TruncatedSeries::from_terms(
                    &p,
                    b,
                    d,
                    monos
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| pattern & (1 << i) != 0)
                        .map(|(_, m)| (m.clone(), PadicScalar::one(&p))),
                )?;
                ensure(torsion_ideal_membership(&g, n)? == member, || {
                    format!("direct membership disagrees at ell={ell} b={b} n={n} pattern={pattern:#b}")
                })?;
                for (c, s) in chars.iter().zip(&val_sum) {
                    ensure(evaluate_at_character(&g, c)?.eq_within_precision(s), || {
                        format!("direct evaluation disagrees at ell={ell} b={b} n={n} pattern={pattern:#b}")
                    })?;
                }
            }
        }
    }
    Ok(())
}

/// `ord C(ell^n, r) = n - ord(r)` and the pro-system divisibility.
pub(crate) fn identities(ctx: &mut Ctx) -> Check {
    ensure(binom_valuation(2, 3, 4)? == 1, || "ord_2 C(8, 4) != 1".into())?;
    for ell in [2u64, 3, 5] {
        for n in 1..=4u32 {
            let big = ell.pow(n);
            for r in 1..=big {
                let lib = binom_valuation(ell, n, r)?;
                let direct = oracle::valuation(ell, &BigInt::from(oracle::binomial(big, r))).unwrap_or(u64::MAX);
                let closed = n as u64 - oracle::valuation(ell, &BigInt::from(r)).unwrap_or(0);
                ensure(lib == direct && lib == closed, || {
                    format!("ord_{ell} C({big}, {r}): library {lib}, direct {direct}, closed form {closed}")
                })?;
                ctx.checks += 1;
            }
        }
    }
    for ell in [2u64, 3, 5, 7] {
        for n in 1..=4u32 {
            let big = ell.pow(n);
            for m in 1..=n {
                let lowest = (1..big)
                    .find(|&r| oracle::valuation(ell, &BigInt::from(oracle::binomial(big, r))).unwrap_or(u64::MAX) < m as u64)
                    .unwrap_or(big);
                ensure(lowest_surviving_degree(ell, m, n)? == lowest, || {
                    format!("lowest surviving degree of (1+X)^{big} - 1 mod {ell}^{m}")
                })?;
                ensure(lowest >= ell.pow(n - m + 1), || format!("oracle: X^{} does not divide at ell={ell} m={m} n={n}", ell.pow(n - m + 1)))?;
                ensure(prosystem_divisibility_check(ell, m, n)?, || format!("divisibility check false at ell={ell} m={m} n={n}"))?;
                ctx.checks += 1;
            }
        }
    }
    Ok(())
}
