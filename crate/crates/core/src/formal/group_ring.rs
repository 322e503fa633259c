use std::collections::BTreeMap;

use super::character::{modulus, Character};
use crate::error::{Error, Result};
use crate::padic::PadicScalar;
use crate::tate::{Exponent, TruncatedSeries};

/// An element of `O_E[[pi]] = O_E[[X_1, ..., X_b]]`, truncated.
pub type GroupRingElement = TruncatedSeries;

/// `g(chi(e_1) - 1, ..., chi(e_b) - 1)` in the value field of `chi`.
pub fn evaluate_at_character(g: &GroupRingElement, chi: &Character) -> Result<PadicScalar> {
    if chi.rank() != g.nvars() {
        return Err(Error::DimensionMismatch { expected: g.nvars(), found: chi.rank() });
    }
    let one = PadicScalar::one(chi.params());
    let point: Vec<PadicScalar> = chi.values().iter().map(|v| v.sub(&one)).collect();
    if point.is_empty() {
        return g.constant_term().coerce_into(chi.params());
    }
    g.evaluate(&point)
}

fn series_images(
    g: &GroupRingElement,
    nvars: usize,
    coeffs: impl Fn(usize, u32) -> Vec<(Exponent, PadicScalar)>,
) -> Result<Vec<TruncatedSeries>> {
    (0..g.nvars())
        .map(|i| TruncatedSeries::from_terms(g.params(), nvars, g.degree(), coeffs(i, g.degree())))
        .collect()
}

/// `Delta(g)` in the variables `Y_1..Y_b, Y'_1..Y'_b`, via
/// `X_i -> Y_i + Y'_i + Y_i Y'_i`.
pub fn comultiply(g: &GroupRingElement) -> Result<TruncatedSeries> {
    let b = g.nvars();
    let p = g.params().clone();
    let images = series_images(g, 2 * b, |i, _| {
        let one = PadicScalar::one(&p);
        let y = Exponent::unit(2 * b, i);
        let y2 = Exponent::unit(2 * b, b + i);
        vec![(y.clone(), one.clone()), (y2.clone(), one.clone()), (y.add(&y2), one)]
    })?;
    g.substitute(&images)
}

/// `[ell^n]^*`: `X_i -> (1 + X_i)^{ell^n} - 1`.
pub fn ell_power_isogeny(g: &GroupRingElement, n: u32) -> Result<GroupRingElement> {
    let p = g.params().clone();
    let m = modulus(p.prime(), n)?;
    let row = crate::padic::int::binomial_row(m, g.degree() as u64);
    let b = g.nvars();
    let images = series_images(g, b, |i, d| {
        (1..=d)
            .map(|k| {
                let mut e = Exponent::zero(b);
                e.0[i] = k;
                (e, PadicScalar::from_biguint(&p, &row[k as usize]))
            })
            .collect()
    })?;
    g.substitute(&images)
}

/// `[-1]^*`: `X_i -> (1 + X_i)^{-1} - 1 = sum_{k >= 1} (-X_i)^k`.
pub fn inversion_twist(g: &GroupRingElement) -> Result<GroupRingElement> {
    let p = g.params().clone();
    let b = g.nvars();
    let images = series_images(g, b, |i, d| {
        (1..=d)
            .map(|k| {
                let mut e = Exponent::zero(b);
                e.0[i] = k;
                (e, PadicScalar::from_int(&p, if k % 2 == 0 { 1 } else { -1 }))
            })
            .collect()
    })?;
    g.substitute(&images)
}

/// Image of `g` in `O_E[x]/((1 + x_i)^{ell^n} - 1)`, as coefficients on
/// the monomials with every exponent below `ell^n`.
pub fn reduce_mod_torsion_ideal(g: &GroupRingElement, n: u32) -> Result<BTreeMap<Vec<u32>, PadicScalar>> {
    let p = g.params().clone();
    let big_l = modulus(p.prime(), n)?;
    let d = g.degree() as u64;
    // x^a for a <= D reduced to degree < L, dense in 0..L
    let width = big_l.min(d + 1) as usize;
    let mut table: Vec<Vec<PadicScalar>> = Vec::new();
    if big_l <= d {
        let row = crate::padic::int::binomial_row(big_l, big_l);
        // x^L = -sum_{1 <= k < L} C(L, k) x^k
        let top: Vec<PadicScalar> = (0..big_l as usize)
            .map(|k| if k == 0 { PadicScalar::zero(&p) } else { PadicScalar::from_biguint(&p, &row[k]).neg() })
            .collect();
        for a in 0..=d as usize {
            if a < big_l as usize {
                let mut v = vec![PadicScalar::zero(&p); big_l as usize];
                v[a] = PadicScalar::one(&p);
                table.push(v);
            } else {
                let prev = &table[a - 1];
                let carry = prev[big_l as usize - 1].clone();
                let mut v = vec![PadicScalar::zero(&p); big_l as usize];
                for k in 1..big_l as usize {
                    v[k] = prev[k - 1].clone();
                }
                for (k, t) in top.iter().enumerate() {
                    v[k] = v[k].add(&carry.mul(t));
                }
                table.push(v);
            }
        }
    } else {
        for a in 0..=d as usize {
            let mut v = vec![PadicScalar::zero(&p); width];
            v[a] = PadicScalar::one(&p);
            table.push(v);
        }
    }
    let mut out: BTreeMap<Vec<u32>, PadicScalar> = BTreeMap::new();
    for (e, c) in g.terms() {
        let mut partial: Vec<(Vec<u32>, PadicScalar)> = vec![(Vec::new(), c.clone())];
        for &a in &e.0 {
            let row = &table[a as usize];
            let mut next = Vec::new();
            for (idx, acc) in &partial {
                for (k, t) in row.iter().enumerate() {
                    if t.is_zero() && t.abs_precision() >= p.precision() as i64 {
                        continue;
                    }
                    let mut idx2 = idx.clone();
                    idx2.push(k as u32);
                    next.push((idx2, acc.mul(t)));
                }
            }
            partial = next;
        }
        for (idx, v) in partial {
            match out.get_mut(&idx) {
                Some(x) => *x = x.add(&v),
                None => {
                    out.insert(idx, v);
                }
            }
        }
    }
    Ok(out)
}

/// Whether `g` lies in `J_n = ([ell^n](M))`.
pub fn torsion_ideal_membership(g: &GroupRingElement, n: u32) -> Result<bool> {
    let image = reduce_mod_torsion_ideal(g, n)?;
    let cap = PadicScalar::zero(g.params()).abs_precision();
    if image.values().any(|c| c.digit_valuation().is_some_and(|v| v < cap)) {
        return Ok(false);
    }
    if g.min_precision() < g.params().precision() as i64 {
        return Err(Error::PrecisionUncertain);
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal::torsion_points;
    use crate::padic::RingParams;

    fn x(p: &std::sync::Arc<crate::padic::RingParams>, b: usize, d: u32, i: usize) -> TruncatedSeries {
        TruncatedSeries::variable(p, b, d, i)
    }

    #[test]
    fn comultiplication_of_x() {
        let p = RingParams::trivial(3, 10).unwrap();
        let got = comultiply(&x(&p, 1, 4, 0)).unwrap();
        let want = TruncatedSeries::from_int_terms(&p, 2, 4, &[(&[1, 0], 1), (&[0, 1], 1), (&[1, 1], 1)]).unwrap();
        assert!(got.eq_within_precision(&want));
    }

    #[test]
    fn isogeny_small_cases() {
        let p = RingParams::trivial(2, 10).unwrap();
        let got = ell_power_isogeny(&x(&p, 1, 4, 0), 1).unwrap();
        let want = TruncatedSeries::from_int_terms(&p, 1, 4, &[(&[1], 2), (&[2], 1)]).unwrap();
        assert!(got.eq_within_precision(&want));
        let g = x(&p, 1, 4, 0);
        assert!(ell_power_isogeny(&g, 0).unwrap().eq_within_precision(&g));
    }

    #[test]
    fn twist_is_geometric_series() {
        let p = RingParams::trivial(5, 10).unwrap();
        let got = inversion_twist(&x(&p, 1, 3, 0)).unwrap();
        let want = TruncatedSeries::from_int_terms(&p, 1, 3, &[(&[1], -1), (&[2], 1), (&[3], -1)]).unwrap();
        assert!(got.eq_within_precision(&want));
    }

    #[test]
    fn membership_examples() {
        let p = RingParams::trivial(3, 10).unwrap();
        let gen = ell_power_isogeny(&x(&p, 1, 6, 0), 1).unwrap();
        assert!(torsion_ideal_membership(&gen, 1).unwrap());
        assert!(!torsion_ideal_membership(&x(&p, 1, 6, 0), 1).unwrap());
        assert!(torsion_ideal_membership(&TruncatedSeries::zero(&p, 1, 6), 1).unwrap());
        let fuzzy = TruncatedSeries::from_terms(&p, 1, 6, [(Exponent(vec![1]), PadicScalar::zero_with_precision(&p, 3))]).unwrap();
        assert!(matches!(torsion_ideal_membership(&fuzzy, 1), Err(Error::PrecisionUncertain)));
    }

    #[test]
    fn evaluation_at_roots_of_unity() {
        let q = RingParams::cyclotomic(5, 1, 8).unwrap();
        let p = RingParams::trivial(5, 8).unwrap();
        let g = ell_power_isogeny(&x(&p, 1, 6, 0), 1).unwrap();
        for chi in torsion_points(&q, 1, 1).unwrap() {
            assert!(evaluate_at_character(&g, &chi).unwrap().is_zero());
        }
        let one_plus_x = TruncatedSeries::from_int_terms(&p, 1, 6, &[(&[0], 1), (&[1], 1)]).unwrap();
        let chi = &torsion_points(&q, 1, 1).unwrap()[1];
        assert!(evaluate_at_character(&one_plus_x, chi).unwrap().eq_within_precision(&chi.values()[0]));
    }
}
