//! Laurent polynomials in `u_1, ..., u_b` over a cyclotomic field, enough
//! for exact ranks over the rational function field.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::{Cyclo, CyclotomicField, Field};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPoly(pub BTreeMap<Vec<i32>, Cyclo>);

impl LPoly {
    pub fn zero() -> Self {
        LPoly(BTreeMap::new())
    }

    pub fn constant(k: &CyclotomicField, c: Cyclo, nvars: usize) -> Self {
        Self::monomial(k, c, vec![0; nvars])
    }

    pub fn monomial(k: &CyclotomicField, c: Cyclo, exps: Vec<i32>) -> Self {
        let mut m = BTreeMap::new();
        if !k.is_zero(&c) {
            m.insert(exps, c);
        }
        LPoly(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, k: &CyclotomicField, o: &Self) -> Self {
        let mut out = self.0.clone();
        for (e, c) in &o.0 {
            let v = match out.get(e) {
                Some(x) => k.add(x, c),
                None => c.clone(),
            };
            if k.is_zero(&v) {
                out.remove(e);
            } else {
                out.insert(e.clone(), v);
            }
        }
        LPoly(out)
    }

    pub fn neg(&self, k: &CyclotomicField) -> Self {
        LPoly(self.0.iter().map(|(e, c)| (e.clone(), k.neg(c))).collect())
    }

    pub fn sub(&self, k: &CyclotomicField, o: &Self) -> Self {
        self.add(k, &o.neg(k))
    }

    pub fn mul(&self, k: &CyclotomicField, o: &Self) -> Self {
        let mut out = LPoly::zero();
        for (e1, c1) in &self.0 {
            let mut part = BTreeMap::new();
            for (e2, c2) in &o.0 {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                part.insert(e, k.mul(c1, c2));
            }
            out = out.add(k, &LPoly(part));
        }
        out
    }

    /// Exact quotient `self / d`; fails when `d` does not divide `self`.
    pub fn div_exact(&self, k: &CyclotomicField, d: &Self) -> Result<Self> {
        let (de, dc) = d.0.iter().next_back().ok_or(Error::DivisionByZero)?;
        let dinv = k.inv(dc);
        let mut rem = self.clone();
        let mut quo = LPoly::zero();
        let limit = 64 + 4 * (self.0.len() + 1) * (d.0.len() + 1) * (self.0.len() + 1);
        for _ in 0..limit {
            let Some((re, rc)) = rem.0.iter().next_back() else {
                return Ok(quo);
            };
            let e: Vec<i32> = re.iter().zip(de).map(|(a, b)| a - b).collect();
            let t = LPoly::monomial(k, k.mul(rc, &dinv), e);
            rem = rem.sub(k, &t.mul(k, d));
            quo = quo.add(k, &t);
        }
        Err(Error::Invariant("inexact Laurent division".into()))
    }

    /// Specialization `u_i -> zeta^{k_i}` (exponents taken in the field).
    pub fn eval_zeta(&self, k: &CyclotomicField, exps: &[i64]) -> Cyclo {
        let mut acc = k.zero();
        for (e, c) in &self.0 {
            let s: i64 = e.iter().zip(exps).map(|(&a, &b)| a as i64 * b).sum();
            acc = k.add(&acc, &k.mul(c, &k.zeta_pow(s)));
        }
        acc
    }
}

/// Rank over the fraction field by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(k: &CyclotomicField, rows: &[Vec<LPoly>]) -> Result<usize> {
    let mut a: Vec<Vec<LPoly>> = rows.to_vec();
    let n = a.len();
    let m = a.first().map_or(0, |r| r.len());
    let mut prev = LPoly::constant(k, k.one(), nvars_of(rows));
    let mut rank = 0;
    let mut cols: Vec<usize> = (0..m).collect();
    while rank < n && rank < m {
        let pivot = (rank..n).flat_map(|i| (rank..m).map(move |j| (i, j))).find(|&(i, j)| !a[i][cols[j]].is_zero());
        let Some((pi, pj)) = pivot else { break };
        a.swap(rank, pi);
        cols.swap(rank, pj);
        let pc = cols[rank];
        for i in rank + 1..n {
            for jj in rank + 1..m {
                let j = cols[jj];
                let t = a[rank][pc].mul(k, &a[i][j]).sub(k, &a[i][pc].mul(k, &a[rank][j]));
                a[i][j] = t.div_exact(k, &prev)?;
            }
            a[i][pc] = LPoly::zero();
        }
        prev = a[rank][pc].clone();
        rank += 1;
    }
    Ok(rank)
}

fn nvars_of(rows: &[Vec<LPoly>]) -> usize {
    rows.iter()
        .flat_map(|r| r.iter())
        .flat_map(|p| p.0.keys())
        .map(|e| e.len())
        .next()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(k: &CyclotomicField, i: usize, b: usize) -> LPoly {
        let mut e = vec![0; b];
        e[i] = 1;
        LPoly::monomial(k, k.one(), e)
    }

    #[test]
    fn exact_division() {
        let k = CyclotomicField::new(2, 0);
        let (x, y) = (var(&k, 0, 2), var(&k, 1, 2));
        let one = LPoly::constant(&k, k.one(), 2);
        let a = x.add(&k, &one);
        let b = y.sub(&k, &one);
        let p = a.mul(&k, &b);
        assert_eq!(p.div_exact(&k, &a).unwrap(), b);
        let inv = LPoly::monomial(&k, k.one(), vec![-1, 0]);
        assert_eq!(p.mul(&k, &inv).div_exact(&k, &b).unwrap(), a.mul(&k, &inv));
    }

    #[test]
    fn ranks() {
        let k = CyclotomicField::new(3, 1);
        let (x, y) = (var(&k, 0, 2), var(&k, 1, 2));
        let one = LPoly::constant(&k, k.one(), 2);
        let u = x.sub(&k, &one);
        let v = y.sub(&k, &one);
        // [[u, v], [u v, v^2]] has rank 1
        let m = vec![vec![u.clone(), v.clone()], vec![u.mul(&k, &v), v.mul(&k, &v)]];
        assert_eq!(bareiss_rank(&k, &m).unwrap(), 1);
        let m2 = vec![vec![u.clone(), v.clone()], vec![v.clone(), u.clone()]];
        assert_eq!(bareiss_rank(&k, &m2).unwrap(), 2);
        assert_eq!(bareiss_rank(&k, &vec![vec![LPoly::zero(); 3]; 2]).unwrap(), 0);
    }
}
