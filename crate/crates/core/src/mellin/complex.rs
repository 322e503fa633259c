use std::sync::Arc;

use num_traits::ToPrimitive;

use super::data::MonodromyData;
use crate::error::{Error, Result};
use crate::exact::{Cyclo, CyclotomicField};
use crate::padic::{PadicScalar, RingParams};
use crate::tate::{Exponent, TruncatedSeries};

/// `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Block matrix of the Koszul differential `K^k -> K^{k+1}` on the
/// commuting operators `ops` (each `r x r`):
/// `d(v e_S) = sum_{j not in S} (-1)^{#{s in S, s < j}} D_j v e_{S+j}`.
pub(crate) fn koszul_matrix<T: Clone>(ops: &[Vec<Vec<T>>], r: usize, k: usize, zero: &T, neg: impl Fn(&T) -> T) -> Vec<Vec<T>> {
    let bp = ops.len();
    let src = subsets(bp, k);
    let dst = subsets(bp, k + 1);
    let mut m = vec![vec![zero.clone(); r * src.len()]; r * dst.len()];
    for (c, s) in src.iter().enumerate() {
        for j in (0..bp).filter(|j| !s.contains(j)) {
            let mut t = s.clone();
            t.push(j);
            t.sort();
            let row = dst.iter().position(|x| *x == t).expect("subset present");
            let negative = s.iter().filter(|&&x| x < j).count() % 2 == 1;
            for a in 0..r {
                for b in 0..r {
                    let v = &ops[j][a][b];
                    m[row * r + a][c * r + b] = if negative { neg(v) } else { v.clone() };
                }
            }
        }
    }
    m
}

pub(crate) fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Ranks `r C(b', k)` of the terms of the complex.
pub fn term_ranks(data: &MonodromyData) -> Vec<usize> {
    (0..=data.directions()).map(|k| data.rank() * binom(data.directions(), k)).collect()
}

/// The Koszul complex over `R_{D,N} = (O_E / lambda^N)[X] / (deg > D)` on
/// `D_j = M_j [q_j] - 1`, `[q] = prod (1 + X_i)^{q_i}`.
#[derive(Clone, Debug)]
pub struct MellinComplex {
    pub data: MonodromyData,
    pub params: Arc<RingParams>,
    pub degree: u32,
    /// `differentials[k]: K^k -> K^{k+1}` as a matrix of series.
    pub differentials: Vec<Vec<Vec<TruncatedSeries>>>,
}

fn cyclo_to_scalar(params: &Arc<RingParams>, zeta: &PadicScalar, x: &Cyclo) -> Result<PadicScalar> {
    let mut acc = PadicScalar::zero(params);
    let mut zp = PadicScalar::one(params);
    for c in &x.0 {
        if !num_traits::Zero::is_zero(c) {
            let (n, d) = (c.numer().to_i128(), c.denom().to_i128());
            let (n, d) = n.zip(d).ok_or_else(|| Error::OutOfRange("monodromy entry too large".into()))?;
            acc = acc.add(&PadicScalar::from_ratio(params, n, d)?.mul(&zp));
        }
        zp = zp.mul(zeta);
    }
    Ok(acc)
}

/// `[q] = prod (1 + X_i)^{q_i}` truncated at degree `d`.
pub(crate) fn group_element(params: &Arc<RingParams>, q: &[i64], d: u32) -> Result<TruncatedSeries> {
    let b = q.len();
    let mut acc = TruncatedSeries::one(params, b, d);
    for (i, &qi) in q.iter().enumerate() {
        let base = if qi >= 0 {
            TruncatedSeries::one(params, b, d).add(&TruncatedSeries::variable(params, b, d, i))?
        } else {
            TruncatedSeries::from_terms(
                params,
                b,
                d,
                (0..=d).map(|k| {
                    let mut e = Exponent::zero(b);
                    e.0[i] = k;
                    (e, PadicScalar::from_int(params, if k % 2 == 0 { 1 } else { -1 }))
                }),
            )?
        };
        acc = acc.mul(&base.pow(qi.unsigned_abs() as u32)?)?;
    }
    Ok(acc)
}

pub(crate) fn ring_for(field: &CyclotomicField, precision: u32) -> Result<Arc<RingParams>> {
    if field.level() == 0 {
        RingParams::trivial(field.ell(), precision)
    } else {
        RingParams::cyclotomic(field.ell(), field.level(), precision)
    }
}

pub fn build_mellin_complex(data: &MonodromyData, degree: u32, precision: u32) -> Result<MellinComplex> {
    let params = ring_for(data.field(), precision)?;
    let zeta = PadicScalar::one(&params).add(&PadicScalar::generator(&params));
    let b = data.nvars();
    let r = data.rank();
    let mut ops: Vec<Vec<Vec<TruncatedSeries>>> = Vec::new();
    for (j, m) in data.matrices().iter().enumerate() {
        let g = group_element(&params, &data.direction_vector(j), degree)?;
        let mut op = Vec::with_capacity(r);
        for a in 0..r {
            let mut row = Vec::with_capacity(r);
            for c in 0..r {
                let s = cyclo_to_scalar(&params, &zeta, &m[a][c])?;
                let mut e = g.scale(&s);
                if a == c {
                    e = e.sub(&TruncatedSeries::one(&params, b, degree))?;
                }
                row.push(e);
            }
            op.push(row);
        }
        ops.push(op);
    }
    let zero = TruncatedSeries::zero(&params, b, degree);
    let differentials = (0..data.directions())
        .map(|k| koszul_matrix(&ops, r, k, &zero, |x| x.neg()))
        .collect();
    Ok(MellinComplex { data: data.clone(), params, degree, differentials })
}

impl MellinComplex {
    pub fn term_ranks(&self) -> Vec<usize> {
        term_ranks(&self.data)
    }

    /// `d^{k+1} d^k = 0` entrywise at the truncation.
    pub fn check_d_squared(&self) -> Result<bool> {
        for w in self.differentials.windows(2) {
            let (a, b) = (&w[1], &w[0]);
            for row in a {
                for c in 0..b.first().map_or(0, |r| r.len()) {
                    let mut acc = TruncatedSeries::zero(&self.params, self.data.nvars(), self.degree);
                    for (t, x) in row.iter().enumerate() {
                        acc = acc.add(&x.mul(&b[t][c])?)?;
                    }
                    if !acc.is_zero() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_trivial() {
        let d = MonodromyData::trivial(2, 1, 1);
        let k = build_mellin_complex(&d, 4, 8).unwrap();
        assert_eq!(k.term_ranks(), vec![1, 1]);
        let x = TruncatedSeries::variable(&k.params, 1, 4, 0);
        assert!(k.differentials[0][0][0].eq_within_precision(&x));
    }

    #[test]
    fn koszul_shapes_and_d_squared() {
        let d = MonodromyData::trivial(3, 1, 2);
        let k = build_mellin_complex(&d, 3, 8).unwrap();
        assert_eq!(k.term_ranks(), vec![1, 2, 1]);
        assert!(k.check_d_squared().unwrap());
        let d3 = MonodromyData::parse(3, "rank=2; M1=[[z3,0],[0,1]]; M2=[[2,0],[0,z3^2]]; M3=[[1,0],[0,4]]").unwrap();
        let k3 = build_mellin_complex(&d3, 2, 6).unwrap();
        assert_eq!(k3.term_ranks(), vec![2, 6, 6, 2]);
        assert!(k3.check_d_squared().unwrap());
    }

    #[test]
    fn inflated_direction_with_negative_entries() {
        let d = MonodromyData::parse(5, "rank=1; M1=[[1]]; quotient=[[1,-1]]").unwrap();
        let k = build_mellin_complex(&d, 3, 8).unwrap();
        // (1 + X1)(1 + X2)^{-1} - 1 = X1 - X2 - X1 X2 + X2^2 + ...
        let e = &k.differentials[0][0][0];
        let one = PadicScalar::one(&k.params);
        assert!(e.coeff(&Exponent(vec![1, 0])).eq_within_precision(&one));
        assert!(e.coeff(&Exponent(vec![0, 2])).eq_within_precision(&one));
        assert!(e.coeff(&Exponent(vec![1, 1])).eq_within_precision(&one.neg()));
    }
}
