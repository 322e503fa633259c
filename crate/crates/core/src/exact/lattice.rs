//! Sublattices of `Z_ell^b` given by integer bases: Smith invariants over the
//! local ring `Z_(ell)`, saturation, and containment.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::rational_ord;
use crate::error::{Error, Result};

/// Local Smith form of a `b x k` integer matrix given by its columns.
#[derive(Clone, Debug)]
pub struct LocalSmith {
    /// `ord_ell` of the nonzero invariant factors, in pivot order.
    pub valuations: Vec<u32>,
    /// Inverse of the accumulated row transform; its first `rank` columns
    /// span the saturation.
    pinv: Vec<Vec<BigRational>>,
}

impl LocalSmith {
    pub fn rank(&self) -> usize {
        self.valuations.len()
    }

    pub fn is_saturated(&self) -> bool {
        self.valuations.iter().all(|&v| v == 0)
    }

    /// `ord_ell` of the index of the lattice in its saturation.
    pub fn index_ord(&self) -> u32 {
        self.valuations.iter().sum()
    }
}

pub fn local_smith(ell: u64, dim: usize, columns: &[Vec<i64>]) -> Result<LocalSmith> {
    for c in columns {
        if c.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: c.len() });
        }
    }
    let k = columns.len();
    let mut w: Vec<Vec<BigRational>> = (0..dim)
        .map(|i| columns.iter().map(|c| BigRational::from_integer(BigInt::from(c[i]))).collect())
        .collect();
    let mut pinv: Vec<Vec<BigRational>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    let mut valuations = Vec::new();
    for t in 0..dim.min(k) {
        let mut best: Option<(usize, usize, i64)> = None;
        for (i, row) in w.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if x.is_zero() {
                    continue;
                }
                let v = rational_ord(ell, x);
                if best.is_none_or(|(_, _, bv)| v < bv) {
                    best = Some((i, j, v));
                }
            }
        }
        let Some((pi, pj, v)) = best else { break };
        w.swap(t, pi);
        for row in pinv.iter_mut() {
            row.swap(t, pi);
        }
        for row in w.iter_mut() {
            row.swap(t, pj);
        }
        let pivot = w[t][t].clone();
        for i in t + 1..dim {
            if w[i][t].is_zero() {
                continue;
            }
            let c = &w[i][t] / &pivot;
            for j in t..k {
                let sub = &c * &w[t][j];
                w[i][j] -= sub;
            }
            for row in pinv.iter_mut() {
                let add = &c * &row[i];
                row[t] += add;
            }
        }
        for j in t + 1..k {
            if w[t][j].is_zero() {
                continue;
            }
            let c = &w[t][j] / &pivot;
            for row in w.iter_mut() {
                let sub = &c * &row[t];
                row[j] -= sub;
            }
        }
        valuations.push(v as u32);
    }
    Ok(LocalSmith { valuations, pinv })
}

pub fn is_saturated(ell: u64, dim: usize, columns: &[Vec<i64>]) -> Result<bool> {
    if crate::fault::active(crate::fault::Fault::UnsaturatedLattice) {
        return Ok(true);
    }
    Ok(local_smith(ell, dim, columns)?.is_saturated())
}

/// An integer basis of the `Z_ell`-saturation of the span of `columns`.
pub fn saturate(ell: u64, dim: usize, columns: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    if crate::fault::active(crate::fault::Fault::UnsaturatedLattice) {
        return Ok(columns.to_vec());
    }
    let s = local_smith(ell, dim, columns)?;
    (0..s.rank())
        .map(|j| {
            let col: Vec<BigRational> = s.pinv.iter().map(|row| row[j].clone()).collect();
            integer_primitive(&col)
        })
        .collect()
}

fn integer_primitive(col: &[BigRational]) -> Result<Vec<i64>> {
    let lcm = col.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = col.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let mut out: Vec<BigInt> = ints.iter().map(|x| if g.is_zero() { x.clone() } else { x / &g }).collect();
    // deterministic sign: first nonzero entry positive
    if out.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        out = out.into_iter().map(|x| -x).collect();
    }
    out.iter()
        .map(|x| x.to_i64().ok_or_else(|| Error::OutOfRange("lattice entry overflow".into())))
        .collect()
}

/// `span(small) ⊆ span(big)` over `Z_ell`.
pub fn lattice_contains(ell: u64, dim: usize, big: &[Vec<i64>], small: &[Vec<i64>]) -> Result<bool> {
    let a = local_smith(ell, dim, big)?;
    let mut joined = big.to_vec();
    joined.extend_from_slice(small);
    let b = local_smith(ell, dim, &joined)?;
    Ok(a.rank() == b.rank() && a.index_ord() == b.index_ord())
}

pub fn lattice_equal(ell: u64, dim: usize, a: &[Vec<i64>], b: &[Vec<i64>]) -> Result<bool> {
    Ok(lattice_contains(ell, dim, a, b)? && lattice_contains(ell, dim, b, a)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturation_of_scaled_vector() {
        assert!(!is_saturated(2, 2, &[vec![2, 0]]).unwrap());
        assert!(is_saturated(2, 2, &[vec![3, 0]]).unwrap()); // 3 is a 2-adic unit
        let s = saturate(2, 2, &[vec![2, 4]]).unwrap();
        assert_eq!(s, vec![vec![1, 2]]);
        assert!(is_saturated(2, 2, &s).unwrap());
    }

    #[test]
    fn containment() {
        let e1 = vec![vec![1, 0]];
        let e2 = vec![vec![0, 1]];
        assert!(lattice_contains(3, 2, &e1, &[vec![3, 0]]).unwrap());
        assert!(!lattice_contains(3, 2, &[vec![3, 0]], &e1).unwrap());
        assert!(!lattice_equal(3, 2, &e1, &e2).unwrap());
        assert!(lattice_equal(3, 2, &[vec![1, 1], vec![0, 1]], &[vec![1, 0], vec![0, 2]]).unwrap());
        assert!(!lattice_equal(2, 2, &[vec![1, 1], vec![0, 1]], &[vec![1, 0], vec![0, 2]]).unwrap());
    }

    #[test]
    fn saturation_of_rank_two() {
        let cols = vec![vec![2, 0, 2], vec![0, 4, 4]];
        let s = saturate(2, 3, &cols).unwrap();
        assert_eq!(s.len(), 2);
        assert!(is_saturated(2, 3, &s).unwrap());
        assert!(lattice_contains(2, 3, &s, &cols).unwrap());
    }
}
