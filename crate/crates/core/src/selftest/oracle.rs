//! Plain integer reference computations used as test oracles.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub fn valuation(ell: u64, x: &BigInt) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    let l = BigInt::from(ell);
    let mut x = x.abs();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&l);
        if !r.is_zero() {
            return Some(v);
        }
        x = q;
        v += 1;
    }
}

/// `v_ell(1 - prod alpha_i^{n_i})`, `None` when the product is 1.
pub fn one_minus_power(ell: u64, alphas: &[i64], n: &[u32]) -> Option<u64> {
    let mut p = BigInt::one();
    for (&a, &k) in alphas.iter().zip(n) {
        p *= num_traits::pow(BigInt::from(a), k as usize);
    }
    valuation(ell, &(BigInt::one() - p))
}

/// `prod (x - alpha_i)`, low degree first.
pub fn charpoly(alphas: &[i64]) -> Vec<i64> {
    let mut c = vec![1i64];
    for &a in alphas {
        let mut next = vec![0i64; c.len() + 1];
        for (k, &x) in c.iter().enumerate() {
            next[k + 1] += x;
            next[k] -= a * x;
        }
        c = next;
    }
    c
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn det(m: &[Vec<i64>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0] as i128,
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, &x)| x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] as i128 * det(&minor)
            })
            .sum(),
    }
}

fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = choose(n - 1, k);
    for mut c in choose(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// A lattice spanned by `cols` in `Z^dim` is saturated at `ell` iff some
/// maximal minor is prime to `ell`.
pub fn saturated(ell: u64, dim: usize, cols: &[Vec<i64>]) -> bool {
    let k = cols.len();
    if k == 0 {
        return true;
    }
    choose(dim, k).iter().any(|rows| {
        let m: Vec<Vec<i64>> = rows.iter().map(|&r| cols.iter().map(|c| c[r]).collect()).collect();
        det(&m).rem_euclid(ell as i128) != 0
    })
}

/// `sum |c_k|` for `x^a mod ((1 + x)^big - 1)` over `Z`, `a <= max_deg`.
pub fn reduction_l1(big: u64, max_deg: usize) -> Vec<BigInt> {
    let big = big as usize;
    let top: Vec<BigInt> = (0..big).map(|k| -BigInt::from(binomial(big as u64, k as u64))).collect();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for a in 0..=max_deg {
        let mut v = vec![BigInt::zero(); big.max(a + 1)];
        if a < big {
            v[a] = BigInt::one();
        } else {
            let prev = &rows[a - 1];
            let carry = prev[big - 1].clone();
            for k in 1..big {
                v[k] = prev[k - 1].clone();
            }
            for k in 1..big {
                v[k] += &carry * &top[k];
            }
        }
        rows.push(v);
    }
    rows.iter().map(|r| r.iter().map(|c| c.abs()).sum()).collect()
}

/// Smallest `k` with `ell^k > bound`.
pub fn digits_above(ell: u64, bound: &BigInt) -> u32 {
    let mut p = BigInt::one();
    let mut k = 0;
    while &p <= bound {
        p *= ell;
        k += 1;
    }
    k
}
