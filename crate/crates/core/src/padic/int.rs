//! Small-integer helpers shared by the p-adic layer.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

#[inline]
pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn addmod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub fn submod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed integer into `[0, m)`.
pub fn reduce_i128(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}

/// Inverse of `a` modulo `m` when `gcd(a, m) = 1`.
pub fn invmod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(reduce_i128(old_s, m))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `ord_ell(n)`; `None` for `n = 0`.
pub fn ord(ell: u64, n: i128) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut n = n.unsigned_abs();
    let mut v = 0;
    while n.is_multiple_of(ell as u128) {
        n /= ell as u128;
        v += 1;
    }
    Some(v)
}

/// `ell^k` if it fits in a u64.
pub fn checked_pow(ell: u64, k: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(ell)?;
    }
    Some(acc)
}

/// Sum of base-`ell` digits of `n`.
pub fn digit_sum(ell: u64, mut n: u64) -> u64 {
    let mut s = 0;
    while n > 0 {
        s += n % ell;
        n /= ell;
    }
    s
}

/// `ord_ell(n!) = (n - s_ell(n)) / (ell - 1)`.
pub fn factorial_ord(ell: u64, n: u64) -> u64 {
    (n - digit_sum(ell, n)) / (ell - 1)
}

/// Binomial coefficients `C(n, k)` for `k = 0..=kmax`, exact.
pub fn binomial_row(n: u64, kmax: u64) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(kmax as usize + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for k in 0..kmax.min(n) {
        c = c * BigUint::from(n - k) / BigUint::from(k + 1);
        row.push(c.clone());
    }
    while row.len() < kmax as usize + 1 {
        row.push(BigUint::zero());
    }
    row
}

pub fn biguint_mod(x: &BigUint, m: u64) -> u64 {
    (x % BigUint::from(m)).to_u64().expect("residue fits")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_powers() {
        assert_eq!(invmod(3, 25), Some(17));
        assert_eq!(invmod(5, 25), None);
        assert_eq!(powmod(2, 5, 25), 7);
        assert_eq!(checked_pow(2, 64), None);
    }

    #[test]
    fn legendre_matches_direct_count() {
        for ell in [2u64, 3, 5, 7] {
            let mut direct = 0u64;
            for n in 1..200u64 {
                direct += ord(ell, n as i128).unwrap() as u64;
                assert_eq!(factorial_ord(ell, n), direct);
            }
        }
    }

    #[test]
    fn binomial_row_small() {
        let row = binomial_row(8, 8);
        let vals: Vec<u64> = row.iter().map(|c| c.to_u64().unwrap()).collect();
        assert_eq!(vals, vec![1, 8, 28, 56, 70, 56, 28, 8, 1]);
    }
}
