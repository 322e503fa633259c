use crate::error::{Error, Result};
use crate::padic::binom_valuation;

/// Smallest `r >= 1` with `C(ell^n, r) != 0 mod ell^m`, i.e. the lowest
/// surviving degree of `(X + 1)^{ell^n} - 1` over `Z/ell^m`.
pub fn lowest_surviving_degree(ell: u64, m: u32, n: u32) -> Result<u64> {
    let big = ell
        .checked_pow(n)
        .ok_or_else(|| Error::InvalidParams(format!("{ell}^{n} overflows")))?;
    for r in 1..big {
        if binom_valuation(ell, n, r)? < m as u64 {
            return Ok(r);
        }
    }
    Ok(big)
}

/// `X^{ell^{n-m+1}}` divides `(X + 1)^{ell^n} - 1` in `(Z/ell^m)[X]`.
pub fn prosystem_divisibility_check(ell: u64, m: u32, n: u32) -> Result<bool> {
    if m == 0 || n < m {
        return Err(Error::InvalidParams(format!("need n >= m > 0, got m={m}, n={n}")));
    }
    let threshold = ell.pow(n - m + 1);
    Ok(lowest_surviving_degree(ell, m, n)? >= threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::int::binomial_row;
    use num_bigint::BigUint;
    use num_traits::Zero;

    #[test]
    fn documented_cases() {
        assert!(prosystem_divisibility_check(2, 1, 1).unwrap());
        assert!(prosystem_divisibility_check(5, 2, 2).unwrap());
        for ell in [2, 3, 5, 7] {
            for n in 1..=4 {
                assert!(prosystem_divisibility_check(ell, n, n).unwrap());
            }
        }
        assert!(prosystem_divisibility_check(3, 0, 1).is_err());
    }

    #[test]
    fn agrees_with_direct_expansion() {
        for ell in [2u64, 3, 5] {
            for n in 1..=3u32 {
                let big = ell.pow(n);
                let row = binomial_row(big, big);
                for m in 1..=n {
                    let modulus = BigUint::from(ell.pow(m));
                    let direct = (1..big).find(|&r| !(&row[r as usize] % &modulus).is_zero()).unwrap_or(big);
                    assert_eq!(lowest_surviving_degree(ell, m, n).unwrap(), direct, "ell={ell} m={m} n={n}");
                }
            }
        }
    }
}
