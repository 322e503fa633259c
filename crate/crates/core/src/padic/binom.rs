use super::int::{checked_pow, factorial_ord, ord};
use crate::error::{Error, Result};

/// `ord_ell C(ell^n, r)` for `0 < r <= ell^n`, computed with Legendre's
/// formula.
pub fn binom_valuation(ell: u64, n: u32, r: u64) -> Result<u64> {
    let top = checked_pow(ell, n).ok_or_else(|| Error::OutOfRange("ell^n overflows".into()))?;
    if r == 0 || r > top {
        return Err(Error::OutOfRange(format!("r = {r} not in (0, {top}]")));
    }
    Ok(factorial_ord(ell, top) - factorial_ord(ell, r) - factorial_ord(ell, top - r))
}

/// The closed form `n - ord_ell(r)`.
pub fn binom_valuation_closed_form(ell: u64, n: u32, r: u64) -> u64 {
    n as u64 - ord(ell, r as i128).expect("r > 0") as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::int::binomial_row;

    fn direct(ell: u64, n: u32, r: u64) -> u64 {
        let top = checked_pow(ell, n).unwrap();
        let c = &binomial_row(top, r)[r as usize];
        let mut c = c.clone();
        let mut v = 0;
        let b = num_bigint::BigUint::from(ell);
        while (&c % &b) == num_bigint::BigUint::from(0u32) {
            c /= &b;
            v += 1;
        }
        v
    }

    #[test]
    fn worked_values() {
        assert_eq!(binom_valuation(2, 3, 4).unwrap(), 1);
        assert_eq!(binom_valuation(3, 2, 3).unwrap(), 1);
        assert_eq!(binom_valuation(5, 2, 25).unwrap(), 0);
        assert!(binom_valuation(2, 3, 0).is_err());
        assert!(binom_valuation(2, 3, 9).is_err());
    }

    #[test]
    fn against_direct_expansion() {
        for ell in [2u64, 3, 5] {
            for n in 1..=3 {
                for r in 1..=checked_pow(ell, n).unwrap() {
                    let v = binom_valuation(ell, n, r).unwrap();
                    assert_eq!(v, direct(ell, n, r));
                    assert_eq!(v, binom_valuation_closed_form(ell, n, r));
                }
            }
        }
    }
}
