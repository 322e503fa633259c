use std::sync::Arc;

use super::params::{ExtensionKind, RingParams};
use super::scalar::PadicScalar;
use crate::error::{Error, Result};

/// Teichmüller lift of a nonzero residue-field element, given by its `f`
/// coordinates in the basis `1, theta, ..., theta^{f-1}` of `F_ell[theta]`.
///
/// The lift is the limit of `x -> x^q` started at any representative; each
/// iteration fixes one more `ell`-adic digit.
pub fn teichmuller(params: &Arc<RingParams>, residue: &[u64]) -> Result<PadicScalar> {
    if params.kind() == ExtensionKind::Eisenstein {
        return Err(Error::WrongExtensionKind { expected: "unramified" });
    }
    if residue.len() != params.f() as usize {
        return Err(Error::DimensionMismatch { expected: params.f() as usize, found: residue.len() });
    }
    if residue.iter().all(|&c| c % params.prime() == 0) {
        return Err(Error::OutOfRange("Teichmüller lift of zero".into()));
    }
    let coeffs: Vec<i64> = residue.iter().map(|&c| (c % params.prime()) as i64).collect();
    let q = params.residue_cardinality();
    let mut x = PadicScalar::from_poly(params, &coeffs);
    for _ in 0..=params.precision() {
        let next = x.pow(q);
        if next.eq_within_precision(&x) {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lift_of_one_is_one() {
        let p = RingParams::trivial(5, 4).unwrap();
        assert!(teichmuller(&p, &[1]).unwrap().eq_within_precision(&PadicScalar::one(&p)));
    }

    #[test]
    fn lift_of_two_mod_25() {
        let p = RingParams::trivial(5, 2).unwrap();
        let w = teichmuller(&p, &[2]).unwrap();
        assert_eq!(w.representative_mod(2).unwrap(), vec![7]);
    }

    #[test]
    fn lifts_are_roots_of_unity() {
        let p = RingParams::unramified(3, vec![2, 2, 1], 10).unwrap(); // x^2 + 2x + 2 irreducible mod 3
        let q = p.residue_cardinality();
        for a0 in 0..3 {
            for a1 in 0..3 {
                if a0 == 0 && a1 == 0 {
                    continue;
                }
                let w = teichmuller(&p, &[a0, a1]).unwrap();
                assert!(w.pow(q - 1).eq_within_precision(&PadicScalar::one(&p)));
                assert_eq!(w.residue().unwrap(), vec![a0, a1]);
            }
        }
    }

    #[test]
    fn ramified_rejected() {
        let p = RingParams::cyclotomic(3, 1, 4).unwrap();
        assert!(matches!(teichmuller(&p, &[1]), Err(Error::WrongExtensionKind { .. })));
    }
}
