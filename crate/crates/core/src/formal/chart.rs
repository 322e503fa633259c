use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::One;

use crate::error::{Error, Result};
use crate::padic::{PadicScalar, RingParams, Valuation};

/// A point of the polydisc `B(rho)`, `rho = ell^{-r}`, with the exponent
/// `r` recorded.
#[derive(Clone, Debug)]
pub struct PolydiscPoint {
    pub coords: Vec<PadicScalar>,
    pub radius: Ratio<i64>,
}

impl PolydiscPoint {
    pub fn new(coords: Vec<PadicScalar>, radius: Ratio<i64>) -> Result<Self> {
        for c in &coords {
            if let Valuation::Finite(v) = c.valuation() {
                if v < radius {
                    return Err(Error::RadiusViolation(format!("|{c}| exceeds ell^(-{radius})")));
                }
            }
        }
        Ok(PolydiscPoint { coords, radius })
    }
}

fn critical(ell: u64) -> Ratio<i64> {
    Ratio::new(1, ell as i64 - 1)
}

fn check_radius(params: &Arc<RingParams>, radius: Ratio<i64>) -> Result<()> {
    if radius <= critical(params.prime()) {
        return Err(Error::RadiusViolation(format!(
            "rho = ell^(-{radius}) is not below ell^(-1/({}-1))",
            params.prime()
        )));
    }
    Ok(())
}

/// Target precision in units of `v(ell)`.
fn target(params: &Arc<RingParams>) -> Ratio<i64> {
    Ratio::new(params.precision() as i64, params.e() as i64)
}

/// `exp(t) - 1`, summing until `n v(t) - (n-1)/(ell-1)` reaches the
/// working precision.
pub fn exp_minus_one(t: &PadicScalar, radius: Ratio<i64>) -> Result<PadicScalar> {
    let p = t.params().clone();
    check_radius(&p, radius)?;
    let v = match t.valuation() {
        Valuation::Infinite => return Ok(t.clone()),
        Valuation::Finite(v) if v < radius => {
            return Err(Error::RadiusViolation(format!("|{t}| exceeds ell^(-{radius})")))
        }
        Valuation::Finite(v) => v,
    };
    let stop = target(&p);
    let c = critical(p.prime());
    let mut acc = PadicScalar::zero(&p);
    let mut fact = BigUint::one();
    let mut n: u64 = 1;
    loop {
        let bound = v * n as i64 - c * (n as i64 - 1);
        if bound >= stop {
            break;
        }
        fact *= n;
        let term = t.pow(n).checked_div(&PadicScalar::from_biguint_exact(&p, &fact))?;
        acc = acc.add(&term);
        n += 1;
    }
    Ok(acc)
}

/// `log(1 + x)`, summing until `n v(x) - log_ell(n)` reaches the working
/// precision for all later terms.
pub fn log_one_plus(x: &PadicScalar, radius: Ratio<i64>) -> Result<PadicScalar> {
    let p = x.params().clone();
    check_radius(&p, radius)?;
    let v = match x.valuation() {
        Valuation::Infinite => return Ok(x.clone()),
        Valuation::Finite(v) if v < radius => {
            return Err(Error::RadiusViolation(format!("|{x}| exceeds ell^(-{radius})")))
        }
        Valuation::Finite(v) => v,
    };
    let stop = *target(&p).numer() as f64 / *target(&p).denom() as f64;
    let vf = *v.numer() as f64 / *v.denom() as f64;
    let lnl = (p.prime() as f64).ln();
    let mut acc = PadicScalar::zero(&p);
    let mut n: u64 = 1;
    loop {
        let bound = n as f64 * vf - (n as f64).ln() / lnl;
        // the bound increases once n > 1 / (v ln ell)
        if bound >= stop + 1.0 && n as f64 * vf * lnl > 1.0 {
            break;
        }
        let mut term = x.pow(n).checked_div(&PadicScalar::from_int(&p, n as i128))?;
        if n.is_multiple_of(2) {
            term = term.neg();
        }
        acc = acc.add(&term);
        n += 1;
    }
    Ok(acc)
}

/// `X_i = exp(T_i) - 1`.
pub fn exp_chart(point: &PolydiscPoint) -> Result<Vec<PadicScalar>> {
    point.coords.iter().map(|t| exp_minus_one(t, point.radius)).collect()
}

/// `T_i = log(1 + x_i)`.
pub fn log_chart(point: &PolydiscPoint) -> Result<Vec<PadicScalar>> {
    point.coords.iter().map(|x| log_one_plus(x, point.radius)).collect()
}

/// The group law `x + x' + x x'` in the `X`-coordinates.
pub fn group_law(x: &[PadicScalar], y: &[PadicScalar]) -> Vec<PadicScalar> {
    x.iter().zip(y).map(|(a, b)| a.add(b).add(&a.mul(b))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_five() {
        let p = RingParams::trivial(5, 3).unwrap();
        let x = exp_minus_one(&PadicScalar::from_int(&p, 5), Ratio::one()).unwrap();
        assert!(x.eq_within_precision(&PadicScalar::from_int(&p, 80)));
        assert!(x.abs_precision() >= 3);
    }

    #[test]
    fn zero_and_radius() {
        let p = RingParams::trivial(5, 6).unwrap();
        let z = exp_minus_one(&PadicScalar::zero(&p), Ratio::one()).unwrap();
        assert!(z.is_zero());
        assert!(matches!(
            exp_minus_one(&PadicScalar::from_int(&p, 5), Ratio::new(1, 4)),
            Err(Error::RadiusViolation(_))
        ));
        assert!(matches!(
            exp_minus_one(&PadicScalar::from_int(&p, 1), Ratio::one()),
            Err(Error::RadiusViolation(_))
        ));
    }

    #[test]
    fn log_inverts_exp() {
        let p = RingParams::trivial(3, 12).unwrap();
        for t in [3i128, 9, -6, 12, 27 * 5] {
            let t = PadicScalar::from_int(&p, t);
            let x = exp_minus_one(&t, Ratio::one()).unwrap();
            let back = log_one_plus(&x, Ratio::one()).unwrap();
            assert!(back.eq_within_precision(&t), "{t} -> {x} -> {back}");
        }
    }

    #[test]
    fn exp_is_homomorphic() {
        let p = RingParams::trivial(2, 14).unwrap();
        let r = Ratio::new(2, 1);
        let (a, b) = (PadicScalar::from_int(&p, 4), PadicScalar::from_int(&p, 12));
        let lhs = group_law(&[exp_minus_one(&a, r).unwrap()], &[exp_minus_one(&b, r).unwrap()]);
        let rhs = exp_minus_one(&a.add(&b), r).unwrap();
        assert!(lhs[0].eq_within_precision(&rhs));
    }
}
