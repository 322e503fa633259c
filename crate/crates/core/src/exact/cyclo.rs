//! The cyclotomic field `Q(zeta_{ell^L})` with exact rational coefficients.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::{Field, Rationals};
use super::linalg::solve;
use crate::padic::int::checked_pow;

/// `Q(zeta_m)` for `m = ell^level`, elements in the power basis
/// `1, zeta, ..., zeta^{phi(m)-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    ell: u64,
    level: u32,
    order: usize,
    phi: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyclo(pub Vec<BigRational>);

impl CyclotomicField {
    pub fn new(ell: u64, level: u32) -> Self {
        let order = checked_pow(ell, level).expect("cyclotomic order fits") as usize;
        let phi = if level == 0 { 1 } else { order / ell as usize * (ell as usize - 1) };
        CyclotomicField { ell, level, order, phi }
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }
    pub fn level(&self) -> u32 {
        self.level
    }
    /// `ell^level`.
    pub fn order(&self) -> usize {
        self.order
    }
    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn from_rational(&self, q: BigRational) -> Cyclo {
        let mut c = vec![BigRational::zero(); self.phi];
        c[0] = q;
        Cyclo(c)
    }

    pub fn from_int(&self, n: i64) -> Cyclo {
        self.from_rational(super::field::rat(n))
    }

    /// `zeta^k` for any integer `k`.
    pub fn zeta_pow(&self, k: i64) -> Cyclo {
        let k = k.rem_euclid(self.order as i64) as usize;
        let mut full = vec![BigRational::zero(); self.order];
        full[k] = BigRational::one();
        self.reduce(full)
    }

    /// Reduces a vector indexed by `Z / m` modulo `Phi_m`.
    fn reduce(&self, mut full: Vec<BigRational>) -> Cyclo {
        if self.level == 0 {
            let s = full.into_iter().fold(BigRational::zero(), |a, b| a + b);
            return Cyclo(vec![s]);
        }
        let step = self.order / self.ell as usize;
        // zeta^{(ell-1) step} = -sum_{j<ell-1} zeta^{j step}
        for p in (self.phi..self.order).rev() {
            if full[p].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut full[p], BigRational::zero());
            let base = p - (self.ell as usize - 1) * step;
            for j in 0..self.ell as usize - 1 {
                full[base + j * step] -= &c;
            }
        }
        full.truncate(self.phi);
        Cyclo(full)
    }

    /// Embeds an element of `Q(zeta_{ell^a})` (`a <= level`).
    pub fn embed(&self, from: &CyclotomicField, x: &Cyclo) -> Cyclo {
        assert!(from.ell == self.ell && from.level <= self.level);
        let stride = self.order / from.order;
        let mut full = vec![BigRational::zero(); self.order];
        for (j, c) in x.0.iter().enumerate() {
            full[(j * stride) % self.order] += c;
        }
        self.reduce(full)
    }

    fn mul_matrix(&self, a: &Cyclo) -> Vec<Vec<BigRational>> {
        // column j = a * zeta^j
        let cols: Vec<Cyclo> = (0..self.phi).map(|j| self.mul(a, &self.zeta_pow(j as i64))).collect();
        (0..self.phi).map(|i| cols.iter().map(|c| c.0[i].clone()).collect()).collect()
    }

    /// Field norm down to `Q`.
    pub fn norm(&self, a: &Cyclo) -> BigRational {
        super::linalg::determinant(&Rationals, &self.mul_matrix(a))
    }

    /// `a` is a unit of `Z_ell[zeta]`: `ell`-integral with norm prime to
    /// `ell`.
    pub fn is_ell_unit(&self, a: &Cyclo) -> bool {
        let integral = a.0.iter().all(|c| c.is_zero() || super::field::rational_ord(self.ell, c) >= 0);
        let n = self.norm(a);
        integral && !n.is_zero() && super::field::rational_ord(self.ell, &n) == 0
    }

    pub fn is_rational(&self, a: &Cyclo) -> bool {
        a.0[1..].iter().all(|c| c.is_zero())
    }
}

impl Field for CyclotomicField {
    type Elem = Cyclo;

    fn zero(&self) -> Cyclo {
        Cyclo(vec![BigRational::zero(); self.phi])
    }
    fn one(&self) -> Cyclo {
        self.from_int(1)
    }
    fn add(&self, a: &Cyclo, b: &Cyclo) -> Cyclo {
        crate::stats::bump();
        Cyclo(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }
    fn sub(&self, a: &Cyclo, b: &Cyclo) -> Cyclo {
        crate::stats::bump();
        Cyclo(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }
    fn mul(&self, a: &Cyclo, b: &Cyclo) -> Cyclo {
        crate::stats::bump();
        if self.phi == 1 {
            return Cyclo(vec![&a.0[0] * &b.0[0]]);
        }
        let mut full = vec![BigRational::zero(); self.order];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                full[(i + j) % self.order] += x * y;
            }
        }
        self.reduce(full)
    }
    fn neg(&self, a: &Cyclo) -> Cyclo {
        Cyclo(a.0.iter().map(|x| -x).collect())
    }
    fn inv(&self, a: &Cyclo) -> Cyclo {
        assert!(!self.is_zero(a), "inverse of zero");
        if self.phi == 1 {
            return Cyclo(vec![a.0[0].recip()]);
        }
        let m = self.mul_matrix(a);
        let mut rhs = vec![BigRational::zero(); self.phi];
        rhs[0] = BigRational::one();
        Cyclo(solve(&Rationals, &m, &rhs).expect("nonzero elements are invertible"))
    }
    fn is_zero(&self, a: &Cyclo) -> bool {
        a.0.iter().all(|c| c.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_unity() {
        for (ell, level) in [(2u64, 2u32), (3, 1), (3, 2), (2, 3), (5, 1)] {
            let k = CyclotomicField::new(ell, level);
            let z = k.zeta_pow(1);
            let mut acc = k.one();
            for _ in 0..k.order() {
                acc = k.mul(&acc, &z);
            }
            assert_eq!(acc, k.one());
            // sum of the primitive ell-th roots of unity is -1
            let step = (k.order() / ell as usize) as i64;
            let s = (1..ell as i64).fold(k.zero(), |s, j| k.add(&s, &k.zeta_pow(j * step)));
            assert_eq!(s, k.from_int(-1));
        }
    }

    #[test]
    fn inverse() {
        let k = CyclotomicField::new(3, 2);
        let a = k.sub(&k.zeta_pow(1), &k.from_int(1));
        let b = k.inv(&a);
        assert_eq!(k.mul(&a, &b), k.one());
    }

    #[test]
    fn embedding_is_multiplicative() {
        let small = CyclotomicField::new(2, 2);
        let big = CyclotomicField::new(2, 3);
        let i = small.zeta_pow(1);
        assert_eq!(big.embed(&small, &i), big.zeta_pow(2));
        let x = small.add(&i, &small.from_int(3));
        let y = small.mul(&x, &x);
        assert_eq!(big.embed(&small, &y), big.mul(&big.embed(&small, &x), &big.embed(&small, &x)));
    }

    #[test]
    fn norms() {
        let k = CyclotomicField::new(3, 1);
        // N(zeta - 1) = 3
        let x = k.sub(&k.zeta_pow(1), &k.one());
        assert_eq!(k.norm(&x), crate::exact::field::rat(3));
        assert!(!k.is_ell_unit(&x));
        assert!(k.is_ell_unit(&k.zeta_pow(2)));
        assert!(k.is_ell_unit(&k.from_int(2)));
    }
}
