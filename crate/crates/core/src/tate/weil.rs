//! Certified check that all roots of an integer polynomial share one
//! archimedean absolute value `c`, and whether `c != 1`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

type QPoly = Vec<BigRational>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilVerdict {
    pub equal_moduli: bool,
    pub modulus_is_one: bool,
    /// `c = base^(1/root)` when the moduli agree.
    pub modulus: Option<(u64, u32)>,
}

impl WeilVerdict {
    /// Equal moduli and `c != 1`; this certifies `alpha^n != 1` for every
    /// nonzero `n in N^b`.
    pub fn pass(&self) -> bool {
        self.equal_moduli && !self.modulus_is_one
    }
}

impl fmt::Display for WeilVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.pass() { "pass" } else { "fail" })?;
        match self.modulus {
            Some((b, 1)) => write!(f, ", c = {b}")?,
            Some((b, r)) => write!(f, ", c = {b}^(1/{r})")?,
            None => write!(f, ", unequal moduli")?,
        }
        Ok(())
    }
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn trim(mut p: QPoly) -> QPoly {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn deg(p: &QPoly) -> usize {
    p.len().saturating_sub(1)
}

fn monic(p: QPoly) -> QPoly {
    let lead = p.last().cloned().unwrap_or_else(BigRational::one);
    p.into_iter().map(|c| c / &lead).collect()
}

fn derivative(p: &QPoly) -> QPoly {
    if p.len() <= 1 {
        return vec![BigRational::zero()];
    }
    p.iter().enumerate().skip(1).map(|(k, c)| c * q(k as i64)).collect()
}

fn div_rem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let mut r = a.clone();
    let db = deg(b);
    if r.len() <= db {
        return (vec![BigRational::zero()], r);
    }
    let mut quo = vec![BigRational::zero(); r.len() - db];
    let lead = b[db].clone();
    for i in (0..quo.len()).rev() {
        let c = &r[i + db] / &lead;
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &c * bj;
        }
        quo[i] = c;
    }
    r.truncate(db.max(1));
    (quo, trim(r))
}

fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !(b.len() == 1 && b[0].is_zero()) {
        let (_, r) = div_rem(&a, &b);
        a = std::mem::replace(&mut b, r);
    }
    monic(a)
}

fn squarefree(p: &QPoly) -> QPoly {
    let g = gcd(p, &derivative(p));
    monic(div_rem(p, &g).0)
}

/// Monic polynomial whose roots are the `k`-th powers of the roots of `p`.
fn power_roots(p: &QPoly, k: usize) -> QPoly {
    let n = deg(p);
    // e_i of the roots: p = x^n - e1 x^{n-1} + e2 x^{n-2} - ...
    let e: Vec<BigRational> = (0..=n)
        .map(|i| if i % 2 == 0 { p[n - i].clone() } else { -p[n - i].clone() })
        .collect();
    let m = n * k;
    let mut s = vec![BigRational::zero(); m + 1];
    for j in 1..=m {
        let mut acc = BigRational::zero();
        for i in 1..j.min(n + 1) {
            let t = &e[i] * &s[j - i];
            if i % 2 == 1 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        if j <= n {
            let t = &e[j] * q(j as i64);
            if j % 2 == 1 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        s[j] = acc;
    }
    let sk: Vec<BigRational> = (0..=n).map(|j| s[j * k].clone()).collect();
    let mut f = vec![BigRational::one(); n + 1];
    for j in 1..=n {
        let mut acc = BigRational::zero();
        for i in 1..=j {
            let t = &f[j - i] * &sk[i];
            if i % 2 == 1 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        f[j] = acc / q(j as i64);
    }
    (0..=n).map(|i| if (n - i).is_multiple_of(2) { f[n - i].clone() } else { -f[n - i].clone() }).collect()
}

/// Root set closed under `beta -> s / beta`.
fn reciprocal_symmetric(r: &QPoly, s: &BigRational) -> bool {
    let t = deg(r);
    let r0 = &r[0];
    if r0.is_zero() {
        return false;
    }
    let mut spow = BigRational::one();
    for (j, rj) in r.iter().enumerate() {
        // coefficient of x^{t-j} in x^t r(s/x) is r_j s^j
        if (rj * &spow) != (r0 * &r[t - j]) {
            return false;
        }
        spow *= s;
    }
    true
}

#[derive(Clone, Copy, Debug)]
struct C(f64, f64);

impl C {
    fn add(self, o: C) -> C {
        C(self.0 + o.0, self.1 + o.1)
    }
    fn sub(self, o: C) -> C {
        C(self.0 - o.0, self.1 - o.1)
    }
    fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn div(self, o: C) -> C {
        let d = o.0 * o.0 + o.1 * o.1;
        C((self.0 * o.0 + self.1 * o.1) / d, (self.1 * o.0 - self.0 * o.1) / d)
    }
    fn abs(self) -> f64 {
        self.0.hypot(self.1)
    }
}

fn aberth(p: &[f64]) -> Vec<C> {
    let n = p.len() - 1;
    let eval = |z: C| -> (C, C) {
        let (mut v, mut dv) = (C(0.0, 0.0), C(0.0, 0.0));
        for &c in p.iter().rev() {
            dv = dv.mul(z).add(v);
            v = v.mul(z).add(C(c, 0.0));
        }
        (v, dv)
    };
    let bound = 1.0 + p[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let r0 = bound.min(2.0 * p[0].abs().powf(1.0 / n as f64)).max(1e-3);
    let mut z: Vec<C> = (0..n)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            C(r0 * a.cos(), r0 * a.sin())
        })
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (v, dv) = eval(z[k]);
            if v.abs() == 0.0 {
                continue;
            }
            let ratio = v.div(dv);
            let mut sum = C(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    sum = sum.add(C(1.0, 0.0).div(z[k].sub(z[j])));
                }
            }
            let w = ratio.div(C(1.0, 0.0).sub(ratio.mul(sum)));
            z[k] = z[k].sub(w);
            moved = moved.max(w.abs() / (1.0 + z[k].abs()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

#[derive(Clone, Debug)]
struct G(BigRational, BigRational);

impl G {
    fn from_c(c: C) -> Option<G> {
        Some(G(BigRational::from_float(c.0)?, BigRational::from_float(c.1)?))
    }
    fn add(&self, o: &G) -> G {
        G(&self.0 + &o.0, &self.1 + &o.1)
    }
    fn sub(&self, o: &G) -> G {
        G(&self.0 - &o.0, &self.1 - &o.1)
    }
    fn mul(&self, o: &G) -> G {
        G(&self.0 * &o.0 - &self.1 * &o.1, &self.0 * &o.1 + &self.1 * &o.0)
    }
    fn norm(&self) -> BigRational {
        &self.0 * &self.0 + &self.1 * &self.1
    }
    fn scale(&self, s: &BigRational) -> G {
        G(&self.0 * s, &self.1 * s)
    }
}

/// Rational `(lo, hi)` with `lo^2 <= x <= hi^2`, `lo >= 0`.
fn sqrt_bounds(x: &BigRational) -> (BigRational, BigRational) {
    if x.is_zero() {
        return (BigRational::zero(), BigRational::zero());
    }
    let f = x.to_f64().unwrap_or(f64::MAX).sqrt();
    let mut lo = BigRational::from_float(f * (1.0 - 1e-12)).unwrap_or_else(BigRational::zero);
    let mut hi = BigRational::from_float(f * (1.0 + 1e-12)).unwrap_or_else(|| x + BigRational::one());
    let shrink = BigRational::new(BigInt::from(999), BigInt::from(1000));
    while &(&lo * &lo) > x {
        lo *= &shrink;
    }
    while &(&hi * &hi) < x {
        hi = &hi / &shrink;
    }
    (lo.max(BigRational::zero()), hi)
}

enum Isolation {
    Equal,
    Unequal,
    Unknown,
}

/// Separates the roots of `r` in disjoint Weierstrass disks and tests the
/// mirror map `beta -> s / conj(beta)` against them.
fn isolate(r: &QPoly, s: &BigRational) -> Isolation {
    let t = deg(r);
    let Some(coeffs) = r.iter().map(|c| c.to_f64()).collect::<Option<Vec<f64>>>() else {
        return Isolation::Unknown;
    };
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Isolation::Unknown;
    }
    let approx = aberth(&coeffs);
    let Some(z) = approx.into_iter().map(G::from_c).collect::<Option<Vec<G>>>() else {
        return Isolation::Unknown;
    };
    let tq = q(t as i64);
    // squared radii t^2 |W_i|^2
    let mut rad2 = Vec::with_capacity(t);
    for i in 0..t {
        let mut v = G(BigRational::zero(), BigRational::zero());
        for c in r.iter().rev() {
            v = v.mul(&z[i]).add(&G(c.clone(), BigRational::zero()));
        }
        let mut den = BigRational::one();
        for j in 0..t {
            if j != i {
                den *= z[i].sub(&z[j]).norm();
            }
        }
        if den.is_zero() {
            return Isolation::Unknown;
        }
        rad2.push(&tq * &tq * v.norm() / den);
    }
    let two = q(2);
    for i in 0..t {
        for j in i + 1..t {
            if z[i].sub(&z[j]).norm() <= &two * (&rad2[i] + &rad2[j]) {
                return Isolation::Unknown;
            }
        }
    }
    let rad: Vec<(BigRational, BigRational)> = rad2.iter().map(sqrt_bounds).collect();
    let modz: Vec<(BigRational, BigRational)> = z.iter().map(|x| sqrt_bounds(&x.norm())).collect();
    // moduli intervals [|z|-r, |z|+r]
    for i in 0..t {
        for j in 0..t {
            if &modz[i].1 + &rad[i].1 < &modz[j].0 - &rad[j].1 {
                return Isolation::Unequal;
            }
        }
    }
    for i in 0..t {
        let lz = &modz[i].0;
        let ur = &rad[i].1;
        if lz <= ur {
            return Isolation::Unknown;
        }
        let rho = s * ur / ((lz - ur) * lz);
        let w = z[i].scale(&(s / z[i].norm()));
        for j in 0..t {
            if j == i {
                continue;
            }
            let (dlo, _) = sqrt_bounds(&w.sub(&z[j]).norm());
            if dlo <= &rho + &rad[j].1 {
                return Isolation::Unknown;
            }
        }
    }
    Isolation::Equal
}

/// Largest `r | d` with `|a0|` a perfect `r`-th power; returns
/// `(|a0|^{1/r}, d / r)` so that `c = base^(1/root)`.
fn simplify_modulus(a0: u64, d: u32) -> (u64, u32) {
    for r in (1..=d).rev() {
        if !d.is_multiple_of(r) {
            continue;
        }
        let b = a0.nth_root(r);
        if b.checked_pow(r) == Some(a0) {
            return (b, d / r);
        }
    }
    (a0, d)
}

/// Decides whether all roots of the monic integer polynomial `charpoly`
/// (low degree first) have one common absolute value `c`, and whether
/// `c != 1`.
pub fn weil_condition_check(charpoly: &[i64]) -> Result<WeilVerdict> {
    let d = charpoly.len().saturating_sub(1);
    if d == 0 || charpoly[d] != 1 {
        return Err(Error::InvalidParams("characteristic polynomial must be monic of positive degree".into()));
    }
    if charpoly[0] == 0 {
        return Err(Error::InvalidParams("constant term must be nonzero".into()));
    }
    let a0 = charpoly[0].unsigned_abs();
    let modulus_is_one = a0 == 1;
    let equal = |eq: bool| WeilVerdict {
        equal_moduli: eq,
        modulus_is_one,
        modulus: eq.then(|| simplify_modulus(a0, d as u32)),
    };
    let p: QPoly = charpoly.iter().map(|&c| q(c)).collect();
    let sq = squarefree(&p);
    let k = deg(&sq);
    if k == 1 {
        return Ok(equal(true));
    }
    let s = &sq[0] * &sq[0];
    let r = squarefree(&power_roots(&sq, k));
    if !reciprocal_symmetric(&r, &s) {
        return Ok(equal(false));
    }
    if deg(&r) == 1 {
        return Ok(equal(true));
    }
    match isolate(&r, &s) {
        Isolation::Equal => Ok(equal(true)),
        Isolation::Unequal => Ok(equal(false)),
        Isolation::Unknown => Err(Error::Inconclusive("root disks could not be separated in double precision".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_cases() {
        let v = weil_condition_check(&[-5, 1]).unwrap();
        assert!(v.pass());
        assert_eq!(v.modulus, Some((5, 1)));
        let v = weil_condition_check(&[-1, 1]).unwrap();
        assert!(!v.pass() && v.equal_moduli && v.modulus_is_one);
    }

    #[test]
    fn conjugate_pair() {
        for ell in [2i64, 3, 5, 7] {
            let v = weil_condition_check(&[ell, -1, 1]).unwrap();
            assert!(v.pass(), "ell={ell}");
            assert_eq!(v.modulus, Some((ell as u64, 2)));
        }
    }

    #[test]
    fn real_roots_of_different_size() {
        // (x - 2)(x - 8): symmetric after squaring, separated by the disks
        let v = weil_condition_check(&[16, -10, 1]).unwrap();
        assert!(!v.equal_moduli);
        // (x - 1)(x - 3): not symmetric
        assert!(!weil_condition_check(&[3, -4, 1]).unwrap().equal_moduli);
    }

    #[test]
    fn repeated_and_quartic() {
        // (x^2 - x + 5)^2
        let v = weil_condition_check(&[25, -10, 11, -2, 1]).unwrap();
        assert!(v.pass());
        assert_eq!(v.modulus, Some((5, 2)));
        // x^4 + 5^2: four roots of modulus sqrt 5
        assert!(weil_condition_check(&[25, 0, 0, 0, 1]).unwrap().pass());
        // (x - 5)(x + 5) as a real pair of equal modulus
        assert!(weil_condition_check(&[-25, 0, 1]).unwrap().pass());
    }

    #[test]
    fn power_roots_squares() {
        // roots 1, 2 -> squares 1, 4: x^2 - 5x + 4
        let p: QPoly = [2, -3, 1].iter().map(|&c| q(c)).collect();
        let r = power_roots(&p, 2);
        assert_eq!(r, [4, -5, 1].iter().map(|&c| q(c)).collect::<QPoly>());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(weil_condition_check(&[1, 2]).is_err());
        assert!(weil_condition_check(&[0, 1]).is_err());
    }
}
