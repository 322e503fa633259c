//! Ring parameters for a finite extension `E / Q_ell`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::int::{checked_pow, invmod, is_prime, mulmod, powmod, reduce_i128};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtensionKind {
    Trivial,
    Unramified,
    Eisenstein,
}

impl ExtensionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExtensionKind::Trivial => "trivial",
            ExtensionKind::Unramified => "unramified",
            ExtensionKind::Eisenstein => "eisenstein",
        }
    }
}

impl std::str::FromStr for ExtensionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "trivial" => Ok(ExtensionKind::Trivial),
            "unramified" => Ok(ExtensionKind::Unramified),
            "eisenstein" => Ok(ExtensionKind::Eisenstein),
            other => Err(Error::Parse(format!("unknown extension kind `{other}`"))),
        }
    }
}

/// Parameters of `O_E / lambda^N`.
///
/// Elements are stored as polynomials of degree `< e*f` in the generator
/// `theta` (a root of `poly`) with coefficients modulo `ell^M`.  For the
/// Eisenstein kind `theta` is the uniformizer; otherwise the uniformizer is
/// `ell` itself.  `M` carries two guard digits beyond `ceil(N / e)` so that
/// divisions by the uniformizer never touch certified digits.
#[derive(Debug, PartialEq, Eq)]
pub struct RingParams {
    prime: u64,
    kind: ExtensionKind,
    poly: Vec<i64>,
    e: u32,
    f: u32,
    precision: u32,
    storage_digits: u32,
    modulus: u64,
    /// `theta^d = sum reduction[i] theta^i` modulo `ell^M`.
    reduction: Vec<u64>,
    /// For Eisenstein: `(theta^{e-1} + c_{e-1} theta^{e-2} + ... + c_1)` and
    /// the inverse of `c_0 / ell` modulo `ell^M`.
    theta_cofactor: Vec<u64>,
    c0_unit_inv: u64,
    /// `theta^e / ell` and its inverse (Eisenstein only).
    eps: Vec<u64>,
    eps_inv: Vec<u64>,
    cyclotomic_level: Option<u32>,
}

impl RingParams {
    pub fn new(prime: u64, kind: ExtensionKind, poly: Vec<i64>, precision: u32) -> Result<Arc<Self>> {
        if !is_prime(prime) {
            return Err(Error::InvalidParams(format!("{prime} is not prime")));
        }
        if precision == 0 {
            return Err(Error::InvalidParams("precision must be at least 1".into()));
        }
        if poly.len() < 2 || *poly.last().unwrap() != 1 {
            return Err(Error::InvalidParams("defining polynomial must be monic of degree >= 1".into()));
        }
        let d = (poly.len() - 1) as u32;
        let (e, f) = match kind {
            ExtensionKind::Trivial => {
                if poly != [0, 1] {
                    return Err(Error::InvalidParams("trivial extension uses poly=0,1".into()));
                }
                (1, 1)
            }
            ExtensionKind::Unramified => {
                if !irreducible_mod_prime(&poly, prime) {
                    return Err(Error::InvalidParams("polynomial is not irreducible modulo ell".into()));
                }
                (1, d)
            }
            ExtensionKind::Eisenstein => {
                let p = prime as i128;
                let lower_ok = poly[..poly.len() - 1].iter().all(|&c| (c as i128) % p == 0);
                if !lower_ok || (poly[0] as i128) % (p * p) == 0 {
                    return Err(Error::InvalidParams("polynomial is not Eisenstein at ell".into()));
                }
                (d, 1)
            }
        };
        let storage_digits = if e == 1 { precision + 1 } else { precision.div_ceil(e) + 2 };
        let modulus = checked_pow(prime, storage_digits)
            .filter(|&m| m < (1u64 << 62))
            .ok_or_else(|| {
                Error::InvalidParams(format!(
                    "precision {precision} needs {prime}^{storage_digits}, which exceeds the 62-bit storage bound"
                ))
            })?;
        let reduction: Vec<u64> = poly[..d as usize]
            .iter()
            .map(|&c| reduce_i128(-(c as i128), modulus))
            .collect();
        let (theta_cofactor, c0_unit_inv) = if kind == ExtensionKind::Eisenstein {
            let cof: Vec<u64> = (1..=d as usize)
                .map(|i| reduce_i128(poly[i] as i128, modulus))
                .collect();
            let c0 = poly[0] as i128 / prime as i128;
            let inv = invmod(reduce_i128(c0, modulus), modulus).expect("c0/ell is a unit");
            (cof, inv)
        } else {
            (Vec::new(), 0)
        };
        let mut params = RingParams {
            prime,
            kind,
            poly,
            e,
            f,
            precision,
            storage_digits,
            modulus,
            reduction,
            theta_cofactor,
            c0_unit_inv,
            eps: Vec::new(),
            eps_inv: Vec::new(),
            cyclotomic_level: None,
        };
        if kind == ExtensionKind::Eisenstein {
            let eps: Vec<u64> = params.poly[..d as usize]
                .iter()
                .map(|&c| reduce_i128(-(c as i128) / prime as i128, modulus))
                .collect();
            params.eps_inv = params.rep_inverse_unit(&eps);
            params.eps = eps;
        }
        if kind == ExtensionKind::Trivial {
            params.cyclotomic_level = Some(0);
        } else if kind == ExtensionKind::Eisenstein {
            let mut level = 1;
            while let Some(deg) = checked_pow(prime, level - 1).map(|x| x * (prime - 1)) {
                if deg > d as u64 {
                    break;
                }
                if deg == d as u64 && cyclotomic_shifted(prime, level).ok().as_deref() == Some(&params.poly[..]) {
                    params.cyclotomic_level = Some(level);
                    break;
                }
                level += 1;
            }
        }
        Ok(Arc::new(params))
    }

    pub fn trivial(prime: u64, precision: u32) -> Result<Arc<Self>> {
        Self::new(prime, ExtensionKind::Trivial, vec![0, 1], precision)
    }

    pub fn unramified(prime: u64, poly: Vec<i64>, precision: u32) -> Result<Arc<Self>> {
        Self::new(prime, ExtensionKind::Unramified, poly, precision)
    }

    pub fn eisenstein(prime: u64, poly: Vec<i64>, precision: u32) -> Result<Arc<Self>> {
        Self::new(prime, ExtensionKind::Eisenstein, poly, precision)
    }

    /// `Q_ell(zeta_{ell^level})`, generated by `theta = zeta - 1` with
    /// minimal polynomial `Phi_{ell^level}(1 + t)`.  Level 0 is `Q_ell`.
    pub fn cyclotomic(prime: u64, level: u32, precision: u32) -> Result<Arc<Self>> {
        if level == 0 {
            return Self::trivial(prime, precision);
        }
        let poly = cyclotomic_shifted(prime, level)?;
        Self::new(prime, ExtensionKind::Eisenstein, poly, precision)
    }

    /// Same field at a different precision.
    pub fn with_precision(&self, precision: u32) -> Result<Arc<Self>> {
        Self::new(self.prime, self.kind, self.poly.clone(), precision)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }
    pub fn kind(&self) -> ExtensionKind {
        self.kind
    }
    pub fn poly(&self) -> &[i64] {
        &self.poly
    }
    /// Ramification index.
    pub fn e(&self) -> u32 {
        self.e
    }
    /// Residue degree.
    pub fn f(&self) -> u32 {
        self.f
    }
    pub fn degree(&self) -> usize {
        (self.e * self.f) as usize
    }
    /// Absolute precision `N` in uniformizer digits.
    pub fn precision(&self) -> u32 {
        self.precision
    }
    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    pub fn storage_digits(&self) -> u32 {
        self.storage_digits
    }
    /// Cardinality of the residue field.
    pub fn residue_cardinality(&self) -> u64 {
        checked_pow(self.prime, self.f).expect("residue field fits")
    }
    pub fn cyclotomic_level(&self) -> Option<u32> {
        self.cyclotomic_level
    }

    pub fn header(&self) -> String {
        self.to_string()
    }

    /// Parses `prime=<l>; kind=<k>; poly=<coeffs>; precision=<N>`.
    pub fn parse_header(s: &str) -> Result<Arc<Self>> {
        let mut prime = None;
        let mut kind = None;
        let mut poly = None;
        let mut precision = None;
        for part in s.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{part}`")))?;
            let v = v.trim();
            match k.trim() {
                "prime" => prime = Some(parse_num::<u64>(v)?),
                "kind" => kind = Some(v.parse::<ExtensionKind>()?),
                "poly" => {
                    poly = Some(
                        v.split(',')
                            .map(|c| parse_num::<i64>(c.trim()))
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                "precision" => precision = Some(parse_num::<u32>(v)?),
                other => return Err(Error::Parse(format!("unknown header key `{other}`"))),
            }
        }
        let missing = |k: &str| Error::Parse(format!("header is missing `{k}`"));
        Self::new(
            prime.ok_or_else(|| missing("prime"))?,
            kind.ok_or_else(|| missing("kind"))?,
            poly.ok_or_else(|| missing("poly"))?,
            precision.ok_or_else(|| missing("precision"))?,
        )
    }

    // ---- arithmetic on stored representatives (polynomials in theta mod ell^M) ----

    pub(crate) fn rep_zero(&self) -> Vec<u64> {
        vec![0; self.degree()]
    }

    pub(crate) fn rep_from_i128(&self, x: i128) -> Vec<u64> {
        let mut r = self.rep_zero();
        r[0] = reduce_i128(x, self.modulus);
        r
    }

    pub(crate) fn rep_add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| super::int::addmod(x, y, self.modulus))
            .collect()
    }

    pub(crate) fn rep_sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| super::int::submod(x, y, self.modulus))
            .collect()
    }

    pub(crate) fn rep_neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| super::int::submod(0, x, self.modulus)).collect()
    }

    pub(crate) fn rep_scale(&self, a: &[u64], s: u64) -> Vec<u64> {
        a.iter().map(|&x| mulmod(x, s, self.modulus)).collect()
    }

    pub(crate) fn rep_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let d = self.degree();
        let m = self.modulus as u128;
        if d == 1 {
            return vec![((a[0] as u128 * b[0] as u128) % m) as u64];
        }
        let mut full = vec![0u128; 2 * d - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                full[i + j] = (full[i + j] + x as u128 * y as u128) % m;
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = full[k];
            if c == 0 {
                continue;
            }
            full[k] = 0;
            for (i, &r) in self.reduction.iter().enumerate() {
                full[k - d + i] = (full[k - d + i] + c * r as u128) % m;
            }
        }
        full[..d].iter().map(|&x| x as u64).collect()
    }

    /// Multiplies by the uniformizer.
    pub(crate) fn rep_mul_uniformizer(&self, a: &[u64]) -> Vec<u64> {
        match self.kind {
            ExtensionKind::Eisenstein => {
                let d = self.degree();
                let top = a[d - 1];
                let mut r = vec![0u64; d];
                r[1..d].copy_from_slice(&a[..d - 1]);
                if top != 0 {
                    for (i, &c) in self.reduction.iter().enumerate() {
                        r[i] = super::int::addmod(r[i], mulmod(top, c, self.modulus), self.modulus);
                    }
                }
                r
            }
            _ => self.rep_scale(a, self.prime),
        }
    }

    pub(crate) fn rep_mul_uniformizer_pow(&self, a: &[u64], k: u32) -> Vec<u64> {
        match self.kind {
            ExtensionKind::Eisenstein => {
                let (q, s) = (k / self.e, k % self.e);
                let mut r = match checked_pow(self.prime, q) {
                    Some(p) => self.rep_scale(a, p % self.modulus),
                    None => return self.rep_zero(),
                };
                if q > 0 {
                    r = self.rep_mul(&r, &self.rep_pow(&self.eps, q as u64));
                }
                for _ in 0..s {
                    r = self.rep_mul_uniformizer(&r);
                }
                r
            }
            _ => match checked_pow(self.prime, k) {
                Some(p) => self.rep_scale(a, p % self.modulus),
                None => self.rep_zero(),
            },
        }
    }

    /// Divides by `uniformizer^k`; the caller guarantees divisibility.
    pub(crate) fn rep_div_uniformizer_pow(&self, a: &[u64], k: u32) -> Vec<u64> {
        let (q, s) = match self.kind {
            ExtensionKind::Eisenstein => (k / self.e, k % self.e),
            _ => (k, 0),
        };
        let mut r: Vec<u64> = match checked_pow(self.prime, q) {
            Some(pq) => a.iter().map(|&x| x / pq).collect(),
            None => self.rep_zero(),
        };
        if q > 0 && self.kind == ExtensionKind::Eisenstein {
            r = self.rep_mul(&r, &self.rep_pow(&self.eps_inv, q as u64));
        }
        for _ in 0..s {
            r = self.rep_div_theta(&r);
        }
        r
    }

    fn rep_div_theta(&self, a: &[u64]) -> Vec<u64> {
        let d = self.degree();
        let mut r = vec![0u64; d];
        r[..d - 1].copy_from_slice(&a[1..]);
        let a0 = a[0] / self.prime;
        let factor = mulmod(a0 % self.modulus, self.c0_unit_inv, self.modulus);
        for i in 0..d {
            let t = mulmod(factor, self.theta_cofactor[i], self.modulus);
            r[i] = super::int::submod(r[i], t, self.modulus);
        }
        r
    }

    /// Valuation of a representative in uniformizer digits, or `None` when it
    /// is at least `cap`.
    pub(crate) fn rep_valuation(&self, a: &[u64], cap: i64) -> Option<i64> {
        let e = self.e as i64;
        let mut best: Option<i64> = None;
        for (i, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let v = super::int::ord(self.prime, c as i128).unwrap() as i64;
            let v = match self.kind {
                ExtensionKind::Eisenstein => e * v + i as i64,
                _ => v,
            };
            best = Some(best.map_or(v, |b: i64| b.min(v)));
        }
        best.filter(|&v| v < cap)
    }

    pub(crate) fn rep_is_unit(&self, a: &[u64]) -> bool {
        match self.kind {
            ExtensionKind::Eisenstein => !a[0].is_multiple_of(self.prime),
            _ => a.iter().any(|&c| c % self.prime != 0),
        }
    }

    pub(crate) fn rep_pow(&self, a: &[u64], mut exp: u64) -> Vec<u64> {
        let mut acc = self.rep_from_i128(1);
        let mut base = a.to_vec();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.rep_mul(&acc, &base);
            }
            base = self.rep_mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse of a unit representative modulo `ell^M`.
    pub(crate) fn rep_inverse_unit(&self, u: &[u64]) -> Vec<u64> {
        debug_assert!(self.rep_is_unit(u));
        let one = self.rep_from_i128(1);
        let mut y = if self.degree() == 1 {
            let r = u[0] % self.prime;
            self.rep_from_i128(powmod(r, self.prime - 2, self.prime) as i128)
        } else {
            let q = self.residue_cardinality();
            self.rep_pow(u, q - 2)
        };
        let two = self.rep_from_i128(2);
        for _ in 0..128 {
            let uy = self.rep_mul(u, &y);
            if uy == one {
                return y;
            }
            y = self.rep_mul(&y, &self.rep_sub(&two, &uy));
        }
        unreachable!("Newton iteration for a unit inverse converges")
    }
}

impl fmt::Display for RingParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let poly: Vec<String> = self.poly.iter().map(|c| c.to_string()).collect();
        write!(
            f,
            "prime={}; kind={}; poly={}; precision={}",
            self.prime,
            self.kind.as_str(),
            poly.join(","),
            self.precision
        )
    }
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse::<T>().map_err(|_| Error::Parse(format!("bad number `{s}`")))
}

/// True when `a` and `b` describe the same ring (pointer or structural).
pub fn same_ring(a: &Arc<RingParams>, b: &Arc<RingParams>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Coefficients of `Phi_{ell^n}(1 + t)`, low degree first.
pub fn cyclotomic_shifted(ell: u64, n: u32) -> Result<Vec<i64>> {
    let step = checked_pow(ell, n - 1).ok_or_else(|| Error::InvalidParams("level too large".into()))?;
    let deg = (step * (ell - 1)) as usize;
    let mut coeffs = vec![BigUint::from(0u32); deg + 1];
    for j in 0..ell {
        let power = j * step;
        let row = super::int::binomial_row(power, power);
        for (k, c) in row.into_iter().enumerate() {
            coeffs[k] += c;
        }
    }
    coeffs
        .iter()
        .map(|c| {
            c.to_i64()
                .ok_or_else(|| Error::InvalidParams("cyclotomic coefficients overflow i64".into()))
        })
        .collect()
}

// ---- irreducibility over F_ell ----

fn fp_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = fp_trim(a.to_vec());
    let b = fp_trim(b.to_vec());
    let lead_inv = invmod(*b.last().unwrap(), p).unwrap();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = mulmod(*r.last().unwrap(), lead_inv, p);
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = super::int::submod(r[shift + i], mulmod(c, bc, p), p);
        }
        r = fp_trim(r);
    }
    r
}

fn fp_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = super::int::addmod(prod[i + j], mulmod(x, y, p), p);
        }
    }
    fp_rem(&prod, m, p)
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (fp_trim(a.to_vec()), fp_trim(b.to_vec()));
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^(p^k) mod m` over F_p.
fn fp_frobenius_power(m: &[u64], p: u64, k: u32) -> Vec<u64> {
    let mut x = fp_rem(&[0, 1], m, p);
    for _ in 0..k {
        // x <- x^p
        let mut acc = vec![1u64];
        let mut base = x.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_mulmod(&acc, &base, m, p);
            }
            base = fp_mulmod(&base, &base, m, p);
            e >>= 1;
        }
        x = acc;
    }
    x
}

/// Rabin's irreducibility test over F_p for a monic integer polynomial.
pub(crate) fn irreducible_mod_prime(poly: &[i64], p: u64) -> bool {
    let m: Vec<u64> = poly.iter().map(|&c| reduce_i128(c as i128, p)).collect();
    let n = (m.len() - 1) as u32;
    let x = fp_rem(&[0, 1], &m, p);
    if fp_frobenius_power(&m, p, n) != x {
        return false;
    }
    let mut prime_divisors = Vec::new();
    let mut k = n;
    let mut q = 2;
    while k > 1 {
        if k.is_multiple_of(q) {
            prime_divisors.push(q);
            while k.is_multiple_of(q) {
                k /= q;
            }
        }
        q += 1;
    }
    for r in prime_divisors {
        let h = fp_frobenius_power(&m, p, n / r);
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = super::int::submod(diff[1], 1, p);
        let g = fp_gcd(&m, &diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_round_trip() {
        let p = RingParams::cyclotomic(3, 2, 12).unwrap();
        let h = p.header();
        assert_eq!(h, "prime=3; kind=eisenstein; poly=3,9,18,21,15,6,1; precision=12");
        let q = RingParams::parse_header(&h).unwrap();
        assert_eq!(*p, *q);
        assert_eq!(q.cyclotomic_level(), Some(2));
        assert_eq!(q.e(), 6);
    }

    #[test]
    fn validation() {
        assert!(RingParams::unramified(5, vec![2, 0, 1], 4).is_ok()); // x^2 + 2 irreducible mod 5
        assert!(RingParams::unramified(5, vec![1, 0, 1], 4).is_err()); // x^2 + 1 = (x-2)(x+2)
        assert!(RingParams::eisenstein(2, vec![4, 0, 1], 4).is_err());
        assert!(RingParams::eisenstein(2, vec![2, 0, 1], 4).is_ok());
        assert!(RingParams::trivial(4, 4).is_err());
        assert!(RingParams::trivial(5, 40).is_err());
        assert!(RingParams::parse_header("prime=5; kind=trivial; poly=0,1; precision=3; extra=1").is_err());
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_shifted(2, 1).unwrap(), vec![2, 1]);
        assert_eq!(cyclotomic_shifted(2, 2).unwrap(), vec![2, 2, 1]);
        assert_eq!(cyclotomic_shifted(3, 1).unwrap(), vec![3, 3, 1]);
    }
}
