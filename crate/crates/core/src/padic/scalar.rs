//! Elements of `E` carried to a finite absolute precision.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;

use super::params::{same_ring, ExtensionKind, RingParams};
use crate::error::{Error, Result};
use crate::stats;

/// Valuation normalized by `v(ell) = 1`, or the `+inf` marker for elements
/// indistinguishable from zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(Ratio<i64>),
    Infinite,
}

impl Valuation {
    pub fn finite(&self) -> Option<Ratio<i64>> {
        match self {
            Valuation::Finite(r) => Some(*r),
            Valuation::Infinite => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(r) => write!(f, "{r}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// An absolute value `|x| = ell^{-q}` kept as its exponent `q`; `Zero` is
/// the absolute value of a zero-flagged element.  Ordered as real numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AbsValue {
    Zero,
    /// `ell^{-q}`.
    Pow(Ratio<i64>),
}

impl AbsValue {
    pub fn one() -> Self {
        AbsValue::Pow(Ratio::from_integer(0))
    }

    pub fn from_valuation(v: Valuation) -> Self {
        match v {
            Valuation::Finite(q) => AbsValue::Pow(q),
            Valuation::Infinite => AbsValue::Zero,
        }
    }

    /// Multiply by `ell^{-q}`.
    pub fn scale(self, q: Ratio<i64>) -> Self {
        match self {
            AbsValue::Zero => AbsValue::Zero,
            AbsValue::Pow(p) => AbsValue::Pow(p + q),
        }
    }
}

impl PartialOrd for AbsValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AbsValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (AbsValue::Zero, AbsValue::Zero) => Ordering::Equal,
            (AbsValue::Zero, _) => Ordering::Less,
            (_, AbsValue::Zero) => Ordering::Greater,
            (AbsValue::Pow(a), AbsValue::Pow(b)) => b.cmp(a),
        }
    }
}

impl fmt::Display for AbsValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbsValue::Zero => write!(f, "0"),
            AbsValue::Pow(q) if *q.numer() == 0 => write!(f, "1"),
            AbsValue::Pow(q) => write!(f, "ell^({})", -q),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    /// Indistinguishable from zero modulo `lambda^prec`.
    Zero { prec: i64 },
    /// `lambda^val * unit`, with `unit` certified modulo `lambda^rel`.
    Nonzero { val: i64, unit: Vec<u64>, rel: i64 },
}

/// An element of `E` known to an absolute precision counted in uniformizer
/// digits.  Valuations are integers in units of `v(lambda)`; the public
/// [`PadicScalar::valuation`] reports them normalized so that `v(ell) = 1`.
#[derive(Clone)]
pub struct PadicScalar {
    params: Arc<RingParams>,
    repr: Repr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl PadicScalar {
    pub fn zero(params: &Arc<RingParams>) -> Self {
        Self::zero_with_precision(params, params.precision() as i64)
    }

    pub fn zero_with_precision(params: &Arc<RingParams>, prec: i64) -> Self {
        PadicScalar { params: params.clone(), repr: Repr::Zero { prec } }
    }

    pub fn one(params: &Arc<RingParams>) -> Self {
        Self::from_int(params, 1)
    }

    pub fn from_int(params: &Arc<RingParams>, n: i128) -> Self {
        let rep = params.rep_from_i128(n);
        Self::from_rep_at(params, rep, params.precision() as i64)
    }

    /// `sum coeffs[i] theta^i` at full precision.
    pub fn from_poly(params: &Arc<RingParams>, coeffs: &[i64]) -> Self {
        let mut rep = params.rep_zero();
        for (i, &c) in coeffs.iter().enumerate() {
            let mut term = params.rep_from_i128(c as i128);
            for _ in 0..i {
                term = theta_times(params, &term);
            }
            rep = params.rep_add(&rep, &term);
        }
        Self::from_rep_at(params, rep, params.precision() as i64)
    }

    /// `a / b` for integers with `b` nonzero.
    pub fn from_ratio(params: &Arc<RingParams>, a: i128, b: i128) -> Result<Self> {
        Self::from_int(params, a).checked_div(&Self::from_int(params, b))
    }

    /// The generator `theta` of the defining polynomial.
    pub fn generator(params: &Arc<RingParams>) -> Self {
        if params.degree() == 1 {
            // root of the monic linear polynomial t + c
            return Self::from_int(params, -(params.poly()[0] as i128));
        }
        Self::from_poly(params, &[0, 1])
    }

    /// The uniformizer `lambda`.
    pub fn uniformizer(params: &Arc<RingParams>) -> Self {
        match params.kind() {
            ExtensionKind::Eisenstein => Self::generator(params),
            _ => Self::from_int(params, params.prime() as i128),
        }
    }

    /// Builds an element from a stored representative known modulo
    /// `lambda^prec`.
    pub(crate) fn from_rep_at(params: &Arc<RingParams>, rep: Vec<u64>, prec: i64) -> Self {
        match params.rep_valuation(&rep, prec) {
            None => Self::zero_with_precision(params, prec),
            Some(v) => {
                let unit = params.rep_div_uniformizer_pow(&rep, v as u32);
                PadicScalar {
                    params: params.clone(),
                    repr: Repr::Nonzero { val: v, unit, rel: prec - v },
                }
            }
        }
    }

    fn nonzero(params: &Arc<RingParams>, val: i64, unit: Vec<u64>, rel: i64) -> Self {
        PadicScalar { params: params.clone(), repr: Repr::Nonzero { val, unit, rel } }
    }

    pub fn params(&self) -> &Arc<RingParams> {
        &self.params
    }

    /// Zero-flag: true when indistinguishable from 0 at the carried precision.
    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    /// Valuation in uniformizer digits (`v(lambda) = 1`).
    pub fn digit_valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Nonzero { val, .. } => Some(*val),
        }
    }

    /// Valuation normalized by `v(ell) = 1`.
    pub fn valuation(&self) -> Valuation {
        match &self.repr {
            Repr::Zero { .. } => Valuation::Infinite,
            Repr::Nonzero { val, .. } => Valuation::Finite(Ratio::new(*val, self.params.e() as i64)),
        }
    }

    pub fn abs(&self) -> AbsValue {
        AbsValue::from_valuation(self.valuation())
    }

    /// Absolute precision in uniformizer digits.
    pub fn abs_precision(&self) -> i64 {
        match &self.repr {
            Repr::Zero { prec } => *prec,
            Repr::Nonzero { val, rel, .. } => val + rel,
        }
    }

    /// Number of certified unit digits (0 for zero-flagged elements).
    pub fn rel_precision(&self) -> i64 {
        match &self.repr {
            Repr::Zero { .. } => 0,
            Repr::Nonzero { rel, .. } => *rel,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.digit_valuation() == Some(0)
    }

    /// Caps the absolute precision at `prec`.
    pub fn truncate_precision(&self, prec: i64) -> Self {
        match &self.repr {
            Repr::Zero { prec: p } => Self::zero_with_precision(&self.params, (*p).min(prec)),
            Repr::Nonzero { val, unit, rel } => {
                if *val >= prec {
                    Self::zero_with_precision(&self.params, prec)
                } else {
                    Self::nonzero(&self.params, *val, unit.clone(), (*rel).min(prec - val))
                }
            }
        }
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if same_ring(&self.params, &other.params) {
            Ok(())
        } else {
            Err(Error::ParamsMismatch)
        }
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        stats::bump();
        let p = &self.params;
        let other_rep = |unit: &Vec<u64>| if negate { p.rep_neg(unit) } else { unit.clone() };
        match (&self.repr, &other.repr) {
            (Repr::Zero { prec: a }, Repr::Zero { prec: b }) => Self::zero_with_precision(p, (*a).min(*b)),
            (Repr::Zero { prec: a }, Repr::Nonzero { val, unit, rel }) => {
                Self::shift_into(p, *val, other_rep(unit), *rel, *a)
            }
            (Repr::Nonzero { val, unit, rel }, Repr::Zero { prec: b }) => {
                Self::shift_into(p, *val, unit.clone(), *rel, *b)
            }
            (
                Repr::Nonzero { val: v1, unit: u1, rel: r1 },
                Repr::Nonzero { val: v2, unit: u2, rel: r2 },
            ) => {
                let prec = (v1 + r1).min(v2 + r2);
                let v = (*v1).min(*v2);
                let window = prec - v;
                let term = |val: i64, unit: Vec<u64>| -> Option<Vec<u64>> {
                    let shift = val - v;
                    (shift < window).then(|| p.rep_mul_uniformizer_pow(&unit, shift as u32))
                };
                let a = term(*v1, u1.clone());
                let b = term(*v2, other_rep(u2));
                let t = match (a, b) {
                    (Some(a), Some(b)) => p.rep_add(&a, &b),
                    (Some(a), None) => a,
                    (None, Some(b)) => b,
                    (None, None) => return Self::zero_with_precision(p, prec),
                };
                Self::from_rep_at(p, t, window).shift_valuation(v)
            }
        }
    }

    /// `lambda^val * unit` (rel digits) restricted to absolute precision `cap`.
    fn shift_into(p: &Arc<RingParams>, val: i64, unit: Vec<u64>, rel: i64, cap: i64) -> Self {
        if val >= cap {
            Self::zero_with_precision(p, cap)
        } else {
            Self::nonzero(p, val, unit, rel.min(cap - val))
        }
    }

    /// Multiplies by `lambda^k` for any integer `k`.
    pub fn shift_valuation(self, k: i64) -> Self {
        let params = self.params;
        let repr = match self.repr {
            Repr::Zero { prec } => Repr::Zero { prec: prec + k },
            Repr::Nonzero { val, unit, rel } => Repr::Nonzero { val: val + k, unit, rel },
        };
        PadicScalar { params, repr }
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Nonzero { val, unit, rel } => Self::nonzero(&self.params, *val, self.params.rep_neg(unit), *rel),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert!(self.check_ring(other).is_ok());
        self.add_impl(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert!(self.check_ring(other).is_ok());
        self.add_impl(other, true)
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert!(self.check_ring(other).is_ok());
        stats::bump();
        let p = &self.params;
        match (&self.repr, &other.repr) {
            (Repr::Zero { prec: a }, Repr::Zero { prec: b }) => Self::zero_with_precision(p, a + b),
            (Repr::Zero { prec }, Repr::Nonzero { val, .. }) | (Repr::Nonzero { val, .. }, Repr::Zero { prec }) => {
                Self::zero_with_precision(p, prec + val)
            }
            (
                Repr::Nonzero { val: v1, unit: u1, rel: r1 },
                Repr::Nonzero { val: v2, unit: u2, rel: r2 },
            ) => Self::nonzero(p, v1 + v2, p.rep_mul(u1, u2), (*r1).min(*r2)),
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        stats::bump();
        let p = &self.params;
        let q = match (&self.repr, &other.repr) {
            (_, Repr::Zero { .. }) => return Err(Error::DivisionByZero),
            (Repr::Zero { prec }, Repr::Nonzero { val, .. }) => Self::zero_with_precision(p, prec - val),
            (
                Repr::Nonzero { val: v1, unit: u1, rel: r1 },
                Repr::Nonzero { val: v2, unit: u2, rel: r2 },
            ) => Self::nonzero(p, v1 - v2, p.rep_mul(u1, &p.rep_inverse_unit(u2)), (*r1).min(*r2)),
        };
        q.certified()
    }

    /// Fails with `PrecisionExhausted` when no digit of the result is certified.
    fn certified(self) -> Result<Self> {
        match self.repr {
            Repr::Zero { prec } if prec <= 0 => Err(Error::PrecisionExhausted),
            _ => Ok(self),
        }
    }

    /// Field arithmetic with the documented error contract.
    pub fn arith(&self, other: &Self, op: ArithOp) -> Result<Self> {
        self.check_ring(other)?;
        let r = match op {
            ArithOp::Add => self.add(other),
            ArithOp::Sub => self.sub(other),
            ArithOp::Mul => self.mul(other),
            ArithOp::Div => return self.checked_div(other),
        };
        r.certified()
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut acc = Self::one(&self.params);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Integer powers; negative exponents invert.
    pub fn pow_i64(&self, exp: i64) -> Result<Self> {
        if exp >= 0 {
            Ok(self.pow(exp as u64))
        } else {
            Self::one(&self.params).checked_div(&self.pow(exp.unsigned_abs()))
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::one(&self.params).checked_div(self)
    }

    /// True when `self - other` is zero-flagged.
    pub fn eq_within_precision(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Stored representative of `x` as polynomial coefficients in `theta`
    /// modulo `ell^k`.  Requires `v(x) >= 0` and enough certified digits.
    pub fn representative_mod(&self, k: u32) -> Result<Vec<u64>> {
        let p = &self.params;
        let needed = (k * p.e()) as i64;
        if self.abs_precision() < needed {
            return Err(Error::PrecisionExhausted);
        }
        let m = super::int::checked_pow(p.prime(), k).ok_or_else(|| Error::OutOfRange("modulus".into()))?;
        match &self.repr {
            Repr::Zero { .. } => Ok(vec![0; p.degree()]),
            Repr::Nonzero { val, unit, .. } => {
                if *val < 0 {
                    return Err(Error::OutOfRange("element is not integral".into()));
                }
                let rep = p.rep_mul_uniformizer_pow(unit, *val as u32);
                Ok(rep.iter().map(|&c| c % m).collect())
            }
        }
    }

    /// For `Q_ell` elements: the integer `ell^v * u` with `u` the balanced
    /// representative of the certified unit digits.
    pub fn balanced_integer(&self) -> Option<i128> {
        if self.params.degree() != 1 {
            return None;
        }
        match &self.repr {
            Repr::Zero { .. } => Some(0),
            Repr::Nonzero { val, unit, rel } => {
                if *val < 0 {
                    return None;
                }
                let m = super::int::checked_pow(self.params.prime(), (*rel).max(0) as u32)? as i128;
                let mut u = unit[0] as i128 % m;
                if u > m / 2 {
                    u -= m;
                }
                let scale = super::int::checked_pow(self.params.prime(), *val as u32)? as i128;
                u.checked_mul(scale)
            }
        }
    }

    /// Residue class of a unit modulo `lambda` as coefficients in `theta`
    /// (length `f`); `None` for non-units.
    pub fn residue(&self) -> Option<Vec<u64>> {
        match &self.repr {
            Repr::Nonzero { val: 0, unit, .. } => Some(residue_digit(&self.params, unit)),
            _ => None,
        }
    }

    /// Canonical `lambda`-adic digits of the unit part (least significant
    /// first); each digit is a residue-field element given by `f` coordinates.
    pub fn unit_digits(&self) -> Vec<Vec<u64>> {
        let p = &self.params;
        match &self.repr {
            Repr::Zero { .. } => Vec::new(),
            Repr::Nonzero { unit, rel, .. } => {
                let mut u = unit.clone();
                let mut digits = Vec::with_capacity(*rel as usize);
                for _ in 0..*rel {
                    let d = residue_digit(p, &u);
                    let drep = digit_rep(p, &d);
                    u = p.rep_sub(&u, &drep);
                    u = p.rep_div_uniformizer_pow(&u, 1);
                    digits.push(d);
                }
                digits
            }
        }
    }

    /// Inverse of [`PadicScalar::unit_digits`].
    pub fn from_digits(params: &Arc<RingParams>, val: i64, digits: &[Vec<u64>]) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::Parse("a nonzero scalar needs at least one digit".into()));
        }
        let f = params.f() as usize;
        let mut u = params.rep_zero();
        for d in digits.iter().rev() {
            if d.len() != f || d.iter().any(|&c| c >= params.prime()) {
                return Err(Error::Parse("digit out of range".into()));
            }
            u = params.rep_mul_uniformizer(&u);
            u = params.rep_add(&u, &digit_rep(params, d));
        }
        if !params.rep_is_unit(&u) {
            return Err(Error::Parse("leading digit must be nonzero".into()));
        }
        Ok(Self::nonzero(params, val, u, digits.len() as i64))
    }

    /// Parses the `(v; d0 d1 ...)` / `(inf; prec=A)` form.
    pub fn parse(params: &Arc<RingParams>, s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("scalar must be parenthesized: `{s}`")))?;
        let (v, rest) = inner
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("scalar needs `;`: `{s}`")))?;
        let v = v.trim();
        let rest = rest.trim();
        if v == "inf" {
            let prec = rest
                .strip_prefix("prec=")
                .and_then(|t| t.trim().parse::<i64>().ok())
                .ok_or_else(|| Error::Parse(format!("bad zero precision `{rest}`")))?;
            return Ok(Self::zero_with_precision(params, prec));
        }
        let val = parse_valuation(v, params.e())?;
        let f = params.f() as usize;
        let digits = rest
            .split_whitespace()
            .map(|tok| {
                let parts: Vec<u64> = tok
                    .split(':')
                    .map(|c| c.parse::<u64>().map_err(|_| Error::Parse(format!("bad digit `{tok}`"))))
                    .collect::<Result<_>>()?;
                if parts.len() != f {
                    return Err(Error::Parse(format!("digit `{tok}` needs {f} coordinates")));
                }
                Ok(parts)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_digits(params, val, &digits)
    }

    /// Parses either the canonical scalar form or a plain integer literal.
    pub fn parse_or_int(params: &Arc<RingParams>, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('(') {
            Self::parse(params, s)
        } else {
            s.parse::<i128>()
                .map(|n| Self::from_int(params, n))
                .map_err(|_| Error::Parse(format!("bad scalar `{s}`")))
        }
    }
}

fn parse_valuation(v: &str, e: u32) -> Result<i64> {
    let bad = || Error::Parse(format!("bad valuation `{v}`"));
    let (num, den) = match v.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i64>().map_err(|_| bad())?, d.trim().parse::<i64>().map_err(|_| bad())?),
        None => (v.parse::<i64>().map_err(|_| bad())?, 1),
    };
    if den <= 0 || (num * e as i64) % den != 0 {
        return Err(bad());
    }
    Ok(num * e as i64 / den)
}

fn theta_times(p: &RingParams, a: &[u64]) -> Vec<u64> {
    let d = p.degree();
    if d == 1 {
        return vec![0];
    }
    let mut t = vec![0i64; d];
    t[1] = 1;
    let theta: Vec<u64> = t.iter().map(|&c| c as u64).collect();
    p.rep_mul(a, &theta)
}

fn residue_digit(p: &RingParams, unit: &[u64]) -> Vec<u64> {
    match p.kind() {
        ExtensionKind::Eisenstein => vec![unit[0] % p.prime()],
        _ => unit.iter().map(|&c| c % p.prime()).collect(),
    }
}

fn digit_rep(p: &RingParams, d: &[u64]) -> Vec<u64> {
    let mut r = p.rep_zero();
    match p.kind() {
        ExtensionKind::Eisenstein => r[0] = d[0],
        _ => r[..d.len()].copy_from_slice(d),
    }
    r
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero { prec } => write!(f, "(inf; prec={prec})"),
            Repr::Nonzero { .. } => {
                let digits: Vec<String> = self
                    .unit_digits()
                    .iter()
                    .map(|d| d.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(":"))
                    .collect();
                write!(f, "({}; {})", self.valuation(), digits.join(" "))
            }
        }
    }
}

impl fmt::Debug for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl PartialEq for PadicScalar {
    /// Structural equality: same ring, same precision, same certified digits.
    fn eq(&self, other: &Self) -> bool {
        if !same_ring(&self.params, &other.params) {
            return false;
        }
        match (&self.repr, &other.repr) {
            (Repr::Zero { prec: a }, Repr::Zero { prec: b }) => a == b,
            (Repr::Nonzero { val: v1, rel: r1, .. }, Repr::Nonzero { val: v2, rel: r2, .. }) => {
                v1 == v2 && r1 == r2 && self.unit_digits() == other.unit_digits()
            }
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q5(n: u32) -> Arc<RingParams> {
        RingParams::trivial(5, n).unwrap()
    }

    #[test]
    fn product_of_fives() {
        let p = q5(6);
        let five = PadicScalar::from_int(&p, 5);
        let x = five.arith(&five, ArithOp::Mul).unwrap();
        assert_eq!(x.valuation(), Valuation::Finite(Ratio::from_integer(2)));
        assert_eq!(x.unit_digits()[0], vec![1]);
    }

    #[test]
    fn geometric_inverse() {
        let p = q5(3);
        let one = PadicScalar::one(&p);
        let d = PadicScalar::from_int(&p, 1 - 5);
        let q = one.arith(&d, ArithOp::Div).unwrap();
        assert_eq!(q.representative_mod(3).unwrap(), vec![31]);
        assert!(q.mul(&d).eq_within_precision(&one));
    }

    #[test]
    fn additive_inverse_is_zero_flagged() {
        let p = q5(4);
        let x = PadicScalar::from_int(&p, 123);
        let z = x.add(&x.neg());
        assert!(z.is_zero());
        assert_eq!(z.valuation(), Valuation::Infinite);
    }

    #[test]
    fn division_errors() {
        let p = q5(3);
        let one = PadicScalar::one(&p);
        assert_eq!(one.arith(&PadicScalar::zero(&p), ArithOp::Div), Err(Error::DivisionByZero));
        let z = PadicScalar::zero_with_precision(&p, 1);
        let big = PadicScalar::from_int(&p, 25);
        assert_eq!(z.checked_div(&big).unwrap_err(), Error::PrecisionExhausted);
    }

    #[test]
    fn valuations() {
        let p = q5(4);
        assert_eq!(PadicScalar::from_int(&p, 5).valuation(), Valuation::Finite(Ratio::from_integer(1)));
        assert_eq!(PadicScalar::one(&p).valuation(), Valuation::Finite(Ratio::from_integer(0)));
        let e = RingParams::eisenstein(3, vec![3, 0, 1], 8).unwrap();
        let lambda = PadicScalar::uniformizer(&e);
        assert_eq!(lambda.valuation(), Valuation::Finite(Ratio::new(1, 2)));
        // lambda^2 = -3
        let sq = lambda.mul(&lambda);
        assert!(sq.eq_within_precision(&PadicScalar::from_int(&e, -3)));
    }

    #[test]
    fn division_by_uniformizer_in_eisenstein() {
        let e = RingParams::cyclotomic(3, 2, 20).unwrap();
        let lambda = PadicScalar::uniformizer(&e);
        let x = PadicScalar::from_poly(&e, &[7, 2, 0, 5, 1, 1]);
        let y = x.mul(&lambda.pow(5));
        let back = y.checked_div(&lambda.pow(5)).unwrap();
        assert!(back.eq_within_precision(&x));
        assert_eq!(back.abs_precision(), 19);
    }

    #[test]
    fn display_round_trip() {
        let e = RingParams::cyclotomic(2, 2, 9).unwrap();
        let x = PadicScalar::from_poly(&e, &[6, 3]).checked_div(&PadicScalar::uniformizer(&e)).unwrap();
        let s = x.to_string();
        let y = PadicScalar::parse(&e, &s).unwrap();
        assert_eq!(x, y);
        assert_eq!(y.to_string(), s);
        let u = RingParams::unramified(3, vec![1, 0, 1], 5).unwrap();
        let z = PadicScalar::from_poly(&u, &[4, 7]);
        assert_eq!(PadicScalar::parse(&u, &z.to_string()).unwrap(), z);
        let zero = PadicScalar::zero_with_precision(&u, 3);
        assert_eq!(zero.to_string(), "(inf; prec=3)");
        assert_eq!(PadicScalar::parse(&u, "(inf; prec=3)").unwrap(), zero);
    }

    #[test]
    fn ultrametric_equality_case() {
        let p = q5(6);
        let a = PadicScalar::from_int(&p, 5);
        let b = PadicScalar::from_int(&p, 3);
        assert_eq!(a.add(&b).abs(), a.abs().max(b.abs()));
    }
}

impl PadicScalar {
    /// Image of `self` under `Q_ell -> E` (or the identity when the rings
    /// agree).  Only embeddings out of the trivial extension are supported.
    pub fn coerce_into(&self, target: &Arc<RingParams>) -> Result<Self> {
        if same_ring(&self.params, target) {
            return Ok(self.clone());
        }
        if self.params.degree() != 1 || self.params.prime() != target.prime() {
            return Err(Error::FieldMismatch);
        }
        let e = target.e() as i64;
        match &self.repr {
            Repr::Zero { prec } => Ok(Self::zero_with_precision(target, (prec * e).min(target.precision() as i64))),
            Repr::Nonzero { val, unit, rel } => {
                let u = Self::from_int(target, unit[0] as i128).truncate_precision(rel * e);
                let n = target.precision() as i64;
                let ell = Self::from_rep_at(target, target.rep_from_i128(target.prime() as i128), n + e);
                let scaled = u.mul(&ell.pow_i64(*val)?);
                Ok(scaled.truncate_precision((val + rel) * e))
            }
        }
    }
}

impl PadicScalar {
    /// Smallest-height rational `a/b` congruent to an element of `Q_ell`
    /// modulo its certified digits, with `|a|, |b| <= sqrt(ell^rel / 2)`.
    /// Zero-flagged elements lift to `0`.
    pub fn rational_lift(&self) -> Option<num_rational::BigRational> {
        use num_bigint::BigInt;
        use num_integer::Integer;
        use num_traits::{One, Signed, Zero};
        if self.params.degree() != 1 {
            return None;
        }
        let (val, unit, rel) = match &self.repr {
            Repr::Zero { .. } => return Some(num_rational::BigRational::zero()),
            Repr::Nonzero { val, unit, rel } => (*val, unit[0], *rel),
        };
        let m = super::int::checked_pow(self.params.prime(), rel.max(0) as u32)?;
        let bound = BigInt::from(((m / 2) as f64).sqrt().floor() as u64);
        let (mut r0, mut r1) = (BigInt::from(m), BigInt::from(unit % m));
        let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
        while r1 > bound {
            let q = &r0 / &r1;
            let r2 = &r0 - &q * &r1;
            let t2 = &t0 - &q * &t1;
            r0 = std::mem::replace(&mut r1, r2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if t1.is_zero() || t1.abs() > bound || !t1.gcd(&BigInt::from(m)).is_one() {
            return None;
        }
        let ell = BigInt::from(self.params.prime());
        let q = num_rational::BigRational::new(r1, t1);
        let scale = num_rational::BigRational::from_integer(num_traits::pow(ell, val.unsigned_abs() as usize));
        Some(if val >= 0 { q * scale } else { q / scale })
    }
}

#[cfg(test)]
mod lift_tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn rational_lift_recovers_small_fractions() {
        let p = RingParams::trivial(5, 12).unwrap();
        let x = PadicScalar::from_ratio(&p, -36, 7).unwrap();
        assert_eq!(x.rational_lift(), Some(BigRational::new((-36).into(), 7.into())));
        let y = PadicScalar::from_ratio(&p, 3, 25).unwrap();
        assert_eq!(y.rational_lift(), Some(BigRational::new(3.into(), 25.into())));
        assert_eq!(PadicScalar::from_int(&p, 250).rational_lift(), Some(BigRational::from_integer(250.into())));
    }
}

impl PadicScalar {
    /// A nonnegative big integer, reduced modulo the storage modulus.
    pub fn from_biguint(params: &Arc<RingParams>, x: &num_bigint::BigUint) -> Self {
        Self::from_int(params, super::int::biguint_mod(x, params.modulus()) as i128)
    }
}

impl PadicScalar {
    /// A nonnegative big integer with its full valuation retained: the
    /// result carries relative precision `N` rather than absolute `N`.
    pub fn from_biguint_exact(params: &Arc<RingParams>, x: &num_bigint::BigUint) -> Self {
        use num_traits::Zero;
        if x.is_zero() {
            return Self::zero(params);
        }
        let ell = num_bigint::BigUint::from(params.prime());
        let mut k = 0i64;
        let mut u = x.clone();
        while (&u % &ell).is_zero() {
            u /= &ell;
            k += 1;
        }
        let n = params.precision() as i64;
        let e = params.e() as i64;
        let unit = Self::from_biguint(params, &u);
        let ell_s = Self::from_rep_at(params, params.rep_from_i128(params.prime() as i128), n + e);
        unit.mul(&ell_s.pow(k as u64))
    }
}
