//! Truncated elements of the Tate algebra `O_E<T_1, ..., T_b>`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;

use super::monomial::Exponent;
use crate::error::{Error, Result};
use crate::padic::{same_ring, AbsValue, PadicScalar, RingParams};

/// A power series in `b` variables, truncated above total degree `D`.
///
/// Coefficients are stored sparsely: an absent exponent is a coefficient
/// indistinguishable from zero at full precision.
#[derive(Clone)]
pub struct TruncatedSeries {
    params: Arc<RingParams>,
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Exponent, PadicScalar>,
}

impl TruncatedSeries {
    pub fn zero(params: &Arc<RingParams>, nvars: usize, degree: u32) -> Self {
        TruncatedSeries { params: params.clone(), nvars, degree, terms: BTreeMap::new() }
    }

    pub fn constant(params: &Arc<RingParams>, nvars: usize, degree: u32, c: PadicScalar) -> Self {
        let mut s = Self::zero(params, nvars, degree);
        s.set(Exponent::zero(nvars), c);
        s
    }

    pub fn one(params: &Arc<RingParams>, nvars: usize, degree: u32) -> Self {
        Self::constant(params, nvars, degree, PadicScalar::one(params))
    }

    /// The variable `T_{i+1}`.
    pub fn variable(params: &Arc<RingParams>, nvars: usize, degree: u32, i: usize) -> Self {
        let mut s = Self::zero(params, nvars, degree);
        s.set(Exponent::unit(nvars, i), PadicScalar::one(params));
        s
    }

    pub fn from_terms<I>(params: &Arc<RingParams>, nvars: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, PadicScalar)>,
    {
        let mut s = Self::zero(params, nvars, degree);
        for (e, c) in terms {
            if e.nvars() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: e.nvars() });
            }
            if !same_ring(c.params(), params) {
                return Err(Error::ParamsMismatch);
            }
            let acc = s.coeff(&e).add(&c);
            s.set(e, acc);
        }
        Ok(s)
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_int_terms(params: &Arc<RingParams>, nvars: usize, degree: u32, terms: &[(&[u32], i64)]) -> Result<Self> {
        Self::from_terms(
            params,
            nvars,
            degree,
            terms.iter().map(|(e, c)| (Exponent(e.to_vec()), PadicScalar::from_int(params, *c as i128))),
        )
    }

    pub fn params(&self) -> &Arc<RingParams> {
        &self.params
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Stores `c` at `e`, dropping monomials beyond the truncation degree
    /// and zero coefficients at full precision.
    pub fn set(&mut self, e: Exponent, c: PadicScalar) {
        if e.degree() > self.degree {
            return;
        }
        if c.is_zero() && c.abs_precision() >= self.params.precision() as i64 {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, c);
        }
    }

    pub fn coeff(&self, e: &Exponent) -> PadicScalar {
        self.terms.get(e).cloned().unwrap_or_else(|| PadicScalar::zero(&self.params))
    }

    pub fn constant_term(&self) -> PadicScalar {
        self.coeff(&Exponent::zero(self.nvars))
    }

    /// Stored coefficients in ascending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &PadicScalar)> {
        self.terms.iter()
    }

    /// Exponents whose coefficient is distinguishable from zero.
    pub fn support(&self) -> Vec<Exponent> {
        self.terms.iter().filter(|(_, c)| !c.is_zero()).map(|(e, _)| e.clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    /// Smallest absolute precision among stored coefficients.
    pub fn min_precision(&self) -> i64 {
        self.terms
            .values()
            .map(|c| c.abs_precision())
            .min()
            .unwrap_or(self.params.precision() as i64)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if !same_ring(&self.params, &other.params) {
            return Err(Error::ParamsMismatch);
        }
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.truncate_degree(self.degree.min(other.degree));
        for (e, c) in &other.terms {
            let v = out.coeff(e).add(c);
            out.set(e.clone(), v);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, s: &PadicScalar) -> Self {
        let mut out = Self::zero(&self.params, self.nvars, self.degree);
        for (e, c) in &self.terms {
            out.set(e.clone(), c.mul(s));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let degree = self.degree.min(other.degree);
        let mut acc: BTreeMap<Exponent, PadicScalar> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.add(e2);
                if e.degree() > degree {
                    continue;
                }
                let p = c1.mul(c2);
                match acc.get_mut(&e) {
                    Some(v) => *v = v.add(&p),
                    None => {
                        acc.insert(e, p);
                    }
                }
            }
        }
        let mut out = Self::zero(&self.params, self.nvars, degree);
        for (e, c) in acc {
            out.set(e, c);
        }
        Ok(out)
    }

    pub fn pow(&self, mut exp: u32) -> Result<Self> {
        let mut acc = Self::one(&self.params, self.nvars, self.degree);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Drops all monomials above `degree`.
    pub fn truncate_degree(&self, degree: u32) -> Self {
        let mut out = Self::zero(&self.params, self.nvars, degree);
        for (e, c) in &self.terms {
            out.set(e.clone(), c.clone());
        }
        out
    }

    /// Homogeneous component of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        let mut out = Self::zero(&self.params, self.nvars, self.degree);
        for (e, c) in self.terms.iter().filter(|(e, _)| e.degree() == d) {
            out.set(e.clone(), c.clone());
        }
        out
    }

    /// Gauss norm `max_n |g_n| rho^{|n|}` with `rho = |ell|^r` when `r` is
    /// given (the unit polydisc otherwise).
    pub fn gauss_norm(&self, radius_exponent: Option<Ratio<i64>>) -> AbsValue {
        let r = radius_exponent.unwrap_or_else(|| Ratio::from_integer(0));
        self.terms
            .iter()
            .map(|(e, c)| match c.abs() {
                AbsValue::Zero => AbsValue::Zero,
                AbsValue::Pow(q) => AbsValue::Pow(q + r * e.degree() as i64),
            })
            .max()
            .unwrap_or(AbsValue::Zero)
    }

    /// Composition `g(h_1, ..., h_b)`.  The images must have zero constant
    /// term for the truncation to stay meaningful.
    pub fn substitute(&self, images: &[TruncatedSeries]) -> Result<Self> {
        if images.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: images.len() });
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        let (nv, deg) = (first.nvars, images.iter().map(|h| h.degree).min().unwrap_or(self.degree).min(self.degree));
        for h in images {
            if !same_ring(&h.params, &self.params) {
                return Err(Error::ParamsMismatch);
            }
            if h.nvars != nv {
                return Err(Error::DimensionMismatch { expected: nv, found: h.nvars });
            }
            if !h.constant_term().is_zero() {
                return Err(Error::HypothesisViolated("substituted series must vanish at the origin".into()));
            }
        }
        let images: Vec<Self> = images.iter().map(|h| h.truncate_degree(deg)).collect();
        let mut powers: Vec<Vec<Self>> = Vec::with_capacity(self.nvars);
        for h in &images {
            let mut row = vec![Self::one(&self.params, nv, deg)];
            for k in 1..=deg {
                let next = row[k as usize - 1].mul(h)?;
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = Self::zero(&self.params, nv, deg);
        for (e, c) in &self.terms {
            if e.degree() > deg {
                continue;
            }
            let mut mono = Self::constant(&self.params, nv, deg, c.clone());
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    mono = mono.mul(&powers[i][k as usize])?;
                }
            }
            out = out.add(&mono)?;
        }
        Ok(out)
    }

    /// Evaluates at a point of the closed unit polydisc of `E'`, where the
    /// coefficients embed into `E'`.
    pub fn evaluate(&self, point: &[PadicScalar]) -> Result<PadicScalar> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: point.len() });
        }
        let target = match point.first() {
            Some(x) => x.params().clone(),
            None => self.params.clone(),
        };
        let mut acc = PadicScalar::zero(&target);
        for (e, c) in &self.terms {
            let mut t = c.coerce_into(&target)?;
            for (x, &k) in point.iter().zip(&e.0) {
                t = t.mul(&x.pow(k as u64));
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Coefficientwise equality up to the stated precisions.
    pub fn eq_within_precision(&self, other: &Self) -> bool {
        match self.sub(other) {
            Ok(d) => d.is_zero(),
            Err(_) => false,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("missing ring header".into()))?;
        let params = RingParams::parse_header(header)?;
        let shape = lines.next().ok_or_else(|| Error::Parse("missing `vars=..; degree=..` line".into()))?;
        let (mut nvars, mut degree) = (None, None);
        for part in shape.split(';') {
            let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse(format!("bad field `{part}`")))?;
            let v = v.trim();
            match k.trim() {
                "vars" => nvars = v.parse::<usize>().ok(),
                "degree" => degree = v.parse::<u32>().ok(),
                other => return Err(Error::Parse(format!("unknown field `{other}`"))),
            }
        }
        let (nvars, degree) = nvars.zip(degree).ok_or_else(|| Error::Parse("vars and degree are required".into()))?;
        let mut out = Self::zero(&params, nvars, degree);
        for line in lines {
            let (e, c) = line.split_once(':').ok_or_else(|| Error::Parse(format!("expected `exponent : scalar`, got `{line}`")))?;
            let e = Exponent::parse(e)?;
            if e.nvars() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: e.nvars() });
            }
            if e.degree() > degree {
                return Err(Error::Parse(format!("monomial {e} exceeds truncation degree {degree}")));
            }
            let c = PadicScalar::parse_or_int(&params, c.trim())?;
            out.set(e, c);
        }
        Ok(out)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.params.header())?;
        write!(f, "vars={}; degree={}", self.nvars, self.degree)?;
        for (e, c) in &self.terms {
            write!(f, "\n{e} : {c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q5() -> Arc<RingParams> {
        RingParams::trivial(5, 10).unwrap()
    }

    #[test]
    fn product_truncates() {
        let p = q5();
        let a = TruncatedSeries::from_int_terms(&p, 1, 3, &[(&[0], 1), (&[1], 1)]).unwrap();
        let cube = a.pow(3).unwrap();
        let b = a.pow(5).unwrap();
        assert_eq!(cube.coeff(&Exponent(vec![3])), PadicScalar::from_int(&p, 1));
        assert_eq!(b.coeff(&Exponent(vec![2])), PadicScalar::from_int(&p, 10));
        assert!(b.coeff(&Exponent(vec![4])).is_zero());
    }

    #[test]
    fn gauss_norm_reads_smallest_valuation() {
        let p = q5();
        let g = TruncatedSeries::from_int_terms(&p, 2, 4, &[(&[1, 0], 25), (&[0, 2], 5)]).unwrap();
        assert_eq!(g.gauss_norm(None), AbsValue::Pow(Ratio::from_integer(1)));
        // rho = |5|^{1}: 25 T1 -> |5|^3, 5 T2^2 -> |5|^3
        assert_eq!(g.gauss_norm(Some(Ratio::from_integer(1))), AbsValue::Pow(Ratio::from_integer(3)));
        assert_eq!(TruncatedSeries::zero(&p, 2, 4).gauss_norm(None), AbsValue::Zero);
    }

    #[test]
    fn substitution_composes() {
        let p = q5();
        let g = TruncatedSeries::from_int_terms(&p, 1, 4, &[(&[0], 1), (&[2], 3)]).unwrap();
        let h = TruncatedSeries::from_int_terms(&p, 1, 4, &[(&[1], 2), (&[2], 1)]).unwrap();
        let got = g.substitute(&[h]).unwrap();
        // 1 + 3(2T + T^2)^2 = 1 + 12 T^2 + 12 T^3 + 3 T^4
        let want = TruncatedSeries::from_int_terms(&p, 1, 4, &[(&[0], 1), (&[2], 12), (&[3], 12), (&[4], 3)]).unwrap();
        assert!(got.eq_within_precision(&want));
    }

    #[test]
    fn text_round_trip() {
        let p = q5();
        let g = TruncatedSeries::from_int_terms(&p, 2, 3, &[(&[0, 0], 1), (&[2, 1], -7), (&[0, 1], 5)]).unwrap();
        let text = g.to_string();
        let back = TruncatedSeries::parse(&text).unwrap();
        assert_eq!(back.to_string(), text);
        assert!(back.eq_within_precision(&g));
    }

    #[test]
    fn evaluation_into_extension() {
        let p = RingParams::trivial(3, 8).unwrap();
        let q = RingParams::cyclotomic(3, 1, 8).unwrap();
        let g = TruncatedSeries::from_int_terms(&p, 1, 3, &[(&[0], 1), (&[1], 1)]).unwrap();
        let zeta_minus_one = PadicScalar::generator(&q);
        // g(zeta - 1) = zeta, and zeta^3 = 1
        let z = g.evaluate(&[zeta_minus_one]).unwrap();
        assert!(z.pow(3).eq_within_precision(&PadicScalar::one(&q)));
        assert!(!z.eq_within_precision(&PadicScalar::one(&q)));
    }
}
