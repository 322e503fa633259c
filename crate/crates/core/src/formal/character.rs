use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::padic::{same_ring, PadicScalar, RingParams};

/// Exponent data of a torsion character: `chi(e_i) = zeta_{ell^level}^{k_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorsionId {
    pub level: u32,
    pub exps: Vec<u64>,
}

impl TorsionId {
    pub fn new(ell: u64, level: u32, exps: Vec<u64>) -> Result<Self> {
        let m = modulus(ell, level)?;
        Ok(TorsionId { level, exps: exps.into_iter().map(|k| k % m).collect() })
    }

    /// Exponents rescaled to level `l >= self.level`.
    pub fn at_level(&self, ell: u64, l: u32) -> Result<Vec<u64>> {
        if l < self.level {
            return Err(Error::InvalidParams(format!("cannot lower level {} to {l}", self.level)));
        }
        let f = modulus(ell, l - self.level)?;
        Ok(self.exps.iter().map(|k| k * f).collect())
    }

    /// Smallest `t` with `ell^t`-torsion.
    pub fn order_exponent(&self, ell: u64) -> u32 {
        let v = self
            .exps
            .iter()
            .filter(|&&k| k != 0)
            .map(|&k| {
                let mut k = k;
                let mut v = 0;
                while k % ell == 0 {
                    k /= ell;
                    v += 1;
                }
                v
            })
            .min();
        match v {
            None => 0,
            Some(v) => self.level.saturating_sub(v),
        }
    }
}

pub(crate) fn modulus(ell: u64, level: u32) -> Result<u64> {
    ell.checked_pow(level)
        .filter(|m| *m < 1 << 62)
        .ok_or_else(|| Error::InvalidParams(format!("{ell}^{level} is too large")))
}

/// A continuous character `pi -> E^x`, given by its values on the basis
/// `e_1, ..., e_b`.
#[derive(Clone)]
pub struct Character {
    params: Arc<RingParams>,
    values: Vec<PadicScalar>,
    torsion: Option<TorsionId>,
}

impl Character {
    /// Character with arbitrary 1-unit values.
    pub fn from_values(params: &Arc<RingParams>, values: Vec<PadicScalar>) -> Result<Self> {
        let one = PadicScalar::one(params);
        for v in &values {
            if !same_ring(v.params(), params) {
                return Err(Error::FieldMismatch);
            }
            let d = v.sub(&one);
            if !d.is_zero() && d.digit_valuation().is_some_and(|w| w <= 0) {
                return Err(Error::InvalidParams(format!("{v} is not a 1-unit")));
            }
        }
        Ok(Character { params: params.clone(), values, torsion: None })
    }

    pub fn trivial(params: &Arc<RingParams>, b: usize) -> Self {
        Character {
            params: params.clone(),
            values: vec![PadicScalar::one(params); b],
            torsion: Some(TorsionId { level: 0, exps: vec![0; b] }),
        }
    }

    /// `chi(e_i) = zeta_{ell^level}^{k_i}` with `zeta = 1 + theta` raised to
    /// the appropriate power of `ell` in the cyclotomic field.
    pub fn torsion(params: &Arc<RingParams>, level: u32, exps: &[u64]) -> Result<Self> {
        let ell = params.prime();
        let id = TorsionId::new(ell, level, exps.to_vec())?;
        if level == 0 {
            return Ok(Self::trivial(params, exps.len()));
        }
        let field_level = params.cyclotomic_level().unwrap_or(0);
        if field_level < level {
            return Err(Error::FieldTooSmall(format!(
                "level {level} torsion needs zeta_{{{ell}^{level}}}; the field has level {field_level}"
            )));
        }
        let zeta = PadicScalar::one(params)
            .add(&PadicScalar::generator(params))
            .pow(modulus(ell, field_level - level)?);
        let values = id.exps.iter().map(|&k| zeta.pow(k)).collect();
        Ok(Character { params: params.clone(), values, torsion: Some(id) })
    }

    pub fn params(&self) -> &Arc<RingParams> {
        &self.params
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[PadicScalar] {
        &self.values
    }

    pub fn torsion_id(&self) -> Option<&TorsionId> {
        self.torsion.as_ref()
    }

    /// Torsion order `ell^t`, or 0 when unknown.
    pub fn order(&self) -> u64 {
        match &self.torsion {
            Some(id) => self.params.prime().pow(id.order_exponent(self.params.prime())),
            None => 0,
        }
    }

    /// Pointwise product `chi * chi'`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if !same_ring(&self.params, &other.params) {
            return Err(Error::FieldMismatch);
        }
        if self.rank() != other.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: other.rank() });
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.mul(b)).collect();
        let ell = self.params.prime();
        let torsion = match (&self.torsion, &other.torsion) {
            (Some(a), Some(b)) => {
                let l = a.level.max(b.level);
                let (x, y) = (a.at_level(ell, l)?, b.at_level(ell, l)?);
                Some(TorsionId::new(ell, l, x.iter().zip(&y).map(|(p, q)| p + q).collect())?)
            }
            _ => None,
        };
        Ok(Character { params: self.params.clone(), values, torsion })
    }

    /// `chi(v) = prod chi(e_i)^{v_i}` for an integer vector `v`.
    pub fn eval_vector(&self, v: &[i64]) -> Result<PadicScalar> {
        let mut acc = PadicScalar::one(&self.params);
        for (x, &k) in self.values.iter().zip(v) {
            acc = acc.mul(&x.pow_i64(k)?);
        }
        Ok(acc)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "chi: [{}] order={} field={}", vals.join(", "), self.order(), self.params.header())
    }
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All `ell^{nb}` characters of `pi = Z_ell^b` with values in
/// `mu_{ell^n}`, lexicographic in the exponent vector.
pub fn torsion_points(params: &Arc<RingParams>, n: u32, b: usize) -> Result<Vec<Character>> {
    let ell = params.prime();
    let m = modulus(ell, n)?;
    let total = (m as u128).checked_pow(b as u32).filter(|t| *t <= 1 << 24).ok_or_else(|| {
        Error::BudgetExceeded(format!("{ell}^({n}*{b}) torsion points"))
    })? as u64;
    let mut out = Vec::with_capacity(total as usize);
    for idx in 0..total {
        let mut exps = vec![0u64; b];
        let mut r = idx;
        for k in exps.iter_mut().rev() {
            *k = r % m;
            r /= m;
        }
        out.push(Character::torsion(params, n, &exps)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_roots() {
        let p = RingParams::cyclotomic(3, 1, 8).unwrap();
        let pts = torsion_points(&p, 1, 1).unwrap();
        assert_eq!(pts.len(), 3);
        let one = PadicScalar::one(&p);
        for c in &pts {
            assert!(c.values()[0].pow(3).eq_within_precision(&one));
        }
        assert_eq!(pts[0].order(), 1);
        assert_eq!(pts[1].order(), 3);
        assert!(!pts[1].values()[0].eq_within_precision(&pts[2].values()[0]));
    }

    #[test]
    fn counts_and_field_size() {
        let p = RingParams::cyclotomic(2, 2, 8).unwrap();
        assert_eq!(torsion_points(&p, 2, 2).unwrap().len(), 16);
        let q = RingParams::trivial(2, 8).unwrap();
        assert!(matches!(torsion_points(&q, 1, 1), Err(Error::FieldTooSmall(_))));
        assert_eq!(torsion_points(&q, 0, 3).unwrap().len(), 1);
    }

    #[test]
    fn lower_level_inside_bigger_field() {
        let p = RingParams::cyclotomic(3, 2, 10).unwrap();
        let c = Character::torsion(&p, 1, &[1]).unwrap();
        let one = PadicScalar::one(&p);
        assert!(c.values()[0].pow(3).eq_within_precision(&one));
        assert!(!c.values()[0].eq_within_precision(&one));
        assert_eq!(c.order(), 3);
    }

    #[test]
    fn non_one_unit_rejected() {
        let p = RingParams::trivial(5, 8).unwrap();
        assert!(Character::from_values(&p, vec![PadicScalar::from_int(&p, 2)]).is_err());
        assert!(Character::from_values(&p, vec![PadicScalar::from_int(&p, 6)]).is_ok());
    }
}
