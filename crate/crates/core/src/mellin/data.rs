use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact::{local_smith, Cyclo, CyclotomicField, Field};

pub type CycloMatrix = Vec<Vec<Cyclo>>;

/// Commuting monodromy operators `M_1, ..., M_{b'}` of a rank-`r` local
/// system, with entries in `Z_ell[zeta_{ell^L}]`, and an optional quotient
/// `Q: Z^b -> Z^{b'}` along which the system is inflated.
#[derive(Clone, Debug)]
pub struct MonodromyData {
    field: CyclotomicField,
    rank: usize,
    mats: Vec<CycloMatrix>,
    /// Rows are the images in `pi` of the quotient directions.
    quotient: Option<Vec<Vec<i64>>>,
}

impl MonodromyData {
    pub fn new(field: CyclotomicField, rank: usize, mats: Vec<CycloMatrix>, quotient: Option<Vec<Vec<i64>>>) -> Result<Self> {
        let k = &field;
        for m in &mats {
            if m.len() != rank || m.iter().any(|r| r.len() != rank) {
                return Err(Error::DimensionMismatch { expected: rank, found: m.len() });
            }
            let det = crate::exact::determinant(k, m);
            if !k.is_ell_unit(&det) {
                return Err(Error::NonInvertible);
            }
        }
        for (i, a) in mats.iter().enumerate() {
            for b in &mats[i + 1..] {
                if mat_mul(k, a, b) != mat_mul(k, b, a) {
                    return Err(Error::NonCommuting);
                }
            }
        }
        if let Some(q) = &quotient {
            if q.len() != mats.len() {
                return Err(Error::DimensionMismatch { expected: mats.len(), found: q.len() });
            }
            let b = q.first().map_or(0, |r| r.len());
            if q.iter().any(|r| r.len() != b) {
                return Err(Error::Parse("quotient rows must have equal length".into()));
            }
            let s = local_smith(field.ell(), b, q)?;
            if s.rank() != q.len() || !s.is_saturated() {
                return Err(Error::NotSaturated);
            }
        }
        Ok(MonodromyData { field, rank, mats, quotient })
    }

    /// `b` rank-`r` identity operators.
    pub fn trivial(ell: u64, rank: usize, b: usize) -> Self {
        let field = CyclotomicField::new(ell, 0);
        let id = identity(&field, rank);
        MonodromyData { field, rank, mats: vec![id; b], quotient: None }
    }

    pub fn field(&self) -> &CyclotomicField {
        &self.field
    }

    pub fn ell(&self) -> u64 {
        self.field.ell()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrices(&self) -> &[CycloMatrix] {
        &self.mats
    }

    /// Number of Koszul directions `b'`.
    pub fn directions(&self) -> usize {
        self.mats.len()
    }

    /// Rank `b` of `pi`.
    pub fn nvars(&self) -> usize {
        match &self.quotient {
            Some(q) => q.first().map_or(0, |r| r.len()),
            None => self.mats.len(),
        }
    }

    pub fn quotient(&self) -> Option<&[Vec<i64>]> {
        self.quotient.as_deref()
    }

    /// The element of `pi` attached to direction `j`.
    pub fn direction_vector(&self, j: usize) -> Vec<i64> {
        match &self.quotient {
            Some(q) => q[j].clone(),
            None => (0..self.mats.len()).map(|i| (i == j) as i64).collect(),
        }
    }

    /// `rank=<r>; M1=[[..],[..]]; ...; quotient=[[..]]|none`, with entries
    /// such as `3`, `-z4^3`, `2*z9^2+1`.
    pub fn parse(ell: u64, text: &str) -> Result<Self> {
        let mut rank = None;
        let mut raw: Vec<(usize, String)> = Vec::new();
        let mut quotient = None;
        for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, val) = part.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got `{part}`")))?;
            let (key, val) = (key.trim(), val.trim());
            if key == "rank" {
                rank = Some(val.parse::<usize>().map_err(|_| Error::Parse(format!("bad rank `{val}`")))?);
            } else if key == "quotient" {
                if val != "none" {
                    let rows = parse_rows(val)?;
                    quotient = Some(
                        rows.iter()
                            .map(|r| r.iter().map(|x| x.parse::<i64>().map_err(|_| Error::Parse(format!("bad integer `{x}`")))).collect())
                            .collect::<Result<Vec<Vec<i64>>>>()?,
                    );
                }
            } else if let Some(idx) = key.strip_prefix('M') {
                let i: usize = idx.parse().map_err(|_| Error::Parse(format!("bad matrix key `{key}`")))?;
                raw.push((i, val.to_string()));
            } else {
                return Err(Error::Parse(format!("unknown key `{key}`")));
            }
        }
        let rank = rank.ok_or_else(|| Error::Parse("rank is required".into()))?;
        raw.sort_by_key(|(i, _)| *i);
        if raw.iter().enumerate().any(|(pos, (i, _))| *i != pos + 1) {
            return Err(Error::Parse("matrices must be numbered M1, M2, ... without gaps".into()));
        }
        let cells: Vec<Vec<Vec<String>>> = raw.iter().map(|(_, v)| parse_rows(v)).collect::<Result<_>>()?;
        let mut level = 0;
        for c in cells.iter().flatten().flatten() {
            level = level.max(entry_level(ell, c)?);
        }
        let field = CyclotomicField::new(ell, level);
        let mats = cells
            .iter()
            .map(|m| m.iter().map(|r| r.iter().map(|c| parse_entry(&field, c)).collect()).collect())
            .collect::<Result<Vec<CycloMatrix>>>()?;
        Self::new(field, rank, mats, quotient)
    }
}

pub(crate) fn identity(k: &CyclotomicField, r: usize) -> CycloMatrix {
    (0..r).map(|i| (0..r).map(|j| if i == j { k.one() } else { k.zero() }).collect()).collect()
}

pub(crate) fn mat_mul(k: &CyclotomicField, a: &CycloMatrix, b: &CycloMatrix) -> CycloMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(k.zero(), |acc, t| k.add(&acc, &k.mul(&a[i][t], &b[t][j]))))
                .collect()
        })
        .collect()
}

fn parse_rows(s: &str) -> Result<Vec<Vec<String>>> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("matrix must look like [[..],[..]], got `{s}`")))?;
    let mut rows = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        let open = rest.find('[').ok_or_else(|| Error::Parse(format!("bad matrix row in `{s}`")))?;
        let close = rest.find(']').ok_or_else(|| Error::Parse(format!("unclosed row in `{s}`")))?;
        rows.push(rest[open + 1..close].split(',').map(|x| x.trim().to_string()).collect());
        rest = rest[close + 1..].trim_start_matches([',', ' ']);
    }
    Ok(rows)
}

fn split_terms(s: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for ch in s.chars().filter(|c| !c.is_whitespace()) {
        if (ch == '+' || ch == '-') && !cur.is_empty() {
            out.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if ch == '-' && cur.is_empty() {
            neg = !neg;
        } else if ch != '+' {
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        out.push((neg, cur));
    }
    out
}

/// `(coefficient, Some((order, power)))` for a term such as `2*z9^4`.
fn parse_term(t: &str) -> Result<(i64, Option<(u64, i64)>)> {
    let (coef, z) = match t.split_once('*') {
        Some((c, z)) => (c.parse::<i64>().map_err(|_| Error::Parse(format!("bad coefficient `{c}`")))?, Some(z)),
        None if t.starts_with('z') => (1, Some(t)),
        None => (t.parse::<i64>().map_err(|_| Error::Parse(format!("bad entry `{t}`")))?, None),
    };
    let Some(z) = z else { return Ok((coef, None)) };
    let z = z.strip_prefix('z').ok_or_else(|| Error::Parse(format!("expected z<order>, got `{z}`")))?;
    let (ord, pow) = match z.split_once('^') {
        Some((o, p)) => (o, p.parse::<i64>().map_err(|_| Error::Parse(format!("bad power `{p}`")))?),
        None => (z, 1),
    };
    let ord = ord.parse::<u64>().map_err(|_| Error::Parse(format!("bad root-of-unity order `{ord}`")))?;
    Ok((coef, Some((ord, pow))))
}

fn level_of(ell: u64, ord: u64) -> Result<u32> {
    let (mut o, mut l) = (ord, 0);
    while o > 1 && o % ell == 0 {
        o /= ell;
        l += 1;
    }
    if o != 1 {
        return Err(Error::Parse(format!("root-of-unity order {ord} is not a power of {ell}")));
    }
    Ok(l)
}

fn entry_level(ell: u64, s: &str) -> Result<u32> {
    let mut l = 0;
    for (_, t) in split_terms(s) {
        if let (_, Some((ord, _))) = parse_term(&t)? {
            l = l.max(level_of(ell, ord)?);
        }
    }
    Ok(l)
}

pub(crate) fn parse_entry(k: &CyclotomicField, s: &str) -> Result<Cyclo> {
    let mut acc = k.zero();
    for (neg, t) in split_terms(s) {
        let (c, z) = parse_term(&t)?;
        let c = if neg { -c } else { c };
        let v = match z {
            None => k.from_int(c),
            Some((ord, p)) => {
                let stride = (k.order() as u64 / ord) as i64;
                k.mul(&k.from_rational(BigRational::from_integer(BigInt::from(c))), &k.zeta_pow(p * stride))
            }
        };
        acc = k.add(&acc, &v);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_cyclotomic_entries() {
        let d = MonodromyData::parse(2, "rank=2; M1=[[z4,0],[0,-z4^3+0]]; quotient=none").unwrap();
        let k = d.field();
        assert_eq!(k.level(), 2);
        assert_eq!(d.matrices()[0][0][0], k.zeta_pow(1));
        assert_eq!(d.matrices()[0][1][1], k.neg(&k.zeta_pow(3)));
        assert_eq!(d.nvars(), 1);
    }

    #[test]
    fn validation() {
        assert!(matches!(MonodromyData::parse(3, "rank=1; M1=[[3]]"), Err(Error::NonInvertible)));
        assert!(matches!(
            MonodromyData::parse(5, "rank=2; M1=[[1,1],[0,1]]; M2=[[1,0],[1,1]]"),
            Err(Error::NonCommuting)
        ));
        let d = MonodromyData::parse(3, "rank=1; M1=[[1]]; quotient=[[1,0]]").unwrap();
        assert_eq!((d.nvars(), d.directions()), (2, 1));
        assert!(matches!(MonodromyData::parse(3, "rank=1; M1=[[1]]; quotient=[[3,0]]"), Err(Error::NotSaturated)));
    }
}
