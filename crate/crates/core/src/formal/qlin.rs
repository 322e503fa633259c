use std::fmt;

use super::character::{modulus, Character, TorsionId};
use crate::error::{Error, Result};
use crate::exact::{is_saturated, lattice_contains, lattice_equal, saturate};

/// `s H`, where `s` is a torsion character and `H` the formal subgroup of
/// characters trivial on the saturated lattice spanned by `lattice`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub shift: TorsionId,
    /// Integer columns spanning `pi'` inside `Z_ell^b`.
    pub lattice: Vec<Vec<i64>>,
}

/// A finite union of torsion translates of formal subgroups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiLinearSet {
    ell: u64,
    rank: usize,
    components: Vec<Component>,
}

fn pairing(ell: u64, level: u32, d: &[u64], col: &[i64]) -> Result<bool> {
    let m = modulus(ell, level)? as i128;
    let s: i128 = d.iter().zip(col).map(|(&a, &b)| (a as i128 * (b as i128).rem_euclid(m)) % m).sum();
    Ok(s.rem_euclid(m) == 0)
}

/// `a - b` at a common level.
fn difference(ell: u64, a: &TorsionId, b: &TorsionId) -> Result<(u32, Vec<u64>)> {
    let l = a.level.max(b.level);
    let m = modulus(ell, l)?;
    let (x, y) = (a.at_level(ell, l)?, b.at_level(ell, l)?);
    Ok((l, x.iter().zip(&y).map(|(p, q)| (p % m + m - q % m) % m).collect()))
}

impl Component {
    fn contains_shift(&self, ell: u64, t: &TorsionId) -> Result<bool> {
        let (l, d) = difference(ell, t, &self.shift)?;
        for col in &self.lattice {
            if !pairing(ell, l, &d, col)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl QuasiLinearSet {
    pub fn new(ell: u64, rank: usize, components: Vec<Component>) -> Result<Self> {
        for c in &components {
            if c.shift.exps.len() != rank {
                return Err(Error::DimensionMismatch { expected: rank, found: c.shift.exps.len() });
            }
            if !c.lattice.is_empty() && !is_saturated(ell, rank, &c.lattice)? {
                return Err(Error::NotSaturated);
            }
        }
        Ok(QuasiLinearSet { ell, rank, components })
    }

    /// The whole group `G`.
    pub fn everything(ell: u64, rank: usize) -> Self {
        let shift = TorsionId { level: 0, exps: vec![0; rank] };
        QuasiLinearSet { ell, rank, components: vec![Component { shift, lattice: Vec::new() }] }
    }

    /// A finite set of torsion points.
    pub fn points(ell: u64, rank: usize, shifts: Vec<TorsionId>) -> Result<Self> {
        let full: Vec<Vec<i64>> = (0..rank).map(|i| (0..rank).map(|j| (i == j) as i64).collect()).collect();
        Self::new(ell, rank, shifts.into_iter().map(|s| Component { shift: s, lattice: full.clone() }).collect())
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Every component passes the unit-invariant Smith test.
    pub fn all_saturated(&self) -> Result<bool> {
        for c in &self.components {
            if !c.lattice.is_empty() && !is_saturated(self.ell, self.rank, &c.lattice)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains_torsion(&self, t: &TorsionId) -> Result<bool> {
        for c in &self.components {
            if c.contains_shift(self.ell, t)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Exact membership of a torsion character.
    pub fn contains(&self, chi: &Character) -> Result<bool> {
        let t = chi.torsion_id().ok_or(Error::NonTorsionInput)?;
        if t.exps.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, found: t.exps.len() });
        }
        self.contains_torsion(t)
    }

    /// Image under `chi -> chi o sigma^{-1}`: lattices become `sigma(pi')`
    /// and shifts `(sigma^{-1})^T k`.
    pub fn sigma_image(&self, sigma: &[Vec<i64>]) -> Result<QuasiLinearSet> {
        let b = self.rank;
        if sigma.len() != b || sigma.iter().any(|r| r.len() != b) {
            return Err(Error::DimensionMismatch { expected: b, found: sigma.len() });
        }
        let det = int_det(sigma);
        if det.rem_euclid(self.ell as i128) == 0 {
            return Err(Error::NonInvertible);
        }
        let adj = int_adjugate(sigma);
        let mut out = Vec::with_capacity(self.components.len());
        for c in &self.components {
            let cols: Vec<Vec<i64>> = c
                .lattice
                .iter()
                .map(|e| {
                    (0..b)
                        .map(|i| {
                            let v: i128 = (0..b).map(|j| sigma[i][j] as i128 * e[j] as i128).sum();
                            i64::try_from(v).map_err(|_| Error::OutOfRange("lattice entry overflow".into()))
                        })
                        .collect::<Result<Vec<i64>>>()
                })
                .collect::<Result<_>>()?;
            let lattice = if cols.is_empty() { cols } else { saturate(self.ell, b, &cols)? };
            let level = c.shift.level;
            let m = modulus(self.ell, level)? as i128;
            let dinv = crate::padic::int::invmod(det.rem_euclid(m.max(1)) as u64, m.max(1) as u64).unwrap_or(0) as i128;
            // (sigma^{-1})_{ij} = adj_{ij} / det
            let exps = (0..b)
                .map(|j| {
                    let s: i128 = (0..b)
                        .map(|i| (adj[i][j].rem_euclid(m.max(1)) * c.shift.exps[i] as i128) % m.max(1))
                        .sum();
                    ((s % m.max(1)) * dinv).rem_euclid(m.max(1)) as u64
                })
                .collect();
            out.push(Component { shift: TorsionId::new(self.ell, level, exps)?, lattice });
        }
        QuasiLinearSet::new(self.ell, b, out)
    }

    /// Image under `[ell]`: `s H -> s^ell H`.
    pub fn ell_image(&self) -> Result<QuasiLinearSet> {
        let comps = self
            .components
            .iter()
            .map(|c| {
                let exps = c.shift.exps.iter().map(|k| k * self.ell).collect();
                Ok(Component { shift: TorsionId::new(self.ell, c.shift.level, exps)?, lattice: c.lattice.clone() })
            })
            .collect::<Result<_>>()?;
        QuasiLinearSet::new(self.ell, self.rank, comps)
    }

    fn component_within(&self, a: &Component, b: &Component) -> Result<bool> {
        // sH ⊆ s'H' iff pi'_b ⊆ pi'_a and s s'^{-1} ∈ H'
        Ok(lattice_contains(self.ell, self.rank, &a.lattice, &b.lattice)? && b.contains_shift(self.ell, &a.shift)?)
    }

    fn component_equal(&self, a: &Component, b: &Component) -> Result<bool> {
        Ok(lattice_equal(self.ell, self.rank, &a.lattice, &b.lattice)? && b.contains_shift(self.ell, &a.shift)?)
    }

    /// Every component of `self` lies in a component of `other`.
    pub fn is_subset_of(&self, other: &QuasiLinearSet) -> Result<bool> {
        for a in &self.components {
            let mut found = false;
            for b in &other.components {
                if self.component_within(a, b)? {
                    found = true;
                    break;
                }
            }
            if !found {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Same components up to reordering.
    pub fn same_components(&self, other: &QuasiLinearSet) -> Result<bool> {
        for (x, y) in [(self, other), (other, self)] {
            for a in &x.components {
                let mut found = false;
                for b in &y.components {
                    if self.component_equal(a, b)? {
                        found = true;
                        break;
                    }
                }
                if !found {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `sigma`-image together with the stability verdict.
    pub fn sigma_stability(&self, sigma: &[Vec<i64>]) -> Result<(QuasiLinearSet, bool)> {
        let img = self.sigma_image(sigma)?;
        let stable = img.same_components(self)?;
        Ok((img, stable))
    }

    /// `[ell](S) ⊆ S`.
    pub fn ell_stable(&self) -> Result<bool> {
        self.ell_image()?.is_subset_of(self)
    }

    pub fn parse(ell: u64, rank: usize, text: &str) -> Result<Self> {
        let mut comps = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let body = line
                .split_once(':')
                .map(|(_, b)| b.trim())
                .ok_or_else(|| Error::Parse(format!("expected `component r: ...`, got `{line}`")))?;
            let (s, lat) = body
                .split_once("lattice=")
                .ok_or_else(|| Error::Parse("missing lattice=".into()))?;
            let s = s.trim().strip_prefix("s=").ok_or_else(|| Error::Parse("missing s=".into()))?;
            let (v, order) = s.split_once('/').ok_or_else(|| Error::Parse("shift must be [k..]/ell^level".into()))?;
            let exps: Vec<u64> = parse_list(v)?.into_iter().map(|x| x as u64).collect();
            let order: u64 = order.trim().parse().map_err(|_| Error::Parse(format!("bad order `{order}`")))?;
            let mut level = 0;
            let mut o = order;
            while o > 1 {
                if !o.is_multiple_of(ell) {
                    return Err(Error::Parse(format!("order {order} is not a power of {ell}")));
                }
                o /= ell;
                level += 1;
            }
            let lat = lat.trim();
            let lattice = if lat == "-" {
                Vec::new()
            } else {
                lat.split(';').map(parse_list).collect::<Result<_>>()?
            };
            comps.push(Component { shift: TorsionId::new(ell, level, exps)?, lattice });
        }
        Self::new(ell, rank, comps)
    }
}

fn parse_list(s: &str) -> Result<Vec<i64>> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("expected bracketed list, got `{s}`")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad integer `{x}`"))))
        .collect()
}

fn list(v: &[impl ToString]) -> String {
    format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

impl fmt::Display for QuasiLinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, c) in self.components.iter().enumerate() {
            if r > 0 {
                writeln!(f)?;
            }
            let lat = if c.lattice.is_empty() {
                "-".to_string()
            } else {
                c.lattice.iter().map(|col| list(col)).collect::<Vec<_>>().join(";")
            };
            write!(
                f,
                "component {}: s={}/{} lattice={}",
                r + 1,
                list(&c.shift.exps),
                self.ell.pow(c.shift.level),
                lat
            )?;
        }
        Ok(())
    }
}

pub(crate) fn int_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0] as i128;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect()).collect();
            let t = m[0][j] as i128 * int_det(&minor);
            if j % 2 == 1 {
                -t
            } else {
                t
            }
        })
        .sum()
}

pub(crate) fn int_adjugate(m: &[Vec<i64>]) -> Vec<Vec<i128>> {
    let n = m.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let minor: Vec<Vec<i64>> = (0..n)
                        .filter(|&r| r != j)
                        .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c]).collect())
                        .collect();
                    let d = if n == 1 { 1 } else { int_det(&minor) };
                    if (i + j) % 2 == 1 {
                        -d
                    } else {
                        d
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::RingParams;

    fn line(ell: u64) -> QuasiLinearSet {
        QuasiLinearSet::new(
            ell,
            2,
            vec![Component { shift: TorsionId { level: 0, exps: vec![0, 0] }, lattice: vec![vec![1, 0]] }],
        )
        .unwrap()
    }

    #[test]
    fn membership() {
        let p = RingParams::cyclotomic(3, 1, 6).unwrap();
        assert!(QuasiLinearSet::everything(3, 2).contains(&Character::trivial(&p, 2)).unwrap());
        let chi = Character::torsion(&p, 1, &[1, 0]).unwrap();
        assert!(!line(3).contains(&chi).unwrap());
        let chi2 = Character::torsion(&p, 1, &[0, 2]).unwrap();
        assert!(line(3).contains(&chi2).unwrap());
        let q = RingParams::trivial(3, 6).unwrap();
        let generic = Character::from_values(&q, vec![crate::padic::PadicScalar::from_int(&q, 4); 2]).unwrap();
        assert!(matches!(line(3).contains(&generic), Err(Error::NonTorsionInput)));
    }

    #[test]
    fn sigma_stability_examples() {
        let s = line(5);
        assert!(s.sigma_stability(&[vec![2, 0], vec![0, 3]]).unwrap().1);
        let (img, stable) = s.sigma_stability(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(!stable);
        assert_eq!(img.components()[0].lattice, vec![vec![0, 1]]);
        let pt = QuasiLinearSet::points(5, 2, vec![TorsionId { level: 0, exps: vec![0, 0] }]).unwrap();
        assert!(pt.sigma_stability(&[vec![1, 7], vec![3, 2]]).unwrap().1);
    }

    #[test]
    fn shifted_points_move_by_inverse_transpose() {
        let ell = 3;
        let pts = QuasiLinearSet::points(ell, 2, vec![TorsionId::new(ell, 2, vec![1, 0]).unwrap()]).unwrap();
        let sigma = vec![vec![1, 1], vec![0, 1]];
        let img = pts.sigma_image(&sigma).unwrap();
        // sigma^{-1} = [[1,-1],[0,1]], transpose applied to (1,0) gives (1,-1)
        assert_eq!(img.components()[0].shift.exps, vec![1, 8]);
    }

    #[test]
    fn unsaturated_rejected_and_round_trip() {
        assert!(matches!(
            QuasiLinearSet::new(3, 2, vec![Component { shift: TorsionId { level: 0, exps: vec![0, 0] }, lattice: vec![vec![3, 0]] }]),
            Err(Error::NotSaturated)
        ));
        let s = QuasiLinearSet::parse(3, 2, "component 1: s=[1,2]/9 lattice=[1,1]\ncomponent 2: s=[0,0]/1 lattice=-").unwrap();
        let text = s.to_string();
        assert_eq!(QuasiLinearSet::parse(3, 2, &text).unwrap(), s);
        assert!(s.ell_stable().unwrap());
    }
}
