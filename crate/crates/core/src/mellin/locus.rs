use std::fmt;

use super::complex::MellinComplex;
use super::data::MonodromyData;
use super::fibers::{fiber_dims_at, generic_dims_of};
use crate::error::{Error, Result};
use crate::formal::{QuasiLinearSet, TorsionId};

const MAX_POINTS: u64 = 1 << 12;

/// Torsion census of a jumping locus `{chi : dim H^i > j}` at one level.
#[derive(Clone, Debug)]
pub struct LocusReport {
    pub i: usize,
    pub j: usize,
    pub level: u32,
    pub ell: u64,
    pub members: Vec<TorsionId>,
    pub generic: Vec<usize>,
    pub euler: i64,
    pub fibers: Vec<(TorsionId, Vec<usize>)>,
}

fn euler(dims: &[usize]) -> i64 {
    dims.iter().enumerate().map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
}

/// All level-`n` torsion ids of rank `b`, `k_1` most significant.
pub fn level_points(ell: u64, n: u32, b: usize) -> Result<Vec<TorsionId>> {
    let side = ell.checked_pow(n).ok_or_else(|| Error::BudgetExceeded(format!("{ell}^{n}")))?;
    let total = side
        .checked_pow(b as u32)
        .filter(|t| *t <= MAX_POINTS)
        .ok_or_else(|| Error::BudgetExceeded(format!("{ell}^({n}*{b}) torsion points")))?;
    Ok((0..total)
        .map(|mut x| {
            let mut exps = vec![0; b];
            for e in exps.iter_mut().rev() {
                *e = x % side;
                x /= side;
            }
            TorsionId { level: n, exps }
        })
        .collect())
}

pub fn jumping_locus_of(data: &MonodromyData, i: usize, j: usize, n: u32) -> Result<LocusReport> {
    if i > data.directions() {
        return Err(Error::OutOfRange(format!("degree {i} above {}", data.directions())));
    }
    let generic = generic_dims_of(data)?;
    let mut fibers = Vec::new();
    let mut members = Vec::new();
    let mut chi_euler = None;
    for id in level_points(data.ell(), n, data.nvars())? {
        let dims = fiber_dims_at(data, &id)?;
        let e = euler(&dims);
        match chi_euler {
            None => chi_euler = Some(e),
            Some(e0) if e0 != e => {
                return Err(Error::Invariant(format!("Euler characteristic {e} at {id:?}, expected {e0}")));
            }
            _ => {}
        }
        if dims[i] > j {
            members.push(id.clone());
        }
        fibers.push((id, dims));
    }
    let euler = euler(&generic);
    if chi_euler.is_some_and(|e| e != euler) {
        return Err(Error::Invariant("fiber and generic Euler characteristics differ".into()));
    }
    Ok(LocusReport { i, j, level: n, ell: data.ell(), members, generic, euler, fibers })
}

pub fn jumping_locus(complex: &MellinComplex, i: usize, j: usize, n: u32) -> Result<LocusReport> {
    jumping_locus_of(&complex.data, i, j, n)
}

fn id_list(ids: &[TorsionId]) -> String {
    let items: Vec<String> = ids
        .iter()
        .map(|t| format!("[{}]", t.exps.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", items.join(","))
}

impl fmt::Display for LocusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let generic: Vec<String> = self.generic.iter().map(|d| d.to_string()).collect();
        write!(
            f,
            "sigma i={} j={} level={}: {}; generic=[{}]; euler={}",
            self.i,
            self.j,
            self.level,
            id_list(&self.members),
            generic.join(","),
            self.euler
        )
    }
}

/// Comparison of a locus census against a candidate quasi-linear set.
#[derive(Clone, Debug)]
pub struct QlinVerdict {
    pub matches: bool,
    /// In the locus but not in the candidate.
    pub missing: Vec<TorsionId>,
    /// In the candidate but not in the locus.
    pub extra: Vec<TorsionId>,
}

impl fmt::Display for QlinVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}; locus-only={}; set-only={}",
            if self.matches { "match" } else { "mismatch" },
            id_list(&self.missing),
            id_list(&self.extra)
        )
    }
}

pub fn verify_quasilinear(report: &LocusReport, set: &QuasiLinearSet, n: u32) -> Result<QlinVerdict> {
    if n != report.level {
        return Err(Error::InvalidParams(format!("report is at level {}, not {n}", report.level)));
    }
    let b = report.fibers.first().map(|(t, _)| t.exps.len()).unwrap_or(set.rank());
    if set.rank() != b || set.ell() != report.ell {
        return Err(Error::DimensionMismatch { expected: b, found: set.rank() });
    }
    let mut missing = Vec::new();
    let mut extra = Vec::new();
    for id in level_points(report.ell, n, b)? {
        let in_locus = report.members.contains(&id);
        let in_set = set.contains_torsion(&id)?;
        match (in_locus, in_set) {
            (true, false) => missing.push(id),
            (false, true) => extra.push(id),
            _ => {}
        }
    }
    Ok(QlinVerdict { matches: missing.is_empty() && extra.is_empty(), missing, extra })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal::Component;

    #[test]
    fn trivial_point_locus() {
        let d = MonodromyData::trivial(2, 1, 1);
        let rep = jumping_locus_of(&d, 0, 0, 2).unwrap();
        assert_eq!(rep.members, vec![TorsionId { level: 2, exps: vec![0] }]);
        assert_eq!(rep.to_string(), "sigma i=0 j=0 level=2: [[0]]; generic=[0,0]; euler=0");
        let s = QuasiLinearSet::points(2, 1, vec![TorsionId { level: 0, exps: vec![0] }]).unwrap();
        assert!(verify_quasilinear(&rep, &s, 2).unwrap().matches);
    }

    #[test]
    fn translated_point() {
        let d = MonodromyData::parse(2, "rank=1; M1=[[z4]]").unwrap();
        let rep = jumping_locus_of(&d, 1, 0, 2).unwrap();
        assert_eq!(rep.members, vec![TorsionId { level: 2, exps: vec![3] }]);
        let s = QuasiLinearSet::points(2, 1, vec![TorsionId { level: 2, exps: vec![3] }]).unwrap();
        assert!(verify_quasilinear(&rep, &s, 2).unwrap().matches);
        let wrong = QuasiLinearSet::points(2, 1, vec![TorsionId { level: 2, exps: vec![1] }]).unwrap();
        let v = verify_quasilinear(&rep, &wrong, 2).unwrap();
        assert!(!v.matches);
        assert_eq!(v.missing.len(), 1);
        assert_eq!(v.extra.len(), 1);
    }

    #[test]
    fn inflated_codim_one() {
        let d = MonodromyData::parse(3, "rank=1; M1=[[1]]; quotient=[[1,0]]").unwrap();
        let rep = jumping_locus_of(&d, 0, 0, 1).unwrap();
        assert_eq!(rep.members.len(), 3);
        assert!(rep.members.iter().all(|t| t.exps[0] == 0));
        let right = QuasiLinearSet::new(
            3,
            2,
            vec![Component { shift: TorsionId { level: 0, exps: vec![0, 0] }, lattice: vec![vec![1, 0]] }],
        )
        .unwrap();
        assert!(verify_quasilinear(&rep, &right, 1).unwrap().matches);
        let wrong = QuasiLinearSet::new(
            3,
            2,
            vec![Component { shift: TorsionId { level: 0, exps: vec![0, 0] }, lattice: vec![vec![0, 1]] }],
        )
        .unwrap();
        let v = verify_quasilinear(&rep, &wrong, 1).unwrap();
        assert!(!v.matches);
        assert_eq!(v.missing.len(), 2);
        assert_eq!(v.extra.len(), 2);
    }
}
