use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::complex::{build_mellin_complex, group_element, koszul_matrix};
use super::data::MonodromyData;
use crate::error::{Error, Result};
use crate::formal::{prosystem_divisibility_check, reduce_mod_torsion_ideal, torsion_ideal_membership};
use crate::padic::RingParams;
use crate::tate::TruncatedSeries;

/// Koszul cohomology of one finite quotient `(Z/ell^m)[pi / ell^n pi]`,
/// as `log_ell` of the group orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelCohomology {
    pub m: u32,
    pub n: u32,
    pub group_basis: Vec<u32>,
    pub monomial_basis: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct LimitVerdict {
    pub levels: Vec<LevelCohomology>,
    pub routes_agree: bool,
    pub chain_maps: bool,
    pub top_surjects: bool,
    pub containment: bool,
    pub divisibility: bool,
}

impl LimitVerdict {
    pub fn pass(&self) -> bool {
        self.routes_agree && self.chain_maps && self.top_surjects && self.containment && self.divisibility
    }
}

impl fmt::Display for LimitVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.levels {
            let v: Vec<String> = l.group_basis.iter().map(|x| x.to_string()).collect();
            writeln!(f, "level m={} n={}: log|H|=[{}]", l.m, l.n, v.join(","))?;
        }
        write!(
            f,
            "routes_agree={} chain_maps={} top_surjects={} containment={} divisibility={}",
            self.routes_agree, self.chain_maps, self.top_surjects, self.containment, self.divisibility
        )
    }
}

type Mat = Vec<Vec<u64>>;

fn inv_mod(a: u64, m: u64) -> u64 {
    let g = (a as i128).extended_gcd(&(m as i128));
    g.x.rem_euclid(m as i128) as u64
}

/// `log_ell` of the order of the column span of `a` over `Z/ell^m`.
pub(crate) fn span_order(ell: u64, m: u32, a: &Mat) -> u32 {
    let modulus = ell.pow(m);
    let mut rows: Vec<Vec<u64>> = a.clone();
    let cols = rows.first().map_or(0, |r| r.len());
    let val = |x: u64| -> u32 {
        if x == 0 {
            return m;
        }
        let mut x = x;
        let mut v = 0;
        while x.is_multiple_of(ell) {
            x /= ell;
            v += 1;
        }
        v
    };
    let mut live_cols: Vec<usize> = (0..cols).collect();
    let mut total = 0;
    while !rows.is_empty() && !live_cols.is_empty() {
        let mut best: Option<(u32, usize, usize)> = None;
        'scan: for (i, row) in rows.iter().enumerate() {
            for (ci, &c) in live_cols.iter().enumerate() {
                let v = val(row[c]);
                if v < m && best.is_none_or(|b| v < b.0) {
                    best = Some((v, i, ci));
                    if v == 0 {
                        break 'scan;
                    }
                }
            }
        }
        let Some((v, pi, pci)) = best else { break };
        total += m - v;
        let pc = live_cols.swap_remove(pci);
        let prow = rows.swap_remove(pi);
        let unit = prow[pc] / ell.pow(v);
        let uinv = inv_mod(unit, modulus);
        for row in rows.iter_mut() {
            if row[pc] == 0 {
                continue;
            }
            let f = (row[pc] / ell.pow(v)) % modulus * uinv % modulus;
            for &c in &live_cols {
                row[c] = (row[c] + modulus - f * prow[c] % modulus) % modulus;
            }
            row[pc] = 0;
        }
    }
    total
}

fn cohomology_orders(ell: u64, m: u32, diffs: &[Mat], dims: &[usize]) -> Vec<u32> {
    let im: Vec<u32> = diffs.iter().map(|d| span_order(ell, m, d)).collect();
    (0..dims.len())
        .map(|k| {
            let out = im.get(k).copied().unwrap_or(0);
            let inc = if k == 0 { 0 } else { im[k - 1] };
            dims[k] as u32 * m - out - inc
        })
        .collect()
}

fn integer_matrices(data: &MonodromyData, modulus: u64) -> Result<Vec<Mat>> {
    if data.field().level() != 0 {
        return Err(Error::InvalidParams("finite-level check needs rational monodromy".into()));
    }
    let md = BigInt::from(modulus);
    data.matrices()
        .iter()
        .map(|mat| {
            mat.iter()
                .map(|row| {
                    row.iter()
                        .map(|x| {
                            let q = &x.0[0];
                            let den = q.denom().mod_floor(&md);
                            let d = den.to_u64().unwrap_or(0);
                            if d % data.ell() == 0 {
                                return Err(Error::InvalidParams("monodromy entry is not ell-integral".into()));
                            }
                            let num = q.numer().mod_floor(&md).to_u64().unwrap_or(0);
                            Ok(num * inv_mod(d, modulus) % modulus)
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

struct Level {
    ell: u64,
    m: u32,
    side: usize,
    b: usize,
    size: usize,
}

impl Level {
    fn coords(&self, g: usize) -> Vec<usize> {
        let mut c = vec![0; self.b];
        let mut x = g;
        for ci in c.iter_mut().rev() {
            *ci = x % self.side;
            x /= self.side;
        }
        c
    }

    fn index(&self, c: &[usize]) -> usize {
        c.iter().fold(0, |acc, &x| acc * self.side + x)
    }

    fn modulus(&self) -> u64 {
        self.ell.pow(self.m)
    }
}

/// Operators `D_j` on `A^r`, `A = (Z/ell^m)[G]` in the basis `[g] e_a`.
fn group_basis_ops(data: &MonodromyData, lv: &Level) -> Result<Vec<Mat>> {
    let modulus = lv.modulus();
    let mats = integer_matrices(data, modulus)?;
    let r = data.rank();
    let dim = r * lv.size;
    Ok(mats
        .iter()
        .enumerate()
        .map(|(j, mj)| {
            let q = data.direction_vector(j);
            let mut op = vec![vec![0u64; dim]; dim];
            for g in 0..lv.size {
                let c: Vec<usize> = lv
                    .coords(g)
                    .iter()
                    .zip(&q)
                    .map(|(&x, &qi)| (x as i64 + qi).rem_euclid(lv.side as i64) as usize)
                    .collect();
                let h = lv.index(&c);
                for a in 0..r {
                    for cc in 0..r {
                        op[h * r + a][g * r + cc] = (op[h * r + a][g * r + cc] + mj[a][cc]) % modulus;
                    }
                    op[g * r + a][g * r + a] = (op[g * r + a][g * r + a] + modulus - 1) % modulus;
                }
            }
            op
        })
        .collect())
}

fn flatten_blocks(blocks: &[Vec<Mat>], inner: usize) -> Mat {
    // blocks[row][col] are inner x inner
    let rows = blocks.len();
    let cols = blocks.first().map_or(0, |r| r.len());
    let mut out = vec![vec![0u64; cols * inner]; rows * inner];
    for (bi, brow) in blocks.iter().enumerate() {
        for (bj, blk) in brow.iter().enumerate() {
            for i in 0..inner {
                for j in 0..inner {
                    out[bi * inner + i][bj * inner + j] = blk[i][j];
                }
            }
        }
    }
    out
}

fn group_basis_differentials(data: &MonodromyData, lv: &Level) -> Result<Vec<Mat>> {
    let ops = group_basis_ops(data, lv)?;
    let modulus = lv.modulus();
    let dim = data.rank() * lv.size;
    Ok((0..data.directions())
        .map(|k| koszul_matrix(&ops, dim, k, &0, |x| (modulus - x) % modulus))
        .collect())
}

/// `X^e` reduced modulo `(1 + X)^{ell^n} - 1` and `ell^m`, for `e < 2 ell^n`.
fn power_table(lv: &Level) -> Vec<Vec<u64>> {
    let modulus = lv.modulus();
    let big = lv.side;
    let row = crate::padic::int::binomial_row(big as u64, big as u64);
    let md = num_bigint::BigUint::from(modulus);
    let top: Vec<u64> = (0..big)
        .map(|k| if k == 0 { 0 } else { (modulus - (&row[k] % &md).to_u64().unwrap_or(0)) % modulus })
        .collect();
    let mut table: Vec<Vec<u64>> = Vec::with_capacity(2 * big);
    for e in 0..2 * big {
        if e < big {
            let mut v = vec![0; big];
            v[e] = 1;
            table.push(v);
        } else {
            let prev = &table[e - 1];
            let carry = prev[big - 1];
            let mut v = vec![0; big];
            v[1..big].copy_from_slice(&prev[..big - 1]);
            for k in 0..big {
                v[k] = (v[k] + carry * top[k]) % modulus;
            }
            table.push(v);
        }
    }
    table
}

/// Multiplication by `p` on `Z/ell^m[X]/J_n` in the monomial basis.
fn multiplication_matrix(p: &[(Vec<usize>, u64)], lv: &Level, table: &[Vec<u64>]) -> Mat {
    let modulus = lv.modulus();
    let mut out = vec![vec![0u64; lv.size]; lv.size];
    for a in 0..lv.size {
        let ac = lv.coords(a);
        for (c, coef) in p {
            let mut partial: Vec<(usize, u64)> = vec![(0, *coef)];
            for i in 0..lv.b {
                let row = &table[ac[i] + c[i]];
                let mut next = Vec::new();
                for &(idx, acc) in &partial {
                    for (k, &t) in row.iter().enumerate() {
                        if t != 0 {
                            next.push((idx * lv.side + k, acc * t % modulus));
                        }
                    }
                }
                partial = next;
            }
            for (idx, v) in partial {
                out[idx][a] = (out[idx][a] + v) % modulus;
            }
        }
    }
    out
}

/// The same differentials read off the truncated Mellin complex over
/// `Z_ell` and reduced modulo `(ell^m, J_n)`.
fn monomial_basis_differentials(data: &MonodromyData, lv: &Level, n: u32) -> Result<Vec<Mat>> {
    let modulus = lv.modulus();
    let degree = (lv.b * (lv.m as usize * lv.side - 1)) as u32;
    let complex = build_mellin_complex(data, degree, lv.m)?;
    let table = power_table(lv);
    let mut out = Vec::new();
    for d in &complex.differentials {
        let blocks: Vec<Vec<Mat>> = d
            .iter()
            .map(|row| {
                row.iter()
                    .map(|entry| {
                        let red = reduce_mod_torsion_ideal(entry, n)?;
                        let mut p = Vec::new();
                        for (e, c) in red {
                            let v = c.representative_mod(lv.m)?[0] % modulus;
                            if v != 0 {
                                p.push((e.iter().map(|&x| x as usize).collect(), v));
                            }
                        }
                        Ok(multiplication_matrix(&p, lv, &table))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        out.push(flatten_blocks(&blocks, lv.size));
    }
    Ok(out)
}

/// Reduction `K_{t} -> K_{t-1}` commutes with the differentials, in the
/// group basis.
fn is_chain_map(data: &MonodromyData, hi: &Level, lo: &Level, dh: &[Mat], dl: &[Mat]) -> bool {
    let r = data.rank();
    let mlo = lo.modulus();
    let project = |idx: usize| -> usize {
        // idx = (subset * size + g) * r + a
        let a = idx % r;
        let rest = idx / r;
        let g = rest % hi.size;
        let s = rest / hi.size;
        let c: Vec<usize> = hi.coords(g).iter().map(|&x| x % lo.side).collect();
        (s * lo.size + lo.index(&c)) * r + a
    };
    for (d_hi, d_lo) in dh.iter().zip(dl) {
        let src = d_hi.first().map_or(0, |row| row.len());
        for col in 0..src {
            let mut lhs = vec![0u64; d_lo.len()];
            for (row, line) in d_hi.iter().enumerate() {
                let x = line[col] % mlo;
                if x != 0 {
                    let t = project(row);
                    lhs[t] = (lhs[t] + x) % mlo;
                }
            }
            let pc = project(col);
            if (0..d_lo.len()).any(|t| lhs[t] != d_lo[t][pc]) {
                return false;
            }
        }
    }
    true
}

/// Cohomology of the complex over the finite quotients at levels
/// `m = n = 1..=max_level`, computed in the group basis and again from the
/// truncated Mellin complex, together with the transition checks of the
/// inverse system. `budget` bounds the dimension of every term.
pub fn finite_level_limit_check(data: &MonodromyData, max_level: u32, budget: usize) -> Result<LimitVerdict> {
    let ell = data.ell();
    let b = data.nvars();
    let terms = super::complex::term_ranks(data);
    let widest = terms.iter().copied().max().unwrap_or(0);
    let mut levels = Vec::new();
    let mut prev: Option<(Level, Vec<Mat>, Vec<u32>)> = None;
    let mut routes_agree = true;
    let mut chain_maps = true;
    let mut top_surjects = true;
    let mut containment = true;
    let mut divisibility = true;
    for t in 1..=max_level {
        let side = ell.checked_pow(t).map(|s| s as usize);
        let size = side.and_then(|s| s.checked_pow(b as u32));
        let lv = match (side, size) {
            (Some(side), Some(size)) if size.saturating_mul(widest) <= budget => Level { ell, m: t, side, b, size },
            _ => {
                return Err(Error::BudgetExceeded(format!(
                    "level {t}: terms of dimension {} exceed {budget}",
                    widest.saturating_mul(size.unwrap_or(usize::MAX))
                )))
            }
        };
        let dims: Vec<usize> = terms.iter().map(|&d| d * lv.size).collect();
        let dg = group_basis_differentials(data, &lv)?;
        let dx = monomial_basis_differentials(data, &lv, t)?;
        let hg = cohomology_orders(ell, t, &dg, &dims);
        let hx = cohomology_orders(ell, t, &dx, &dims);
        routes_agree &= hg == hx;
        divisibility &= prosystem_divisibility_check(ell, t, t)?;
        if let Some((lo, dl, hl)) = &prev {
            chain_maps &= is_chain_map(data, &lv, lo, &dg, dl);
            if let (Some(a), Some(b)) = (hg.last(), hl.last()) {
                top_surjects &= b <= a;
            }
            // (1 + X)^{ell^t} - 1 lies in J_{t-1}
            let p = RingParams::trivial(ell, t)?;
            let g = group_element(&p, &[ell.pow(t) as i64], ell.pow(t) as u32)?
                .sub(&TruncatedSeries::one(&p, 1, ell.pow(t) as u32))?;
            containment &= torsion_ideal_membership(&g, t - 1)?;
        }
        levels.push(LevelCohomology { m: t, n: t, group_basis: hg.clone(), monomial_basis: hx });
        prev = Some((lv, dg, hg));
    }
    Ok(LimitVerdict { levels, routes_agree, chain_maps, top_surjects, containment, divisibility })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_orders() {
        // diag(2, 4, 0) over Z/8: image of order 4 * 2
        let a = vec![vec![2, 0, 0], vec![0, 4, 0], vec![0, 0, 0]];
        assert_eq!(span_order(2, 3, &a), 3);
        let b = vec![vec![1, 2], vec![2, 4]];
        assert_eq!(span_order(3, 2, &b), 2);
        assert_eq!(span_order(2, 1, &vec![vec![0u64; 2]; 2]), 0);
    }

    #[test]
    fn trivial_rank_one_level_one() {
        let d = MonodromyData::trivial(2, 1, 1);
        let v = finite_level_limit_check(&d, 1, 1000).unwrap();
        // H^0 = ker X on F_2[X]/X^2, H^1 = coker
        assert_eq!(v.levels[0].group_basis, vec![1, 1]);
        assert!(v.pass(), "{v}");
    }

    #[test]
    fn rank_zero_is_zero() {
        let d = MonodromyData::trivial(2, 0, 1);
        let v = finite_level_limit_check(&d, 3, 1000).unwrap();
        assert!(v.levels.iter().all(|l| l.group_basis.iter().all(|&x| x == 0)));
        assert!(v.pass());
    }

    #[test]
    fn nontrivial_levels() {
        let d = MonodromyData::parse(2, "rank=2; M1=[[0,1],[1,0]]; M2=[[1,0],[0,1]]").unwrap();
        let v = finite_level_limit_check(&d, 3, 1000).unwrap();
        assert!(v.pass(), "{v}");
        let d = MonodromyData::parse(3, "rank=1; M1=[[2]]").unwrap();
        let v = finite_level_limit_check(&d, 3, 1000).unwrap();
        assert!(v.pass(), "{v}");
    }

    #[test]
    fn budget() {
        let d = MonodromyData::trivial(3, 2, 2);
        assert!(matches!(finite_level_limit_check(&d, 3, 1000), Err(Error::BudgetExceeded(_))));
    }
}
