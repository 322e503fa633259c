use super::complex::{koszul_matrix, term_ranks, MellinComplex};
use super::data::MonodromyData;
use super::laurent::{bareiss_rank, LPoly};
use crate::error::{Error, Result};
use crate::exact::{rank, Cyclo, CyclotomicField, Field};
use crate::formal::{Character, TorsionId};

/// `dim H^k = dim K^k - rank d^k - rank d^{k-1}`.
fn dims_from_ranks(terms: &[usize], ranks: &[usize]) -> Vec<usize> {
    (0..terms.len())
        .map(|k| {
            let out = ranks.get(k).copied().unwrap_or(0);
            let inc = if k == 0 { 0 } else { ranks[k - 1] };
            terms[k] - out - inc
        })
        .collect()
}

fn fiber_field(data: &MonodromyData, level: u32) -> CyclotomicField {
    CyclotomicField::new(data.ell(), data.field().level().max(level))
}

/// `chi(q)` as a power of the generator of `field`.
fn chi_power(field: &CyclotomicField, ell: u64, id: &TorsionId, q: &[i64]) -> i64 {
    let stride = ell.pow(field.level() - id.level) as i64;
    let s: i64 = id.exps.iter().zip(q).map(|(&k, &x)| k as i64 * x).sum();
    s * stride
}

fn embedded_ops(data: &MonodromyData, field: &CyclotomicField) -> Vec<Vec<Vec<Cyclo>>> {
    data.matrices()
        .iter()
        .map(|m| m.iter().map(|row| row.iter().map(|x| field.embed(data.field(), x)).collect()).collect())
        .collect()
}

/// Cohomology dimensions of the complex specialized at a torsion
/// character, by exact ranks over `Q(zeta)`.
pub fn fiber_dims_at(data: &MonodromyData, id: &TorsionId) -> Result<Vec<usize>> {
    if id.exps.len() != data.nvars() {
        return Err(Error::DimensionMismatch { expected: data.nvars(), found: id.exps.len() });
    }
    let k = fiber_field(data, id.level);
    let r = data.rank();
    let ops: Vec<Vec<Vec<Cyclo>>> = embedded_ops(data, &k)
        .into_iter()
        .enumerate()
        .map(|(j, m)| {
            let c = k.zeta_pow(chi_power(&k, data.ell(), id, &data.direction_vector(j)));
            (0..r)
                .map(|a| {
                    (0..r)
                        .map(|b| {
                            let v = k.mul(&m[a][b], &c);
                            if a == b {
                                k.sub(&v, &k.one())
                            } else {
                                v
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let ranks: Vec<usize> = (0..data.directions())
        .map(|deg| rank(&k, &koszul_matrix(&ops, r, deg, &k.zero(), |x| k.neg(x))))
        .collect();
    Ok(dims_from_ranks(&term_ranks(data), &ranks))
}

pub fn fiber_dims(complex: &MellinComplex, chi: &Character) -> Result<Vec<usize>> {
    let id = chi.torsion_id().ok_or(Error::NonTorsionInput)?;
    fiber_dims_at(&complex.data, id)
}

/// Cohomology dimensions over the function field `Q(zeta)(u_1, ..., u_b)`.
pub fn generic_dims_of(data: &MonodromyData) -> Result<Vec<usize>> {
    let k = data.field();
    let b = data.nvars();
    let r = data.rank();
    let ops: Vec<Vec<Vec<LPoly>>> = data
        .matrices()
        .iter()
        .enumerate()
        .map(|(j, m)| {
            let q: Vec<i32> = data.direction_vector(j).iter().map(|&x| x as i32).collect();
            (0..r)
                .map(|a| {
                    (0..r)
                        .map(|c| {
                            let v = LPoly::monomial(k, m[a][c].clone(), q.clone());
                            if a == c {
                                v.sub(k, &LPoly::constant(k, k.one(), b))
                            } else {
                                v
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let ranks: Vec<usize> = (0..data.directions())
        .map(|deg| bareiss_rank(k, &koszul_matrix(&ops, r, deg, &LPoly::zero(), |x| x.neg(k))))
        .collect::<Result<_>>()?;
    Ok(dims_from_ranks(&term_ranks(data), &ranks))
}

pub fn generic_dims(complex: &MellinComplex) -> Result<Vec<usize>> {
    generic_dims_of(&complex.data)
}

/// The same fiber dimensions computed from the complex over the group
/// algebra `Q(zeta)[pi / ell^n pi]`, restricted to the `chi`-isotypic
/// part: images of `e_chi`-vectors are checked to stay isotypic, and ranks
/// are read off the coordinate at the identity.
pub fn fiber_dims_via_group_ring(data: &MonodromyData, id: &TorsionId) -> Result<Vec<usize>> {
    let b = data.nvars();
    if id.exps.len() != b {
        return Err(Error::DimensionMismatch { expected: b, found: id.exps.len() });
    }
    let ell = data.ell();
    let n = id.level;
    let k = fiber_field(data, n);
    let side = ell.pow(n) as usize;
    let size = side.checked_pow(b as u32).filter(|s| *s <= 4096).ok_or_else(|| {
        Error::BudgetExceeded(format!("group algebra of ({ell}^{n})^{b} elements"))
    })?;
    let r = data.rank();
    let ops = embedded_ops(data, &k);
    let coords = |g: usize| -> Vec<usize> {
        let mut c = vec![0; b];
        let mut x = g;
        for ci in c.iter_mut().rev() {
            *ci = x % side;
            x /= side;
        }
        c
    };
    let index = |c: &[usize]| c.iter().fold(0, |acc, &x| acc * side + x);
    // chi(g)^{-1} for every group element
    let chi_inv: Vec<Cyclo> = (0..size)
        .map(|g| {
            let c: Vec<i64> = coords(g).iter().map(|&x| x as i64).collect();
            k.zeta_pow(-chi_power(&k, ell, id, &c))
        })
        .collect();
    let shifts: Vec<Vec<usize>> = (0..data.directions())
        .map(|j| {
            let q = data.direction_vector(j);
            (0..size)
                .map(|g| {
                    let c: Vec<usize> = coords(g)
                        .iter()
                        .zip(&q)
                        .map(|(&x, &qi)| (x as i64 - qi).rem_euclid(side as i64) as usize)
                        .collect();
                    index(&c)
                })
                .collect()
        })
        .collect();
    // D_j on F[G]^r: (D_j v)_g = M_j v_{g - q_j} - v_g
    let apply_op = |j: usize, v: &[Vec<Cyclo>]| -> Vec<Vec<Cyclo>> {
        (0..size)
            .map(|g| {
                let src = &v[shifts[j][g]];
                (0..r)
                    .map(|a| {
                        let mut acc = k.neg(&v[g][a]);
                        for c in 0..r {
                            acc = k.add(&acc, &k.mul(&ops[j][a][c], &src[c]));
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    };
    let bp = data.directions();
    let mut ranks = Vec::with_capacity(bp);
    for deg in 0..bp {
        let src = super::complex::subsets(bp, deg);
        let dst = super::complex::subsets(bp, deg + 1);
        let mut rows: Vec<Vec<Cyclo>> = Vec::new();
        for s in &src {
            for a in 0..r {
                let v: Vec<Vec<Cyclo>> = (0..size)
                    .map(|g| (0..r).map(|c| if c == a { chi_inv[g].clone() } else { k.zero() }).collect())
                    .collect();
                // image in K^{deg+1} (F[G]^r per subset)
                let mut image: Vec<Vec<Vec<Cyclo>>> = vec![vec![vec![k.zero(); r]; size]; dst.len()];
                for j in (0..bp).filter(|j| !s.contains(j)) {
                    let mut t = s.clone();
                    t.push(j);
                    t.sort();
                    let pos = dst.iter().position(|x| *x == t).expect("subset present");
                    let negative = s.iter().filter(|&&x| x < j).count() % 2 == 1;
                    let w = apply_op(j, &v);
                    for g in 0..size {
                        for c in 0..r {
                            let x = if negative { k.neg(&w[g][c]) } else { w[g][c].clone() };
                            image[pos][g][c] = k.add(&image[pos][g][c], &x);
                        }
                    }
                }
                // isotypic: image_g = chi(g)^{-1} image_0
                for blk in &image {
                    for g in 0..size {
                        for c in 0..r {
                            if blk[g][c] != k.mul(&chi_inv[g], &blk[0][c]) {
                                return Err(Error::Invariant("group-ring image left the isotypic part".into()));
                            }
                        }
                    }
                }
                rows.push(image.iter().flat_map(|blk| blk[0].clone()).collect());
            }
        }
        ranks.push(rank(&k, &rows));
    }
    Ok(dims_from_ranks(&term_ranks(data), &ranks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mellin::build_mellin_complex;

    fn id(level: u32, exps: &[u64]) -> TorsionId {
        TorsionId { level, exps: exps.to_vec() }
    }

    #[test]
    fn trivial_rank_one() {
        let d = MonodromyData::trivial(3, 1, 1);
        assert_eq!(fiber_dims_at(&d, &id(0, &[0])).unwrap(), vec![1, 1]);
        assert_eq!(fiber_dims_at(&d, &id(1, &[1])).unwrap(), vec![0, 0]);
        assert_eq!(generic_dims_of(&d).unwrap(), vec![0, 0]);
        let d2 = MonodromyData::trivial(3, 1, 2);
        assert_eq!(fiber_dims_at(&d2, &id(0, &[0, 0])).unwrap(), vec![1, 2, 1]);
        assert_eq!(generic_dims_of(&d2).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn twisted_point() {
        // D = zeta_4 (1 + X) - 1 vanishes at chi(e) = zeta_4^{-1}
        let d = MonodromyData::parse(2, "rank=1; M1=[[z4]]").unwrap();
        assert_eq!(fiber_dims_at(&d, &id(2, &[3])).unwrap(), vec![1, 1]);
        assert_eq!(fiber_dims_at(&d, &id(2, &[1])).unwrap(), vec![0, 0]);
        let k = build_mellin_complex(&d, 3, 6).unwrap();
        assert_eq!(generic_dims(&k).unwrap(), vec![0, 0]);
    }

    #[test]
    fn inflated_generic() {
        let d = MonodromyData::parse(3, "rank=1; M1=[[1]]; quotient=[[1,0]]").unwrap();
        assert_eq!(generic_dims_of(&d).unwrap(), vec![0, 0]);
        assert_eq!(fiber_dims_at(&d, &id(1, &[0, 2])).unwrap(), vec![1, 1]);
        assert_eq!(fiber_dims_at(&d, &id(1, &[1, 2])).unwrap(), vec![0, 0]);
    }

    #[test]
    fn group_ring_route_agrees() {
        let d = MonodromyData::parse(2, "rank=2; M1=[[z4,0],[0,1]]; M2=[[1,0],[0,-1]]").unwrap();
        for a in 0..4u64 {
            for b in 0..4u64 {
                let t = id(2, &[a, b]);
                assert_eq!(fiber_dims_at(&d, &t).unwrap(), fiber_dims_via_group_ring(&d, &t).unwrap(), "{t:?}");
            }
        }
    }
}
