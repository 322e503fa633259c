use rand::Rng;

use super::oracle;
use super::{ensure, Check, Ctx};
use crate::error::Error;
use crate::exact::CyclotomicField;
use crate::formal::{Component, QuasiLinearSet, TorsionId};
use crate::mellin::{
    fiber_dims_at, fiber_dims_via_group_ring, finite_level_limit_check, generic_dims_of, jumping_locus_of,
    level_points, verify_quasilinear, MonodromyData,
};

/// Rank-one data `M_j = zeta_{ell^level}^{k_j}`.
fn twisted(ell: u64, level: u32, ks: &[u64], quotient: Option<Vec<Vec<i64>>>) -> crate::Result<MonodromyData> {
    let f = CyclotomicField::new(ell, level);
    let mats = ks.iter().map(|&k| vec![vec![f.zeta_pow(k as i64)]]).collect();
    MonodromyData::new(f, 1, mats, quotient)
}

fn euler(dims: &[usize]) -> i64 {
    dims.iter().enumerate().map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
}

/// Checks every degree of the locus of `data` at level `n` against the
/// predicted quasi-linear set.
fn check_family(ctx: &mut Ctx, name: &str, data: &MonodromyData, predicted: &QuasiLinearSet, n: u32) -> Check {
    let b = data.nvars();
    for c in predicted.components() {
        ensure(oracle::saturated(data.ell(), b, &c.lattice), || format!("{name}: predicted lattice {:?} is not saturated", c.lattice))?;
    }
    let generic = generic_dims_of(data)?;
    ensure(generic.iter().all(|&d| d == 0), || format!("{name}: generic dims {generic:?}"))?;
    for i in 0..=data.directions() {
        let report = jumping_locus_of(data, i, 0, n)?;
        for (id, dims) in &report.fibers {
            ensure(euler(dims) == 0, || format!("{name}: Euler characteristic of {dims:?} at {:?}", id.exps))?;
        }
        let verdict = verify_quasilinear(&report, predicted, n)?;
        ensure(verdict.matches, || format!("{name}, i={i}, level {n}: {verdict}"))?;
        ctx.checks += 1;
    }
    Ok(())
}

/// Jumping loci of the trivial, torsion-twisted and inflated families
/// match their predicted torsion-translated subgroups.
pub(crate) fn mellin_loci(ctx: &mut Ctx) -> Check {
    for ell in [2u64, 3] {
        // unsaturated lattices must be refused
        let bad = vec![vec![ell as i64, 0]];
        ensure(!oracle::saturated(ell, 2, &bad), || "oracle accepts an unsaturated lattice".into())?;
        let refused = QuasiLinearSet::new(ell, 2, vec![Component { shift: TorsionId { level: 0, exps: vec![0, 0] }, lattice: bad }]);
        ensure(matches!(refused, Err(Error::NotSaturated)), || format!("lattice ({ell}, 0) accepted at ell={ell}"))?;

        for n in 1..=2u32 {
            for b in 1..=2usize {
                let data = MonodromyData::trivial(ell, 1, b);
                let set = QuasiLinearSet::points(ell, b, vec![TorsionId { level: 0, exps: vec![0; b] }])?;
                check_family(ctx, &format!("trivial b={b} ell={ell}"), &data, &set, n)?;

                let level = ctx.rng.gen_range(1..=2u32);
                let modulus = ell.pow(level);
                let ks: Vec<u64> = (0..b).map(|_| ctx.rng.gen_range(0..modulus)).collect();
                let data = twisted(ell, level, &ks, None)?;
                let shift = TorsionId::new(ell, level, ks.iter().map(|k| (modulus - k) % modulus).collect())?;
                let set = QuasiLinearSet::points(ell, b, vec![shift])?;
                check_family(ctx, &format!("twisted {ks:?}/{modulus} ell={ell}"), &data, &set, n)?;
            }
            let level = ctx.rng.gen_range(1..=2u32);
            let modulus = ell.pow(level);
            let k = ctx.rng.gen_range(0..modulus);
            let data = twisted(ell, level, &[k], Some(vec![vec![1, 0]]))?;
            let shift = TorsionId::new(ell, level, vec![(modulus - k) % modulus, 0])?;
            let set = QuasiLinearSet::new(ell, 2, vec![Component { shift: shift.clone(), lattice: vec![vec![1, 0]] }])?;
            check_family(ctx, &format!("inflated {k}/{modulus} ell={ell}"), &data, &set, n)?;

            // the transposed subgroup is a mismatch with witnesses on both sides
            let wrong = QuasiLinearSet::new(ell, 2, vec![Component { shift, lattice: vec![vec![0, 1]] }])?;
            let report = jumping_locus_of(&data, 0, 0, n)?;
            let v = verify_quasilinear(&report, &wrong, n)?;
            ensure(!v.matches && !v.missing.is_empty() && !v.extra.is_empty(), || {
                format!("inflated locus matched the transposed subgroup at ell={ell} n={n}")
            })?;
            ctx.checks += 1;
        }
    }
    Ok(())
}

fn integer_instances(ell: u64) -> Vec<&'static str> {
    let mut v = vec![
        "rank=1; M1=[[1]]",
        "rank=1; M1=[[-1]]",
        "rank=2; M1=[[0,1],[1,0]]",
        "rank=2; M1=[[1,1],[0,1]]",
        "rank=1; M1=[[1]]; M2=[[1]]",
        "rank=1; M1=[[-1]]; M2=[[1]]",
        "rank=2; M1=[[0,1],[1,0]]; M2=[[1,0],[0,1]]",
        "rank=2; M1=[[1,1],[0,1]]; M2=[[1,0],[0,1]]",
        "rank=2; M1=[[0,1],[1,0]]; M2=[[-1,0],[0,-1]]",
        "rank=1; M1=[[1]]; quotient=[[1,0]]",
    ];
    if ell == 3 {
        v.push("rank=1; M1=[[2]]");
        v.push("rank=2; M1=[[0,1],[1,0]]; M2=[[0,2],[2,0]]");
    }
    v
}

fn cyclotomic_instances(ell: u64) -> Vec<String> {
    let z = ell * ell;
    vec![
        format!("rank=1; M1=[[z{ell}]]"),
        format!("rank=1; M1=[[z{z}]]; M2=[[z{z}^2]]"),
        format!("rank=2; M1=[[z{ell},0],[0,1]]; M2=[[1,0],[0,z{z}]]"),
        format!("rank=1; M1=[[z{z}^3]]; quotient=[[1,0]]"),
    ]
}

/// Finite-level cohomology of the integer families stabilizes, and the two
/// fiber computations agree on all torsion points of level <= 2.
pub(crate) fn base_change(ctx: &mut Ctx) -> Check {
    let max_level = ctx.count(2, 3) as u32;
    for ell in [2u64, 3] {
        for text in integer_instances(ell) {
            let data = match MonodromyData::parse(ell, text) {
                Ok(d) => d,
                Err(e) => return Err(super::Stop::Violated(format!("instance {text}: {e}"))),
            };
            let v = finite_level_limit_check(&data, max_level, 4096)?;
            ensure(v.pass(), || format!("ell={ell} {text}: {v}"))?;
            ctx.checks += 1;
        }
        let mut all: Vec<String> = integer_instances(ell).iter().map(|s| s.to_string()).collect();
        all.extend(cyclotomic_instances(ell));
        for text in &all {
            let data = MonodromyData::parse(ell, text).map_err(|e| super::Stop::Violated(format!("instance {text}: {e}")))?;
            if data.directions() == 0 {
                continue;
            }
            let generic = generic_dims_of(&data)?;
            let top = if ctx.profile == super::Profile::Quick && data.nvars() == 2 && ell == 3 { 1 } else { 2 };
            for n in 0..=top {
                for id in level_points(ell, n, data.nvars())? {
                    let a = fiber_dims_at(&data, &id)?;
                    let b = fiber_dims_via_group_ring(&data, &id)?;
                    ensure(a == b, || format!("ell={ell} {text} at {:?}/{}: {a:?} vs {b:?}", id.exps, ell.pow(n)))?;
                    ensure(a.iter().zip(&generic).all(|(x, y)| x >= y), || {
                        format!("ell={ell} {text}: fiber {a:?} below generic {generic:?}")
                    })?;
                    ensure(euler(&a) == 0, || format!("ell={ell} {text}: Euler characteristic of {a:?}"))?;
                    ctx.checks += 1;
                }
            }
        }
    }
    Ok(())
}
