use std::fmt;

use super::group_ring::{comultiply, ell_power_isogeny, inversion_twist, GroupRingElement};
use crate::error::Result;
use crate::tate::TruncatedSeries;

/// Hopf-algebra identities of one group-ring element at its truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfReport {
    pub counit: bool,
    pub coassociative: bool,
    /// `[ell^a] o [ell^c] = [ell^(a+c)]` on the element.
    pub isogeny_composition: bool,
    pub inversion_involution: bool,
    /// `(1 + X_i) [-1](1 + X_i) = 1` for every coordinate.
    pub antipode: bool,
}

impl HopfReport {
    pub fn pass(&self) -> bool {
        self.counit && self.coassociative && self.isogeny_composition && self.inversion_involution && self.antipode
    }
}

impl fmt::Display for HopfReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "counit={} coassociative={} isogeny={} involution={} antipode={}",
            self.counit, self.coassociative, self.isogeny_composition, self.inversion_involution, self.antipode
        )
    }
}

fn law(x: &TruncatedSeries, y: &TruncatedSeries) -> Result<TruncatedSeries> {
    x.add(y)?.add(&x.mul(y)?)
}

fn pairs(g: &TruncatedSeries, first: &[TruncatedSeries], second: &[TruncatedSeries]) -> Result<TruncatedSeries> {
    let images: Vec<TruncatedSeries> = first.iter().chain(second).cloned().collect();
    g.substitute(&images)
}

pub fn hopf_invariants(g: &GroupRingElement, a: u32, c: u32) -> Result<HopfReport> {
    let p = g.params().clone();
    let (b, d) = (g.nvars(), g.degree());
    let var = |n: usize, i: usize| TruncatedSeries::variable(&p, n, d, i);

    let dg = comultiply(g)?;
    let xs: Vec<TruncatedSeries> = (0..b).map(|i| var(b, i)).collect();
    let zeros = vec![TruncatedSeries::zero(&p, b, d); b];
    let counit = pairs(&dg, &xs, &zeros)?.eq_within_precision(g) && pairs(&dg, &zeros, &xs)?.eq_within_precision(g);

    let z = |k: usize, i: usize| var(3 * b, k * b + i);
    let lf: Vec<TruncatedSeries> = (0..b).map(|i| law(&z(0, i), &z(1, i))).collect::<Result<_>>()?;
    let ls: Vec<TruncatedSeries> = (0..b).map(|i| z(2, i)).collect();
    let rf: Vec<TruncatedSeries> = (0..b).map(|i| z(0, i)).collect();
    let rs: Vec<TruncatedSeries> = (0..b).map(|i| law(&z(1, i), &z(2, i))).collect::<Result<_>>()?;
    let coassociative = pairs(&dg, &lf, &ls)?.eq_within_precision(&pairs(&dg, &rf, &rs)?);

    let isogeny_composition =
        ell_power_isogeny(&ell_power_isogeny(g, a)?, c)?.eq_within_precision(&ell_power_isogeny(g, a + c)?);
    let inversion_involution = inversion_twist(&inversion_twist(g)?)?.eq_within_precision(g);

    let one = TruncatedSeries::one(&p, b, d);
    let mut antipode = true;
    for x in &xs {
        let prod = one.add(x)?.mul(&one.add(&inversion_twist(x)?)?)?;
        antipode &= prod.eq_within_precision(&one);
    }
    Ok(HopfReport { counit, coassociative, isogeny_composition, inversion_involution, antipode })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::RingParams;

    #[test]
    fn holds_on_a_small_element() {
        let p = RingParams::trivial(3, 10).unwrap();
        let g = TruncatedSeries::from_int_terms(&p, 2, 3, &[(&[0, 0], 2), (&[1, 0], -1), (&[1, 1], 4), (&[0, 3], 7)]).unwrap();
        let r = hopf_invariants(&g, 1, 1).unwrap();
        assert!(r.pass(), "{r}");
    }
}
