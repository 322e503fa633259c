use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::monomial::Exponent;
use super::series::TruncatedSeries;
use super::sigma::SigmaAction;
use crate::error::{Error, Result};
use crate::exact::{EchelonBasis, Rationals};
use crate::padic::PadicScalar;

/// A polynomial with rational coefficients in monomial order.
pub type RationalPoly = Vec<(Exponent, BigRational)>;

#[derive(Clone, Debug)]
pub struct GradedVerdict {
    /// `V` is `sigma`-stable (re-checked on the computed basis).
    pub closure_is_stable: bool,
    /// The span of the generators was already `sigma`-stable.
    pub input_span_stable: bool,
    /// `V` is the sum of its homogeneous pieces.
    pub graded: bool,
    /// Each generator's homogeneous components lie in `V`.
    pub components_in_closure: bool,
    pub input_dim: usize,
    pub closure_dim: usize,
    /// Reduced echelon basis of `V`, ordered by leading monomial.
    pub closure_basis: Vec<RationalPoly>,
}

fn lift(x: &PadicScalar) -> Result<BigRational> {
    if x.params().degree() != 1 {
        return Err(Error::RankUncertain("exact lifting needs coefficients in Q_ell".into()));
    }
    if x.abs_precision() < x.params().precision() as i64 {
        return Err(Error::RankUncertain(format!("coefficient {x} is not known to full precision")));
    }
    x.rational_lift()
        .ok_or_else(|| Error::RankUncertain(format!("coefficient {x} has no small rational lift")))
}

struct Space {
    monomials: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
}

impl Space {
    fn new(nvars: usize, n: u32) -> Self {
        let monomials = if n == 0 { Vec::new() } else { Exponent::all_up_to(nvars, n - 1) };
        let index = monomials.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        Space { monomials, index }
    }

    fn vector(&self, g: &TruncatedSeries) -> Result<Vec<BigRational>> {
        let mut v = vec![BigRational::zero(); self.monomials.len()];
        for (e, c) in g.terms() {
            if let Some(&i) = self.index.get(e) {
                v[i] = lift(c)?;
            }
        }
        Ok(v)
    }

    fn homogeneous(&self, v: &[BigRational], d: u32) -> Vec<BigRational> {
        v.iter()
            .zip(&self.monomials)
            .map(|(x, e)| if e.degree() == d { x.clone() } else { BigRational::zero() })
            .collect()
    }
}

type Sparse = HashMap<Exponent, BigRational>;

fn sparse_mul(a: &Sparse, b: &Sparse, cap: u32) -> Sparse {
    let mut out = Sparse::new();
    for (e1, c1) in a {
        for (e2, c2) in b {
            let e = e1.add(e2);
            if e.degree() <= cap {
                *out.entry(e).or_insert_with(BigRational::zero) += c1 * c2;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Matrix of `sigma` on `A / M^n` over `Q`, one image vector per monomial.
fn action_matrix(space: &Space, sigma: &[Vec<BigRational>], nvars: usize, n: u32) -> Vec<Vec<BigRational>> {
    let cap = n.saturating_sub(1);
    let linear: Vec<Sparse> = (0..nvars)
        .map(|j| {
            (0..nvars)
                .filter(|&i| !sigma[i][j].is_zero())
                .map(|i| (Exponent::unit(nvars, i), sigma[i][j].clone()))
                .collect()
        })
        .collect();
    space
        .monomials
        .iter()
        .map(|e| {
            let mut acc: Sparse = [(Exponent::zero(nvars), BigRational::one())].into_iter().collect();
            for (j, &k) in e.0.iter().enumerate() {
                for _ in 0..k {
                    acc = sparse_mul(&acc, &linear[j], cap);
                }
            }
            let mut v = vec![BigRational::zero(); space.monomials.len()];
            for (m, c) in acc {
                v[space.index[&m]] = c;
            }
            v
        })
        .collect()
}

fn apply(images: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); v.len()];
    for (x, img) in v.iter().zip(images) {
        if x.is_zero() {
            continue;
        }
        for (o, y) in out.iter_mut().zip(img) {
            if !y.is_zero() {
                *o += x * y;
            }
        }
    }
    out
}

/// Smallest `sigma`-stable subspace of `A/M^n` containing the generators,
/// computed exactly over `Q`, and whether it is graded by degree.
pub fn graded_closure_check(generators: &[TruncatedSeries], sigma: &SigmaAction, n: u32) -> Result<GradedVerdict> {
    let b = sigma.dim();
    for g in generators {
        if g.nvars() != b {
            return Err(Error::DimensionMismatch { expected: b, found: g.nvars() });
        }
        if n > g.degree() + 1 {
            return Err(Error::InvalidParams(format!("n = {n} exceeds the truncation degree {} + 1", g.degree())));
        }
    }
    let sig: Vec<Vec<BigRational>> = sigma
        .matrix()
        .iter()
        .map(|row| row.iter().map(lift).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let space = Space::new(b, n);
    let width = space.monomials.len();
    let images = action_matrix(&space, &sig, b, n);

    let gens: Vec<Vec<BigRational>> = generators.iter().map(|g| space.vector(g)).collect::<Result<_>>()?;
    let mut input = EchelonBasis::new(Rationals, width);
    for v in &gens {
        input.insert(v);
    }
    let input_span_stable = input.rows().iter().all(|r| input.contains(&apply(&images, r)));

    let mut closure = EchelonBasis::new(Rationals, width);
    let mut queue: Vec<Vec<BigRational>> = gens.clone();
    while let Some(v) = queue.pop() {
        if closure.insert(&v) {
            queue.push(apply(&images, &v));
        }
    }
    let closure_is_stable = closure.rows().iter().all(|r| closure.contains(&apply(&images, r)));
    let max_deg = n.saturating_sub(1);
    let graded = closure
        .rows()
        .iter()
        .all(|r| (0..=max_deg).all(|d| closure.contains(&space.homogeneous(r, d))));
    let components_in_closure = gens
        .iter()
        .all(|g| (0..=max_deg).all(|d| closure.contains(&space.homogeneous(g, d))));
    if graded && !components_in_closure {
        return Err(Error::Invariant("graded closure misses a generator component".into()));
    }

    let mut rows: Vec<Vec<BigRational>> = closure.rows().to_vec();
    rows.sort_by_key(|r| r.iter().position(|x| !x.is_zero()));
    let closure_basis = rows
        .iter()
        .map(|r| {
            r.iter()
                .zip(&space.monomials)
                .filter(|(x, _)| !x.is_zero())
                .map(|(x, e)| (e.clone(), x.clone()))
                .collect()
        })
        .collect();
    Ok(GradedVerdict {
        closure_is_stable,
        input_span_stable,
        graded,
        components_in_closure,
        input_dim: input.dim(),
        closure_dim: closure.dim(),
        closure_basis,
    })
}

/// Renders `c_1*T1^2*T2 + ...`; the zero polynomial prints as `0`.
pub fn format_rational_poly(p: &RationalPoly) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let terms: Vec<String> = p
        .iter()
        .map(|(e, c)| {
            let mono: Vec<String> = e
                .0
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("T{}", i + 1) } else { format!("T{}^{k}", i + 1) })
                .collect();
            match (mono.is_empty(), c.is_one()) {
                (true, _) => c.to_string(),
                (false, true) => mono.join("*"),
                (false, false) => format!("{c}*{}", mono.join("*")),
            }
        })
        .collect();
    terms.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::RingParams;

    fn setup() -> (std::sync::Arc<crate::padic::RingParams>, SigmaAction) {
        let p = RingParams::trivial(5, 20).unwrap();
        let s = SigmaAction::diagonal_ints(&p, &[5, 5]).unwrap();
        (p, s)
    }

    #[test]
    fn homogeneous_generator_is_stable() {
        let (p, s) = setup();
        let g = TruncatedSeries::from_int_terms(&p, 2, 3, &[(&[1, 0], 1), (&[0, 1], 1)]).unwrap();
        let v = graded_closure_check(&[g], &s, 3).unwrap();
        assert!(v.input_span_stable && v.graded);
        assert_eq!(v.closure_dim, 1);
    }

    #[test]
    fn mixed_degrees_split() {
        let (p, s) = setup();
        let g = TruncatedSeries::from_int_terms(&p, 2, 3, &[(&[1, 0], 1), (&[0, 2], 1)]).unwrap();
        let v = graded_closure_check(&[g], &s, 3).unwrap();
        assert!(!v.input_span_stable);
        assert!(v.graded && v.closure_is_stable && v.components_in_closure);
        let shown: Vec<String> = v.closure_basis.iter().map(format_rational_poly).collect();
        assert_eq!(shown, ["T1", "T2^2"]);
    }

    #[test]
    fn inexact_input_refused() {
        let (p, s) = setup();
        let c = PadicScalar::one(&p).truncate_precision(4);
        let g = TruncatedSeries::from_terms(&p, 2, 3, [(Exponent::unit(2, 0), c)]).unwrap();
        assert!(matches!(graded_closure_check(&[g], &s, 3), Err(Error::RankUncertain(_))));
    }

    #[test]
    fn unipotent_closure_grows() {
        // a unipotent action enlarges the span but keeps it graded
        let p = RingParams::trivial(5, 20).unwrap();
        let s = SigmaAction::from_int_matrix(&p, &[vec![1, 1], vec![0, 1]]).unwrap();
        let g = TruncatedSeries::from_int_terms(&p, 2, 3, &[(&[0, 1], 1)]).unwrap();
        let v = graded_closure_check(&[g], &s, 2).unwrap();
        assert!(!v.input_span_stable);
        assert_eq!(v.closure_dim, 2);
        assert!(v.graded);
    }

    #[test]
    fn resonant_weights_break_grading() {
        // alpha_1 = alpha_2^2 makes T1 + T2^2 an eigenvector
        let p = RingParams::trivial(5, 20).unwrap();
        let s = SigmaAction::diagonal_ints(&p, &[4, 2]).unwrap();
        let g = TruncatedSeries::from_int_terms(&p, 2, 3, &[(&[1, 0], 1), (&[0, 2], 1)]).unwrap();
        let v = graded_closure_check(&[g], &s, 3).unwrap();
        assert!(v.input_span_stable);
        assert!(!v.graded);
        assert!(!v.components_in_closure);
    }
}
