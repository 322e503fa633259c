//! Linear substitutions `T_j -> sum_i sigma_ij T_i` and their
//! diagonalization over `O_E`.

use std::sync::Arc;

use super::monomial::Exponent;
use super::series::TruncatedSeries;
use crate::error::{Error, Result};
use crate::padic::{same_ring, PadicScalar, RingParams};

pub type Matrix = Vec<Vec<PadicScalar>>;

/// A `b x b` matrix over `O_E` acting on `O_E<T_1, ..., T_b>`.
#[derive(Clone, Debug)]
pub struct SigmaAction {
    params: Arc<RingParams>,
    matrix: Matrix,
    diagonal: bool,
    eigenvalues: Option<Vec<PadicScalar>>,
    charpoly: Option<Vec<i64>>,
    int_eigenvalues: Option<Vec<i64>>,
}

impl SigmaAction {
    pub fn diagonal(params: &Arc<RingParams>, alphas: Vec<PadicScalar>) -> Result<Self> {
        let b = alphas.len();
        let mut matrix = vec![vec![PadicScalar::zero(params); b]; b];
        for (i, a) in alphas.iter().enumerate() {
            if !same_ring(a.params(), params) {
                return Err(Error::ParamsMismatch);
            }
            matrix[i][i] = a.clone();
        }
        Ok(SigmaAction { params: params.clone(), matrix, diagonal: true, eigenvalues: Some(alphas), charpoly: None, int_eigenvalues: None })
    }

    /// Diagonal action with integer eigenvalues; the characteristic
    /// polynomial `prod (x - alpha_i)` is recorded.
    pub fn diagonal_ints(params: &Arc<RingParams>, alphas: &[i64]) -> Result<Self> {
        let mut s = Self::diagonal(params, alphas.iter().map(|&a| PadicScalar::from_int(params, a as i128)).collect())?;
        let mut cp: Vec<i128> = vec![1];
        for &a in alphas {
            cp = poly_mul_i128(&cp, &[-(a as i128), 1]);
        }
        s.charpoly = to_i64(&cp);
        s.int_eigenvalues = Some(alphas.to_vec());
        Ok(s)
    }

    pub fn from_matrix(params: &Arc<RingParams>, matrix: Matrix) -> Result<Self> {
        let b = matrix.len();
        for row in &matrix {
            if row.len() != b {
                return Err(Error::DimensionMismatch { expected: b, found: row.len() });
            }
            if row.iter().any(|x| !same_ring(x.params(), params)) {
                return Err(Error::ParamsMismatch);
            }
        }
        let diagonal = (0..b).all(|i| (0..b).all(|j| i == j || matrix[i][j].is_zero()));
        let eigenvalues = diagonal.then(|| (0..b).map(|i| matrix[i][i].clone()).collect());
        Ok(SigmaAction { params: params.clone(), matrix, diagonal, eigenvalues, charpoly: None, int_eigenvalues: None })
    }

    pub fn from_int_matrix(params: &Arc<RingParams>, rows: &[Vec<i64>]) -> Result<Self> {
        let matrix = rows
            .iter()
            .map(|r| r.iter().map(|&x| PadicScalar::from_int(params, x as i128)).collect())
            .collect();
        let mut s = Self::from_matrix(params, matrix)?;
        let int_rows: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        s.charpoly = to_i64(&int_charpoly(&int_rows));
        if s.diagonal {
            s.int_eigenvalues = Some((0..rows.len()).map(|i| rows[i][i]).collect());
        }
        Ok(s)
    }

    pub fn params(&self) -> &Arc<RingParams> {
        &self.params
    }

    /// Eigenvalues when the action was built from a diagonal integer matrix.
    pub fn int_eigenvalues(&self) -> Option<&[i64]> {
        self.int_eigenvalues.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn is_diagonal(&self) -> bool {
        self.diagonal
    }

    pub fn eigenvalues(&self) -> Option<&[PadicScalar]> {
        self.eigenvalues.as_deref()
    }

    /// Integer characteristic polynomial (low degree first), when known.
    pub fn charpoly(&self) -> Option<&[i64]> {
        self.charpoly.as_deref()
    }

    pub fn with_charpoly(mut self, cp: Vec<i64>) -> Self {
        self.charpoly = Some(cp);
        self
    }

    /// `alpha^n = prod alpha_i^{n_i}` for a diagonal action.
    pub fn alpha_pow(&self, n: &Exponent) -> Result<PadicScalar> {
        let alphas = self.eigenvalues.as_ref().filter(|_| self.diagonal).ok_or(Error::NotDiagonal)?;
        if n.nvars() != alphas.len() {
            return Err(Error::DimensionMismatch { expected: alphas.len(), found: n.nvars() });
        }
        let mut acc = PadicScalar::one(&self.params);
        for (a, &k) in alphas.iter().zip(&n.0) {
            if k > 0 {
                acc = acc.mul(&a.pow(k as u64));
            }
        }
        Ok(acc)
    }

    pub fn determinant(&self) -> PadicScalar {
        det(&self.params, &self.matrix)
    }

    /// True when the determinant is a unit, i.e. `sigma in GL_b(O_E)`.
    pub fn is_invertible(&self) -> bool {
        self.determinant().is_unit()
    }

    /// Characteristic polynomial over `O_E`, low degree first.
    pub fn characteristic_polynomial(&self) -> Vec<PadicScalar> {
        let p = &self.params;
        let b = self.dim();
        let entries: Vec<Vec<Vec<PadicScalar>>> = (0..b)
            .map(|i| {
                (0..b)
                    .map(|j| {
                        let a = self.matrix[i][j].neg();
                        if i == j {
                            vec![a, PadicScalar::one(p)]
                        } else {
                            vec![a]
                        }
                    })
                    .collect()
            })
            .collect();
        laplace(
            &entries,
            &vec![PadicScalar::one(p)],
            &|a, b| poly_mul(p, a, b),
            &|a, b| poly_add(p, a, b),
            &|a| a.iter().map(|x| x.neg()).collect(),
        )
    }

    /// Conjugates `sigma = P D P^{-1}` with `D` diagonal and `P` in
    /// `GL_b(O_E)`.  Requires a characteristic polynomial splitting over `E`
    /// with pairwise distinct residues of the roots.
    pub fn diagonalize(&self) -> Result<Diagonalization> {
        let p = &self.params;
        let b = self.dim();
        if self.diagonal {
            let id = identity(p, b);
            return Ok(Diagonalization { diagonal: self.clone(), basis: id.clone(), inverse: id });
        }
        let cp = self.characteristic_polynomial();
        let roots = simple_roots(p, &cp)?;
        if roots.len() < b {
            return Err(Error::NotDiagonal);
        }
        let mut cols: Vec<Vec<PadicScalar>> = Vec::with_capacity(b);
        for alpha in &roots {
            let shifted: Matrix = (0..b)
                .map(|i| {
                    (0..b)
                        .map(|j| if i == j { self.matrix[i][j].sub(alpha) } else { self.matrix[i][j].clone() })
                        .collect()
                })
                .collect();
            let adj = adjugate(p, &shifted);
            let col = (0..b)
                .find(|&k| (0..b).any(|i| adj[i][k].is_unit()))
                .ok_or(Error::NotDiagonal)?;
            cols.push((0..b).map(|i| adj[i][col].clone()).collect());
        }
        let basis: Matrix = (0..b).map(|i| (0..b).map(|k| cols[k][i].clone()).collect()).collect();
        let d = det(p, &basis);
        if !d.is_unit() {
            return Err(Error::NotDiagonal);
        }
        let dinv = d.inverse()?;
        let inverse: Matrix = adjugate(p, &basis)
            .into_iter()
            .map(|row| row.into_iter().map(|x| x.mul(&dinv)).collect())
            .collect();
        let diagonal = Self::diagonal(p, roots)?;
        Ok(Diagonalization { diagonal, basis, inverse })
    }
}

/// `sigma = basis * diagonal * inverse`.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    pub diagonal: SigmaAction,
    pub basis: Matrix,
    pub inverse: Matrix,
}

/// Applies the substitution `T_j -> sum_i a_ij T_i`.
pub fn apply_matrix(g: &TruncatedSeries, a: &Matrix) -> Result<TruncatedSeries> {
    let b = g.nvars();
    if a.len() != b {
        return Err(Error::DimensionMismatch { expected: b, found: a.len() });
    }
    let p = g.params();
    let images: Vec<TruncatedSeries> = (0..b)
        .map(|j| {
            TruncatedSeries::from_terms(p, b, g.degree(), (0..b).map(|i| (Exponent::unit(b, i), a[i][j].clone())))
        })
        .collect::<Result<_>>()?;
    g.substitute(&images)
}

pub fn sigma_apply(g: &TruncatedSeries, sigma: &SigmaAction) -> Result<TruncatedSeries> {
    if !same_ring(g.params(), &sigma.params) {
        return Err(Error::ParamsMismatch);
    }
    if sigma.diagonal {
        let mut out = TruncatedSeries::zero(g.params(), g.nvars(), g.degree());
        if sigma.dim() != g.nvars() {
            return Err(Error::DimensionMismatch { expected: g.nvars(), found: sigma.dim() });
        }
        for (e, c) in g.terms() {
            out.set(e.clone(), c.mul(&sigma.alpha_pow(e)?));
        }
        return Ok(out);
    }
    apply_matrix(g, &sigma.matrix)
}

fn identity(p: &Arc<RingParams>, b: usize) -> Matrix {
    (0..b)
        .map(|i| (0..b).map(|j| if i == j { PadicScalar::one(p) } else { PadicScalar::zero(p) }).collect())
        .collect()
}

fn laplace<T: Clone>(
    m: &[Vec<T>],
    one: &T,
    mul: &dyn Fn(&T, &T) -> T,
    add: &dyn Fn(&T, &T) -> T,
    neg: &dyn Fn(&T) -> T,
) -> T {
    let n = m.len();
    if n == 0 {
        return one.clone();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc: Option<T> = None;
    for j in 0..n {
        let minor: Vec<Vec<T>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let mut term = mul(&m[0][j], &laplace(&minor, one, mul, add, neg));
        if j % 2 == 1 {
            term = neg(&term);
        }
        acc = Some(match acc {
            None => term,
            Some(a) => add(&a, &term),
        });
    }
    acc.unwrap_or_else(|| one.clone())
}

pub(crate) fn det(p: &Arc<RingParams>, m: &Matrix) -> PadicScalar {
    laplace(m, &PadicScalar::one(p), &|a, b| a.mul(b), &|a, b| a.add(b), &|a| a.neg())
}

pub(crate) fn adjugate(p: &Arc<RingParams>, m: &Matrix) -> Matrix {
    let n = m.len();
    let mut adj = vec![vec![PadicScalar::zero(p); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Matrix = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c].clone()).collect())
                .collect();
            let d = det(p, &minor);
            adj[i][j] = if (i + j) % 2 == 1 { d.neg() } else { d };
        }
    }
    adj
}

fn poly_add(p: &Arc<RingParams>, a: &[PadicScalar], b: &[PadicScalar]) -> Vec<PadicScalar> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x.add(y),
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => PadicScalar::zero(p),
        })
        .collect()
}

fn poly_mul(p: &Arc<RingParams>, a: &[PadicScalar], b: &[PadicScalar]) -> Vec<PadicScalar> {
    let mut out = vec![PadicScalar::zero(p); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

fn poly_eval(p: &Arc<RingParams>, f: &[PadicScalar], x: &PadicScalar) -> PadicScalar {
    f.iter().rev().fold(PadicScalar::zero(p), |acc, c| acc.mul(x).add(c))
}

fn poly_derivative(p: &Arc<RingParams>, f: &[PadicScalar]) -> Vec<PadicScalar> {
    f.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.mul(&PadicScalar::from_int(p, k as i128)))
        .collect()
}

/// Roots of `f` in `O_E` lifting simple roots of its reduction.
fn simple_roots(p: &Arc<RingParams>, f: &[PadicScalar]) -> Result<Vec<PadicScalar>> {
    let df = poly_derivative(p, f);
    let ell = p.prime();
    let fdeg = p.f() as usize;
    let count = p.residue_cardinality();
    let mut roots = Vec::new();
    for idx in 0..count {
        let mut digits = vec![0i64; fdeg.max(1)];
        let mut r = idx;
        for d in digits.iter_mut() {
            *d = (r % ell) as i64;
            r /= ell;
        }
        // residue digits are coordinates in the powers of the generator
        let mut x = if p.kind() == crate::padic::ExtensionKind::Unramified {
            PadicScalar::from_poly(p, &digits)
        } else {
            PadicScalar::from_int(p, digits[0] as i128)
        };
        if poly_eval(p, f, &x).digit_valuation() == Some(0) || !poly_eval(p, &df, &x).is_unit() {
            continue;
        }
        for _ in 0..64 {
            let fx = poly_eval(p, f, &x);
            if fx.is_zero() {
                break;
            }
            x = x.sub(&fx.checked_div(&poly_eval(p, &df, &x))?);
        }
        if !poly_eval(p, f, &x).is_zero() {
            return Err(Error::PrecisionExhausted);
        }
        roots.push(x);
    }
    Ok(roots)
}

fn poly_mul_i128(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn int_charpoly(m: &[Vec<i128>]) -> Vec<i128> {
    let b = m.len();
    let entries: Vec<Vec<Vec<i128>>> = (0..b)
        .map(|i| (0..b).map(|j| if i == j { vec![-m[i][j], 1] } else { vec![-m[i][j]] }).collect())
        .collect();
    laplace(
        &entries,
        &vec![1],
        &|a, b| poly_mul_i128(a, b),
        &|a, b| {
            let n = a.len().max(b.len());
            (0..n).map(|i| a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)).collect()
        },
        &|a| a.iter().map(|x| -x).collect(),
    )
}

fn to_i64(v: &[i128]) -> Option<Vec<i64>> {
    v.iter().map(|&x| i64::try_from(x).ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(p: &Arc<RingParams>, nvars: usize, terms: &[(&[u32], i64)]) -> TruncatedSeries {
        TruncatedSeries::from_int_terms(p, nvars, 4, terms).unwrap()
    }

    #[test]
    fn diagonal_scales_monomials() {
        let p = RingParams::trivial(5, 10).unwrap();
        let s = SigmaAction::diagonal_ints(&p, &[2, 3]).unwrap();
        let got = sigma_apply(&ints(&p, 2, &[(&[1, 1], 1)]), &s).unwrap();
        assert!(got.eq_within_precision(&ints(&p, 2, &[(&[1, 1], 6)])));
        assert_eq!(s.charpoly(), Some(&[6, -5, 1][..]));
    }

    #[test]
    fn swap_moves_variables() {
        let p = RingParams::trivial(5, 10).unwrap();
        let s = SigmaAction::from_int_matrix(&p, &[vec![0, 1], vec![1, 0]]).unwrap();
        let got = sigma_apply(&ints(&p, 2, &[(&[1, 0], 1)]), &s).unwrap();
        assert!(got.eq_within_precision(&ints(&p, 2, &[(&[0, 1], 1)])));
        assert_eq!(s.charpoly(), Some(&[-1, 0, 1][..]));
    }

    #[test]
    fn diagonalization_conjugates() {
        let p = RingParams::trivial(7, 12).unwrap();
        // eigenvalues 2 and 5, distinct mod 7
        let s = SigmaAction::from_int_matrix(&p, &[vec![3, 1], vec![2, 4]]).unwrap();
        let dg = s.diagonalize().unwrap();
        let g = ints(&p, 2, &[(&[0, 0], 1), (&[1, 0], 1), (&[1, 1], 3), (&[0, 2], 2)]);
        let lhs = sigma_apply(&g, &s).unwrap();
        let conj = apply_matrix(&g, &dg.inverse).unwrap();
        let mid = sigma_apply(&conj, &dg.diagonal).unwrap();
        let rhs = apply_matrix(&mid, &dg.basis).unwrap();
        assert!(lhs.eq_within_precision(&rhs));
        let mut e: Vec<i128> = dg.diagonal.eigenvalues().unwrap().iter().map(|x| x.balanced_integer().unwrap()).collect();
        e.sort();
        assert_eq!(e, [2, 5]);
    }

    #[test]
    fn repeated_residues_refused() {
        let p = RingParams::trivial(5, 10).unwrap();
        let s = SigmaAction::from_int_matrix(&p, &[vec![1, 1], vec![0, 6]]).unwrap();
        assert!(matches!(s.diagonalize(), Err(Error::NotDiagonal)));
    }
}
