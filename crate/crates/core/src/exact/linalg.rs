//! Gaussian elimination over an exact field.

use super::field::Field;

/// Incrementally maintained row-echelon basis of a subspace of `F^n`.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F: Field> {
    field: F,
    width: usize,
    /// Rows normalized to a leading 1 at `pivots[i]`.
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field + Clone> EchelonBasis<F> {
    pub fn new(field: F, width: usize) -> Self {
        EchelonBasis { field, width, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if f.is_zero(&v[p]) {
                continue;
            }
            let c = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !f.is_zero(r) {
                    *x = f.sub(x, &f.mul(&c, r));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        assert_eq!(v.len(), self.width);
        self.reduce(v).iter().all(|x| self.field.is_zero(x))
    }

    /// Adds `v`; returns true when it was independent of the current basis.
    pub fn insert(&mut self, v: &[F::Elem]) -> bool {
        assert_eq!(v.len(), self.width);
        let f = self.field.clone();
        let r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&r[p]);
        let r: Vec<F::Elem> = r.iter().map(|x| f.mul(x, &inv)).collect();
        // keep earlier rows reduced at the new pivot
        for row in self.rows.iter_mut() {
            if !f.is_zero(&row[p]) {
                let c = row[p].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    *x = f.sub(x, &f.mul(&c, y));
                }
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        true
    }

    pub fn rows(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }
}

/// Rank of a matrix given by rows.
pub fn rank<F: Field + Clone>(field: &F, rows: &[Vec<F::Elem>]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let width = first.len();
    let mut rows: Vec<Vec<F::Elem>> = rows.to_vec();
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&i| !field.is_zero(&rows[i][col])) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = field.inv(&rows[rank][col]);
        for i in rank + 1..rows.len() {
            if field.is_zero(&rows[i][col]) {
                continue;
            }
            let c = field.mul(&rows[i][col], &inv);
            for j in col..width {
                if !field.is_zero(&rows[rank][j]) {
                    let t = field.mul(&c, &rows[rank][j]);
                    rows[i][j] = field.sub(&rows[i][j], &t);
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Solves the square system `m x = rhs`; `None` when singular.
pub fn solve<F: Field>(field: &F, m: &[Vec<F::Elem>], rhs: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let n = m.len();
    let mut a: Vec<Vec<F::Elem>> = m
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            let mut row = row.clone();
            row.push(r.clone());
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !field.is_zero(&a[i][col]))?;
        a.swap(col, p);
        let inv = field.inv(&a[col][col]);
        for x in a[col].iter_mut() {
            *x = field.mul(x, &inv);
        }
        for i in 0..n {
            if i != col && !field.is_zero(&a[i][col]) {
                let c = a[i][col].clone();
                for j in col..=n {
                    let t = field.mul(&c, &a[col][j]);
                    a[i][j] = field.sub(&a[i][j], &t);
                }
            }
        }
    }
    Some(a.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// Determinant of a square matrix by elimination.
pub fn determinant<F: Field>(field: &F, m: &[Vec<F::Elem>]) -> F::Elem {
    let n = m.len();
    let mut a: Vec<Vec<F::Elem>> = m.to_vec();
    let mut det = field.one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !field.is_zero(&a[i][col])) else {
            return field.zero();
        };
        if p != col {
            a.swap(col, p);
            det = field.neg(&det);
        }
        det = field.mul(&det, &a[col][col]);
        let inv = field.inv(&a[col][col]);
        for i in col + 1..n {
            if field.is_zero(&a[i][col]) {
                continue;
            }
            let c = field.mul(&a[i][col], &inv);
            for j in col..n {
                let t = field.mul(&c, &a[col][j]);
                a[i][j] = field.sub(&a[i][j], &t);
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::{rat, Rationals};

    #[test]
    fn rank_and_membership() {
        let rows = vec![
            vec![rat(1), rat(2), rat(3)],
            vec![rat(2), rat(4), rat(6)],
            vec![rat(0), rat(1), rat(1)],
        ];
        assert_eq!(rank(&Rationals, &rows), 2);
        let mut b = EchelonBasis::new(Rationals, 3);
        for r in &rows {
            b.insert(r);
        }
        assert_eq!(b.dim(), 2);
        assert!(b.contains(&[rat(1), rat(3), rat(4)]));
        assert!(!b.contains(&[rat(0), rat(0), rat(1)]));
    }

    #[test]
    fn solve_small() {
        let m = vec![vec![rat(2), rat(1)], vec![rat(1), rat(3)]];
        let x = solve(&Rationals, &m, &[rat(3), rat(5)]).unwrap();
        assert_eq!(x, vec![rat(4) / rat(5), rat(7) / rat(5)]);
    }
}
