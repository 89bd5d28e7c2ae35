//! Smith normal form with two-sided unimodular witnesses.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::Matrix;

/// `s = p * a * q`, equivalently `a = p_inv * s * q_inv`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult<T> {
    pub s: Matrix<T>,
    pub p: Matrix<T>,
    pub p_inv: Matrix<T>,
    pub q: Matrix<T>,
    pub q_inv: Matrix<T>,
}

impl<T: Scalar> SnfResult<T> {
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .collect()
    }

    pub fn divisibility_chain_holds(&self) -> bool {
        let d = self.diagonal();
        d.iter().all(|v| v.is_positive())
            && d.windows(2).all(|w| (w[1].clone() % w[0].clone()).is_zero())
            && (0..self.s.rows()).all(|i| (0..self.s.cols()).all(|j| i == j || self.s[(i, j)].is_zero()))
    }
}

struct Work<T> {
    a: Matrix<T>,
    p: Matrix<T>,
    p_inv: Matrix<T>,
    q: Matrix<T>,
    q_inv: Matrix<T>,
}

impl<T: Scalar> Work<T> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.p.swap_rows(i, j);
        self.p_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.q.swap_cols(i, j);
        self.q_inv.swap_rows(i, j);
    }

    /// `row[dst] += k * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, k: &T) {
        self.a.add_row_multiple(dst, src, k);
        self.p.add_row_multiple(dst, src, k);
        self.p_inv.add_col_multiple(src, dst, &-k.clone());
    }

    /// `col[dst] += k * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, k: &T) {
        self.a.add_col_multiple(dst, src, k);
        self.q.add_col_multiple(dst, src, k);
        self.q_inv.add_row_multiple(src, dst, &-k.clone());
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.p.negate_row(i);
        self.p_inv.negate_col(i);
    }
}

/// Smith normal form of a matrix with full column rank (rows >= cols).
pub fn snf<T: Scalar>(a: &Matrix<T>) -> Result<SnfResult<T>> {
    let (rows, cols) = (a.rows(), a.cols());
    if rows < cols {
        return Err(Error::Singular);
    }
    let mut w = Work {
        a: a.clone(),
        p: Matrix::identity(rows)?,
        p_inv: Matrix::identity(rows)?,
        q: Matrix::identity(cols)?,
        q_inv: Matrix::identity(cols)?,
    };
    for t in 0..cols {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let v = &w.a[(i, j)];
                    if !v.is_zero() && pivot.is_none_or(|(pi, pj)| v.abs() < w.a[(pi, pj)].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return Err(Error::Singular);
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..rows {
                let q = w.a[(i, t)].clone() / w.a[(t, t)].clone();
                if !q.is_zero() {
                    w.add_row(i, t, &-q);
                }
                clean &= w.a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = w.a[(t, j)].clone() / w.a[(t, t)].clone();
                if !q.is_zero() {
                    w.add_col(j, t, &-q);
                }
                clean &= w.a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let piv = w.a[(t, t)].clone();
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(w.a[(i, j)].clone() % piv.clone()).is_zero());
            match bad {
                Some((i, _)) => w.add_row(t, i, &T::one()),
                None => break,
            }
        }
        if w.a[(t, t)].is_negative() {
            w.negate_row(t);
        }
    }
    Ok(SnfResult {
        s: w.a,
        p: w.p,
        p_inv: w.p_inv,
        q: w.q,
        q_inv: w.q_inv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix<i64> {
        Matrix::from_i64(rows).unwrap()
    }

    fn check(a: &Matrix<i64>) -> SnfResult<i64> {
        let r = snf(a).unwrap();
        assert_eq!(r.p.mul(a).unwrap().mul(&r.q).unwrap(), r.s);
        assert_eq!(r.p_inv.mul(&r.s).unwrap().mul(&r.q_inv).unwrap(), *a);
        assert!(r.p.mul(&r.p_inv).unwrap() == Matrix::identity(a.rows()).unwrap());
        assert!(r.q.mul(&r.q_inv).unwrap() == Matrix::identity(a.cols()).unwrap());
        assert!(r.divisibility_chain_holds());
        r
    }

    #[test]
    fn examples() {
        assert_eq!(check(&Matrix::identity(3).unwrap()).diagonal(), vec![1, 1, 1]);
        assert_eq!(check(&m(&[&[2, 0], &[0, 1]])).diagonal(), vec![1, 2]);
        assert_eq!(check(&m(&[&[2, 0], &[1, 3]])).diagonal(), vec![1, 6]);
        assert_eq!(check(&m(&[&[2, 0], &[0, 2]])).diagonal(), vec![2, 2]);
        assert_eq!(check(&m(&[&[-4, 6], &[2, 8]])).diagonal(), vec![2, 22]);
        assert_eq!(check(&m(&[&[-5]])).diagonal(), vec![5]);
    }

    #[test]
    fn rectangular() {
        assert_eq!(check(&m(&[&[2], &[4], &[6]])).diagonal(), vec![2]);
        assert_eq!(check(&m(&[&[1, 0], &[0, 1], &[5, 7]])).diagonal(), vec![1, 1]);
        assert_eq!(check(&m(&[&[2, 0], &[0, 2], &[2, 4]])).diagonal(), vec![2, 2]);
        assert_eq!(check(&m(&[&[6, 4], &[3, 9], &[0, 3]])).diagonal(), vec![1, 3]);
    }

    #[test]
    fn singular_rejected() {
        assert_eq!(snf(&m(&[&[1, 2], &[2, 4]])), Err(Error::Singular));
        assert!(snf(&m(&[&[1, 2]])).is_err());
    }
}
