//! Column-style Hermite normal form.
//!
//! `a * u = h` where `u` is unimodular and `h` is in lower column echelon
//! form: the pivot of column `j` sits in row `pivot_rows[j]`, everything above
//! it is zero, the pivot is positive, and the entries to its left in the same
//! row are reduced into `[0, pivot)`. The form is unique for a given `a`.

use crate::error::{Error, Result};
use crate::scalar::{egcd, Scalar};

use super::Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnfResult<T> {
    pub h: Matrix<T>,
    pub u: Matrix<T>,
    /// Row holding the pivot of each column, strictly increasing.
    pub pivot_rows: Vec<usize>,
}

/// Replace columns `(p, q)` of `m` by `(x*cp + y*cq, -b*cp + a*cq)`.
fn combine_cols<T: Scalar>(m: &mut Matrix<T>, p: usize, q: usize, x: &T, y: &T, a: &T, b: &T) {
    for i in 0..m.rows() {
        let cp = m[(i, p)].clone();
        let cq = m[(i, q)].clone();
        m[(i, p)] = x.clone() * cp.clone() + y.clone() * cq.clone();
        m[(i, q)] = a.clone() * cq - b.clone() * cp;
    }
}

/// Hermite normal form of a matrix with full column rank.
pub fn hnf<T: Scalar>(a: &Matrix<T>) -> Result<HnfResult<T>> {
    let (r, complete) = column_echelon(a)?;
    let cols = a.cols();
    let col = r.pivot_rows.len();
    if !complete {
        // Column `col` of `u` is a kernel vector of `a`.
        let dependent_columns = (0..cols).filter(|&i| !r.u[(i, col)].is_zero()).collect();
        return Err(Error::Rank { dependent_columns });
    }
    Ok(r)
}

/// Reduced column echelon form without the rank requirement. The pivot
/// columns of `h` form a basis of the column lattice of `a`; the flag tells
/// whether every column received a pivot.
pub(crate) fn column_echelon<T: Scalar>(a: &Matrix<T>) -> Result<(HnfResult<T>, bool)> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = Matrix::identity(cols)?;
    let mut pivot_rows = Vec::with_capacity(cols);
    let mut col = 0;
    for i in 0..rows {
        if col == cols {
            break;
        }
        for j in col + 1..cols {
            if h[(i, j)].is_zero() {
                continue;
            }
            let (g, x, y) = egcd(&h[(i, col)], &h[(i, j)]);
            let ag = h[(i, col)].clone() / g.clone();
            let bg = h[(i, j)].clone() / g;
            combine_cols(&mut h, col, j, &x, &y, &ag, &bg);
            combine_cols(&mut u, col, j, &x, &y, &ag, &bg);
        }
        if h[(i, col)].is_zero() {
            continue;
        }
        if h[(i, col)].is_negative() {
            h.negate_col(col);
            u.negate_col(col);
        }
        let pivot = h[(i, col)].clone();
        for j in 0..col {
            let q = h[(i, j)].div_floor(&pivot);
            if !q.is_zero() {
                let k = -q;
                h.add_col_multiple(j, col, &k);
                u.add_col_multiple(j, col, &k);
            }
        }
        pivot_rows.push(i);
        col += 1;
    }
    Ok((HnfResult { h, u, pivot_rows }, col == cols))
}

impl<T: Scalar> HnfResult<T> {
    /// Checks the echelon shape and the reduction `0 <= h[r][l] < h[r][j]`.
    pub fn is_reduced(&self) -> bool {
        let h = &self.h;
        self.pivot_rows.iter().enumerate().all(|(j, &r)| {
            let pivot = &h[(r, j)];
            pivot.is_positive()
                && (0..r).all(|i| h[(i, j)].is_zero())
                && (0..j).all(|l| !h[(r, l)].is_negative() && &h[(r, l)] < pivot)
        })
    }

    /// One pivot per column, in strictly increasing rows.
    pub fn is_echelon(&self) -> bool {
        self.pivot_rows.len() == self.h.cols() && self.pivot_rows.windows(2).all(|w| w[0] < w[1])
    }

    /// Top square block is lower triangular, i.e. pivots are rows `0..n`.
    pub fn is_lower_triangular_top(&self) -> bool {
        self.pivot_rows.iter().enumerate().all(|(j, &r)| r == j)
    }

    pub fn u_is_unimodular(&self) -> bool {
        super::det(&self.u).map(|d| d.abs().is_one()).unwrap_or(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix<i64> {
        Matrix::from_i64(rows).unwrap()
    }

    #[test]
    fn identity_is_fixed() {
        let id = Matrix::<i64>::identity(2).unwrap();
        let r = hnf(&id).unwrap();
        assert_eq!(r.h, id);
        assert_eq!(r.u, id);
    }

    #[test]
    fn golden_two_by_two() {
        let a = m(&[&[2, 4], &[1, 3]]);
        let r = hnf(&a).unwrap();
        assert_eq!(r.h, m(&[&[2, 0], &[0, 1]]));
        assert_eq!(a.mul(&r.u).unwrap(), r.h);
        assert!(r.u_is_unimodular());
        assert!(r.is_reduced());
    }

    #[test]
    fn already_hnf() {
        let a = m(&[&[3, 0], &[0, 3]]);
        assert_eq!(hnf(&a).unwrap().h, a);
    }

    #[test]
    fn tall_matrix_with_dependent_row_on_top() {
        let a = m(&[&[1, 2], &[2, 4], &[0, 5]]);
        let r = hnf(&a).unwrap();
        assert_eq!(r.pivot_rows, vec![0, 2]);
        assert!(r.is_reduced());
        assert_eq!(a.mul(&r.u).unwrap(), r.h);
    }

    #[test]
    fn rank_deficiency_names_columns() {
        let a = m(&[&[1, 2, 0], &[2, 4, 0], &[1, 2, 1]]);
        match hnf(&a) {
            Err(Error::Rank { dependent_columns }) => {
                assert_eq!(dependent_columns, vec![0, 1]);
            }
            other => panic!("expected rank error, got {other:?}"),
        }
    }
}
