//! Exact linear solves over the rationals and lattice membership.

use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{det, hnf, Matrix, RatVec};

/// Solves `a x = b` exactly for square nonsingular `a`.
pub fn solve_rational<T: Scalar>(a: &Matrix<T>, b: &RatVec<T>) -> Result<RatVec<T>> {
    if !a.is_square() {
        return Err(Error::dim("solve with a non-square matrix"));
    }
    let n = a.rows();
    if b.dim() != n {
        return Err(Error::dim(format!(
            "right-hand side of length {} for {n} unknowns",
            b.dim()
        )));
    }
    let mut m: Vec<Vec<Ratio<T>>> = (0..n)
        .map(|i| {
            let mut row: Vec<Ratio<T>> = a.row(i).iter().cloned().map(Ratio::from_integer).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero()).ok_or(Error::Singular)?;
        m.swap(c, p);
        let pivot = m[c][c].clone();
        for v in m[c].iter_mut().skip(c) {
            *v = v.clone() / pivot.clone();
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..=n {
                let d = f.clone() * m[c][j].clone();
                m[i][j] = m[i][j].clone() - d;
            }
        }
    }
    Ok(RatVec::new(m.into_iter().map(|row| row[n].clone()).collect()))
}

/// Exact inverse as a matrix of rationals (row-major rows).
pub fn inverse_rational<T: Scalar>(a: &Matrix<T>) -> Result<Vec<Vec<Ratio<T>>>> {
    let d = det(a)?;
    if d.is_zero() {
        return Err(Error::Singular);
    }
    let adj = super::adjugate(a)?;
    Ok((0..a.rows())
        .map(|i| adj.row(i).iter().map(|v| Ratio::new(v.clone(), d.clone())).collect())
        .collect())
}

/// Integer coefficients `t` with `a t = v`, if `v` lies in the column
/// lattice of `a` (which must have full column rank).
pub fn lattice_coords<T: Scalar>(a: &Matrix<T>, v: &[T]) -> Result<Option<Vec<T>>> {
    if v.len() != a.rows() {
        return Err(Error::dim("vector length differs from row count"));
    }
    let r = hnf(a)?;
    let n = a.cols();
    let mut th: Vec<T> = Vec::with_capacity(n);
    for (j, &row) in r.pivot_rows.iter().enumerate() {
        let partial = (0..j).fold(T::zero(), |acc, l| acc + r.h[(row, l)].clone() * th[l].clone());
        let rest = v[row].clone() - partial;
        let pivot = r.h[(row, j)].clone();
        if !(rest.clone() % pivot.clone()).is_zero() {
            return Ok(None);
        }
        th.push(rest / pivot);
    }
    if r.h.mul_vec(&th)? != v {
        return Ok(None);
    }
    Ok(Some(r.u.mul_vec(&th)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix<i64> {
        Matrix::from_i64(rows).unwrap()
    }

    #[test]
    fn solve_examples() {
        let b = RatVec::<i64>::from_fractions(&[(3, 7), (-1, 1)]);
        assert_eq!(solve_rational(&Matrix::identity(2).unwrap(), &b).unwrap(), b);
        assert_eq!(
            solve_rational(&m(&[&[2, 0], &[0, 4]]), &RatVec::from_i64(&[1, 1])).unwrap(),
            RatVec::from_fractions(&[(1, 2), (1, 4)])
        );
        assert_eq!(
            solve_rational(&m(&[&[1, 2], &[3, 4]]), &RatVec::from_i64(&[1, 0])).unwrap(),
            RatVec::from_fractions(&[(-2, 1), (3, 2)])
        );
        assert_eq!(
            solve_rational(&m(&[&[1, 2], &[2, 4]]), &RatVec::from_i64(&[1, 0])),
            Err(Error::Singular)
        );
        assert!(solve_rational(&m(&[&[1]]), &RatVec::from_i64(&[1, 0])).is_err());
    }

    #[test]
    fn inverse() {
        let inv = inverse_rational(&m(&[&[2, 0], &[1, 1]])).unwrap();
        assert_eq!(inv[0][0], Ratio::new(1, 2));
        assert_eq!(inv[1][0], Ratio::new(-1, 2));
        assert_eq!(inv[1][1], Ratio::from_integer(1));
    }

    #[test]
    fn membership() {
        let a = m(&[&[2, 4], &[1, 3]]);
        let t = lattice_coords(&a, &[2, 0]).unwrap().unwrap();
        assert_eq!(a.mul_vec(&t).unwrap(), vec![2, 0]);
        assert_eq!(lattice_coords(&a, &[1, 0]).unwrap(), None);
        let tall = m(&[&[1, 0], &[0, 1], &[5, 7]]);
        assert_eq!(lattice_coords(&tall, &[1, 1, 12]).unwrap(), Some(vec![1, 1]));
        assert_eq!(lattice_coords(&tall, &[1, 1, 11]).unwrap(), None);
    }
}
