//! Determinants, rank and minors by fraction-free (Bareiss) elimination.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::Matrix;

/// Exact determinant of a square matrix.
pub fn det<T: Scalar>(a: &Matrix<T>) -> Result<T> {
    if !a.is_square() {
        return Err(Error::dim(format!("determinant of a {}x{} matrix", a.rows(), a.cols())));
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n {
        if m[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                Some(i) => {
                    m.swap_rows(i, k);
                    negate = !negate;
                }
                None => return Ok(T::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[(i, j)].clone() * m[(k, k)].clone() - m[(i, k)].clone() * m[(k, j)].clone();
                m[(i, j)] = v / prev.clone();
            }
        }
        prev = m[(k, k)].clone();
    }
    let d = m[(n - 1, n - 1)].clone();
    Ok(if negate { -d } else { d })
}

/// Rank via fraction-free row echelon form.
pub fn rank<T: Scalar>(a: &Matrix<T>) -> usize {
    let mut m = a.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = 0;
    let mut prev = T::one();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(p, r);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = m[(i, j)].clone() * m[(r, c)].clone() - m[(i, c)].clone() * m[(r, j)].clone();
                m[(i, j)] = v / prev.clone();
            }
            m[(i, c)] = T::zero();
        }
        prev = m[(r, c)].clone();
        r += 1;
    }
    r
}

/// Lexicographically first maximal set of linearly independent rows.
pub fn independent_rows<T: Scalar>(a: &Matrix<T>) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..a.rows() {
        let mut trial = chosen.clone();
        trial.push(i);
        let sub = a.select_rows(&trial).expect("row indices in range");
        if rank(&sub) == trial.len() {
            chosen = trial;
        }
        if chosen.len() == a.cols() {
            break;
        }
    }
    chosen
}

/// Matrix of cofactors transposed, so that `a * adj(a) = det(a) * I`.
pub fn adjugate<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    if !a.is_square() {
        return Err(Error::dim(format!("adjugate of a {}x{} matrix", a.rows(), a.cols())));
    }
    let n = a.rows();
    if n == 1 {
        return Matrix::identity(1);
    }
    let mut adj = Matrix::zeros(n, n)?;
    for i in 0..n {
        for j in 0..n {
            let rows: Vec<usize> = (0..n).filter(|&r| r != i).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let minor = det(&a.select(&rows, &cols)?)?;
            adj[(j, i)] = if (i + j) % 2 == 0 { minor } else { -minor };
        }
    }
    Ok(adj)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `Δ_k(a)`: the largest absolute value of a `k x k` minor, by exhaustive
/// enumeration.
pub fn max_minor_abs<T: Scalar>(a: &Matrix<T>, k: usize) -> Result<T> {
    if k == 0 || k > a.rows().min(a.cols()) {
        return Err(Error::dim(format!(
            "minor order {k} for a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let row_sets = combinations(a.rows(), k);
    let col_sets = combinations(a.cols(), k);
    let mut best = T::zero();
    for rs in &row_sets {
        for cs in &col_sets {
            let d = det(&a.select(rs, cs)?)?.abs();
            if d > best {
                best = d;
            }
        }
    }
    Ok(best)
}

/// `Δ(a) = Δ_rank(a)(a)`; zero for the zero matrix.
pub fn max_rank_minor<T: Scalar>(a: &Matrix<T>) -> T {
    match rank(a) {
        0 => T::zero(),
        r => max_minor_abs(a, r).expect("rank is a valid order"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn m(rows: &[&[i64]]) -> Matrix<i64> {
        Matrix::from_i64(rows).unwrap()
    }

    #[test]
    fn det_examples() {
        assert_eq!(det(&Matrix::<i64>::identity(3).unwrap()).unwrap(), 1);
        assert_eq!(det(&m(&[&[2, 1], &[1, 2]])).unwrap(), 3);
        assert_eq!(det(&m(&[&[2, 4], &[1, 2]])).unwrap(), 0);
        assert_eq!(det(&m(&[&[0, 1], &[1, 0]])).unwrap(), -1);
        assert_eq!(det(&m(&[&[7]])).unwrap(), 7);
        assert!(matches!(det(&m(&[&[1, 2, 3]])), Err(Error::Dimension(_))));
    }

    #[test]
    fn det_bigint_needs_pivoting() {
        let a = Matrix::<BigInt>::from_i64(&[[0, 2, 1], [3, 0, 0], [1, 1, 1]]).unwrap();
        assert_eq!(det(&a).unwrap(), BigInt::from(-3));
    }

    #[test]
    fn adjugate_examples() {
        assert_eq!(
            adjugate(&Matrix::<i64>::identity(3).unwrap()).unwrap(),
            Matrix::identity(3).unwrap()
        );
        assert_eq!(adjugate(&m(&[&[2, 0], &[0, 3]])).unwrap(), m(&[&[3, 0], &[0, 2]]));
        assert_eq!(adjugate(&m(&[&[1, 2], &[3, 4]])).unwrap(), m(&[&[4, -2], &[-3, 1]]));
        let singular = m(&[&[1, 2], &[2, 4]]);
        let prod = singular.mul(&adjugate(&singular).unwrap()).unwrap();
        assert!(prod.is_zero());
        assert!(adjugate(&m(&[&[1, 2]])).is_err());
    }

    #[test]
    fn minors() {
        assert_eq!(max_minor_abs(&Matrix::<i64>::identity(2).unwrap(), 2).unwrap(), 1);
        let a = m(&[&[-1, 0], &[0, -1], &[2, 3]]);
        assert_eq!(max_minor_abs(&a, 2).unwrap(), 3);
        assert_eq!(max_minor_abs(&a, 1).unwrap(), a.max_abs());
        assert!(max_minor_abs(&a, 3).is_err());
        assert!(max_minor_abs(&a, 0).is_err());
        assert_eq!(max_rank_minor(&a), 3);
    }

    #[test]
    fn rank_and_rows() {
        let a = m(&[&[1, 2], &[2, 4], &[0, 1]]);
        assert_eq!(rank(&a), 2);
        assert_eq!(independent_rows(&a), vec![0, 2]);
        assert_eq!(rank(&m(&[&[0, 0], &[0, 0]])), 0);
    }

    #[test]
    fn combination_order() {
        assert_eq!(
            combinations(4, 2),
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }
}
