//! Exact LP relaxation by enumerating bases.

use num_traits::Signed;

use crate::exactmat::{combinations, det, solve_rational, RatVec};
use crate::{Int, IntMatrix, Rat, RatVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    /// Optimal vertex `v`, the `n` tight rows that define it, and `c^T v`.
    Optimal {
        vertex: RatVector,
        basis: Vec<usize>,
        value: Rat,
    },
    Infeasible,
    Unbounded,
}

/// `max { c^T x : H x <= b }` for `H` of full column rank.
///
/// The first basis in lexicographic order that is both primal and dual
/// feasible is returned.
pub fn lp_vertex_optimum(h: &IntMatrix, b: &[Int], c: &[Int]) -> LpOutcome {
    let (d, n) = (h.rows(), h.cols());
    let cols: Vec<usize> = (0..n).collect();
    let crat = RatVec::from_integers(c);
    let mut any_feasible = false;
    for basis in combinations(d, n) {
        let hb = h.select(&basis, &cols).expect("indices in range");
        if det(&hb).map_or(true, |v| v == Int::from(0)) {
            continue;
        }
        let bb: Vec<Int> = basis.iter().map(|&i| b[i].clone()).collect();
        let v = solve_rational(&hb, &RatVec::from_integers(&bb)).expect("nonsingular");
        let hv = h.mul_rat_vec(v.as_slice()).expect("n entries");
        if hv.iter().zip(b).any(|(a, bi)| *a > Rat::from_integer(bi.clone())) {
            continue;
        }
        any_feasible = true;
        let lambda = solve_rational(&hb.transpose(), &crat).expect("nonsingular");
        if lambda.iter().any(|x| x.is_negative()) {
            continue;
        }
        let value = v.iter().zip(c).fold(Rat::from_integer(Int::from(0)), |acc, (x, ci)| {
            acc + x * Rat::from_integer(ci.clone())
        });
        return LpOutcome::Optimal {
            vertex: v,
            basis,
            value,
        };
    }
    if any_feasible {
        LpOutcome::Unbounded
    } else {
        LpOutcome::Infeasible
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn triangle_vertex() {
        let h = IntMatrix::from_i64(&[[-1, 0], [0, -1], [2, 3]]).unwrap();
        match lp_vertex_optimum(&h, &ints(&[0, 0, 5]), &ints(&[1, 1])) {
            LpOutcome::Optimal { vertex, basis, value } => {
                assert_eq!(vertex, RatVec::from_fractions(&[(5, 2), (0, 1)]));
                assert_eq!(basis, vec![1, 2]);
                assert_eq!(value, Rat::new(Int::from(5), Int::from(2)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_objective_takes_first_vertex() {
        let h = IntMatrix::from_i64(&[[-1, 0], [0, -1], [2, 3]]).unwrap();
        match lp_vertex_optimum(&h, &ints(&[0, 0, 5]), &ints(&[0, 0])) {
            LpOutcome::Optimal { basis, value, .. } => {
                assert_eq!(basis, vec![0, 1]);
                assert_eq!(value, Rat::from_integer(Int::from(0)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let h = IntMatrix::from_i64(&[[1], [-1]]).unwrap();
        assert_eq!(
            lp_vertex_optimum(&h, &ints(&[-1, -1]), &ints(&[1])),
            LpOutcome::Infeasible
        );
        let h = IntMatrix::from_i64(&[[-1]]).unwrap();
        assert_eq!(lp_vertex_optimum(&h, &ints(&[0]), &ints(&[1])), LpOutcome::Unbounded);
    }
}
