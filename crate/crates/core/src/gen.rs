//! Seeded instance generators for property suites and the CLI `verify`
//! command. Every generator is a pure function of the seed.

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactmat::{adjugate, det, rank, Matrix, RatVec};
use crate::geom::{ConeProgram, ParInstance};
use crate::lattice::exceeds_threshold;
use crate::width::{SimplexInstance, WidthSubproblem};
use crate::{Int, IntMatrix, Rat, RatVector};

pub const DEFAULT_SEED: u64 = 20240611;

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn pick<T: Clone>(&mut self, items: &[T]) -> T {
        items.choose(&mut self.rng).expect("nonempty").clone()
    }

    pub fn int_vec(&mut self, len: usize, bound: i64) -> Vec<Int> {
        (0..len).map(|_| Int::from(self.range(-bound, bound))).collect()
    }

    pub fn matrix(&mut self, rows: usize, cols: usize, bound: i64) -> IntMatrix {
        Matrix::from_fn(rows, cols, |_, _| Int::from(self.rng.gen_range(-bound..=bound))).expect("nonempty")
    }

    /// Rejection-samples a matrix of rank `cols`.
    pub fn full_rank(&mut self, rows: usize, cols: usize, bound: i64) -> IntMatrix {
        loop {
            let a = self.matrix(rows, cols, bound);
            if rank(&a) == cols {
                return a;
            }
        }
    }

    /// Product of `steps` random elementary column operations.
    pub fn unimodular(&mut self, n: usize, steps: usize, mult: i64) -> IntMatrix {
        let mut u = IntMatrix::identity(n).expect("n >= 1");
        if n < 2 {
            return u;
        }
        for _ in 0..steps {
            let i = self.rng.gen_range(0..n);
            let mut j = self.rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let k = Int::from(self.range(-mult, mult));
            u.add_col_multiple(i, j, &k);
            if self.rng.gen_bool(0.2) {
                u.swap_cols(i, j);
            }
        }
        u
    }

    pub fn shuffle_rows(&mut self, a: &IntMatrix) -> IntMatrix {
        let mut order: Vec<usize> = (0..a.rows()).collect();
        order.shuffle(&mut self.rng);
        a.select_rows(&order).expect("permutation")
    }

    /// `[I; R] U` with rows shuffled: every maximal minor equals a minor of
    /// `R` up to sign, so Δ stays small while entries may grow.
    pub fn bounded_minor(&mut self, n: usize, m: usize, r_bound: i64) -> IntMatrix {
        let mut stacked = IntMatrix::identity(n).expect("n >= 1");
        if m > 0 {
            stacked = stacked.vstack(&self.matrix(m, n, r_bound)).expect("same width");
        }
        let u = self.unimodular(n, n, 1);
        self.shuffle_rows(&stacked.mul(&u).expect("n x n"))
    }

    /// Smallest `n` above the duplicate-column threshold, with a `Δ = delta`
    /// sub-block of `m` rows and the rows mixed by a unimodular transform.
    pub fn fast_path(&mut self, delta: i64, m: usize) -> IntMatrix {
        let d = Int::from(delta);
        let mut n = 1;
        while !exceeds_threshold(n, &d, m as u32) {
            n += 1;
        }
        loop {
            let mut r = self.matrix(m, n, delta);
            let (i, j) = (self.rng.gen_range(0..m), self.rng.gen_range(0..n));
            r[(i, j)] = d.clone();
            let stacked = IntMatrix::identity(n).expect("n >= 1").vstack(&r).expect("same width");
            if crate::exactmat::max_minor_abs(&stacked, n).expect("rank n") == d {
                let u = self.unimodular(n, n, 1);
                return self.shuffle_rows(&stacked.mul(&u).expect("n x n"));
            }
        }
    }

    pub fn fraction(&mut self, num_bound: i64, den_max: i64) -> Rat {
        let den = self.range(1, den_max);
        Rat::new(Int::from(self.range(-num_bound * den, num_bound * den)), Int::from(den))
    }

    pub fn rat_vec(&mut self, len: usize, num_bound: i64, den_max: i64) -> RatVector {
        RatVec::new((0..len).map(|_| self.fraction(num_bound, den_max)).collect())
    }

    pub fn nonsingular(&mut self, n: usize, bound: i64) -> IntMatrix {
        loop {
            let a = self.matrix(n, n, bound);
            if !det(&a).expect("square").is_zero() {
                return a;
            }
        }
    }

    pub fn par_instance(&mut self, n: usize, bound: i64, den_max: i64) -> ParInstance {
        let a = self.nonsingular(n, bound);
        let p = self.rat_vec(n, bound, den_max);
        ParInstance::new(a, p).expect("nonsingular")
    }

    /// A cone program that satisfies the sign conditions by construction:
    /// rows of `A` are nonnegative combinations of the rows of `sign·adj(C)`
    /// and the objective a nonpositive one.
    pub fn cone_program(&mut self, n: usize, m: usize, bound: i64) -> ConeProgram {
        let c = self.nonsingular(n, bound);
        let mut ct = adjugate(&c).expect("square");
        if det(&c).expect("square").is_negative() {
            ct = ct.neg();
        }
        let w = Matrix::from_fn(m, n, |_, _| Int::from(self.rng.gen_range(0..=2))).expect("m >= 1");
        let a = w.mul(&ct).expect("m x n");
        let v: Vec<Int> = (0..n).map(|_| Int::from(self.range(0, 2))).collect();
        let objective: Vec<Int> = ct.transpose().mul_vec(&v).expect("n").into_iter().map(|x| -x).collect();
        let p = self.rat_vec(n, bound, 4);
        let shift = Int::from(self.range(0, 3 * bound * bound));
        let ap = a.mul_rat_vec(p.as_slice()).expect("n");
        let b = RatVec::new(
            ap.into_iter()
                .map(|x| (x + Rat::from_integer(shift.clone() + Int::from(self.range(-2, 4)))).floor())
                .collect(),
        );
        ConeProgram::new(c, p, a, b, objective).expect("valid by construction")
    }

    /// Random full-dimensional simplex with small integer vertices.
    pub fn simplex(&mut self, n: usize, coord_bound: i64) -> SimplexInstance {
        loop {
            let verts: Vec<Vec<Int>> = (0..=n).map(|_| self.int_vec(n, coord_bound)).collect();
            if let Some(s) = simplex_from_vertices(&verts) {
                return s;
            }
        }
    }

    pub fn subproblem(&mut self, k: usize, bound: i64) -> WidthSubproblem {
        let c = self.nonsingular(k, bound);
        let p = self.rat_vec(k, 2 * bound, 3);
        let q = self.rat_vec(k, 2 * bound, 3);
        WidthSubproblem::new(p, q, c).expect("nonsingular")
    }

    /// `H`, `b`, `c` for an ILP with `n + m` rows.
    pub fn ilp(&mut self, n: usize, m: usize, bound: i64, b_bound: i64) -> (IntMatrix, Vec<Int>, Vec<Int>) {
        let h = self.full_rank(n + m, n, bound);
        let b = self.int_vec(n + m, b_bound);
        let c = self.int_vec(n, bound);
        (h, b, c)
    }
}

/// Facet description of the simplex spanned by `verts`, or `None` when they
/// are affinely dependent.
pub fn simplex_from_vertices(verts: &[Vec<Int>]) -> Option<SimplexInstance> {
    let n = verts.len() - 1;
    let edges = Matrix::from_fn(n, n, |i, j| verts[j + 1][i].clone() - &verts[0][i]).ok()?;
    if det(&edges).ok()?.is_zero() {
        return None;
    }
    let mut rows = Vec::with_capacity(n + 1);
    let mut rhs = Vec::with_capacity(n + 1);
    for k in 0..=n {
        // Normal of the facet through every vertex but k: the cofactors of
        // the facet's edge matrix.
        let others: Vec<&Vec<Int>> = verts
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, v)| v)
            .collect();
        let base = others[0];
        let fe = Matrix::from_fn(n - 1, n, |i, j| others[i + 1][j].clone() - &base[j]).ok();
        let normal: Vec<Int> = (0..n)
            .map(|j| {
                let Some(fe) = &fe else { return Int::from(1) };
                let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                let minor = det(&fe.transpose().select_rows(&cols).expect("cols").transpose()).expect("square");
                if j % 2 == 0 {
                    minor
                } else {
                    -minor
                }
            })
            .collect();
        let off = crate::exactmat::dot(&normal, base);
        let at_k = crate::exactmat::dot(&normal, &verts[k]);
        let g = normal
            .iter()
            .fold(Int::zero(), |acc, v| num_integer::Integer::gcd(&acc, v));
        let (mut normal, mut off) = (normal.iter().map(|v| v / &g).collect::<Vec<_>>(), off / &g);
        if at_k / &g > off {
            normal = normal.iter().map(|v| -v).collect();
            off = -off;
        }
        rows.push(normal);
        rhs.push(off);
    }
    SimplexInstance::new(Matrix::from_rows(rows).ok()?, rhs).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::max_minor_abs;

    #[test]
    fn deterministic() {
        let a = Gen::new(7).bounded_minor(4, 2, 1);
        let b = Gen::new(7).bounded_minor(4, 2, 1);
        assert_eq!(a, b);
    }

    #[test]
    fn fast_path_instances_meet_threshold() {
        let mut g = Gen::new(1);
        for (delta, m) in [(1, 1), (2, 1), (1, 2)] {
            let a = g.fast_path(delta, m);
            let n = a.cols();
            assert_eq!(a.rows(), n + m);
            assert_eq!(max_minor_abs(&a, n).unwrap(), Int::from(delta));
            assert!(exceeds_threshold(n, &Int::from(delta), m as u32));
        }
    }

    #[test]
    fn generated_objects_are_valid() {
        let mut g = Gen::new(3);
        for n in 1..=3 {
            let s = g.simplex(n, 3);
            assert_eq!(s.vertices().len(), n + 1);
            let prog = g.cone_program(n, 2, 3);
            assert_eq!(prog.n(), n);
        }
        let s = simplex_from_vertices(&[vec![Int::from(0)], vec![Int::from(2)]]).unwrap();
        assert_eq!(
            s.direction_width(&[Int::from(1)]).unwrap(),
            Rat::from_integer(Int::from(2))
        );
    }
}
