//! The finite group `Z^n / Λ(H_B)` in Smith coordinates.
//!
//! With `S = P H_B Q`, a vector `v` lies in `Λ(H_B)` iff `P v ≡ 0` modulo the
//! diagonal of `S`. Only diagonal entries above one contribute, and their
//! product is `|det H_B|`.

use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::exactmat::snf;
use crate::{Int, IntMatrix};

#[derive(Clone, Debug)]
pub(crate) struct Group {
    /// Nontrivial Smith diagonal entries.
    radix: Vec<u64>,
    size: u64,
    /// `G = P mod S` restricted to the nontrivial rows, one column per input
    /// coordinate.
    cols: Vec<Vec<u64>>,
}

impl Group {
    pub(crate) fn new(h_b: &IntMatrix) -> Result<Group> {
        let r = snf(h_b)?;
        let n = h_b.rows();
        let mut radix = Vec::new();
        let mut rows = Vec::new();
        for i in 0..n {
            let s = &r.s[(i, i)];
            if !s.is_one() {
                radix.push(s.to_u64().ok_or(Error::overflow())?);
                rows.push(i);
            }
        }
        let size = radix
            .iter()
            .try_fold(1u64, |acc, &v| acc.checked_mul(v))
            .filter(|&v| v < u64::MAX / 4)
            .ok_or(Error::overflow())?;
        let cols = (0..n)
            .map(|j| {
                rows.iter()
                    .zip(&radix)
                    .map(|(&i, &s)| {
                        let m = r.p[(i, j)].mod_floor(&Int::from(s));
                        m.to_u64().expect("reduced modulo a u64")
                    })
                    .collect()
            })
            .collect();
        Ok(Group { radix, size, cols })
    }

    pub(crate) fn size(&self) -> u64 {
        self.size
    }

    #[cfg(test)]
    pub(crate) fn decode(&self, mut idx: u64, out: &mut Vec<u64>) {
        out.clear();
        for &s in &self.radix {
            out.push(idx % s);
            idx /= s;
        }
    }

    pub(crate) fn encode(&self, comps: &[u64]) -> u64 {
        comps.iter().zip(&self.radix).rev().fold(0, |acc, (&c, &s)| acc * s + c)
    }

    /// Group element of `z e_j`, as components.
    pub(crate) fn of_digit(&self, j: usize, z: i64) -> Vec<u64> {
        self.cols[j]
            .iter()
            .zip(&self.radix)
            .map(|(&g, &s)| (i128::from(z) * i128::from(g)).rem_euclid(i128::from(s)) as u64)
            .collect()
    }

    pub(crate) fn add(&self, idx: u64, comps: &[u64]) -> u64 {
        let mut acc = 0u64;
        let mut mul = 1u64;
        let mut rest = idx;
        for (&s, &c) in self.radix.iter().zip(comps) {
            acc += (rest % s + c) % s * mul;
            rest /= s;
            mul *= s;
        }
        acc
    }

    /// Group element of an integer vector.
    pub(crate) fn of_vector(&self, v: &[Int]) -> u64 {
        let comps: Vec<u64> = self
            .radix
            .iter()
            .enumerate()
            .map(|(r, &s)| {
                let sum: Int = v.iter().enumerate().map(|(j, x)| x * Int::from(self.cols[j][r])).sum();
                sum.mod_floor(&Int::from(s)).to_u64().expect("reduced")
            })
            .collect();
        self.encode(&comps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::lattice_coords;

    #[test]
    fn membership_matches_exact_solve() {
        let h = IntMatrix::from_i64(&[[1, 0, 0], [0, 2, 0], [1, 1, 6]]).unwrap();
        let g = Group::new(&h).unwrap();
        assert_eq!(g.size(), 12);
        for a in -3..=3i64 {
            for b in -3..=3i64 {
                for c in -3..=3i64 {
                    let v: Vec<Int> = [a, b, c].iter().map(|&x| Int::from(x)).collect();
                    let member = lattice_coords(&h, &v).unwrap().is_some();
                    assert_eq!(g.of_vector(&v) == 0, member, "{v:?}");
                }
            }
        }
    }

    #[test]
    fn digit_steps_compose() {
        let h = IntMatrix::from_i64(&[[2, 0], [1, 3]]).unwrap();
        let g = Group::new(&h).unwrap();
        let mut idx = 0;
        idx = g.add(idx, &g.of_digit(0, 5));
        idx = g.add(idx, &g.of_digit(1, -4));
        assert_eq!(idx, g.of_vector(&[Int::from(5), Int::from(-4)]));
        let mut comps = Vec::new();
        g.decode(idx, &mut comps);
        assert_eq!(g.encode(&comps), idx);
    }
}
