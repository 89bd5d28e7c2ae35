//! Exhaustive search over a coefficient box.
//!
//! Coefficients are visited in lexicographic order and a partial vector is
//! abandoned once the rows of `H_B` it already fixes cost more than the best
//! vector found so far, so the result equals that of a full scan.

use num_traits::ToPrimitive;

use super::{cvp_distance, CvpResult, LatticeVector, Norm, SlvpInstance};
use crate::{Int, Rat, RatVector};

struct Search {
    norm: Norm,
    /// `H_B` rows then `H_N` rows, as machine integers.
    h: Vec<Vec<i128>>,
    n: usize,
    /// Scaled target, all zero for the shortest vector search.
    target: Vec<i128>,
    scale: i128,
    bound: i128,
    nonzero: bool,
    best: Option<(u128, Vec<i128>)>,
    /// Known achievable cost used only for pruning.
    cutoff: u128,
    t: Vec<i128>,
}

impl Search {
    fn coord_cost(&self, i: usize, x: i128) -> u128 {
        let v = (x * self.scale - self.target[i]).unsigned_abs();
        match self.norm {
            Norm::P(p) => v.saturating_pow(p),
            Norm::Inf => v,
        }
    }

    fn combine(&self, a: u128, b: u128) -> u128 {
        match self.norm {
            Norm::P(_) => a.saturating_add(b),
            Norm::Inf => a.max(b),
        }
    }

    fn limit(&self) -> u128 {
        self.best.as_ref().map_or(self.cutoff, |b| b.0.min(self.cutoff))
    }

    /// Largest `|scale x - target|` a coordinate may still take.
    fn room(&self, partial: u128) -> Option<i128> {
        let left = self.limit().checked_sub(partial)?;
        let r = match self.norm {
            Norm::P(p) => iroot(left, p),
            Norm::Inf => self.limit(),
        };
        Some(r.min(1 << 100) as i128)
    }

    fn row_value(&self, i: usize, upto: usize) -> i128 {
        (0..=upto.min(self.n - 1)).map(|j| self.h[i][j] * self.t[j]).sum()
    }

    fn descend(&mut self, l: usize, partial: u128, all_zero: bool) {
        if l == self.n {
            if self.nonzero && all_zero {
                return;
            }
            let mut cost = partial;
            for i in self.n..self.h.len() {
                let x = self.row_value(i, self.n - 1);
                cost = self.combine(cost, self.coord_cost(i, x));
            }
            let better = match &self.best {
                None => cost <= self.cutoff,
                Some((b, _)) => cost < *b,
            };
            if better {
                self.best = Some((cost, self.t.clone()));
            }
            return;
        }
        let mut lo = if self.nonzero && all_zero { 0 } else { -self.bound };
        let mut hi = self.bound;
        // Coordinate l is prefix + h_ll z, and scale * it must land within
        // the budget left after the earlier coordinates.
        if let Some(room) = self.room(partial) {
            debug_assert_eq!(self.t[l], 0);
            let prefix = self.row_value(l, l);
            let d = self.h[l][l];
            let xlo = div_ceil(self.target[l].saturating_sub(room), self.scale);
            let xhi = div_floor(self.target[l].saturating_add(room), self.scale);
            lo = lo.max(div_ceil(xlo - prefix, d));
            hi = hi.min(div_floor(xhi - prefix, d));
        }
        for z in lo..=hi {
            self.t[l] = z;
            let x = self.row_value(l, l);
            let c = self.combine(partial, self.coord_cost(l, x));
            if c > self.limit() {
                continue;
            }
            self.descend(l + 1, c, all_zero && z == 0);
        }
        self.t[l] = 0;
    }
}

/// Floor division for `b > 0`.
fn div_floor(a: i128, b: i128) -> i128 {
    a.div_euclid(b)
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -div_floor(-a, b)
}

/// Largest `r` with `r^p <= v`.
fn iroot(v: u128, p: u32) -> u128 {
    if p == 1 {
        return v;
    }
    let mut r = (v as f64).powf(1.0 / p as f64) as u128;
    while r > 0 && r.checked_pow(p).is_none_or(|x| x > v) {
        r -= 1;
    }
    while (r + 1).checked_pow(p).is_some_and(|x| x <= v) {
        r += 1;
    }
    r
}

fn machine(v: &Int) -> i128 {
    v.to_i128()
        .filter(|x| x.abs() < 1 << 60)
        .expect("oracle entries must fit in 60 bits")
}

fn run(inst: &SlvpInstance, coeff_box: &Int, target: Option<&RatVector>) -> Vec<Int> {
    let sys = &inst.system;
    let n = sys.n();
    let h: Vec<Vec<i128>> = (0..sys.d())
        .map(|i| sys.h.row(i).iter().map(machine).collect())
        .collect();
    let (scale, tv) = match target {
        Some(r) => {
            let scale = r.common_denominator();
            let tv: Vec<i128> = r
                .iter()
                .map(|v| machine(&(v * Rat::from_integer(scale.clone())).to_integer()))
                .collect();
            (machine(&scale), tv)
        }
        None => (1, vec![0; sys.d()]),
    };
    let mut s = Search {
        norm: inst.norm,
        h,
        n,
        target: tv,
        scale,
        bound: machine(coeff_box).max(1),
        nonzero: target.is_none(),
        best: None,
        cutoff: u128::MAX,
        t: vec![0; n],
    };
    if target.is_none() {
        // Any column inside the box is a valid candidate, so its cost can
        // prune from the start.
        s.cutoff = inst.column_cost().to_u128().unwrap_or(u128::MAX);
    } else {
        s.cutoff = (0..sys.d()).fold(0, |acc, i| s.combine(acc, s.coord_cost(i, 0)));
    }
    s.descend(0, 0, true);
    let (_, t) = s.best.expect("the box contains a candidate");
    t.into_iter().map(Int::from).collect()
}

/// Shortest nonzero `H t` over `t ∈ [-coeff_box, coeff_box]^n`. Ties go to
/// the lexicographically smallest `t` whose first nonzero entry is positive.
pub fn oracle_shortest(inst: &SlvpInstance, coeff_box: &Int) -> LatticeVector {
    let t = run(inst, coeff_box, None);
    inst.vector(t)
}

/// Closest `H t` to `r` over the coefficient box; ties go to the
/// lexicographically smallest `t`.
pub fn oracle_closest(inst: &SlvpInstance, r: &RatVector, coeff_box: &Int) -> CvpResult {
    let t = run(inst, coeff_box, Some(r));
    let vector = inst.vector(t);
    let distance = cvp_distance(inst.norm, &vector.x, r);
    CvpResult { vector, distance }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_roots() {
        for p in 1..5u32 {
            for v in 0..2000u128 {
                let r = iroot(v, p);
                assert!(r.pow(p) <= v && (r + 1).pow(p) > v, "{v} {p}");
            }
        }
        assert_eq!(iroot(u128::MAX, 2), u64::MAX as u128);
    }

    #[test]
    fn rounding_division() {
        assert_eq!((div_floor(-7, 2), div_ceil(-7, 2)), (-4, -3));
        assert_eq!((div_floor(7, 2), div_ceil(7, 2)), (3, 4));
        assert_eq!((div_floor(6, 3), div_ceil(6, 3)), (2, 2));
    }
}
