//! Group minimization with extra inequalities, over slack digits
//! `0 <= y_l <= bound`.
//!
//! Costs are integer vectors compared lexicographically, which lets the
//! primary objective and every tie-break ride in one additive value.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::Group;

pub(crate) struct IneqDp<'a> {
    pub group: &'a Group,
    /// Required group element of the full slack vector.
    pub target: u64,
    /// `R_{*,l}` per layer.
    pub r_cols: Vec<Vec<i64>>,
    pub rhs: Vec<i64>,
    /// Cost vector of one unit of `y_l`.
    pub unit_cost: Vec<Vec<i64>>,
    pub bound: i64,
    pub max_states: u64,
}

struct Shape {
    lo: Vec<i64>,
    width: Vec<u64>,
}

impl Shape {
    fn index(&self, eta: &[i64], gamma: u64, gsize: u64) -> Option<usize> {
        let mut idx = 0u64;
        for j in (0..eta.len()).rev() {
            let off = eta[j] - self.lo[j];
            if off < 0 || off as u64 >= self.width[j] {
                return None;
            }
            idx = idx * self.width[j] + off as u64;
        }
        Some((idx * gsize + gamma) as usize)
    }

    fn decode(&self, idx: usize, gsize: u64, eta: &mut [i64]) -> u64 {
        let idx = idx as u64;
        let gamma = idx % gsize;
        let mut rest = idx / gsize;
        for j in 0..eta.len() {
            eta[j] = self.lo[j] + (rest % self.width[j]) as i64;
            rest /= self.width[j];
        }
        gamma
    }
}

impl IneqDp<'_> {
    fn shapes(&self) -> Result<Option<Vec<Shape>>> {
        let n = self.r_cols.len();
        let m = self.rhs.len();
        let gsize = self.group.size();
        let y = i128::from(self.bound);
        let mut out = Vec::with_capacity(n + 1);
        for l in 0..=n {
            let mut lo = Vec::with_capacity(m);
            let mut width = Vec::with_capacity(m);
            let mut size: u128 = u128::from(gsize);
            for j in 0..m {
                let part = |range: std::ops::Range<usize>, pick_max: bool| -> i128 {
                    range
                        .map(|i| {
                            let v = i128::from(self.r_cols[i][j]) * y;
                            if pick_max {
                                v.max(0)
                            } else {
                                v.min(0)
                            }
                        })
                        .sum()
                };
                let a = part(0..l, false);
                let b = part(0..l, true).min(i128::from(self.rhs[j]) - part(l..n, false));
                if a > b {
                    return Ok(None);
                }
                lo.push(i64::try_from(a).map_err(|_| Error::overflow())?);
                let w = u64::try_from(b - a + 1).map_err(|_| Error::overflow())?;
                width.push(w);
                size = size.saturating_mul(u128::from(w));
            }
            if size > u128::from(u64::MAX / 2) {
                return Err(Error::overflow());
            }
            out.push(Shape { lo, width });
        }
        Ok(Some(out))
    }

    /// Lexicographically cheapest slack vector, or `None` if infeasible.
    ///
    /// The first cost entry is nonnegative per unit (dual feasibility), so
    /// passes with a doubling cap on it are exact once the cap reaches the
    /// optimum; only the last pass explores the whole table.
    pub(crate) fn solve(&self) -> Result<Option<Vec<i64>>> {
        let Some(shapes) = self.shapes()? else {
            return Ok(None);
        };
        if self.unit_cost.iter().any(|c| c[0] < 0) {
            return Err(Error::Invariant("negative reduced cost at an optimal basis".into()));
        }
        let full: i64 = self
            .unit_cost
            .iter()
            .map(|c| c[0].saturating_mul(self.bound))
            .fold(0i64, i64::saturating_add);
        let mut cap = 0i64;
        loop {
            match self.pass(&shapes, cap)? {
                Some((cost, digits)) if cost <= cap || cap >= full => return Ok(Some(digits)),
                // A path found above the cap bounds the optimum.
                Some((cost, _)) => cap = cost,
                None if cap >= full => return Ok(None),
                None => cap = cap.saturating_mul(2).max(1).min(full),
            }
        }
    }

    /// Exact among slack vectors whose primary cost is at most `cap`; may
    /// return a costlier path when none is.
    fn pass(&self, shapes: &[Shape], cap: i64) -> Result<Option<(i64, Vec<i64>)>> {
        let n = self.r_cols.len();
        let m = self.rhs.len();
        let k = self.unit_cost.first().map_or(1, Vec::len);
        let gsize = self.group.size();
        let top = |l: usize| -> i64 {
            let w = self.unit_cost[l][0];
            if w == 0 {
                self.bound
            } else {
                self.bound.min(cap / w)
            }
        };
        let steps: Vec<Vec<Vec<u64>>> = (0..n)
            .map(|l| (0..=top(l)).map(|z| self.group.of_digit(l, z)).collect())
            .collect();

        // Forward: reachable states with their cheapest primary prefix.
        let mut layers: Vec<HashMap<u64, i64>> = vec![HashMap::new(); n + 1];
        let zero = vec![0i64; m];
        let Some(start) = shapes[0].index(&zero, 0, gsize) else {
            return Ok(None);
        };
        layers[0].insert(start as u64, 0);
        let mut eta = vec![0i64; m];
        let mut next_eta = vec![0i64; m];
        let mut total = 1u64;
        for l in 0..n {
            let (head, tail) = layers.split_at_mut(l + 1);
            let (cur, next) = (&head[l], &mut tail[0]);
            for (&idx, &cost) in cur {
                let gamma = shapes[l].decode(idx as usize, gsize, &mut eta);
                for z in 0..=top(l) {
                    let nc = cost + z * self.unit_cost[l][0];
                    if nc > cap {
                        break;
                    }
                    for j in 0..m {
                        next_eta[j] = eta[j] + z * self.r_cols[l][j];
                    }
                    let g = self.group.add(gamma, &steps[l][z as usize]);
                    let Some(ni) = shapes[l + 1].index(&next_eta, g, gsize) else {
                        continue;
                    };
                    let e = next.entry(ni as u64).or_insert(i64::MAX);
                    *e = (*e).min(nc);
                }
            }
            total += next.len() as u64;
            if total > self.max_states {
                return Err(Error::TableTooLarge {
                    required: u128::from(total),
                    limit: u128::from(self.max_states),
                });
            }
        }

        // Backward: cheapest completion of every stored state.
        let mut comp: Vec<HashMap<u64, Vec<i64>>> = vec![HashMap::new(); n + 1];
        for &idx in layers[n].keys() {
            if shapes[n].decode(idx as usize, gsize, &mut eta) == self.target {
                comp[n].insert(idx, vec![0; k]);
            }
        }
        let mut cand = vec![0i64; k];
        for l in (0..n).rev() {
            let (head, tail) = comp.split_at_mut(l + 1);
            let (cur, next) = (&mut head[l], &tail[0]);
            for &idx in layers[l].keys() {
                let gamma = shapes[l].decode(idx as usize, gsize, &mut eta);
                let mut best: Option<Vec<i64>> = None;
                for z in 0..=top(l) {
                    for j in 0..m {
                        next_eta[j] = eta[j] + z * self.r_cols[l][j];
                    }
                    let g = self.group.add(gamma, &steps[l][z as usize]);
                    let Some(ni) = shapes[l + 1].index(&next_eta, g, gsize) else {
                        continue;
                    };
                    let Some(after) = next.get(&(ni as u64)) else {
                        continue;
                    };
                    for c in 0..k {
                        cand[c] = after[c] + z * self.unit_cost[l][c];
                    }
                    if best.as_ref().is_none_or(|b| cand < *b) {
                        best = Some(cand.clone());
                    }
                }
                if let Some(b) = best {
                    cur.insert(idx, b);
                }
            }
        }
        let Some(want0) = comp[0].get(&(start as u64)) else {
            return Ok(None);
        };
        let cost = want0[0];

        let mut idx = start as u64;
        let mut want = want0.clone();
        let mut digits = Vec::with_capacity(n);
        for l in 0..n {
            let gamma = shapes[l].decode(idx as usize, gsize, &mut eta);
            let mut chosen = None;
            for z in 0..=top(l) {
                for j in 0..m {
                    next_eta[j] = eta[j] + z * self.r_cols[l][j];
                }
                let g = self.group.add(gamma, &steps[l][z as usize]);
                let Some(ni) = shapes[l + 1].index(&next_eta, g, gsize) else {
                    continue;
                };
                let Some(after) = comp[l + 1].get(&(ni as u64)) else {
                    continue;
                };
                if (0..k).all(|c| after[c] + z * self.unit_cost[l][c] == want[c]) {
                    chosen = Some((z, ni as u64, after.clone()));
                    break;
                }
            }
            let (z, ni, after) = chosen.ok_or_else(|| Error::Invariant("slack reconstruction failed".into()))?;
            digits.push(z);
            idx = ni;
            want = after;
        }
        Ok(Some((cost, digits)))
    }
}
