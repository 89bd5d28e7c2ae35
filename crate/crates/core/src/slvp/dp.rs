//! Layered dynamic program over `(γ, η, nonzero)` states.
//!
//! Layer `l` holds the states reachable after choosing the first `l` digits
//! of `x_B`. A forward pass collects reachable states whose partial cost does
//! not exceed a known upper bound; a backward pass then computes the cheapest
//! completion of each of them. Reconstruction walks forward choosing the
//! smallest digit that stays optimal, so the answer is the lexicographically
//! smallest optimal `x_B`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::Group;

pub(crate) const INF: u64 = u64::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Agg {
    Sum,
    Max,
}

impl Agg {
    pub(crate) fn apply(self, a: u64, b: u64) -> u64 {
        if a == INF || b == INF {
            return INF;
        }
        match self {
            Agg::Sum => a + b,
            Agg::Max => a.max(b),
        }
    }
}

pub(crate) struct DpProblem<'a> {
    pub group: &'a Group,
    /// `R_{*,l}` for each layer.
    pub r_cols: Vec<Vec<i64>>,
    /// Digit range per layer and the cost of each digit (`INF` = forbidden).
    pub digit_lo: Vec<i64>,
    pub digit_cost: Vec<Vec<u64>>,
    /// Final `η` must lie in these boxes.
    pub final_box: Vec<(i64, i64)>,
    /// Cost of a final `η`; `INF` rejects it.
    pub terminal: &'a dyn Fn(&[i64]) -> u64,
    pub require_nonzero: bool,
    pub agg: Agg,
    /// Inclusive bound on the optimum.
    pub upper: u64,
    pub max_states: u64,
    /// For additive costs where the terminal cost is that of `η / δ`:
    /// prunes states whose `η` cannot be brought back within the budget.
    pub budget: Option<Budget<'a>>,
}

pub(crate) struct Budget<'a> {
    pub delta: i64,
    /// Largest `|z|` whose cost fits in the budget.
    pub root: &'a dyn Fn(u64) -> i64,
    /// `ℓ_1`: the budget bounds the sum of the remaining `|z|`.
    pub linear: bool,
}

/// `|η_j|` limits after layer `l` as a function of the remaining budget.
struct Reach<'a> {
    budget: &'a Budget<'a>,
    /// `Σ_{i>=l} |R_ij|`
    abs_sum: Vec<Vec<i128>>,
    /// `max(δ, max_{i>=l} |R_ij|)`
    abs_max: Vec<Vec<i128>>,
}

impl Reach<'_> {
    fn allows(&self, l: usize, eta: &[i64], remaining: u64) -> bool {
        let beta = i128::from((self.budget.root)(remaining));
        let delta = i128::from(self.budget.delta);
        eta.iter().enumerate().all(|(j, &e)| {
            let mut lim = beta * (delta + self.abs_sum[l][j]);
            if self.budget.linear {
                lim = lim.min(i128::from(remaining) * self.abs_max[l][j]);
            }
            i128::from(e).abs() <= lim
        })
    }
}

struct Shape {
    lo: Vec<i64>,
    width: Vec<u64>,
}

struct Layer {
    shape: Shape,
    /// key -> (cheapest prefix cost, cheapest completion)
    states: HashMap<u64, (u64, u64)>,
}

impl Shape {
    fn key(&self, eta: &[i64], gamma: u64, flag: bool, gsize: u64) -> Option<u64> {
        let mut idx = 0u64;
        for j in (0..eta.len()).rev() {
            let off = eta[j] - self.lo[j];
            if off < 0 || off as u64 >= self.width[j] {
                return None;
            }
            idx = idx * self.width[j] + off as u64;
        }
        Some((idx * gsize + gamma) * 2 + u64::from(flag))
    }

    fn decode(&self, key: u64, gsize: u64, eta: &mut [i64]) -> (u64, bool) {
        let flag = key % 2 == 1;
        let rest = key / 2;
        let gamma = rest % gsize;
        let mut idx = rest / gsize;
        for j in 0..eta.len() {
            eta[j] = self.lo[j] + (idx % self.width[j]) as i64;
            idx /= self.width[j];
        }
        (gamma, flag)
    }
}

pub(crate) struct DpSolution {
    pub cost: u64,
    pub digits: Vec<i64>,
    pub states: u64,
}

impl DpProblem<'_> {
    fn digit_range(&self, l: usize) -> (i64, i64) {
        let lo = self.digit_lo[l];
        (lo, lo + self.digit_cost[l].len() as i64 - 1)
    }

    /// Per-layer `η` boxes: reachable from the start and able to reach the
    /// final box.
    fn boxes(&self) -> Result<Vec<(Vec<i64>, Vec<u64>)>> {
        let n = self.digit_lo.len();
        let m = self.final_box.len();
        let mut out = Vec::with_capacity(n + 1);
        let extent = |l: usize, j: usize| -> (i128, i128) {
            let (a, b) = self.digit_range(l);
            let r = i128::from(self.r_cols[l][j]);
            let (x, y) = (r * i128::from(a), r * i128::from(b));
            (x.min(y), x.max(y))
        };
        for l in 0..=n {
            let mut lo = Vec::with_capacity(m);
            let mut width = Vec::with_capacity(m);
            for j in 0..m {
                let (mut plo, mut phi) = (0i128, 0i128);
                for i in 0..l {
                    let (a, b) = extent(i, j);
                    plo += a;
                    phi += b;
                }
                let (mut slo, mut shi) = (0i128, 0i128);
                for i in l..n {
                    let (a, b) = extent(i, j);
                    slo += a;
                    shi += b;
                }
                let (flo, fhi) = self.final_box[j];
                let a = plo.max(i128::from(flo) - shi);
                let b = phi.min(i128::from(fhi) - slo);
                if a > b {
                    return Ok(Vec::new());
                }
                let a = i64::try_from(a).map_err(|_| Error::overflow())?;
                i64::try_from(b).map_err(|_| Error::overflow())?;
                lo.push(a);
                width.push(u64::try_from(b - i128::from(a) + 1).map_err(|_| Error::overflow())?);
            }
            let dense = width
                .iter()
                .try_fold(self.group.size() * 2, |acc: u64, &w| acc.checked_mul(w))
                .filter(|&v| v < u64::MAX / 2);
            if dense.is_none() {
                return Err(Error::overflow());
            }
            out.push((lo, width));
        }
        Ok(out)
    }

    pub(crate) fn solve(&self) -> Result<Option<DpSolution>> {
        let n = self.digit_lo.len();
        let m = self.final_box.len();
        let gsize = self.group.size();
        let boxes = self.boxes()?;
        if boxes.is_empty() {
            return Ok(None);
        }
        let steps: Vec<Vec<Vec<u64>>> = (0..n)
            .map(|l| {
                let (a, b) = self.digit_range(l);
                (a..=b).map(|z| self.group.of_digit(l, z)).collect()
            })
            .collect();
        let mut layers: Vec<Layer> = boxes
            .into_iter()
            .map(|(lo, width)| Layer {
                shape: Shape { lo, width },
                states: HashMap::new(),
            })
            .collect();

        let start_flag = !self.require_nonzero;
        let eta0 = vec![0i64; m];
        match layers[0].shape.key(&eta0, 0, start_flag, gsize) {
            Some(k) => {
                layers[0].states.insert(k, (0, INF));
            }
            None => return Ok(None),
        }

        let reach = self.budget.as_ref().filter(|_| self.agg == Agg::Sum).map(|b| {
            let mut abs_sum = vec![vec![0i128; m]; n + 1];
            let mut abs_max = vec![vec![i128::from(b.delta); m]; n + 1];
            for l in (0..n).rev() {
                for j in 0..m {
                    let r = i128::from(self.r_cols[l][j]).abs();
                    abs_sum[l][j] = abs_sum[l + 1][j] + r;
                    abs_max[l][j] = abs_max[l + 1][j].max(r);
                }
            }
            Reach {
                budget: b,
                abs_sum,
                abs_max,
            }
        });

        let mut total: u64 = 1;
        let mut eta = vec![0i64; m];
        let mut next_eta = vec![0i64; m];
        for l in 0..n {
            let (cur, rest) = layers.split_at_mut(l + 1);
            let (cur, next) = (&cur[l], &mut rest[0]);
            let (zlo, zhi) = self.digit_range(l);
            for (&key, &(cost, _)) in &cur.states {
                let (gamma, flag) = cur.shape.decode(key, gsize, &mut eta);
                for z in zlo..=zhi {
                    if !flag && z < 0 {
                        continue;
                    }
                    let c = self.digit_cost[l][(z - zlo) as usize];
                    let nc = self.agg.apply(cost, c);
                    if nc > self.upper {
                        continue;
                    }
                    for j in 0..m {
                        next_eta[j] = eta[j] + z * self.r_cols[l][j];
                    }
                    if let Some(r) = &reach {
                        if !r.allows(l + 1, &next_eta, self.upper - nc) {
                            continue;
                        }
                    }
                    let g = self.group.add(gamma, &steps[l][(z - zlo) as usize]);
                    let Some(nk) = next.shape.key(&next_eta, g, flag || z != 0, gsize) else {
                        continue;
                    };
                    let e = next.states.entry(nk).or_insert((INF, INF));
                    if nc < e.0 {
                        e.0 = nc;
                    }
                }
            }
            total += next.states.len() as u64;
            if total > self.max_states {
                return Err(Error::TableTooLarge {
                    required: u128::from(total),
                    limit: u128::from(self.max_states),
                });
            }
        }

        // Completion costs.
        let mut best = INF;
        let last = &mut layers[n];
        for (&key, v) in last.states.iter_mut() {
            let (gamma, flag) = last.shape.decode(key, gsize, &mut eta);
            v.1 = if gamma == 0 && flag { (self.terminal)(&eta) } else { INF };
            let t = self.agg.apply(v.0, v.1);
            if t <= self.upper {
                best = best.min(t);
            }
        }
        if best == INF {
            return Ok(None);
        }
        for l in (0..n).rev() {
            let (cur, rest) = layers.split_at_mut(l + 1);
            let (cur, next) = (&mut cur[l], &rest[0]);
            let (zlo, zhi) = self.digit_range(l);
            for (&key, v) in cur.states.iter_mut() {
                let (gamma, flag) = cur.shape.decode(key, gsize, &mut eta);
                let mut bestc = INF;
                for z in zlo..=zhi {
                    if !flag && z < 0 {
                        continue;
                    }
                    let c = self.digit_cost[l][(z - zlo) as usize];
                    if c == INF {
                        continue;
                    }
                    for j in 0..m {
                        next_eta[j] = eta[j] + z * self.r_cols[l][j];
                    }
                    let g = self.group.add(gamma, &steps[l][(z - zlo) as usize]);
                    if let Some(nk) = next.shape.key(&next_eta, g, flag || z != 0, gsize) {
                        if let Some(&(_, after)) = next.states.get(&nk) {
                            bestc = bestc.min(self.agg.apply(c, after));
                        }
                    }
                }
                v.1 = bestc;
            }
        }

        // Walk forward, smallest optimal digit first.
        let mut digits = Vec::with_capacity(n);
        let mut key = layers[0].shape.key(&eta0, 0, start_flag, gsize).expect("start state");
        let mut prefix = 0u64;
        for l in 0..n {
            let (gamma, flag) = layers[l].shape.decode(key, gsize, &mut eta);
            let (zlo, zhi) = self.digit_range(l);
            let mut chosen = None;
            for z in zlo..=zhi {
                if !flag && z < 0 {
                    continue;
                }
                let c = self.digit_cost[l][(z - zlo) as usize];
                if c == INF {
                    continue;
                }
                for j in 0..m {
                    next_eta[j] = eta[j] + z * self.r_cols[l][j];
                }
                let g = self.group.add(gamma, &steps[l][(z - zlo) as usize]);
                let Some(nk) = layers[l + 1].shape.key(&next_eta, g, flag || z != 0, gsize) else {
                    continue;
                };
                if let Some(&(_, after)) = layers[l + 1].states.get(&nk) {
                    let p = self.agg.apply(prefix, c);
                    if self.agg.apply(p, after) == best {
                        chosen = Some((z, nk, p));
                        break;
                    }
                }
            }
            let (z, nk, p) = chosen.ok_or_else(|| Error::Invariant("dynamic program lost its optimal path".into()))?;
            digits.push(z);
            key = nk;
            prefix = p;
        }
        Ok(Some(DpSolution {
            cost: best,
            digits,
            states: total,
        }))
    }
}
