//! `max { c^T x : H x <= b, x ∈ Z^n }` for matrices with few rows beyond `n`.
//!
//! The LP optimum fixes a basis `H_B`. Slack digits `y = b_B - H_B x` are
//! bounded by `nΔ`, and `x = H_B^{-1}(b_B - y)` is integral exactly when
//! `y` lies in the right coset of `Λ(H_B)`, so the problem becomes a group
//! minimization over `y` with `m` extra inequalities.

mod dp;
mod lp;

use num_traits::{One, Signed, ToPrimitive, Zero};

pub use lp::{lp_vertex_optimum, LpOutcome};

use crate::error::{Error, Result};
use crate::exactmat::{adjugate, det, dot, max_minor_abs, rank};
use crate::group::Group;
use crate::slvp::DpLimits;
use crate::{Int, IntMatrix, Rat, RatVector};

use dp::IneqDp;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IlpInstance {
    pub h: IntMatrix,
    pub b: Vec<Int>,
    pub c: Vec<Int>,
    /// Largest absolute `n x n` minor of `h`.
    pub delta: Int,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IlpStatus {
    Optimal,
    Infeasible,
    /// The relaxation is unbounded; the integer problem is unbounded or
    /// infeasible.
    Unbounded,
}

impl IlpStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            IlpStatus::Optimal => "optimal",
            IlpStatus::Infeasible => "infeasible",
            IlpStatus::Unbounded => "unbounded",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IlpResult {
    pub status: IlpStatus,
    pub x: Option<Vec<Int>>,
    pub objective: Option<Int>,
    pub lp_vertex: Option<RatVector>,
    pub lp_value: Option<Rat>,
    pub basis: Option<Vec<usize>>,
    /// `b_B - H_B x` at the LP basis.
    pub slack: Option<Vec<Int>>,
    /// Set with `Unbounded`: integer infeasibility was not ruled out.
    pub unbounded_caveat: bool,
}

impl IlpResult {
    fn status_only(status: IlpStatus) -> IlpResult {
        IlpResult {
            status,
            x: None,
            objective: None,
            lp_vertex: None,
            lp_value: None,
            basis: None,
            slack: None,
            unbounded_caveat: status == IlpStatus::Unbounded,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProximityReport {
    pub slack_max: Int,
    /// `nΔ`.
    pub bound: Int,
    pub ratio: Rat,
    pub passed: bool,
}

impl IlpInstance {
    pub fn new(h: IntMatrix, b: Vec<Int>, c: Vec<Int>) -> Result<IlpInstance> {
        if b.len() != h.rows() {
            return Err(Error::dim(format!("b has {} entries for {} rows", b.len(), h.rows())));
        }
        if c.len() != h.cols() {
            return Err(Error::dim(format!(
                "c has {} entries for {} columns",
                c.len(),
                h.cols()
            )));
        }
        if rank(&h) < h.cols() {
            crate::exactmat::hnf(&h)?;
            return Err(Error::Rank {
                dependent_columns: (0..h.cols()).collect(),
            });
        }
        let delta = max_minor_abs(&h, h.cols())?;
        Ok(IlpInstance { h, b, c, delta })
    }

    pub fn n(&self) -> usize {
        self.h.cols()
    }

    pub fn is_feasible(&self, x: &[Int]) -> bool {
        self.h
            .mul_vec(x)
            .map(|hx| hx.iter().zip(&self.b).all(|(a, b)| a <= b))
            .unwrap_or(false)
    }

    pub fn objective(&self, x: &[Int]) -> Int {
        dot(&self.c, x)
    }

    pub fn lp(&self) -> LpOutcome {
        lp_vertex_optimum(&self.h, &self.b, &self.c)
    }

    /// `nΔ`, the bound on every slack of some optimal solution.
    pub fn proximity_bound(&self) -> Int {
        Int::from(self.n()) * &self.delta
    }

    fn slack_at(&self, basis: &[usize], x: &[Int]) -> Vec<Int> {
        basis.iter().map(|&i| &self.b[i] - dot(self.h.row(i), x)).collect()
    }

    fn optimal(&self, x: Vec<Int>, vertex: RatVector, value: Rat, basis: Vec<usize>) -> IlpResult {
        let slack = self.slack_at(&basis, &x);
        IlpResult {
            status: IlpStatus::Optimal,
            objective: Some(self.objective(&x)),
            x: Some(x),
            lp_vertex: Some(vertex),
            lp_value: Some(value),
            basis: Some(basis),
            slack: Some(slack),
            unbounded_caveat: false,
        }
    }

    /// Per-coordinate integer ranges that contain every optimal solution
    /// reachable by the slack bound, tightened by the relaxation's own
    /// bounds where those are finite. `None` unless the relaxation has an
    /// optimal vertex.
    pub fn certified_box(&self) -> Option<Vec<(Int, Int)>> {
        self.certified_box_above(None)
    }

    /// As [`IlpInstance::certified_box`], with the relaxation cut by
    /// `c^T x >= floor`. Every optimum survives the cut as long as `floor`
    /// is the objective of some feasible point.
    pub fn certified_box_above(&self, floor: Option<&Int>) -> Option<Vec<(Int, Int)>> {
        let LpOutcome::Optimal { vertex, basis, .. } = self.lp() else {
            return None;
        };
        let n = self.n();
        let (hc, bc) = match floor {
            Some(f) => {
                let neg_c = IntMatrix::new(1, n, self.c.iter().map(|v| -v).collect()).expect("1 x n");
                let mut b = self.b.clone();
                b.push(-f);
                (self.h.vstack(&neg_c).expect("same width"), b)
            }
            None => (self.h.clone(), self.b.clone()),
        };
        let hb = self.h.select_rows(&basis).expect("basis rows");
        let d = det(&hb).expect("square").abs();
        let adj = adjugate(&hb).expect("square");
        let bound = self.proximity_bound();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let row: Int = adj.row(i).iter().map(|v| v.abs()).sum();
            let reach = Rat::new(&bound * row, d.clone());
            let mut lo = (vertex[i].clone() - reach.clone()).ceil().to_integer();
            let mut hi = (vertex[i].clone() + reach).floor().to_integer();
            let unit = |s: i64| -> Vec<Int> {
                (0..n)
                    .map(|j| if j == i { Int::from(s) } else { Int::zero() })
                    .collect()
            };
            match lp_vertex_optimum(&hc, &bc, &unit(1)) {
                LpOutcome::Optimal { value, .. } => hi = hi.min(value.floor().to_integer()),
                LpOutcome::Infeasible => return Some(vec![(Int::one(), Int::zero()); n]),
                LpOutcome::Unbounded => {}
            }
            if let LpOutcome::Optimal { value, .. } = lp_vertex_optimum(&hc, &bc, &unit(-1)) {
                lo = lo.max((-value).ceil().to_integer());
            }
            out.push((lo, hi));
        }
        Some(out)
    }
}

/// Exact optimum via the LP basis and the slack group program. Ties go to
/// the lexicographically smallest `x` among solutions whose slacks respect
/// the proximity bound.
pub fn solve_ilp(inst: &IlpInstance) -> Result<IlpResult> {
    solve_ilp_with(inst, &DpLimits::default())
}

fn small(v: &Int) -> Result<i64> {
    v.to_i64().filter(|x| x.abs() < 1 << 40).ok_or_else(Error::overflow)
}

pub fn solve_ilp_with(inst: &IlpInstance, limits: &DpLimits) -> Result<IlpResult> {
    let (vertex, basis, value) = match inst.lp() {
        LpOutcome::Infeasible => return Ok(IlpResult::status_only(IlpStatus::Infeasible)),
        LpOutcome::Unbounded => return Ok(IlpResult::status_only(IlpStatus::Unbounded)),
        LpOutcome::Optimal { vertex, basis, value } => (vertex, basis, value),
    };
    let n = inst.n();
    let rest: Vec<usize> = (0..inst.h.rows()).filter(|i| !basis.contains(i)).collect();
    let hb = inst.h.select_rows(&basis)?;
    let bb: Vec<Int> = basis.iter().map(|&i| inst.b[i].clone()).collect();
    let det_b = det(&hb)?;
    let delta_b = det_b.abs();
    // H* = δ H_B^{-1}
    let mut hstar = adjugate(&hb)?;
    if det_b.is_negative() {
        hstar = hstar.neg();
    }
    let group = Group::new(&hb)?;
    let target = group.of_vector(&bb);

    let (r_cols, rhs) = if rest.is_empty() {
        (vec![Vec::new(); n], Vec::new())
    } else {
        let hn = inst.h.select_rows(&rest)?;
        let coupling = hn.mul(&hstar)?;
        let r = coupling.neg();
        let cb = coupling.mul_vec(&bb)?;
        let rhs: Vec<i64> = rest
            .iter()
            .zip(&cb)
            .map(|(&i, v)| small(&(&delta_b * &inst.b[i] - v)))
            .collect::<Result<_>>()?;
        let cols = (0..n)
            .map(|l| (0..r.rows()).map(|j| small(&r[(j, l)])).collect())
            .collect::<Result<Vec<Vec<i64>>>>()?;
        (cols, rhs)
    };

    // Minimize (c^T H* y, -(H* y)_1, ..., -(H* y)_n): the first entry maximizes
    // c^T x, the rest pick the lexicographically smallest x.
    let ch = hstar.transpose().mul_vec(&inst.c)?;
    let unit_cost = (0..n)
        .map(|l| {
            let mut v = vec![small(&ch[l])?];
            for i in 0..n {
                v.push(small(&-hstar[(i, l)].clone())?);
            }
            Ok(v)
        })
        .collect::<Result<Vec<Vec<i64>>>>()?;
    let bound = small(&inst.proximity_bound())?;
    let problem = IneqDp {
        group: &group,
        target,
        r_cols,
        rhs,
        unit_cost,
        bound,
        max_states: limits.max_states,
    };
    let Some(y) = problem.solve()? else {
        return Ok(IlpResult::status_only(IlpStatus::Infeasible));
    };
    let y: Vec<Int> = y.into_iter().map(Int::from).collect();
    let diff: Vec<Int> = bb.iter().zip(&y).map(|(a, b)| a - b).collect();
    let scaled = hstar.mul_vec(&diff)?;
    let x = scaled
        .iter()
        .map(|v| {
            if (v % &delta_b).is_zero() {
                Ok(v / &delta_b)
            } else {
                Err(Error::Invariant("recovered x is not integral".into()))
            }
        })
        .collect::<Result<Vec<Int>>>()?;
    if !inst.is_feasible(&x) {
        return Err(Error::Invariant("recovered x violates H x <= b".into()));
    }
    let res = inst.optimal(x, vertex, value, basis);
    if res.slack.as_deref() != Some(&y[..]) {
        return Err(Error::Invariant("slack differs from the dynamic program's".into()));
    }
    Ok(res)
}

/// Best integer point of `H x <= b` inside the box; ties go to the
/// lexicographically smallest `x`.
pub fn oracle_ilp(inst: &IlpInstance, bounds: &[(Int, Int)]) -> IlpResult {
    let n = inst.n();
    assert_eq!(bounds.len(), n, "one range per coordinate");
    let small = |v: &Int| v.to_i64().expect("oracle ranges fit in i64");
    let ranges: Vec<(i64, i64)> = bounds.iter().map(|(a, b)| (small(a), small(b))).collect();
    if ranges.iter().any(|(a, b)| a > b) {
        return IlpResult::status_only(IlpStatus::Infeasible);
    }
    let h: Vec<Vec<i128>> = (0..inst.h.rows())
        .map(|i| inst.h.row(i).iter().map(|v| i128::from(small(v))).collect())
        .collect();
    let b: Vec<i128> = inst.b.iter().map(|v| i128::from(small(v))).collect();
    let c: Vec<i128> = inst.c.iter().map(|v| i128::from(small(v))).collect();
    let mut search = OracleSearch::new(h, b, c, ranges);
    search.run(0);
    finish_oracle(inst, search.best)
}

/// Depth-first scan in lexicographic order. A prefix is cut when some row
/// cannot be satisfied by any completion in the box, or when no completion
/// can beat the incumbent.
struct OracleSearch {
    h: Vec<Vec<i128>>,
    b: Vec<i128>,
    c: Vec<i128>,
    ranges: Vec<(i64, i64)>,
    /// `row_min[i][l]`: smallest value of row `i` over coordinates `l..`.
    row_min: Vec<Vec<i128>>,
    /// `obj_max[l]`: largest objective contribution of coordinates `l..`.
    obj_max: Vec<i128>,
    x: Vec<i64>,
    row_val: Vec<i128>,
    obj_val: i128,
    best: Option<(i128, Vec<i64>)>,
}

impl OracleSearch {
    fn new(h: Vec<Vec<i128>>, b: Vec<i128>, c: Vec<i128>, ranges: Vec<(i64, i64)>) -> OracleSearch {
        let n = ranges.len();
        let extreme = |a: i128, (lo, hi): (i64, i64), max: bool| -> i128 {
            let (u, v) = (a * i128::from(lo), a * i128::from(hi));
            if max {
                u.max(v)
            } else {
                u.min(v)
            }
        };
        let row_min = h
            .iter()
            .map(|row| {
                let mut acc = vec![0i128; n + 1];
                for l in (0..n).rev() {
                    acc[l] = acc[l + 1] + extreme(row[l], ranges[l], false);
                }
                acc
            })
            .collect();
        let mut obj_max = vec![0i128; n + 1];
        for l in (0..n).rev() {
            obj_max[l] = obj_max[l + 1] + extreme(c[l], ranges[l], true);
        }
        let rows = h.len();
        OracleSearch {
            h,
            b,
            c,
            x: vec![0; n],
            row_val: vec![0; rows],
            obj_val: 0,
            row_min,
            obj_max,
            ranges,
            best: None,
        }
    }

    fn run(&mut self, l: usize) {
        let n = self.ranges.len();
        if l == n {
            if self.best.as_ref().is_none_or(|(v, _)| self.obj_val > *v) {
                self.best = Some((self.obj_val, self.x.clone()));
            }
            return;
        }
        let (lo, hi) = self.ranges[l];
        for v in lo..=hi {
            let v128 = i128::from(v);
            self.x[l] = v;
            let obj = self.obj_val + self.c[l] * v128;
            if let Some((bv, _)) = &self.best {
                if obj + self.obj_max[l + 1] <= *bv {
                    continue;
                }
            }
            let feasible =
                (0..self.h.len()).all(|i| self.row_val[i] + self.h[i][l] * v128 + self.row_min[i][l + 1] <= self.b[i]);
            if !feasible {
                continue;
            }
            for i in 0..self.h.len() {
                self.row_val[i] += self.h[i][l] * v128;
            }
            let saved = std::mem::replace(&mut self.obj_val, obj);
            self.run(l + 1);
            self.obj_val = saved;
            for i in 0..self.h.len() {
                self.row_val[i] -= self.h[i][l] * v128;
            }
        }
    }
}

fn finish_oracle(inst: &IlpInstance, best: Option<(i128, Vec<i64>)>) -> IlpResult {
    let Some((_, x)) = best else {
        return IlpResult::status_only(IlpStatus::Infeasible);
    };
    let x: Vec<Int> = x.into_iter().map(Int::from).collect();
    match inst.lp() {
        LpOutcome::Optimal { vertex, basis, value } => inst.optimal(x, vertex, value, basis),
        _ => IlpResult {
            objective: Some(inst.objective(&x)),
            x: Some(x),
            ..IlpResult::status_only(IlpStatus::Optimal)
        },
    }
}

/// Checks `||y||_∞ <= nΔ` for the slack of an optimal result.
pub fn proximity_check(inst: &IlpInstance, result: &IlpResult) -> Option<ProximityReport> {
    let slack = result.slack.as_ref()?;
    let slack_max = slack.iter().map(|v| v.abs()).max().unwrap_or_else(Int::zero);
    let bound = inst.proximity_bound();
    let ratio = if bound.is_zero() {
        Rat::zero()
    } else {
        Rat::new(slack_max.clone(), bound.clone())
    };
    Some(ProximityReport {
        passed: slack.iter().all(|v| !v.is_negative()) && slack_max <= bound,
        slack_max,
        bound,
        ratio,
    })
}

#[cfg(test)]
mod tests;
