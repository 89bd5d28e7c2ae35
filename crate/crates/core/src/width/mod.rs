//! Lattice width of simplices `P(H, b)`.
//!
//! Two routes: a direct search over integer directions in a box, and the
//! reduction to feasibility subproblems `(p + cone C) ∩ (q - cone C) ∩ Z^k`
//! supplied by the caller in families, each with a threshold and a decision
//! rule.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exactmat::{adjugate, det, max_minor_abs, parse_ratio, rank, solve_rational, RatVec};
use crate::geom::{cone_feasible, scan_box};
use crate::{Int, IntMatrix, Rat, RatVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexInstance {
    pub h: IntMatrix,
    pub b: Vec<Int>,
    vertices: Vec<RatVector>,
}

impl SimplexInstance {
    /// Validates that `P(h, b)` is a full-dimensional simplex.
    pub fn new(h: IntMatrix, b: Vec<Int>) -> Result<SimplexInstance> {
        let n = h.cols();
        if h.rows() != n + 1 {
            return Err(Error::Shape(format!(
                "a simplex in dimension {n} needs {} rows, got {}",
                n + 1,
                h.rows()
            )));
        }
        if b.len() != n + 1 {
            return Err(Error::dim(format!("b has {} entries for {} rows", b.len(), n + 1)));
        }
        if rank(&h) < n {
            return Err(Error::NotSimplex("the constraint matrix has rank below n".into()));
        }
        let mut vertices = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let rows: Vec<usize> = (0..=n).filter(|&i| i != k).collect();
            let sub = h.select_rows(&rows)?;
            let rhs = RatVec::from_integers(&rows.iter().map(|&i| b[i].clone()).collect::<Vec<_>>());
            let v = solve_rational(&sub, &rhs)
                .map_err(|_| Error::NotSimplex(format!("rows other than {k} are linearly dependent")))?;
            let lhs: Rat = h
                .row(k)
                .iter()
                .zip(v.iter())
                .map(|(a, x)| Rat::from_integer(a.clone()) * x)
                .sum();
            if lhs >= Rat::from_integer(b[k].clone()) {
                return Err(Error::NotSimplex(format!(
                    "the vertex opposite row {k} does not strictly satisfy it"
                )));
            }
            vertices.push(v);
        }
        // Bounded iff the left kernel of h is spanned by a positive vector.
        let y = left_kernel(&h)?;
        if !(y.iter().all(|v| v.is_positive()) || y.iter().all(|v| v.is_negative())) {
            return Err(Error::NotSimplex("the polyhedron is unbounded".into()));
        }
        Ok(SimplexInstance { h, b, vertices })
    }

    pub fn n(&self) -> usize {
        self.h.cols()
    }

    pub fn vertices(&self) -> &[RatVector] {
        &self.vertices
    }

    /// `max c^T v - min c^T v` over the vertices.
    pub fn direction_width(&self, c: &[Int]) -> Result<Rat> {
        if c.len() != self.n() {
            return Err(Error::dim("direction length differs from n"));
        }
        if c.iter().all(Zero::is_zero) {
            return Err(Error::Contract("direction must be nonzero".into()));
        }
        Ok(self.width_unchecked(c))
    }

    fn width_unchecked(&self, c: &[Int]) -> Rat {
        let vals: Vec<Rat> = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(c).map(|(x, a)| x * Rat::from_integer(a.clone())).sum())
            .collect();
        let max = vals.iter().max().expect("n + 1 vertices").clone();
        let min = vals.iter().min().expect("n + 1 vertices").clone();
        max - min
    }

    /// A direction box that contains every flat direction: with edge matrix
    /// `E` and any direction of width `w0`, `|c_j| <= w0 · Σ_i |E^{-1}_ij|`.
    pub fn certified_direction_box(&self) -> Int {
        let n = self.n();
        let w0 = (0..n)
            .map(|i| {
                let e: Vec<Int> = (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect();
                self.width_unchecked(&e)
            })
            .min()
            .expect("n >= 1");
        let v0 = &self.vertices[0];
        let edges: Vec<Vec<Rat>> = (0..n)
            .map(|i| (0..n).map(|j| self.vertices[j + 1][i].clone() - &v0[i]).collect())
            .collect();
        // Clear denominators so the inverse comes from integer adjugates.
        let l = edges
            .iter()
            .flatten()
            .fold(Int::one(), |acc, v| num_integer::Integer::lcm(&acc, v.denom()));
        let scaled = IntMatrix::from_fn(n, n, |i, j| {
            (edges[i][j].clone() * Rat::from_integer(l.clone())).to_integer()
        })
        .expect("n x n");
        let d = det(&scaled).expect("square").abs();
        let adj = adjugate(&scaled).expect("square");
        let col_max: Int = (0..n)
            .map(|j| (0..n).map(|i| adj[(i, j)].abs()).sum::<Int>())
            .max()
            .expect("n >= 1");
        // E^{-1} = l · adj(lE) / det(lE)
        let bound = w0 * Rat::new(col_max * l, d);
        bound.floor().to_integer().max(Int::one())
    }

    /// Whether the simplex contains an integer point (bounding box scan).
    pub fn has_integer_point(&self) -> bool {
        let n = self.n();
        let ranges: Vec<(Int, Int)> = (0..n)
            .map(|i| {
                let lo = self.vertices.iter().map(|v| v[i].clone()).min().expect("vertices");
                let hi = self.vertices.iter().map(|v| v[i].clone()).max().expect("vertices");
                (lo.ceil().to_integer(), hi.floor().to_integer())
            })
            .collect();
        let mut found = false;
        scan_box(&ranges, &mut |x| {
            if !found {
                let hx = self.h.mul_vec(x).expect("n entries");
                found = hx.iter().zip(&self.b).all(|(a, b)| a <= b);
            }
        });
        found
    }
}

fn left_kernel(h: &IntMatrix) -> Result<Vec<Int>> {
    // y_k = (-1)^k det(h without row k) spans the kernel of h^T.
    let n = h.cols();
    (0..=n)
        .map(|k| {
            let rows: Vec<usize> = (0..=n).filter(|&i| i != k).collect();
            let d = det(&h.select_rows(&rows)?)?;
            Ok(if k % 2 == 0 { d } else { -d })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WidthResult {
    pub width: Rat,
    pub direction: Vec<Int>,
    pub dir_box: Int,
    /// `dir_box` is at least the certified direction box.
    pub box_certified: bool,
}

/// Minimum width over nonzero directions with `||c||_∞ <= dir_box`; ties go
/// to the lexicographically smallest direction whose first nonzero entry is
/// positive.
pub fn oracle_width(inst: &SimplexInstance, dir_box: &Int) -> Result<WidthResult> {
    if !dir_box.is_positive() {
        return Err(Error::Contract("direction box must be at least 1".into()));
    }
    let n = inst.n();
    let ranges = vec![(-dir_box.clone(), dir_box.clone()); n];
    let mut best: Option<(Rat, Vec<Int>)> = None;
    scan_box(&ranges, &mut |c| {
        match c.iter().find(|v| !v.is_zero()) {
            Some(v) if v.is_positive() => {}
            _ => return,
        }
        let w = inst.width_unchecked(c);
        if best.as_ref().is_none_or(|(b, _)| w < *b) {
            best = Some((w, c.to_vec()));
        }
    });
    let (width, direction) = best.expect("box holds a nonzero direction");
    Ok(WidthResult {
        width,
        direction,
        box_certified: *dir_box >= inst.certified_direction_box(),
        dir_box: dir_box.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WidthSubproblem {
    pub p: RatVector,
    pub q: RatVector,
    pub c: IntMatrix,
}

impl WidthSubproblem {
    pub fn new(p: RatVector, q: RatVector, c: IntMatrix) -> Result<WidthSubproblem> {
        if !c.is_square() || p.dim() != c.rows() || q.dim() != c.rows() {
            return Err(Error::dim("subproblem dimensions disagree"));
        }
        if det(&c)?.is_zero() {
            return Err(Error::Singular);
        }
        Ok(WidthSubproblem { p, q, c })
    }

    fn cone_coords(&self, v: &[Rat]) -> RatVector {
        solve_rational(&self.c, &RatVec::new(v.to_vec())).expect("nonsingular")
    }

    /// `C^{-1}(x - p) >= 0` and `C^{-1}(q - x) >= 0`.
    pub fn contains(&self, x: &[Int]) -> bool {
        let xp: Vec<Rat> = x
            .iter()
            .zip(self.p.iter())
            .map(|(a, b)| Rat::from_integer(a.clone()) - b)
            .collect();
        let qx: Vec<Rat> = x
            .iter()
            .zip(self.q.iter())
            .map(|(a, b)| b - Rat::from_integer(a.clone()))
            .collect();
        self.cone_coords(&xp).is_nonnegative() && self.cone_coords(&qx).is_nonnegative()
    }
}

/// Decides the subproblem with `q - cone(C) = P(C~, C~ q)`,
/// `C~ = sign(det C) adj(C)`.
pub fn solve_subproblem(sub: &WidthSubproblem) -> Result<Option<Vec<Int>>> {
    let d = det(&sub.c)?;
    if d.is_zero() {
        return Err(Error::Singular);
    }
    let mut ct = adjugate(&sub.c)?;
    if d.is_negative() {
        ct = ct.neg();
    }
    let rhs = RatVec::new(ct.mul_rat_vec(sub.q.as_slice())?);
    let w = cone_feasible(&sub.c, &sub.p, &ct, &rhs)?;
    if let Some(x) = &w {
        if !sub.contains(x) {
            return Err(Error::Invariant("subproblem witness outside the intersection".into()));
        }
    }
    Ok(w)
}

/// Scans the box spanned by `p + C [0, u]` with `u = C^{-1}(q - p)`.
pub fn oracle_subproblem(sub: &WidthSubproblem) -> Option<Vec<Int>> {
    let k = sub.c.rows();
    let diff: Vec<Rat> = sub.q.iter().zip(sub.p.iter()).map(|(a, b)| a - b).collect();
    let u = sub.cone_coords(&diff);
    if !u.is_nonnegative() {
        return None;
    }
    let ranges: Vec<(Int, Int)> = (0..k)
        .map(|i| {
            let (mut lo, mut hi) = (sub.p[i].clone(), sub.p[i].clone());
            for j in 0..k {
                let a = Rat::from_integer(sub.c[(i, j)].clone()) * &u[j];
                if a.is_negative() {
                    lo += a;
                } else {
                    hi += a;
                }
            }
            (lo.ceil().to_integer(), hi.floor().to_integer())
        })
        .collect();
    let mut found = None;
    scan_box(&ranges, &mut |x| {
        if found.is_none() && sub.contains(x) {
            found = Some(x.to_vec());
        }
    });
    found
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecisionRule {
    /// The family's verdict is true if some subproblem is feasible.
    AnyFeasible,
    /// The family's verdict is true if every subproblem is infeasible.
    AllInfeasible,
}

impl DecisionRule {
    pub fn as_str(&self) -> &'static str {
        match self {
            DecisionRule::AnyFeasible => "any-feasible",
            DecisionRule::AllInfeasible => "all-infeasible",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubproblemFamily {
    /// The family's verdict answers "is the width at most `threshold`?".
    pub threshold: Rat,
    pub rule: DecisionRule,
    pub subproblems: Vec<WidthSubproblem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyOutcome {
    pub threshold: Rat,
    pub rule: DecisionRule,
    pub verdict: bool,
    pub witnesses: Vec<Option<Vec<Int>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WidthDecision {
    /// Smallest threshold with a true verdict.
    pub width: Option<Rat>,
    /// Every false verdict sits below every true one.
    pub consistent: bool,
    pub families: Vec<FamilyOutcome>,
    pub warnings: Vec<String>,
}

/// Runs every family through [`solve_subproblem`] and folds the verdicts.
/// `jobs > 1` evaluates subproblems on a thread pool; results do not depend
/// on it.
pub fn width_from_subproblems(
    inst: &SimplexInstance,
    families: &[SubproblemFamily],
    jobs: usize,
) -> Result<WidthDecision> {
    if families.is_empty() {
        return Err(Error::Contract("no subproblem families supplied".into()));
    }
    let n = inst.n();
    let mut warnings = Vec::new();
    let delta_sub = if n >= 2 {
        max_minor_abs(&inst.h, n - 1)?
    } else {
        Int::one()
    };
    let delta = max_minor_abs(&inst.h, n)?;
    let lattice_empty = !inst.has_integer_point();
    for (fi, fam) in families.iter().enumerate() {
        if lattice_empty && Int::from(fam.subproblems.len()) > delta {
            warnings.push(format!(
                "family {fi}: {} subproblems for a simplex without integer points exceeds Δ = {delta}",
                fam.subproblems.len()
            ));
        }
        for (si, sub) in fam.subproblems.iter().enumerate() {
            if sub.c.rows() + 1 != n {
                return Err(Error::dim(format!(
                    "family {fi} subproblem {si} has dimension {}, expected {}",
                    sub.c.rows(),
                    n - 1
                )));
            }
            let d = det(&sub.c)?.abs();
            if d > delta_sub {
                warnings.push(format!(
                    "family {fi} subproblem {si}: |det C| = {d} exceeds Δ_(n-1)(H) = {delta_sub}"
                ));
            }
        }
    }
    let flat: Vec<&WidthSubproblem> = families.iter().flat_map(|f| f.subproblems.iter()).collect();
    let solved: Vec<Result<Option<Vec<Int>>>> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?;
        pool.install(|| flat.par_iter().map(|s| solve_subproblem(s)).collect())
    } else {
        flat.iter().map(|s| solve_subproblem(s)).collect()
    };
    let mut solved = solved.into_iter();
    let mut outcomes = Vec::with_capacity(families.len());
    for fam in families {
        let witnesses: Vec<Option<Vec<Int>>> = (0..fam.subproblems.len())
            .map(|_| solved.next().expect("one result per subproblem"))
            .collect::<Result<_>>()?;
        let verdict = match fam.rule {
            DecisionRule::AnyFeasible => witnesses.iter().any(Option::is_some),
            DecisionRule::AllInfeasible => witnesses.iter().all(Option::is_none),
        };
        outcomes.push(FamilyOutcome {
            threshold: fam.threshold.clone(),
            rule: fam.rule,
            verdict,
            witnesses,
        });
    }
    let width = outcomes.iter().filter(|o| o.verdict).map(|o| o.threshold.clone()).min();
    let consistent = match &width {
        Some(w) => outcomes.iter().all(|o| o.verdict || o.threshold < *w),
        None => true,
    };
    Ok(WidthDecision {
        width,
        consistent,
        families: outcomes,
        warnings,
    })
}

/// Reads a family file; returns the simplex dimension it declares and the
/// families.
pub fn parse_families(text: &str) -> Result<(usize, Vec<SubproblemFamily>)> {
    let bad = |m: String| Error::Parse { line: 0, message: m };
    let root: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let n = root
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("missing integer field `n`".into()))? as usize;
    if n < 2 {
        return Err(bad("`n` must be at least 2".into()));
    }
    let k = n - 1;
    let fams = root
        .get("families")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing array `families`".into()))?;
    let mut out = Vec::with_capacity(fams.len());
    for (fi, f) in fams.iter().enumerate() {
        let threshold = f
            .get("threshold")
            .map(rational)
            .ok_or_else(|| bad(format!("family {fi}: missing `threshold`")))?
            .map_err(|m| bad(format!("family {fi}: {m}")))?;
        let rule = match f.get("rule").and_then(Value::as_str).unwrap_or("any-feasible") {
            "any-feasible" => DecisionRule::AnyFeasible,
            "all-infeasible" => DecisionRule::AllInfeasible,
            other => return Err(bad(format!("family {fi}: unknown rule `{other}`"))),
        };
        let subs = f
            .get("subproblems")
            .and_then(Value::as_array)
            .ok_or_else(|| bad(format!("family {fi}: missing `subproblems`")))?;
        let mut subproblems = Vec::with_capacity(subs.len());
        for (si, s) in subs.iter().enumerate() {
            let ctx = |m: String| bad(format!("family {fi} subproblem {si}: {m}"));
            let c = matrix(s.get("C").ok_or_else(|| ctx("missing `C`".into()))?, k).map_err(ctx)?;
            let p = rat_vector(s.get("p").ok_or_else(|| ctx("missing `p`".into()))?, k).map_err(ctx)?;
            let q = rat_vector(s.get("q").ok_or_else(|| ctx("missing `q`".into()))?, k).map_err(ctx)?;
            subproblems.push(WidthSubproblem::new(p, q, c)?);
        }
        out.push(SubproblemFamily {
            threshold,
            rule,
            subproblems,
        });
    }
    Ok((n, out))
}

fn integer(v: &Value) -> std::result::Result<Int, String> {
    match v {
        Value::Number(num) => num
            .as_i64()
            .map(Int::from)
            .ok_or_else(|| format!("`{num}` is not an integer")),
        Value::String(s) => s.trim().parse().map_err(|_| format!("`{s}` is not an integer")),
        other => Err(format!("expected an integer, got {other}")),
    }
}

fn rational(v: &Value) -> std::result::Result<Rat, String> {
    match v {
        Value::String(s) => parse_ratio(s),
        other => integer(other).map(Rat::from_integer),
    }
}

fn rat_vector(v: &Value, k: usize) -> std::result::Result<RatVector, String> {
    let arr = v.as_array().ok_or("expected an array")?;
    if arr.len() != k {
        return Err(format!("expected {k} entries, got {}", arr.len()));
    }
    arr.iter()
        .map(rational)
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(RatVec::new)
}

/// Row-major flat array of `k*k` integers, or nested rows.
fn matrix(v: &Value, k: usize) -> std::result::Result<IntMatrix, String> {
    let arr = v.as_array().ok_or("`C` must be an array")?;
    let flat: Vec<&Value> = if arr.iter().all(Value::is_array) {
        arr.iter().flat_map(|r| r.as_array().expect("checked").iter()).collect()
    } else {
        arr.iter().collect()
    };
    if flat.len() != k * k {
        return Err(format!("`C` needs {} entries, got {}", k * k, flat.len()));
    }
    let data = flat
        .into_iter()
        .map(integer)
        .collect::<std::result::Result<Vec<_>, _>>()?;
    IntMatrix::new(k, k, data).map_err(|e| e.to_string())
}

/// `c^T x` for a rational point.
pub fn rat_dot(c: &[Int], x: &RatVector) -> Rat {
    x.iter().zip(c).map(|(v, a)| v * Rat::from_integer(a.clone())).sum()
}

#[cfg(test)]
mod tests;
