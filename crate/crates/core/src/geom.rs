//! Integer points of half-open parallelepipeds and integer programs over
//! simplicial cones.
//!
//! `parl(A) = { A t : t ∈ [0,1)^n }`. For integral nonsingular `A` the cell
//! `p + parl(A)` holds exactly `|det A|` integer points.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactmat::{adjugate, det, hnf, RatVec};
use crate::{Int, IntMatrix, Rat, RatVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParInstance {
    pub a: IntMatrix,
    pub p: RatVector,
}

/// Number of points found next to the product bounds on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub count: usize,
    /// Diagonal of the triangular factor `H` with `A = Q H`.
    pub diagonal: Vec<Int>,
    pub lower: Int,
    pub upper: Int,
    pub within: bool,
}

impl ParInstance {
    pub fn new(a: IntMatrix, p: RatVector) -> Result<ParInstance> {
        if !a.is_square() {
            return Err(Error::dim("cell matrix must be square"));
        }
        if p.dim() != a.rows() {
            return Err(Error::dim(format!("p has {} entries for n = {}", p.dim(), a.rows())));
        }
        if det(&a)?.is_zero() {
            return Err(Error::Singular);
        }
        Ok(ParInstance { a, p })
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// `A^{-1}(x - p)`.
    pub fn coords(&self, x: &[Int]) -> RatVector {
        let d = det(&self.a).expect("square");
        let adj = adjugate(&self.a).expect("square");
        let diff: Vec<Rat> = x
            .iter()
            .zip(self.p.iter())
            .map(|(a, b)| Rat::from_integer(a.clone()) - b)
            .collect();
        let v = adj.mul_rat_vec(&diff).expect("n entries");
        RatVec::new(v.into_iter().map(|e| e / Rat::from_integer(d.clone())).collect())
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        self.coords(x).iter().all(|t| !t.is_negative() && *t < Rat::one())
    }

    /// Membership test with the adjugate precomputed, in `i128` when the
    /// data allows.
    fn membership(&self) -> Membership<'_> {
        let d = det(&self.a).expect("square");
        let mut adj = adjugate(&self.a).expect("square");
        if d.is_negative() {
            adj = adj.neg();
        }
        let l = self.p.common_denominator();
        let small = || -> Option<FastCell> {
            let adj = adj
                .to_rows()
                .iter()
                .map(|r| r.iter().map(|v| v.to_i128()).collect())
                .collect::<Option<Vec<Vec<i128>>>>()?;
            let scaled: Option<Vec<i128>> = self
                .p
                .iter()
                .map(|v| (v * Rat::from_integer(l.clone())).to_integer().to_i128())
                .collect();
            let limit = (d.abs() * &l).to_i128()?;
            let l = l.to_i128()?;
            // Keep every product well inside i128.
            if adj.iter().flatten().any(|v| v.abs() > 1 << 40)
                || l > 1 << 20
                || scaled.iter().flatten().any(|v| v.abs() > 1 << 40)
            {
                return None;
            }
            Some(FastCell {
                adj,
                p: scaled?,
                l,
                limit,
            })
        };
        Membership {
            inst: self,
            fast: small(),
        }
    }

    /// `A = Q H` with `H` upper triangular and `H^T` the HNF of `A^T`.
    /// Returns `(Q, Q^{-1}, H)`.
    fn factor(&self) -> Result<(IntMatrix, IntMatrix, IntMatrix)> {
        // A^T U = L, so A = U^{-T} L^T.
        let r = hnf(&self.a.transpose())?;
        let d = det(&r.u)?;
        let q = adjugate(&r.u)?.scale(&d).transpose();
        Ok((q, r.u.transpose(), r.h.transpose()))
    }
}

struct FastCell {
    /// `sign(det A) adj(A)`
    adj: Vec<Vec<i128>>,
    /// `L p` with `L` the common denominator of `p`.
    p: Vec<i128>,
    l: i128,
    /// `|det A| L`
    limit: i128,
}

struct Membership<'a> {
    inst: &'a ParInstance,
    fast: Option<FastCell>,
}

impl Membership<'_> {
    fn contains(&self, x: &[Int]) -> bool {
        let Some(f) = &self.fast else {
            return self.inst.contains(x);
        };
        let Some(diff) = x
            .iter()
            .zip(&f.p)
            .map(|(v, p)| {
                v.to_i64()
                    .filter(|v| v.abs() < 1 << 20)
                    .map(|v| i128::from(v) * f.l - p)
            })
            .collect::<Option<Vec<i128>>>()
        else {
            return self.inst.contains(x);
        };
        f.adj.iter().all(|row| {
            let u: i128 = row.iter().zip(&diff).map(|(a, b)| a * b).sum();
            0 <= u && u < f.limit
        })
    }
}

/// All integer points of `p + parl(A)` in lexicographic order.
///
/// With `A = Q H`, the substitution `x = Q y` turns the cell into
/// `r + parl(H)` with `r = Q^{-1} p`; since `H` is upper triangular the
/// coordinates of `y` are fixed from the last one up, each ranging over the
/// integers of `[τ_s, τ_s + H_ss)`.
pub fn enumerate_par(inst: &ParInstance) -> Result<Vec<Vec<Int>>> {
    let n = inst.n();
    let (q, q_inv, h) = inst.factor()?;
    let r = q_inv.mul_rat_vec(inst.p.as_slice())?;
    let mut out = Vec::new();
    let mut t = vec![Rat::zero(); n];
    let mut y = vec![Int::zero(); n];
    descend(&h, &r, n, &mut t, &mut y, &mut |y| {
        out.push(q.mul_vec(y).expect("n entries"));
    });
    let cell = inst.membership();
    for x in &out {
        if !cell.contains(x) {
            return Err(Error::Invariant("enumerated point outside the cell".into()));
        }
    }
    out.sort();
    Ok(out)
}

fn descend(h: &IntMatrix, r: &[Rat], s: usize, t: &mut Vec<Rat>, y: &mut Vec<Int>, emit: &mut dyn FnMut(&[Int])) {
    if s == 0 {
        emit(y);
        return;
    }
    let i = s - 1;
    let n = h.cols();
    let mut tau = r[i].clone();
    for j in i + 1..n {
        tau += Rat::from_integer(h[(i, j)].clone()) * &t[j];
    }
    let hii = Rat::from_integer(h[(i, i)].clone());
    let lo = tau.ceil().to_integer();
    let hi = (tau.clone() + &hii).ceil().to_integer();
    let mut v = lo;
    while v < hi {
        t[i] = (Rat::from_integer(v.clone()) - &tau) / &hii;
        y[i] = v.clone();
        descend(h, r, i, t, y, emit);
        v += 1;
    }
}

/// The product bounds on the point count, and whether `count` meets them.
pub fn count_bounds(inst: &ParInstance, count: usize) -> Result<CountReport> {
    let (_, _, h) = inst.factor()?;
    let diagonal: Vec<Int> = (0..inst.n()).map(|i| h[(i, i)].clone()).collect();
    // H is integral here, so floor and ceiling coincide.
    let prod: Int = diagonal.iter().product();
    let c = Int::from(count);
    Ok(CountReport {
        count,
        within: prod <= c && c <= prod,
        lower: prod.clone(),
        upper: prod,
        diagonal,
    })
}

/// Integer points of the cell found by scanning its bounding box.
pub fn grid_scan_par(inst: &ParInstance) -> Vec<Vec<Int>> {
    let n = inst.n();
    let ranges: Vec<(Int, Int)> = (0..n)
        .map(|i| {
            let (mut lo, mut hi) = (inst.p[i].clone(), inst.p[i].clone());
            for j in 0..n {
                let a = Rat::from_integer(inst.a[(i, j)].clone());
                if a.is_negative() {
                    lo += a;
                } else {
                    hi += a;
                }
            }
            (lo.floor().to_integer(), hi.ceil().to_integer())
        })
        .collect();
    let cell = inst.membership();
    let mut out = Vec::new();
    scan_box(&ranges, &mut |x| {
        if cell.contains(x) {
            out.push(x.to_vec());
        }
    });
    out
}

/// Calls `f` on every integer point of the box, in lexicographic order.
pub(crate) fn scan_box(ranges: &[(Int, Int)], f: &mut dyn FnMut(&[Int])) {
    if ranges.iter().any(|(a, b)| a > b) {
        return;
    }
    let n = ranges.len();
    let mut x: Vec<Int> = ranges.iter().map(|r| r.0.clone()).collect();
    loop {
        f(&x);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if x[i] < ranges[i].1 {
                x[i] += 1;
                for j in i + 1..n {
                    x[j] = ranges[j].0.clone();
                }
                break;
            }
        }
    }
}

/// `max c^T x` over `x ∈ (p + cone(C)) ∩ P(A, b) ∩ Z^n` with
/// `c^T C <= 0` and `A C >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeProgram {
    pub c: IntMatrix,
    pub p: RatVector,
    pub a: IntMatrix,
    pub b: RatVector,
    pub objective: Vec<Int>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeOutcome {
    Optimal { x: Vec<Int>, value: Int },
    Infeasible,
}

impl ConeOutcome {
    pub fn point(&self) -> Option<&[Int]> {
        match self {
            ConeOutcome::Optimal { x, .. } => Some(x),
            ConeOutcome::Infeasible => None,
        }
    }
}

impl ConeProgram {
    pub fn new(c: IntMatrix, p: RatVector, a: IntMatrix, b: RatVector, objective: Vec<Int>) -> Result<ConeProgram> {
        let n = c.rows();
        if !c.is_square() || p.dim() != n || a.cols() != n || b.dim() != a.rows() || objective.len() != n {
            return Err(Error::dim("cone program dimensions disagree"));
        }
        if det(&c)?.is_zero() {
            return Err(Error::Singular);
        }
        let oc = c.transpose().mul_vec(&objective)?;
        if oc.iter().any(|v| v.is_positive()) {
            return Err(Error::Contract("objective must satisfy c^T C <= 0".into()));
        }
        if a.mul(&c)?.entries().iter().any(|v| v.is_negative()) {
            return Err(Error::Contract("constraints must satisfy A C >= 0".into()));
        }
        Ok(ConeProgram { c, p, a, b, objective })
    }

    pub fn n(&self) -> usize {
        self.c.rows()
    }

    pub fn satisfies_constraints(&self, x: &[Int]) -> bool {
        let ax = self.a.mul_vec(x).expect("n entries");
        ax.iter()
            .zip(self.b.iter())
            .all(|(l, r)| Rat::from_integer(l.clone()) <= *r)
    }

    pub fn in_cone(&self, x: &[Int]) -> bool {
        let cell = ParInstance {
            a: self.c.clone(),
            p: self.p.clone(),
        };
        cell.coords(x).iter().all(|t| !t.is_negative())
    }

    pub fn value(&self, x: &[Int]) -> Int {
        crate::exactmat::dot(&self.objective, x)
    }

    /// For every generator `C_j`, `x + C_j` is infeasible or no better.
    pub fn shift_check(&self, x: &[Int]) -> bool {
        let v = self.value(x);
        (0..self.n()).all(|j| {
            let y: Vec<Int> = x.iter().zip(self.c.col(j)).map(|(a, b)| a + b).collect();
            !self.satisfies_constraints(&y) || self.value(&y) <= v
        })
    }
}

/// An optimum lies in `p + parl(C)`: any feasible point deeper in the cone
/// can be shifted back by integer generator steps without losing
/// feasibility or value. Ties go to the lexicographically smallest point.
pub fn cone_optimize(prog: &ConeProgram) -> Result<ConeOutcome> {
    let cell = ParInstance::new(prog.c.clone(), prog.p.clone())?;
    let mut best: Option<(Int, Vec<Int>)> = None;
    for x in enumerate_par(&cell)? {
        if !prog.satisfies_constraints(&x) {
            continue;
        }
        let v = prog.value(&x);
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, x));
        }
    }
    Ok(match best {
        Some((value, x)) => ConeOutcome::Optimal { x, value },
        None => ConeOutcome::Infeasible,
    })
}

/// Whether `(p + cone(C)) ∩ P(A, b)` has an integer point; needs `A C >= 0`.
/// Uses the objective `-1^T |det C| C^{-1}`, which meets `c^T C <= 0`.
pub fn cone_feasible(c: &IntMatrix, p: &RatVector, a: &IntMatrix, b: &RatVector) -> Result<Option<Vec<Int>>> {
    let d = det(c)?;
    if d.is_zero() {
        return Err(Error::Singular);
    }
    let mut adj = adjugate(c)?;
    if d.is_negative() {
        adj = adj.neg();
    }
    let objective: Vec<Int> = (0..c.cols())
        .map(|j| -(0..c.rows()).map(|i| adj[(i, j)].clone()).sum::<Int>())
        .collect();
    let prog = ConeProgram::new(c.clone(), p.clone(), a.clone(), b.clone(), objective)?;
    Ok(cone_optimize(&prog)?.point().map(<[Int]>::to_vec))
}

/// Brute force over the box around `p + C [0, k]^n`.
pub fn oracle_cone(prog: &ConeProgram, k: u32) -> ConeOutcome {
    let n = prog.n();
    let kk = Rat::from_integer(Int::from(k));
    let ranges: Vec<(Int, Int)> = (0..n)
        .map(|i| {
            let (mut lo, mut hi) = (prog.p[i].clone(), prog.p[i].clone());
            for j in 0..n {
                let a = Rat::from_integer(prog.c[(i, j)].clone()) * &kk;
                if a.is_negative() {
                    lo += a;
                } else {
                    hi += a;
                }
            }
            (lo.floor().to_integer(), hi.ceil().to_integer())
        })
        .collect();
    let mut best: Option<(Int, Vec<Int>)> = None;
    scan_box(&ranges, &mut |x| {
        if prog.in_cone(x) && prog.satisfies_constraints(x) {
            let v = prog.value(x);
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, x.to_vec()));
            }
        }
    });
    match best {
        Some((value, x)) => ConeOutcome::Optimal { x, value },
        None => ConeOutcome::Infeasible,
    }
}
