//! Shortest and closest lattice vectors under `ℓ_p` norms.
//!
//! Vectors live in the row order of the canonical system and coefficient
//! vectors `t` are canonical coordinates (`x = H t`). Use
//! [`CanonicalSystem::to_original`] to map back to the input.

mod dp;
mod oracle;

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive, Zero};

pub use oracle::{oracle_closest, oracle_shortest};

use crate::error::{Error, Result};
use crate::exactmat::{adjugate, det, lattice_coords};
use crate::group::Group;
use crate::lattice::{canonicalize, exceeds_threshold, CanonicalSystem};
use crate::{Int, IntMatrix, Rat, RatVector};

use dp::{Agg, Budget, DpProblem, INF};

/// `ℓ_p` for an integer `p >= 1`, or `ℓ_∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Norm {
    P(u32),
    Inf,
}

impl Norm {
    /// `|v|^p`, or `|v|` for `ℓ_∞`.
    pub fn coord_cost(&self, v: &Int) -> Int {
        match self {
            Norm::P(p) => num_traits::pow(v.abs(), *p as usize),
            Norm::Inf => v.abs(),
        }
    }

    /// `||v||_p^p`, or `||v||_∞`.
    pub fn value(&self, v: &[Int]) -> Int {
        self.aggregate(v.iter().map(|x| self.coord_cost(x)))
    }

    pub fn rat_value(&self, v: &[Rat]) -> Rat {
        let costs = v.iter().map(|x| match self {
            Norm::P(p) => num_traits::pow(x.abs(), *p as usize),
            Norm::Inf => x.abs(),
        });
        match self {
            Norm::P(_) => costs.fold(Rat::zero(), |a, b| a + b),
            Norm::Inf => costs.fold(Rat::zero(), |a, b| a.max(b)),
        }
    }

    fn aggregate(&self, costs: impl Iterator<Item = Int>) -> Int {
        match self {
            Norm::P(_) => costs.sum(),
            Norm::Inf => costs.fold(Int::zero(), |a, b| a.max(b)),
        }
    }

    fn agg(&self) -> Agg {
        match self {
            Norm::P(_) => Agg::Sum,
            Norm::Inf => Agg::Max,
        }
    }

    /// Largest integer `k` with `k` at most the norm whose value is `v`.
    fn floor_norm(&self, v: &Int) -> Int {
        match self {
            Norm::P(p) => v.nth_root(*p),
            Norm::Inf => v.clone(),
        }
    }

    /// Smallest integer `k >= 0` with `k^p >= v` (`k >= v` for `ℓ_∞`).
    fn ceil_norm(&self, v: &Rat) -> Int {
        let c = v.ceil().to_integer();
        match self {
            Norm::P(p) => ceil_root(&c, *p),
            Norm::Inf => c.max(Int::zero()),
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Norm::P(p) => write!(f, "{p}"),
            Norm::Inf => write!(f, "inf"),
        }
    }
}

impl FromStr for Norm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Norm, String> {
        match s.trim() {
            "inf" | "infinity" | "max" => Ok(Norm::Inf),
            t => match t.parse::<u32>() {
                Ok(p) if p >= 1 => Ok(Norm::P(p)),
                _ => Err(format!("norm must be a positive integer or `inf`, got `{s}`")),
            },
        }
    }
}

/// Smallest `k >= 0` with `k^p >= v`.
pub(crate) fn ceil_root(v: &Int, p: u32) -> Int {
    if !v.is_positive() {
        return Int::zero();
    }
    let r = v.nth_root(p);
    if num_traits::pow(r.clone(), p as usize) < *v {
        r + 1
    } else {
        r
    }
}

#[derive(Clone, Debug)]
pub struct SlvpInstance {
    pub system: CanonicalSystem,
    pub norm: Norm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeVector {
    pub x: Vec<Int>,
    pub t: Vec<Int>,
    /// `||x||_p^p` for finite `p`, `||x||_∞` otherwise.
    pub norm_value: Int,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CvpResult {
    pub vector: LatticeVector,
    /// `||x - r||_p^p` for finite `p`, `||x - r||_∞` otherwise.
    pub distance: Rat,
}

/// Resource cap for the dynamic programs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DpLimits {
    pub max_states: u64,
}

impl DpLimits {
    pub const DEFAULT_MAX_STATES: u64 = 20_000_000;
}

impl Default for DpLimits {
    /// Honours `DELTAFPT_MAX_TABLE` when set.
    fn default() -> Self {
        let max_states = std::env::var("DELTAFPT_MAX_TABLE")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(Self::DEFAULT_MAX_STATES);
        DpLimits { max_states }
    }
}

#[derive(Clone, Debug, Default)]
pub struct DpOptions {
    /// A caller-proven bound on `||x*||_∞`, used instead of the computed one.
    pub bound: Option<Int>,
    pub limits: DpLimits,
}

/// What the dynamic program did, next to its answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpOutcome {
    pub vector: LatticeVector,
    /// Digit bound used for every coordinate.
    pub bound: Int,
    pub states: u64,
}

impl SlvpInstance {
    pub fn new(system: CanonicalSystem, norm: Norm) -> Result<SlvpInstance> {
        if let Norm::P(0) = norm {
            return Err(Error::Contract("p must be at least 1".into()));
        }
        Ok(SlvpInstance { system, norm })
    }

    pub fn from_matrix(a: &IntMatrix, norm: Norm) -> Result<SlvpInstance> {
        SlvpInstance::new(canonicalize(a, None)?, norm)
    }

    fn n(&self) -> usize {
        self.system.n()
    }

    /// Builds the vector `H t`.
    pub fn vector(&self, t: Vec<Int>) -> LatticeVector {
        let x = self.system.h.mul_vec(&t).expect("t has n entries");
        let norm_value = self.norm.value(&x);
        LatticeVector { x, t, norm_value }
    }

    /// Smallest norm value over the columns of `H`.
    pub fn column_cost(&self) -> Int {
        (0..self.n())
            .map(|j| self.norm.value(&self.system.h.col(j)))
            .min()
            .expect("n >= 1")
    }

    /// Cheapest of the columns and the sums and differences of two columns.
    fn pair_cost(&self) -> Int {
        let n = self.n();
        let cols: Vec<Vec<Int>> = (0..n).map(|j| self.system.h.col(j)).collect();
        let mut best = self.column_cost();
        for i in 0..n {
            for j in i + 1..n {
                for sign in [1, -1] {
                    let v: Vec<Int> = cols[i].iter().zip(&cols[j]).map(|(a, b)| a + b * sign).collect();
                    best = best.min(self.norm.value(&v));
                }
            }
        }
        best
    }

    /// `||x*||_∞ <= ||h_j||_p` for every column `h_j`.
    pub fn column_bound(&self) -> Int {
        self.norm.floor_norm(&self.column_cost())
    }

    /// Coefficient box that provably contains the coefficients of every
    /// shortest vector. Relies on the column bound only.
    pub fn certified_box(&self) -> Int {
        coeff_box(&self.system.h_b, &self.column_bound())
    }

    /// Coefficient box that provably contains every closest vector to `r`.
    pub fn certified_cvp_box(&self, r: &RatVector) -> Result<Int> {
        let (b, _) = self.cvp_bounds(r)?;
        Ok(coeff_box(&self.system.h_b, &b))
    }

    /// `(digit bound, distance bound)` for the closest vector to `r`.
    fn cvp_bounds(&self, r: &RatVector) -> Result<(Int, Int)> {
        if r.dim() != self.system.d() {
            return Err(Error::dim(format!(
                "target of length {} for d = {}",
                r.dim(),
                self.system.d()
            )));
        }
        let k = self.norm.ceil_norm(&self.norm.rat_value(r.as_slice()));
        let rmax = r.max_abs().ceil().to_integer();
        Ok((rmax + &k, k))
    }

    /// `G x_B ≡ 0 (mod S)` and `R x_B = δ x_N`.
    pub fn is_consistent(&self, v: &LatticeVector) -> bool {
        let n = self.n();
        let (xb, xn) = v.x.split_at(n);
        let Ok(group) = Group::new(&self.system.h_b) else {
            return false;
        };
        if group.of_vector(xb) != 0 {
            return false;
        }
        let Ok((r, delta)) = coupling(&self.system) else {
            return false;
        };
        match r {
            None => xn.is_empty(),
            Some(r) => {
                let lhs = r.mul_vec(xb).expect("n columns");
                lhs.iter().zip(xn).all(|(a, b)| *a == &delta * b)
            }
        }
    }
}

/// `⌈bound · max_i Σ_j |(H_B^{-1})_{ij}|⌉`, at least one.
fn coeff_box(h_b: &IntMatrix, bound: &Int) -> Int {
    let d = det(h_b).expect("square").abs();
    let adj = adjugate(h_b).expect("square");
    let row_max: Int = (0..adj.rows())
        .map(|i| adj.row(i).iter().map(|v| v.abs()).sum::<Int>())
        .max()
        .unwrap_or_else(Int::zero);
    let b = Rat::new(bound * row_max, d).ceil().to_integer();
    b.max(Int::one())
}

/// `R = H_N H*` with `H* = sign(det H_B) adj(H_B)`, and `δ = |det H_B|`.
fn coupling(sys: &CanonicalSystem) -> Result<(Option<IntMatrix>, Int)> {
    let d = det(&sys.h_b)?;
    let mut adj = adjugate(&sys.h_b)?;
    if d.is_negative() {
        adj = adj.neg();
    }
    let r = match &sys.h_n {
        Some(h_n) => Some(h_n.mul(&adj)?),
        None => None,
    };
    Ok((r, d.abs()))
}

/// Lower bound on the volume of the unit `ℓ_p` ball in dimension `n`.
fn ball_volume_lower(n: usize, norm: Norm) -> Rat {
    let two_n = Rat::from_integer(Int::one() << n);
    let fact = |k: usize| -> Int { (1..=k).map(Int::from).product() };
    match norm {
        Norm::Inf => two_n,
        Norm::P(1) => two_n / Rat::from_integer(fact(n)),
        Norm::P(_) => {
            let pi = Rat::new(Int::from(314159), Int::from(100000));
            let k = n / 2;
            let pik = num_traits::pow(pi, k);
            if n.is_multiple_of(2) {
                pik / Rat::from_integer(fact(k))
            } else {
                pik * Rat::from_integer((Int::one() << (2 * k + 1)) * fact(k)) / Rat::from_integer(fact(2 * k + 1))
            }
        }
    }
}

/// Integer bound `M >= 1` on the sup-norm of a shortest vector, taking the
/// smaller of the `Δ (m+1)^{1/p}` and Minkowski estimates, both rounded
/// outward.
pub fn minkowski_bound(inst: &SlvpInstance) -> Int {
    let sys = &inst.system;
    let (n, d, m) = (sys.n(), sys.d(), sys.m());
    let delta = &sys.delta_rank;
    let m1 = match inst.norm {
        Norm::Inf => delta.clone(),
        Norm::P(p) => ceil_root(&(num_traits::pow(delta.clone(), p as usize) * Int::from(m + 1)), p),
    };
    // M^{2n} V^2 n^n >= 4^n e^n d^n Δ^2
    let e = Rat::new(Int::from(2718282), Int::from(1000000));
    let v = ball_volume_lower(n, inst.norm);
    let nn = Int::from(n);
    let rhs = num_traits::pow(Rat::from_integer(Int::from(4 * d)) * e, n) * Rat::from_integer(delta * delta);
    let lhs = v.clone() * v * Rat::from_integer(num_traits::pow(nn, n));
    let m2 = ceil_root(&(rhs / lhs).ceil().to_integer(), 2 * n as u32);
    m1.min(m2).max(Int::one())
}

/// Short vectors read off the canonical form: a column that is a unit vector
/// (norm 1), or two columns with equal entries below row `s` (norm value 2,
/// or 1 under `ℓ_∞`). Whatever is returned is a shortest vector: because the
/// entries of `H` are reduced, `e_i` lies in the lattice only if column `i`
/// is `e_i`.
pub fn fast_path_duplicate(inst: &SlvpInstance) -> Option<LatticeVector> {
    let sys = &inst.system;
    let (n, d, s) = (sys.n(), sys.d(), sys.s);
    let h = &sys.h;
    let sub_key = |j: usize| -> Vec<Int> { (s..d).map(|i| h[(i, j)].clone()).collect() };
    let unit_t = |j: usize| -> Vec<Int> { (0..n).map(|i| if i == j { Int::one() } else { Int::zero() }).collect() };
    for j in 0..s {
        if sub_key(j).iter().all(Zero::is_zero) {
            return Some(inst.vector(unit_t(j)));
        }
    }
    let mut keys: Vec<(Vec<Int>, usize)> = (0..s).map(|j| (sub_key(j), j)).collect();
    keys.sort();
    let (i, j) = keys
        .windows(2)
        .find(|w| w[0].0 == w[1].0)
        .map(|w| (w[0].1.min(w[1].1), w[0].1.max(w[1].1)))?;
    let mut t = unit_t(i);
    t[j] = -Int::one();
    Some(inst.vector(t))
}

/// Whether the instance is large enough that a duplicate column must exist.
pub fn fast_path_guaranteed(inst: &SlvpInstance) -> bool {
    exceeds_threshold(inst.n(), &inst.system.delta_rank, inst.system.m() as u32)
}

fn to_cost(v: &Int, upper: &Int) -> u64 {
    if v > upper {
        INF
    } else {
        v.to_u64().expect("bounded by upper")
    }
}

fn small(v: &Int) -> Result<i64> {
    v.to_i64().filter(|x| x.abs() < 1 << 40).ok_or(Error::overflow())
}

struct Prepared {
    group: Group,
    r_cols: Vec<Vec<i64>>,
    delta: Int,
    r: Option<IntMatrix>,
}

fn prepare(sys: &CanonicalSystem) -> Result<Prepared> {
    let group = Group::new(&sys.h_b)?;
    let (r, delta) = coupling(sys)?;
    let n = sys.n();
    let r_cols = (0..n)
        .map(|l| match &r {
            Some(r) => (0..r.rows()).map(|j| small(&r[(j, l)])).collect(),
            None => Ok(Vec::new()),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Prepared {
        group,
        r_cols,
        delta,
        r,
    })
}

impl Prepared {
    /// Turns DP digits `x_B` into a lattice vector, checking every relation.
    fn finish(&self, inst: &SlvpInstance, digits: &[i64]) -> Result<LatticeVector> {
        let sys = &inst.system;
        let xb: Vec<Int> = digits.iter().map(|&z| Int::from(z)).collect();
        if self.group.of_vector(&xb) != 0 {
            return Err(Error::Invariant("x_B outside Λ(H_B)".into()));
        }
        let t = lattice_coords(&sys.h_b, &xb)?.ok_or_else(|| Error::Invariant("x_B outside Λ(H_B)".into()))?;
        let v = inst.vector(t);
        if let Some(r) = &self.r {
            let lhs = r.mul_vec(&xb)?;
            if lhs.iter().zip(&v.x[sys.n()..]).any(|(a, b)| *a != &self.delta * b) {
                return Err(Error::Invariant("R x_B differs from δ x_N".into()));
            }
        }
        if lattice_coords(&sys.h, &v.x)?.as_deref() != Some(&v.t[..]) {
            return Err(Error::Invariant("reconstructed vector not in Λ(H)".into()));
        }
        Ok(v)
    }
}

/// A shortest nonzero vector of `Λ(H)`; ties go to the lexicographically
/// smallest `t` whose first nonzero entry is positive.
pub fn solve_dp(inst: &SlvpInstance) -> Result<LatticeVector> {
    Ok(solve_dp_with(inst, &DpOptions::default())?.vector)
}

pub fn solve_dp_with(inst: &SlvpInstance, opts: &DpOptions) -> Result<DpOutcome> {
    let sys = &inst.system;
    let n = sys.n();
    let m = sys.m();
    let norm = inst.norm;
    let mut upper = inst.pair_cost();
    if let Some(v) = fast_path_duplicate(inst) {
        upper = upper.min(v.norm_value);
    }
    let bound = match &opts.bound {
        Some(b) => b.clone(),
        None => minkowski_bound(inst).min(norm.floor_norm(&upper)),
    };
    if upper >= Int::one() << 62 {
        return Err(Error::overflow());
    }
    let prep = prepare(sys)?;
    let delta = small(&prep.delta)?;
    let top = upper.to_u64().expect("checked");
    let root = move |b: u64| -> i64 { norm.floor_norm(&Int::from(b)).to_i64().unwrap_or(i64::MAX) };
    // Deepen the cost cap: a pass with cap `c` is exact whenever the
    // optimum is at most `c`, and cheap passes rule out small caps first.
    let mut cap = 1u64;
    let mut states = 0u64;
    loop {
        cap = cap.min(top);
        let cap_int = Int::from(cap);
        let mb = small(&bound.clone().min(norm.floor_norm(&cap_int)))?;
        let digit_cost: Vec<Vec<u64>> = (0..n)
            .map(|_| {
                (-mb..=mb)
                    .map(|z| to_cost(&norm.coord_cost(&Int::from(z)), &cap_int))
                    .collect()
            })
            .collect();
        let terminal = |eta: &[i64]| -> u64 {
            let mut acc = 0u64;
            for &e in eta {
                if e % delta != 0 {
                    return INF;
                }
                let c = to_cost(&norm.coord_cost(&Int::from(e / delta)), &cap_int);
                acc = norm.agg().apply(acc, c);
            }
            acc
        };
        let lim = i64::try_from(i128::from(delta) * i128::from(mb)).map_err(|_| Error::overflow())?;
        let problem = DpProblem {
            group: &prep.group,
            r_cols: prep.r_cols.clone(),
            digit_lo: vec![-mb; n],
            digit_cost,
            final_box: vec![(-lim, lim); m],
            terminal: &terminal,
            require_nonzero: true,
            agg: norm.agg(),
            upper: cap,
            max_states: opts.limits.max_states.saturating_sub(states),
            budget: Some(Budget {
                delta,
                root: &root,
                linear: norm == Norm::P(1),
            }),
        };
        let sol = problem.solve()?;
        if let Some(sol) = sol {
            states += sol.states;
            let vector = prep.finish(inst, &sol.digits)?;
            if vector.norm_value != Int::from(sol.cost) {
                return Err(Error::Invariant("dynamic program cost differs from the norm".into()));
            }
            return Ok(DpOutcome { vector, bound, states });
        }
        if cap == top {
            return Err(Error::Invariant("no nonzero vector within the bound".into()));
        }
        cap = cap.saturating_mul(2);
    }
}

/// A lattice vector closest to `r` (zero allowed); ties go to the
/// lexicographically smallest `t`.
pub fn solve_cvp(inst: &SlvpInstance, r: &RatVector) -> Result<CvpResult> {
    solve_cvp_with(inst, r, &DpLimits::default())
}

pub fn solve_cvp_with(inst: &SlvpInstance, r: &RatVector, limits: &DpLimits) -> Result<CvpResult> {
    let sys = &inst.system;
    let (n, m) = (sys.n(), sys.m());
    let norm = inst.norm;
    let (b, k) = inst.cvp_bounds(r)?;
    let scale = r.common_denominator();
    let target: Vec<Int> = r
        .iter()
        .map(|v| (v * Rat::from_integer(scale.clone())).to_integer())
        .collect();
    let upper = norm.value(&target);
    if upper >= Int::one() << 62 {
        return Err(Error::overflow());
    }
    let prep = prepare(sys)?;
    let bb = small(&b)?;
    let delta = small(&prep.delta)?;
    let cost_at = |i: usize, x: &Int| to_cost(&norm.coord_cost(&(x * &scale - &target[i])), &upper);
    let digit_cost: Vec<Vec<u64>> = (0..n)
        .map(|l| (-bb..=bb).map(|z| cost_at(l, &Int::from(z))).collect())
        .collect();
    let mut final_box = Vec::with_capacity(m);
    for j in 0..m {
        let rv = &r[n + j];
        let lo = small(&((rv.floor().to_integer() - &k) * &prep.delta))?;
        let hi = small(&((rv.ceil().to_integer() + &k) * &prep.delta))?;
        final_box.push((lo, hi));
    }
    let terminal = |eta: &[i64]| -> u64 {
        let mut acc = 0u64;
        for (j, &e) in eta.iter().enumerate() {
            if e % delta != 0 {
                return INF;
            }
            acc = norm.agg().apply(acc, cost_at(n + j, &Int::from(e / delta)));
        }
        acc
    };
    let problem = DpProblem {
        group: &prep.group,
        r_cols: prep.r_cols.clone(),
        digit_lo: vec![-bb; n],
        digit_cost,
        final_box,
        terminal: &terminal,
        require_nonzero: false,
        agg: norm.agg(),
        upper: upper.to_u64().expect("checked"),
        max_states: limits.max_states,
        budget: None,
    };
    let sol = problem
        .solve()?
        .ok_or_else(|| Error::Invariant("the zero vector was not found".into()))?;
    let vector = prep.finish(inst, &sol.digits)?;
    let distance = cvp_distance(norm, &vector.x, r);
    let scaled = match norm {
        Norm::P(p) => Rat::from_integer(num_traits::pow(scale.clone(), p as usize)),
        Norm::Inf => Rat::from_integer(scale.clone()),
    };
    if distance.clone() * scaled != Rat::from_integer(Int::from(sol.cost)) {
        return Err(Error::Invariant(
            "dynamic program cost differs from the distance".into(),
        ));
    }
    Ok(CvpResult { vector, distance })
}

pub(crate) fn cvp_distance(norm: Norm, x: &[Int], r: &RatVector) -> Rat {
    let diff: Vec<Rat> = x
        .iter()
        .zip(r.iter())
        .map(|(a, b)| Rat::from_integer(a.clone()) - b)
        .collect();
    norm.rat_value(&diff)
}

#[cfg(test)]
mod tests;
