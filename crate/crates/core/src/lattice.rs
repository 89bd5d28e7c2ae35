//! Canonical lattice bases and the structural bounds they satisfy.
//!
//! A full column rank matrix `A` (`d x n`) is brought to the form
//!
//! ```text
//!     H = P A U = ( H_B )      H_B lower triangular, diag = (1,..,1, h_{s+1},..,h_n)
//!                 ( H_N )      with h_i >= 2 for the last k = n - s entries
//! ```
//!
//! where `P` permutes rows and `U` is unimodular. `delta = |det H_B|` and
//! `delta_rank` is the largest absolute `n x n` minor of `H`.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactmat::{self, column_echelon, det, hnf, max_minor_abs, rank};
use crate::{Int, IntMatrix, Rat};

/// Where `delta_rank` came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaSource {
    Computed,
    Promised,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalSystem {
    pub h: IntMatrix,
    pub h_b: IntMatrix,
    /// The `m` rows below the basis; `None` when `d = n`.
    pub h_n: Option<IntMatrix>,
    pub s: usize,
    pub k: usize,
    pub delta: Int,
    pub delta_rank: Int,
    pub delta_source: DeltaSource,
    /// Row `i` of `h` comes from row `row_perm[i]` of the input.
    pub row_perm: Vec<usize>,
    /// Always the identity: column reordering is absorbed into `u`.
    pub col_perm: Vec<usize>,
    pub u: IntMatrix,
}

/// Does the column lattice of `a` equal all of `Z^rows`?
fn spans_full_lattice(a: &IntMatrix) -> Result<bool> {
    let (r, _) = column_echelon(a)?;
    Ok(r.pivot_rows.len() == a.rows() && r.pivot_rows.iter().enumerate().all(|(j, &i)| r.h[(i, j)].is_one()))
}

/// Reduce `a` to canonical form. `promised_delta` skips the exhaustive
/// computation of the largest `n x n` minor and is trusted as given.
pub fn canonicalize(a: &IntMatrix, promised_delta: Option<Int>) -> Result<CanonicalSystem> {
    let (d, n) = (a.rows(), a.cols());
    if rank(a) < n {
        // hnf names the dependent columns.
        hnf(a)?;
        return Err(Error::Rank {
            dependent_columns: (0..n).collect(),
        });
    }
    let basis = exactmat::independent_rows(a);

    // Rows whose addition keeps the projected lattice equal to Z^|S| come
    // first; this yields the unit diagonal entries.
    let mut unit_rows: Vec<usize> = Vec::new();
    for &r in &basis {
        let mut trial = unit_rows.clone();
        trial.push(r);
        if spans_full_lattice(&a.select_rows(&trial)?)? {
            unit_rows = trial;
        }
    }
    let mut row_perm = unit_rows.clone();
    row_perm.extend(basis.iter().copied().filter(|r| !unit_rows.contains(r)));
    row_perm.extend((0..d).filter(|r| !basis.contains(r)));

    let permuted = a.select_rows(&row_perm)?;
    let r = hnf(&permuted)?;
    if !r.is_lower_triangular_top() {
        return Err(Error::Invariant("basis rows are not the pivot rows".into()));
    }
    let h = r.h;
    let diag: Vec<Int> = (0..n).map(|i| h[(i, i)].clone()).collect();
    let s = diag.iter().take_while(|v| v.is_one()).count();
    if diag[s..].iter().any(|v| v.is_one()) {
        return Err(Error::Invariant("unit diagonal entries are not first".into()));
    }
    let basis_idx: Vec<usize> = (0..n).collect();
    let h_b = h.select_rows(&basis_idx)?;
    let h_n = if d > n {
        Some(h.select_rows(&(n..d).collect::<Vec<_>>())?)
    } else {
        None
    };
    let delta = diag.iter().fold(Int::one(), |acc, v| acc * v);
    let (delta_rank, delta_source) = match promised_delta {
        Some(p) => (p, DeltaSource::Promised),
        None => (max_minor_abs(&h, n)?, DeltaSource::Computed),
    };
    Ok(CanonicalSystem {
        h,
        h_b,
        h_n,
        s,
        k: n - s,
        delta,
        delta_rank,
        delta_source,
        row_perm,
        col_perm: (0..n).collect(),
        u: r.u,
    })
}

/// `n > Δ (2Δ + 1)^e + log2 Δ`, decided exactly.
pub fn exceeds_threshold(n: usize, delta: &Int, exponent: u32) -> bool {
    if !delta.is_positive() {
        return false;
    }
    let base: Int = delta * num_traits::pow(Int::from(2) * delta + 1, exponent as usize);
    let rest = Int::from(n) - base;
    if !rest.is_positive() {
        return false;
    }
    // rest > log2(delta)  <=>  2^rest > delta
    match rest.to_u64() {
        Some(r) if r < u64::from(u32::MAX) => (Int::one() << r as usize) > *delta,
        _ => true,
    }
}

/// `2^(num/den) <= base` for integers `den > 0`, `base >= 1`.
fn pow2_frac_le(num: &Int, den: &Int, base: &Int) -> bool {
    if !num.is_positive() {
        return true;
    }
    let floor_log = base.bits() - 1;
    // 2^num <= base^den <=> num <= den*log2(base)
    if *num <= den * Int::from(floor_log) {
        return true;
    }
    if *num >= den * Int::from(floor_log + 1) {
        return false;
    }
    let den = den
        .to_u32()
        .expect("ambiguous comparison only reached for small exponents");
    let num = num.to_usize().expect("small numerator");
    (Int::one() << num) <= base.pow(den)
}

impl CanonicalSystem {
    pub fn n(&self) -> usize {
        self.h.cols()
    }

    pub fn d(&self) -> usize {
        self.h.rows()
    }

    pub fn m(&self) -> usize {
        self.d() - self.n()
    }

    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.n()).map(|i| self.h[(i, i)].clone()).collect()
    }

    /// Maps coordinates of the canonical system back to the input: returns
    /// `(x, t)` with `A t = x` in the input's row order.
    pub fn to_original(&self, x: &[Int], t: &[Int]) -> (Vec<Int>, Vec<Int>) {
        let mut xo = vec![Int::zero(); x.len()];
        for (i, &r) in self.row_perm.iter().enumerate() {
            xo[r] = x[i].clone();
        }
        let to = self.u.mul_vec(t).expect("u is n x n");
        (xo, to)
    }

    /// `sum of nontrivial diagonal entries <= delta/2^(k-1) + 2(k-1) <= delta`.
    /// `None` when `k = 0`.
    pub fn diagonal_sum_check(&self) -> Option<bool> {
        if self.k == 0 {
            return None;
        }
        let sum: Int = self.diagonal()[self.s..].iter().sum();
        let k = self.k as i64;
        let middle = Rat::new(self.delta.clone() * 2, Int::one() << self.k) + Rat::from_integer(Int::from(2 * (k - 1)));
        let sum = Rat::from_integer(sum);
        Some(sum <= middle && middle <= Rat::from_integer(self.delta.clone()))
    }

    /// Checks every structural invariant against the input matrix.
    pub fn verify(&self, original: &IntMatrix) -> Result<(), String> {
        let (n, d) = (self.n(), self.d());
        if self.s + self.k != n || d != original.rows() || n != original.cols() {
            return Err("dimension bookkeeping".into());
        }
        let diag = self.diagonal();
        for (i, v) in diag.iter().enumerate() {
            let ok = if i < self.s { v.is_one() } else { *v >= Int::from(2) };
            if !ok {
                return Err(format!("diagonal entry {i} is {v}"));
            }
            for j in 0..n {
                let e = &self.h[(i, j)];
                if j > i && !e.is_zero() {
                    return Err(format!("H_B not lower triangular at ({i},{j})"));
                }
                if j < i && (e.is_negative() || e >= v) {
                    return Err(format!("entry ({i},{j}) = {e} not reduced modulo {v}"));
                }
            }
        }
        let prod: Int = diag.iter().product();
        if prod != self.delta || det(&self.h_b).map(|v| v.abs()) != Ok(self.delta.clone()) {
            return Err("delta is not |det H_B|".into());
        }
        if self.delta > self.delta_rank {
            return Err("delta exceeds delta_rank".into());
        }
        if (Int::one() << self.k) > self.delta_rank {
            return Err("k exceeds log2(delta_rank)".into());
        }
        if det(&self.u).map(|v| v.abs().is_one()) != Ok(true) {
            return Err("u is not unimodular".into());
        }
        let permuted = original.select_rows(&self.row_perm).map_err(|e| e.to_string())?;
        if permuted.mul(&self.u).map_err(|e| e.to_string())? != self.h {
            return Err("P A U != H".into());
        }
        if self.col_perm.iter().enumerate().any(|(i, &c)| i != c) {
            return Err("column permutation must be the identity".into());
        }
        Ok(())
    }

    pub fn check_entry_bound(&self) -> EntryBoundReport {
        let Some(h_n) = &self.h_n else {
            return EntryBoundReport {
                m: 0,
                hn_max: None,
                delta_rank: self.delta_rank.clone(),
                delta: self.delta.clone(),
                k: self.k,
                refined_bound: None,
                within_delta: true,
                within_refined: true,
                delta_source: self.delta_source,
            };
        };
        let hn_max = h_n.max_abs();
        // (Δ/δ) (δ/2^(k-1) + k - 1) = (Δ/δ) (2δ/2^k + k - 1)
        let inner =
            Rat::new(self.delta.clone() * 2, Int::one() << self.k) + Rat::from_integer(Int::from(self.k as i64 - 1));
        let refined = Rat::new(self.delta_rank.clone(), self.delta.clone()) * inner;
        let hm = Rat::from_integer(hn_max.clone());
        EntryBoundReport {
            m: self.m(),
            within_delta: hn_max <= self.delta_rank,
            within_refined: hm <= refined,
            hn_max: Some(hn_max),
            delta_rank: self.delta_rank.clone(),
            delta: self.delta.clone(),
            k: self.k,
            refined_bound: Some(refined),
            delta_source: self.delta_source,
        }
    }

    /// `Δ_{n-1}(H) <= (Δ²/2)(1 + log2 Δ)` for `d = n + 1`.
    pub fn check_sub_rank_bound(&self) -> Result<SubRankReport> {
        let n = self.n();
        if self.d() != n + 1 {
            return Err(Error::Shape(format!(
                "sub-rank bound needs d = n + 1, got d = {}, n = {n}",
                self.d()
            )));
        }
        let delta_sub = if n == 1 {
            Int::one()
        } else {
            max_minor_abs(&self.h, n - 1)?
        };
        let dr = &self.delta_rank;
        let sq = dr * dr;
        let holds = if dr.is_zero() {
            false
        } else {
            // 2Δ' <= Δ²(1 + log2 Δ)  <=>  2^((2Δ' - Δ²)/Δ²) <= Δ
            pow2_frac_le(&(Int::from(2) * &delta_sub - &sq), &sq, dr)
        };
        let approx = sq.to_f64().unwrap_or(f64::INFINITY) / 2.0 * (1.0 + dr.to_f64().unwrap_or(f64::INFINITY).log2());
        Ok(SubRankReport {
            delta_sub,
            delta_rank: dr.clone(),
            bound_approx: approx,
            holds,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntryBoundReport {
    pub m: usize,
    pub hn_max: Option<Int>,
    pub delta_rank: Int,
    pub delta: Int,
    pub k: usize,
    pub refined_bound: Option<Rat>,
    pub within_delta: bool,
    pub within_refined: bool,
    pub delta_source: DeltaSource,
}

impl EntryBoundReport {
    pub fn passed(&self) -> bool {
        self.within_delta && self.within_refined
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubRankReport {
    pub delta_sub: Int,
    pub delta_rank: Int,
    /// Floating point rendering of the bound, for display only.
    pub bound_approx: f64,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowThresholdVerdict {
    /// The threshold holds and so does `d <= n + 1`.
    Guaranteed,
    /// The threshold does not hold; nothing is claimed.
    Inconclusive,
    /// Some `n x n` submatrix is singular; the statement does not apply.
    PreconditionFailed,
    /// Threshold holds but `d > n + 1`. Never expected.
    Violated,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RowThresholdReport {
    pub n: usize,
    pub d: usize,
    pub delta_rank: Int,
    pub all_submatrices_nonsingular: bool,
    pub threshold_met: bool,
    pub rows_within: bool,
    pub verdict: RowThresholdVerdict,
}

/// If every `n x n` submatrix of `a` is nonsingular and
/// `n > Δ(2Δ+1)² + log2 Δ`, then `a` has at most `n + 1` rows.
pub fn check_row_threshold(a: &IntMatrix) -> Result<RowThresholdReport> {
    let (d, n) = (a.rows(), a.cols());
    if rank(a) < n {
        hnf(a)?;
    }
    let cols: Vec<usize> = (0..n).collect();
    let mut all_nonsingular = true;
    let mut delta_rank = Int::zero();
    for rows in exactmat::combinations(d, n) {
        let v = det(&a.select(&rows, &cols)?)?.abs();
        all_nonsingular &= !v.is_zero();
        delta_rank = delta_rank.max(v);
    }
    let threshold_met = exceeds_threshold(n, &delta_rank, 2);
    let rows_within = d <= n + 1;
    let verdict = match (all_nonsingular, threshold_met, rows_within) {
        (false, _, _) => RowThresholdVerdict::PreconditionFailed,
        (true, false, _) => RowThresholdVerdict::Inconclusive,
        (true, true, true) => RowThresholdVerdict::Guaranteed,
        (true, true, false) => RowThresholdVerdict::Violated,
    };
    Ok(RowThresholdReport {
        n,
        d,
        delta_rank,
        all_submatrices_nonsingular: all_nonsingular,
        threshold_met,
        rows_within,
        verdict,
    })
}
