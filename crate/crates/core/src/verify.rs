//! Seeded oracle-equivalence and bound suites. Each suite returns a report
//! listing every failing case; an empty list means the suite passed.

use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};

use crate::exactmat::{det, hnf, lattice_coords, max_minor_abs, snf, Matrix};
use crate::gen::Gen;
use crate::geom::{cone_optimize, count_bounds, enumerate_par, grid_scan_par, oracle_cone, ConeOutcome};
use crate::ilp::{oracle_ilp, proximity_check, solve_ilp, IlpInstance, IlpStatus};
use crate::lattice::canonicalize;
use crate::slvp::{fast_path_duplicate, oracle_shortest, solve_dp, Norm, SlvpInstance};
use crate::width::{oracle_subproblem, oracle_width, solve_subproblem, SimplexInstance};
use crate::{Int, IntMatrix};

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
    /// Slowest single solve, for suites with a per-solve time limit.
    pub slowest: Option<Duration>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub const SUITES: [&str; 9] = [
    "hnf-snf",
    "entry-bound",
    "sub-rank-bound",
    "slvp",
    "fast-path",
    "ilp",
    "enum-par",
    "cone",
    "width",
];

/// Runs the named suite; `cases = None` uses the suite's default size.
pub fn run_suite(name: &str, seed: u64, cases: Option<usize>) -> Option<SuiteReport> {
    Some(match name {
        "hnf-snf" => hnf_snf(seed, cases.unwrap_or(500)),
        "entry-bound" => entry_bound(seed, cases.unwrap_or(200)),
        "sub-rank-bound" => sub_rank_bound(seed, cases.unwrap_or(200)),
        "slvp" => slvp(seed, cases.unwrap_or(300)),
        "fast-path" => fast_path(seed, cases.unwrap_or(100)),
        "ilp" => ilp(seed, cases.unwrap_or(300)),
        "enum-par" => enum_par(seed, cases.unwrap_or(300)),
        "cone" => cone(seed, cases.unwrap_or(200)),
        "width" => width(seed, cases.unwrap_or(200)),
        _ => return None,
    })
}

struct Run {
    name: &'static str,
    start: Instant,
    cases: usize,
    failures: Vec<String>,
    slowest: Option<Duration>,
    notes: Vec<String>,
}

impl Run {
    fn new(name: &'static str) -> Run {
        Run {
            name,
            start: Instant::now(),
            cases: 0,
            failures: Vec::new(),
            slowest: None,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(msg());
        }
    }

    fn timed<T>(&mut self, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        let e = t.elapsed();
        self.slowest = Some(self.slowest.map_or(e, |s| s.max(e)));
        out
    }

    fn finish(self) -> SuiteReport {
        SuiteReport {
            name: self.name,
            cases: self.cases,
            failures: self.failures,
            elapsed: self.start.elapsed(),
            slowest: self.slowest,
            notes: self.notes,
        }
    }
}

fn show(a: &IntMatrix) -> String {
    format!(
        "{:?}",
        a.to_rows()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    )
}

pub fn hnf_snf(seed: u64, cases: usize) -> SuiteReport {
    let mut g = Gen::new(seed);
    let mut run = Run::new("hnf-snf");
    for _ in 0..cases {
        let cols = g.range(1, 5) as usize;
        let rows = g.range(cols as i64, 6) as usize;
        let a = g.full_rank(rows, cols, 9);
        run.cases += 1;
        let tag = show(&a);
        match hnf(&a) {
            Ok(r) => {
                run.check(a.mul(&r.u).ok().as_ref() == Some(&r.h), || format!("{tag}: A U != H"));
                run.check(det(&r.u).map(|d| d.abs().is_one()).unwrap_or(false), || {
                    format!("{tag}: |det U| != 1")
                });
                run.check(r.is_echelon(), || format!("{tag}: HNF shape"));
                run.check(r.is_reduced(), || format!("{tag}: entries not reduced"));
            }
            Err(e) => run.failures.push(format!("{tag}: hnf failed: {e}")),
        }
        match snf(&a) {
            Ok(r) => {
                let back = r.p.mul(&a).and_then(|pa| pa.mul(&r.q)).ok();
                run.check(back.as_ref() == Some(&r.s), || format!("{tag}: P A Q != S"));
                let ip = IntMatrix::identity(rows).expect("rows >= 1");
                let iq = IntMatrix::identity(cols).expect("cols >= 1");
                run.check(r.p.mul(&r.p_inv).ok() == Some(ip), || format!("{tag}: P P^-1 != I"));
                run.check(r.q.mul(&r.q_inv).ok() == Some(iq), || format!("{tag}: Q Q^-1 != I"));
                run.check(r.divisibility_chain_holds(), || format!("{tag}: divisibility chain"));
            }
            Err(e) => run.failures.push(format!("{tag}: snf failed: {e}")),
        }
    }
    run.finish()
}

pub fn entry_bound(seed: u64, cases: usize) -> SuiteReport {
    let mut g = Gen::new(seed);
    let mut run = Run::new("entry-bound");
    for _ in 0..cases {
        let n = g.range(1, 5) as usize;
        let m = g.range(1, 2) as usize;
        let bound = g_bound(&mut g);
        let a = g.bounded_minor(n, m, bound);
        run.cases += 1;
        match canonicalize(&a, None) {
            Ok(sys) => {
                let rep = sys.check_entry_bound();
                run.check(rep.passed(), || format!("{}: {rep:?}", show(&a)));
            }
            Err(e) => run.failures.push(format!("{}: {e}", show(&a))),
        }
    }
    run.finish()
}

fn g_bound(g: &mut Gen) -> i64 {
    g.range(1, 3)
}

/// Samples with Δ >= 2; the inequality fails at Δ = 1.
pub fn sub_rank_bound(seed: u64, cases: usize) -> SuiteReport {
    let mut g = Gen::new(seed);
    let mut run = Run::new("sub-rank-bound");
    while run.cases < cases {
        let n = g.range(1, 4) as usize;
        let a = g.full_rank(n + 1, n, 3);
        if max_minor_abs(&a, n).expect("rank n") < Int::from(2) {
            continue;
        }
        run.cases += 1;
        match canonicalize(&a, None).and_then(|s| s.check_sub_rank_bound()) {
            Ok(rep) => run.check(rep.holds, || format!("{}: {rep:?}", show(&a))),
            Err(e) => run.failures.push(format!("{}: {e}", show(&a))),
        }
    }
    run.finish()
}

pub fn slvp(seed: u64, cases: usize) -> SuiteReport {
    let mut g = Gen::new(seed);
    let mut run = Run::new("slvp");
    for _ in 0..cases {
        let n = g.range(1, 5) as usize;
        let m = g.range(0, 2) as usize;
        let a = g.full_rank(n + m, n, 4);
        run.cases += 1;
        for norm in [Norm::P(1), Norm::P(2), Norm::Inf] {
            let inst = match SlvpInstance::from_matrix(&a, norm) {
                Ok(i) => i,
                Err(e) => {
                    run.failures.push(format!("{}: {e}", show(&a)));
                    continue;
                }
            };
            let got = run.timed(|| solve_dp(&inst));
            let want = oracle_shortest(&inst, &inst.certified_box());
            match got {
                Ok(v) => run.check(v.norm_value == want.norm_value && inst.is_consistent(&v), || {
                    format!("{} {norm}: dp {} oracle {}", show(&a), v.norm_value, want.norm_value)
                }),
                Err(e) => run.failures.push(format!("{} {norm}: {e}", show(&a))),
            }
        }
    }
    run.finish()
}

/// The oracle here is membership: a nonzero integer vector has
/// `||x||_p^p >= 1` with equality only at `±e_i`, and `>= 2` otherwise.
pub fn fast_path(seed: u64, cases: usize) -> SuiteReport {
    let mut g = Gen::new(seed);
    let mut run = Run::new("fast-path");
    let shapes = [(1, 1), (2, 1), (1, 2), (3, 1)];
    for i in 0..cases {
        let (delta, m) = shapes[i % shapes.len()];
        let a = g.fast_path(delta, m);
        let n = a.cols();
        run.cases += 1;
        let norm = if i % 2 == 0 { Norm::P(2) } else { Norm::P(1) };
        let inst = match SlvpInstance::from_matrix(&a, norm) {
            Ok(inst) => inst,
            Err(e) => {
                run.failures.push(format!("{}: {e}", show(&a)));
                continue;
            }
        };
        let unit_in_lattice = (0..n + m).any(|k| {
            let e: Vec<Int> = (0..n + m)
                .map(|r| if r == k { Int::one() } else { Int::zero() })
                .collect();
            lattice_coords(&a, &e).ok().flatten().is_some()
        });
        let optimum = if unit_in_lattice { Int::one() } else { Int::from(2) };
        match fast_path_duplicate(&inst) {
            Some(v) => {
                let (x, _) = inst.system.to_original(&v.x, &v.t);
                let member = lattice_coords(&a, &x).ok().flatten().is_some();
                let value_ok = v.norm_value == Int::one() || v.norm_value == Int::from(2);
                run.check(member && value_ok && v.norm_value == optimum, || {
                    format!("{}: fast path {} optimum {optimum}", show(&a), v.norm_value)
                });
            }
            None => run
                .failures
                .push(format!("{}: no duplicate columns above the threshold", show(&a))),
        }
    }
    run.finish()
}

pub fn ilp(seed: u64, cases: usize) -> SuiteReport {
    let mut g = Gen::new(seed);
    let mut run = Run::new("ilp");
    let mut tally = std::collections::BTreeMap::new();
    for _ in 0..cases {
        let n = g.range(1, 5) as usize;
        let m = g.range(0, 2) as usize;
        let bound = g_bound(&mut g);
        let h = g.bounded_minor(n, m, bound);
        let b = g.int_vec(n + m, 10);
        // c inside the cone of the rows keeps the relaxation, and its cut by
        // any objective floor, bounded.
        let w: Vec<Int> = (0..n + m).map(|_| Int::from(g.range(1, 2))).collect();
        let c = h.transpose().mul_vec(&w).expect("n + m");
        run.cases += 1;
        let inst = match IlpInstance::new(h.clone(), b.clone(), c) {
            Ok(i) => i,
            Err(e) => {
                run.failures.push(format!("{}: {e}", show(&h)));
                continue;
            }
        };
        let got = match run.timed(|| solve_ilp(&inst)) {
            Ok(r) => r,
            Err(e) => {
                run.failures.push(format!("{} b={b:?}: {e}", show(&h)));
                continue;
            }
        };
        *tally.entry(got.status.as_str()).or_insert(0usize) += 1;
        // A verified feasible point cuts the oracle's box by its objective.
        let floor = got
            .x
            .as_ref()
            .filter(|x| inst.is_feasible(x))
            .map(|x| inst.objective(x));
        let want = match inst.certified_box_above(floor.as_ref()) {
            Some(bx) => oracle_ilp(&inst, &bx),
            None => {
                run.check(got.status == IlpStatus::Infeasible, || {
                    format!("{}: relaxation has no optimum", show(&h))
                });
                continue;
            }
        };
        run.check(got.status == want.status && got.objective == want.objective, || {
            format!(
                "{} b={b:?}: dp {} {:?} oracle {} {:?}",
                show(&h),
                got.status.as_str(),
                got.objective,
                want.status.as_str(),
                want.objective
            )
        });
        if got.status == IlpStatus::Optimal {
            let rep = proximity_check(&inst, &got);
            run.check(rep.as_ref().is_some_and(|r| r.passed), || {
                format!("{}: proximity {rep:?}", show(&h))
            });
        }
    }
    run.notes = tally.iter().map(|(k, v)| format!("{k}={v}")).collect();
    run.finish()
}

pub fn enum_par(seed: u64, cases: usize) -> SuiteReport {
    let mut g = Gen::new(seed);
    let mut run = Run::new("enum-par");
    for _ in 0..cases {
        let n = g.range(1, 4) as usize;
        let inst = g.par_instance(n, 5, 7);
        run.cases += 1;
        let tag = format!(
            "{} p={:?}",
            show(&inst.a),
            inst.p.iter().map(ToString::to_string).collect::<Vec<_>>()
        );
        match enumerate_par(&inst) {
            Ok(pts) => {
                run.check(pts == grid_scan_par(&inst), || {
                    format!("{tag}: enumeration differs from grid scan")
                });
                match count_bounds(&inst, pts.len()) {
                    Ok(rep) => run.check(rep.within, || format!("{tag}: count {rep:?}")),
                    Err(e) => run.failures.push(format!("{tag}: {e}")),
                }
            }
            Err(e) => run.failures.push(format!("{tag}: {e}")),
        }
    }
    run.finish()
}

pub fn cone(seed: u64, cases: usize) -> SuiteReport {
    let mut g = Gen::new(seed);
    let mut run = Run::new("cone");
    for _ in 0..cases {
        let n = g.range(1, 3) as usize;
        let m = g.range(1, 3) as usize;
        let prog = g.cone_program(n, m, 3);
        run.cases += 1;
        let tag = format!("{} a={}", show(&prog.c), show(&prog.a));
        let got = match cone_optimize(&prog) {
            Ok(o) => o,
            Err(e) => {
                run.failures.push(format!("{tag}: {e}"));
                continue;
            }
        };
        let want = oracle_cone(&prog, 2);
        let value = |o: &ConeOutcome| match o {
            ConeOutcome::Optimal { value, .. } => Some(value.clone()),
            ConeOutcome::Infeasible => None,
        };
        run.check(value(&got) == value(&want), || format!("{tag}: {got:?} vs {want:?}"));
        if let Some(x) = got.point() {
            run.check(prog.shift_check(x), || format!("{tag}: shift check fails at {x:?}"));
        }
    }
    run.finish()
}

/// Width goldens by direction enumeration, then random subproblems against
/// the direct scan.
pub fn width(seed: u64, cases: usize) -> SuiteReport {
    let mut g = Gen::new(seed);
    let mut run = Run::new("width");
    let h = Matrix::from_i64(&[[-1, 0], [0, -1], [1, 1]]).expect("3 x 2");
    for (scale, expect) in [(2, 2), (1, 1)] {
        run.cases += 1;
        let b = vec![Int::zero(), Int::zero(), Int::from(scale)];
        let s = match SimplexInstance::new(h.clone(), b) {
            Ok(s) => s,
            Err(e) => {
                run.failures.push(format!("scale {scale}: {e}"));
                continue;
            }
        };
        let res = oracle_width(&s, &Int::from(2)).expect("positive box");
        let class = [[1, 0], [0, 1], [1, 1]];
        let in_class = scale != 2
            || class
                .iter()
                .any(|d| res.direction == [Int::from(d[0]), Int::from(d[1])]);
        run.check(res.width == Int::from(expect).into() && in_class, || {
            format!("scale {scale}: width {} direction {:?}", res.width, res.direction)
        });
    }
    for _ in 0..cases {
        let k = g.range(1, 3) as usize;
        let sub = g.subproblem(k, 3);
        run.cases += 1;
        let want = oracle_subproblem(&sub);
        match solve_subproblem(&sub) {
            Ok(got) => run.check(got.is_some() == want.is_some(), || {
                format!("{} : {got:?} vs {want:?}", show(&sub.c))
            }),
            Err(e) => run.failures.push(format!("{}: {e}", show(&sub.c))),
        }
    }
    run.finish()
}
