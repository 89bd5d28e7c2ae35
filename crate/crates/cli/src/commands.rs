use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use deltafpt::exactmat::textfmt::{parse_int_vector, parse_matrix, parse_rat_vector};
use deltafpt::exactmat::{hnf, snf};
use deltafpt::geom::{
    cone_feasible, cone_optimize, count_bounds, enumerate_par, ConeOutcome, ConeProgram, ParInstance,
};
use deltafpt::ilp::{oracle_ilp, proximity_check, solve_ilp, IlpInstance, IlpResult, IlpStatus, LpOutcome};
use deltafpt::lattice::{canonicalize, CanonicalSystem, DeltaSource};
use deltafpt::slvp::{
    fast_path_duplicate, fast_path_guaranteed, oracle_closest, oracle_shortest, solve_cvp, solve_dp_with, DpOptions,
    LatticeVector, Norm, SlvpInstance,
};
use deltafpt::verify::{run_suite, SUITES};
use deltafpt::width::{oracle_width, parse_families, width_from_subproblems, SimplexInstance};
use deltafpt::{Int, IntMatrix, RatVector};
use serde_json::{json, Value};

use crate::report::{digest, int, ints, matrix, rat, rat_vec, Failure, RunReport, Timer};

#[derive(Parser, Debug)]
#[command(
    name = "deltafpt",
    version,
    about = "Exact lattice and integer programming solvers for bounded-minor matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Hermite normal form `A U = H`.
    Hnf { file: PathBuf },
    /// Smith normal form `S = P A Q`.
    Snf { file: PathBuf },
    /// Canonical form and the entry bounds on it.
    Canon {
        file: PathBuf,
        /// Trust this value as the largest rank minor instead of computing it.
        #[arg(long)]
        delta: Option<Int>,
    },
    /// Shortest nonzero lattice vector.
    Slvp {
        file: PathBuf,
        #[arg(long, default_value = "2", value_parser = parse_norm)]
        norm: Norm,
        #[arg(long, value_enum, default_value_t = SlvpMode::Dp)]
        mode: SlvpMode,
        /// Coefficient box for the oracle.
        #[arg(long = "box")]
        coeff_box: Option<u64>,
    },
    /// Closest lattice vector to a rational target.
    Cvp {
        file: PathBuf,
        target: PathBuf,
        #[arg(long, default_value = "2", value_parser = parse_norm)]
        norm: Norm,
        #[arg(long, value_enum, default_value_t = SolveMode::Dp)]
        mode: SolveMode,
        #[arg(long = "box")]
        coeff_box: Option<u64>,
    },
    /// `max c^T x` subject to `H x <= b`, `x` integral.
    Ilp {
        h: PathBuf,
        b: PathBuf,
        c: PathBuf,
        #[arg(long, value_enum, default_value_t = SolveMode::Dp)]
        mode: SolveMode,
    },
    /// Integer points of the half-open cell `p + A [0,1)^n`.
    EnumPar { a: PathBuf, p: PathBuf },
    /// Integer point of `(p + cone(C)) ∩ {A x <= b}`; optimizes when an
    /// objective file is given.
    ConeFeas {
        c: PathBuf,
        p: PathBuf,
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        objective: Option<PathBuf>,
    },
    /// Lattice width of the simplex `{H x <= b}`.
    Width {
        h: PathBuf,
        b: PathBuf,
        /// Subproblem family file, for `--mode families`.
        families: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = WidthMode::Oracle)]
        mode: WidthMode,
        /// Direction box for the oracle.
        #[arg(long = "box")]
        dir_box: Option<u64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Seeded oracle-equivalence suites.
    Verify {
        /// A suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = deltafpt::gen::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        cases: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SlvpMode {
    Fast,
    Dp,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolveMode {
    Dp,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WidthMode {
    Oracle,
    Families,
}

fn parse_norm(s: &str) -> Result<Norm, String> {
    match s {
        "inf" | "infinity" => Ok(Norm::Inf),
        _ => match s.parse::<u32>() {
            Ok(p) if p >= 1 => Ok(Norm::P(p)),
            _ => Err(format!("`{s}` is not a norm; use a positive integer or `inf`")),
        },
    }
}

fn norm_name(norm: Norm) -> String {
    match norm {
        Norm::P(p) => p.to_string(),
        Norm::Inf => "inf".into(),
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Hnf { .. } => "hnf",
            Command::Snf { .. } => "snf",
            Command::Canon { .. } => "canon",
            Command::Slvp { .. } => "slvp",
            Command::Cvp { .. } => "cvp",
            Command::Ilp { .. } => "ilp",
            Command::EnumPar { .. } => "enum-par",
            Command::ConeFeas { .. } => "cone-feas",
            Command::Width { .. } => "width",
            Command::Verify { .. } => "verify",
        }
    }
}

/// Input files read up front, so the digest covers exactly what was parsed.
struct Inputs {
    texts: Vec<(PathBuf, String)>,
}

impl Inputs {
    fn read(paths: &[&Path]) -> Result<Inputs, Failure> {
        let texts = paths
            .iter()
            .map(|p| {
                std::fs::read_to_string(p)
                    .map(|t| (p.to_path_buf(), t))
                    .map_err(|e| Failure::new("io", format!("{}: {e}", p.display())))
            })
            .collect::<Result<_, _>>()?;
        Ok(Inputs { texts })
    }

    fn digest(&self) -> String {
        digest(self.texts.iter().map(|(_, t)| t.as_bytes()))
    }

    fn text(&self, i: usize) -> &str {
        &self.texts[i].1
    }

    fn located<T>(&self, i: usize, r: deltafpt::Result<T>) -> Result<T, Failure> {
        r.map_err(|e| {
            let f = Failure::from(e);
            Failure::new(f.kind, format!("{}: {}", self.texts[i].0.display(), f.message))
        })
    }

    fn matrix(&self, i: usize) -> Result<IntMatrix, Failure> {
        self.located(i, parse_matrix(self.text(i)))
    }

    fn rat_vector(&self, i: usize) -> Result<RatVector, Failure> {
        self.located(i, parse_rat_vector(self.text(i)))
    }

    fn int_vector(&self, i: usize) -> Result<Vec<Int>, Failure> {
        self.located(i, parse_int_vector(self.text(i)))
    }
}

fn paths(cmd: &Command) -> Vec<&Path> {
    match cmd {
        Command::Hnf { file } | Command::Snf { file } | Command::Canon { file, .. } | Command::Slvp { file, .. } => {
            vec![file]
        }
        Command::Cvp { file, target, .. } => vec![file, target],
        Command::Ilp { h, b, c, .. } => vec![h, b, c],
        Command::EnumPar { a, p } => vec![a, p],
        Command::ConeFeas { c, p, a, b, objective } => {
            let mut v: Vec<&Path> = vec![c, p, a, b];
            v.extend(objective.as_deref());
            v
        }
        Command::Width { h, b, families, .. } => {
            let mut v: Vec<&Path> = vec![h, b];
            v.extend(families.as_deref());
            v
        }
        Command::Verify { .. } => vec![],
    }
}

/// Runs one command. Never panics on bad input; failures land in the
/// report's status.
pub fn run(cmd: &Command) -> RunReport {
    let mut timer = Timer::default();
    let mut report = RunReport {
        command: cmd.name().to_string(),
        inputs_digest: String::new(),
        status: Ok(()),
        payload: Value::Null,
        timings: Timer::default(),
    };
    let inputs = match Inputs::read(&paths(cmd)) {
        Ok(i) => i,
        Err(f) => {
            report.status = Err(f);
            return report;
        }
    };
    report.inputs_digest = match cmd {
        Command::Verify { suite, seed, cases } => {
            let key = format!("suite={suite};seed={seed};cases={cases:?}");
            digest([key.as_bytes()])
        }
        _ => inputs.digest(),
    };
    let result = dispatch(cmd, &inputs, &mut timer);
    match result {
        Ok(payload) => report.payload = payload,
        Err((f, payload)) => {
            report.status = Err(f);
            report.payload = payload;
        }
    }
    report.timings = timer;
    report
}

type Outcome = Result<Value, (Failure, Value)>;

fn fail(f: impl Into<Failure>) -> (Failure, Value) {
    (f.into(), Value::Null)
}

fn dispatch(cmd: &Command, inp: &Inputs, t: &mut Timer) -> Outcome {
    match cmd {
        Command::Hnf { .. } => cmd_hnf(inp, t).map_err(fail),
        Command::Snf { .. } => cmd_snf(inp, t).map_err(fail),
        Command::Canon { delta, .. } => cmd_canon(inp, delta.clone(), t).map_err(fail),
        Command::Slvp {
            norm, mode, coeff_box, ..
        } => cmd_slvp(inp, *norm, *mode, *coeff_box, t).map_err(fail),
        Command::Cvp {
            norm, mode, coeff_box, ..
        } => cmd_cvp(inp, *norm, *mode, *coeff_box, t).map_err(fail),
        Command::Ilp { mode, .. } => cmd_ilp(inp, *mode, t).map_err(fail),
        Command::EnumPar { .. } => cmd_enum_par(inp, t).map_err(fail),
        Command::ConeFeas { objective, .. } => cmd_cone(inp, objective.is_some(), t).map_err(fail),
        Command::Width {
            mode,
            dir_box,
            jobs,
            families,
            ..
        } => cmd_width(inp, *mode, *dir_box, *jobs, families.is_some(), t).map_err(fail),
        Command::Verify { suite, seed, cases } => cmd_verify(suite, *seed, *cases, t),
    }
}

fn cmd_hnf(inp: &Inputs, t: &mut Timer) -> Result<Value, Failure> {
    let a = inp.matrix(0)?;
    t.lap("parse");
    let r = inp.located(0, hnf(&a))?;
    t.lap("solve");
    let reproduces = a.mul(&r.u).is_ok_and(|au| au == r.h);
    let out = json!({
        "h": matrix(&r.h),
        "u": matrix(&r.u),
        "pivot_rows": r.pivot_rows,
        "checks": {
            "a_u_equals_h": reproduces,
            "u_unimodular": r.u_is_unimodular(),
            "echelon": r.is_echelon(),
            "reduced": r.is_reduced(),
        },
    });
    t.lap("check");
    Ok(out)
}

fn cmd_snf(inp: &Inputs, t: &mut Timer) -> Result<Value, Failure> {
    let a = inp.matrix(0)?;
    t.lap("parse");
    let r = inp.located(0, snf(&a))?;
    t.lap("solve");
    let forward = r.p.mul(&a).and_then(|pa| pa.mul(&r.q)).is_ok_and(|s| s == r.s);
    let back = r.p_inv.mul(&r.s).and_then(|ps| ps.mul(&r.q_inv)).is_ok_and(|x| x == a);
    let out = json!({
        "s": matrix(&r.s),
        "p": matrix(&r.p),
        "p_inv": matrix(&r.p_inv),
        "q": matrix(&r.q),
        "q_inv": matrix(&r.q_inv),
        "diagonal": ints(&r.diagonal()),
        "checks": {
            "p_a_q_equals_s": forward,
            "reassembles": back,
            "divisibility_chain": r.divisibility_chain_holds(),
        },
    });
    t.lap("check");
    Ok(out)
}

fn canonical_json(sys: &CanonicalSystem) -> Value {
    json!({
        "h": matrix(&sys.h),
        "h_b": matrix(&sys.h_b),
        "h_n": sys.h_n.as_ref().map(matrix),
        "u": matrix(&sys.u),
        "s": sys.s,
        "k": sys.k,
        "delta": int(&sys.delta),
        "delta_rank": int(&sys.delta_rank),
        "delta_source": match sys.delta_source {
            DeltaSource::Computed => "computed",
            DeltaSource::Promised => "promised",
        },
        "row_perm": sys.row_perm,
        "col_perm": sys.col_perm,
        "diagonal": ints(&sys.diagonal()),
    })
}

fn cmd_canon(inp: &Inputs, delta: Option<Int>, t: &mut Timer) -> Result<Value, Failure> {
    let a = inp.matrix(0)?;
    t.lap("parse");
    let sys = inp.located(0, canonicalize(&a, delta))?;
    t.lap("solve");
    let eb = sys.check_entry_bound();
    let sub = sys.check_sub_rank_bound().ok().map(|r| {
        json!({
            "delta_sub": int(&r.delta_sub),
            "delta_rank": int(&r.delta_rank),
            "bound_approx": r.bound_approx,
            "holds": r.holds,
        })
    });
    let mut out = canonical_json(&sys);
    out["verified"] = json!(sys.verify(&a).is_ok());
    out["diagonal_sum_check"] = json!(sys.diagonal_sum_check());
    out["entry_bound"] = json!({
        "hn_max": eb.hn_max.as_ref().map(int),
        "refined_bound": eb.refined_bound.as_ref().map(rat),
        "within_delta": eb.within_delta,
        "within_refined": eb.within_refined,
    });
    out["sub_rank_bound"] = sub.unwrap_or(Value::Null);
    t.lap("check");
    Ok(out)
}

fn vector_json(sys: &CanonicalSystem, v: &LatticeVector) -> Value {
    let (x, coeffs) = sys.to_original(&v.x, &v.t);
    json!({ "x": ints(&x), "t": ints(&coeffs), "norm_value": int(&v.norm_value) })
}

fn slvp_instance(inp: &Inputs, norm: Norm) -> Result<SlvpInstance, Failure> {
    let a = inp.matrix(0)?;
    inp.located(0, SlvpInstance::from_matrix(&a, norm))
}

fn cmd_slvp(inp: &Inputs, norm: Norm, mode: SlvpMode, coeff_box: Option<u64>, t: &mut Timer) -> Result<Value, Failure> {
    if mode == SlvpMode::Oracle && coeff_box.is_none() {
        return Err(Failure::usage("--mode oracle needs --box B"));
    }
    let inst = slvp_instance(inp, norm)?;
    t.lap("canonicalize");
    let sys = &inst.system;
    let mut out = json!({
        "mode": format!("{mode:?}").to_lowercase(),
        "norm": norm_name(norm),
        "n": sys.n(),
        "m": sys.m(),
        "delta": int(&sys.delta),
    });
    match mode {
        SlvpMode::Dp => {
            let r = solve_dp_with(&inst, &DpOptions::default())?;
            out["vector"] = vector_json(sys, &r.vector);
            out["digit_bound"] = int(&r.bound);
            out["states"] = json!(r.states);
        }
        SlvpMode::Fast => {
            out["guaranteed"] = json!(fast_path_guaranteed(&inst));
            out["vector"] = fast_path_duplicate(&inst).map_or(Value::Null, |v| vector_json(sys, &v));
        }
        SlvpMode::Oracle => {
            let b = Int::from(coeff_box.expect("checked above"));
            let v = oracle_shortest(&inst, &b);
            out["vector"] = vector_json(sys, &v);
            out["box"] = int(&b);
            out["box_certified"] = json!(b >= inst.certified_box());
        }
    }
    t.lap("solve");
    Ok(out)
}

fn cmd_cvp(inp: &Inputs, norm: Norm, mode: SolveMode, coeff_box: Option<u64>, t: &mut Timer) -> Result<Value, Failure> {
    if mode == SolveMode::Oracle && coeff_box.is_none() {
        return Err(Failure::usage("--mode oracle needs --box B"));
    }
    let inst = slvp_instance(inp, norm)?;
    let r = inp.rat_vector(1)?;
    let sys = &inst.system;
    if r.dim() != sys.d() {
        return Err(Failure::new(
            "dimension",
            format!("target has {} entries for {} rows", r.dim(), sys.d()),
        ));
    }
    let permuted = RatVector::new(sys.row_perm.iter().map(|&i| r[i].clone()).collect());
    t.lap("canonicalize");
    let mut out = json!({
        "mode": format!("{mode:?}").to_lowercase(),
        "norm": norm_name(norm),
        "target": rat_vec(&r),
    });
    let res = match mode {
        SolveMode::Dp => solve_cvp(&inst, &permuted)?,
        SolveMode::Oracle => {
            let b = Int::from(coeff_box.expect("checked above"));
            out["box_certified"] = json!(b >= inst.certified_cvp_box(&permuted)?);
            out["box"] = int(&b);
            oracle_closest(&inst, &permuted, &b)
        }
    };
    t.lap("solve");
    out["vector"] = vector_json(sys, &res.vector);
    out["distance"] = rat(&res.distance);
    Ok(out)
}

fn ilp_json(inst: &IlpInstance, r: &IlpResult) -> Value {
    let prox = proximity_check(inst, r).map(|p| {
        json!({
            "slack_max": int(&p.slack_max),
            "bound": int(&p.bound),
            "ratio": rat(&p.ratio),
            "passed": p.passed,
        })
    });
    json!({
        "status": r.status.as_str(),
        "x": r.x.as_deref().map(ints),
        "objective": r.objective.as_ref().map(int),
        "lp_vertex": r.lp_vertex.as_ref().map(rat_vec),
        "lp_value": r.lp_value.as_ref().map(rat),
        "basis": r.basis,
        "slack": r.slack.as_deref().map(ints),
        "unbounded_caveat": r.unbounded_caveat,
        "proximity": prox,
        "delta": int(&inst.delta),
    })
}

fn cmd_ilp(inp: &Inputs, mode: SolveMode, t: &mut Timer) -> Result<Value, Failure> {
    let h = inp.matrix(0)?;
    let b = inp.int_vector(1)?;
    let c = inp.int_vector(2)?;
    t.lap("parse");
    let inst = IlpInstance::new(h, b, c)?;
    t.lap("setup");
    let mut out = match mode {
        SolveMode::Dp => ilp_json(&inst, &solve_ilp(&inst)?),
        SolveMode::Oracle => match inst.certified_box() {
            Some(bx) => {
                let mut v = ilp_json(&inst, &oracle_ilp(&inst, &bx));
                v["box"] = Value::Array(bx.iter().map(|(l, h)| json!([int(l), int(h)])).collect());
                v
            }
            None => {
                let status = match inst.lp() {
                    LpOutcome::Infeasible => IlpStatus::Infeasible,
                    _ => IlpStatus::Unbounded,
                };
                json!({ "status": status.as_str(), "delta": int(&inst.delta) })
            }
        },
    };
    t.lap("solve");
    out["mode"] = json!(format!("{mode:?}").to_lowercase());
    Ok(out)
}

fn cmd_enum_par(inp: &Inputs, t: &mut Timer) -> Result<Value, Failure> {
    let a = inp.matrix(0)?;
    let p = inp.rat_vector(1)?;
    t.lap("parse");
    let inst = ParInstance::new(a, p)?;
    let points = enumerate_par(&inst)?;
    t.lap("solve");
    let bounds = count_bounds(&inst, points.len())?;
    t.lap("check");
    Ok(json!({
        "count": points.len(),
        "points": points.iter().map(|x| ints(x)).collect::<Vec<_>>(),
        "bounds": {
            "diagonal": ints(&bounds.diagonal),
            "lower": int(&bounds.lower),
            "upper": int(&bounds.upper),
            "within": bounds.within,
        },
    }))
}

fn cmd_cone(inp: &Inputs, optimize: bool, t: &mut Timer) -> Result<Value, Failure> {
    let c = inp.matrix(0)?;
    let p = inp.rat_vector(1)?;
    let a = inp.matrix(2)?;
    let b = inp.rat_vector(3)?;
    t.lap("parse");
    let out = if optimize {
        let objective = inp.int_vector(4)?;
        let prog = ConeProgram::new(c, p, a, b, objective)?;
        match cone_optimize(&prog)? {
            ConeOutcome::Optimal { x, value } => json!({
                "status": "optimal",
                "x": ints(&x),
                "value": int(&value),
                "shift_check": prog.shift_check(&x),
            }),
            ConeOutcome::Infeasible => json!({ "status": "infeasible" }),
        }
    } else {
        let w = cone_feasible(&c, &p, &a, &b)?;
        json!({ "feasible": w.is_some(), "witness": w.as_deref().map(ints) })
    };
    t.lap("solve");
    Ok(out)
}

fn cmd_width(
    inp: &Inputs,
    mode: WidthMode,
    dir_box: Option<u64>,
    jobs: usize,
    has_families: bool,
    t: &mut Timer,
) -> Result<Value, Failure> {
    match mode {
        WidthMode::Oracle if dir_box.is_none() => return Err(Failure::usage("--mode oracle needs --box B")),
        WidthMode::Families if !has_families => return Err(Failure::usage("--mode families needs a family file")),
        _ => {}
    }
    let h = inp.matrix(0)?;
    let b = inp.int_vector(1)?;
    let inst = SimplexInstance::new(h, b)?;
    t.lap("parse");
    let mut out = json!({
        "mode": format!("{mode:?}").to_lowercase(),
        "vertices": inst.vertices().iter().map(rat_vec).collect::<Vec<_>>(),
        "certified_box": int(&inst.certified_direction_box()),
    });
    match mode {
        WidthMode::Oracle => {
            let r = oracle_width(&inst, &Int::from(dir_box.expect("checked above")))?;
            out["width"] = rat(&r.width);
            out["direction"] = ints(&r.direction);
            out["box"] = int(&r.dir_box);
            out["box_certified"] = json!(r.box_certified);
        }
        WidthMode::Families => {
            let (n, families) = inp.located(2, parse_families(inp.text(2)))?;
            if n != inst.n() {
                return Err(Failure::new(
                    "dimension",
                    format!("family file is for n = {n}, simplex has n = {}", inst.n()),
                ));
            }
            let d = width_from_subproblems(&inst, &families, jobs.max(1))?;
            out["width"] = d.width.as_ref().map_or(Value::Null, rat);
            out["consistent"] = json!(d.consistent);
            out["warnings"] = json!(d.warnings);
            out["families"] = Value::Array(
                d.families
                    .iter()
                    .map(|f| {
                        json!({
                            "threshold": rat(&f.threshold),
                            "rule": f.rule.as_str(),
                            "verdict": f.verdict,
                            "witnesses": f.witnesses.iter().map(|w| w.as_deref().map(ints)).collect::<Vec<_>>(),
                        })
                    })
                    .collect(),
            );
        }
    }
    t.lap("solve");
    Ok(out)
}

/// Failure lists are capped so a broken build still yields a readable report.
const MAX_LISTED_FAILURES: usize = 20;

fn cmd_verify(suite: &str, seed: u64, cases: Option<usize>, t: &mut Timer) -> Outcome {
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&suite) {
        vec![suite]
    } else {
        return Err(fail(Failure::usage(format!(
            "unknown suite `{suite}`; one of all, {}",
            SUITES.join(", ")
        ))));
    };
    let mut all_passed = true;
    let mut rows = Vec::new();
    for name in names {
        let r = run_suite(name, seed, cases).expect("known suite");
        t.record(name, r.elapsed.as_secs_f64() * 1e3);
        if let Some(s) = r.slowest {
            t.record(&format!("{name}_slowest_solve"), s.as_secs_f64() * 1e3);
        }
        all_passed &= r.passed();
        rows.push(json!({
            "name": r.name,
            "cases": r.cases,
            "passed": r.passed(),
            "failure_count": r.failures.len(),
            "failures": r.failures.iter().take(MAX_LISTED_FAILURES).collect::<Vec<_>>(),
            "notes": r.notes,
        }));
    }
    let payload = json!({ "seed": seed, "suites": rows });
    if all_passed {
        Ok(payload)
    } else {
        Err((Failure::new("suite-failure", "some suites reported failures"), payload))
    }
}

pub fn parse_and_run<I, T>(args: I) -> Result<RunReport, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    Ok(run(&cli.command))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms_parse() {
        assert_eq!(parse_norm("inf"), Ok(Norm::Inf));
        assert_eq!(parse_norm("3"), Ok(Norm::P(3)));
        assert!(parse_norm("0").is_err());
        assert!(parse_norm("x").is_err());
    }

    #[test]
    fn command_names_match_subcommands() {
        use clap::CommandFactory;
        let cmd = Cli::command();
        let subs: Vec<&str> = cmd.get_subcommands().map(|s| s.get_name()).collect();
        for name in [
            "hnf",
            "snf",
            "canon",
            "slvp",
            "cvp",
            "ilp",
            "enum-par",
            "cone-feas",
            "width",
            "verify",
        ] {
            assert!(subs.contains(&name), "{name}");
        }
    }

    #[test]
    fn verify_rejects_unknown_suite() {
        let r = run(&Command::Verify {
            suite: "nope".into(),
            seed: 1,
            cases: Some(1),
        });
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn missing_file_is_an_input_error() {
        let r = run(&Command::Hnf {
            file: "/nonexistent/deltafpt.txt".into(),
        });
        assert_eq!(r.status.as_ref().unwrap_err().kind, "io");
        assert_eq!(r.exit_code(), 3);
    }
}
