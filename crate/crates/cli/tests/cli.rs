use std::path::PathBuf;
use std::process::Command;

use deltafpt::IntMatrix;
use deltafpt_cli::report::matrix_from_json;
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> (i32, Value) {
    let args: Vec<String> = args
        .iter()
        .map(|a| {
            if a.ends_with(".txt") || a.ends_with(".json") {
                data(a)
            } else {
                a.to_string()
            }
        })
        .collect();
    let out = Command::new(env!("CARGO_BIN_EXE_deltafpt"))
        .args(&args)
        .envs(env.iter().copied())
        .output()
        .expect("binary runs");
    let code = out.status.code().expect("exit code");
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, v)
}

fn run(args: &[&str]) -> (i32, Value) {
    run_env(args, &[])
}

fn ok(args: &[&str]) -> Value {
    let (code, v) = run(args);
    assert_eq!(code, 0, "{args:?}: {v}");
    assert_eq!(v["status"], "ok");
    assert_eq!(v["schema"], 1);
    v["payload"].clone()
}

fn strs(v: &Value) -> Vec<&str> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect()
}

#[test]
fn hnf_golden_and_identity() {
    let p = ok(&["hnf", "golden_hnf.txt"]);
    assert_eq!(
        matrix_from_json(&p["h"]),
        Some(IntMatrix::from_i64(&[[2, 0], [0, 1]]).unwrap())
    );
    assert!(p["checks"].as_object().unwrap().values().all(|b| b == true));
    let p = ok(&["hnf", "identity2.txt"]);
    assert_eq!(matrix_from_json(&p["h"]), Some(IntMatrix::identity(2).unwrap()));
}

#[test]
fn printed_matrices_reparse() {
    let a = IntMatrix::from_i64(&[[2, 4], [1, 3]]).unwrap();
    let p = ok(&["snf", "golden_hnf.txt"]);
    let m = |k: &str| matrix_from_json(&p[k]).unwrap();
    assert_eq!(m("p").mul(&a).unwrap().mul(&m("q")).unwrap(), m("s"));
    assert_eq!(m("p_inv").mul(&m("s")).unwrap().mul(&m("q_inv")).unwrap(), a);
    assert_eq!(strs(&p["diagonal"]), ["1", "2"]);
    let c = ok(&["canon", "knap_h.txt"]);
    for k in ["h", "h_b", "h_n", "u"] {
        assert!(matrix_from_json(&c[k]).is_some(), "{k}");
    }
    assert_eq!(c["verified"], true);
}

#[test]
fn malformed_matrix_is_a_parse_error_at_line_2() {
    let (code, v) = run(&["hnf", "malformed.txt"]);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "error");
    assert_eq!(v["error"]["kind"], "parse");
    assert!(v["error"]["message"].as_str().unwrap().contains("line 2"));
}

#[test]
fn rank_deficient_input() {
    let dir = std::env::temp_dir().join(format!("deltafpt-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("rank.txt");
    std::fs::write(&f, "2 2\n1 2\n2 4\n").unwrap();
    let (code, v) = run(&["slvp", f.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "rank");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn slvp_modes_agree() {
    let dp = ok(&["slvp", "diag23.txt", "--norm", "2", "--mode", "dp"]);
    assert_eq!(dp["vector"]["norm_value"], "4");
    let or = ok(&["slvp", "diag23.txt", "--norm", "2", "--mode", "oracle", "--box", "3"]);
    assert_eq!(or["vector"]["norm_value"], "4");
    assert_eq!(or["box_certified"], true);
    let fast = ok(&["slvp", "identity2.txt", "--mode", "fast"]);
    assert_eq!(fast["vector"]["norm_value"], "1");
    for norm in ["1", "inf"] {
        let a = ok(&["slvp", "diag23.txt", "--norm", norm]);
        let b = ok(&["slvp", "diag23.txt", "--norm", norm, "--mode", "oracle", "--box", "3"]);
        assert_eq!(a["vector"], b["vector"], "{norm}");
    }
}

#[test]
fn usage_errors_exit_2() {
    let (code, v) = run(&["slvp", "diag23.txt", "--mode", "oracle"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "usage");
    assert_eq!(run(&["slvp", "diag23.txt", "--norm", "0"]).0, 2);
    assert_eq!(run(&["nonsense"]).0, 2);
    assert_eq!(
        run(&["width", "simplex_h.txt", "simplex2_b.txt", "--mode", "families"]).0,
        2
    );
    assert_eq!(run(&["verify", "--suite", "nope"]).0, 2);
}

#[test]
fn cvp_dp_matches_oracle() {
    for norm in ["1", "2", "inf"] {
        let a = ok(&["cvp", "diag23.txt", "target11.txt", "--norm", norm]);
        let b = ok(&[
            "cvp",
            "diag23.txt",
            "target11.txt",
            "--norm",
            norm,
            "--mode",
            "oracle",
            "--box",
            "3",
        ]);
        assert_eq!(a["distance"], b["distance"], "{norm}");
    }
}

#[test]
fn ilp_goldens() {
    for mode in ["dp", "oracle"] {
        let p = ok(&["ilp", "knap_h.txt", "knap_b.txt", "knap_c.txt", "--mode", mode]);
        assert_eq!(p["status"], "optimal");
        assert_eq!(p["objective"], "2");
        let p = ok(&["ilp", "contra_h.txt", "contra_b.txt", "one_c.txt", "--mode", mode]);
        assert_eq!(p["status"], "infeasible");
        let p = ok(&["ilp", "knap_h.txt", "knap_b.txt", "zero_c.txt", "--mode", mode]);
        assert_eq!(p["objective"], "0");
    }
    let p = ok(&["ilp", "knap_h.txt", "knap_b.txt", "knap_c.txt"]);
    assert_eq!(strs(&p["x"]), ["1", "1"]);
    assert_eq!(p["proximity"]["passed"], true);
}

#[test]
fn ilp_dimension_mismatch() {
    let (code, v) = run(&["ilp", "knap_h.txt", "contra_b.txt", "knap_c.txt"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "dimension");
}

#[test]
fn table_limit_from_environment() {
    let (code, v) = run_env(&["slvp", "diag23.txt"], &[("DELTAFPT_MAX_TABLE", "1")]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "table-too-large");
}

#[test]
fn enum_par_half_shifted_cell() {
    let p = ok(&["enum-par", "cell2.txt", "p_half.txt"]);
    assert_eq!(p["count"], 4);
    assert_eq!(p["bounds"]["within"], true);
    let pts: Vec<Vec<&str>> = p["points"].as_array().unwrap().iter().map(strs).collect();
    assert_eq!(pts, [["1", "1"], ["1", "2"], ["2", "1"], ["2", "2"]]);
}

#[test]
fn cone_feasibility_and_optimum() {
    let p = ok(&["cone-feas", "cone_c.txt", "cone_p.txt", "cone_a.txt", "cone_b.txt"]);
    assert_eq!(p["feasible"], true);
    let p = ok(&[
        "cone-feas",
        "cone_c.txt",
        "cone_p.txt",
        "cone_a.txt",
        "cone_b.txt",
        "--objective",
        "cone_obj.txt",
    ]);
    assert_eq!(p["value"], "-2");
    assert_eq!(p["shift_check"], true);
}

#[test]
fn width_oracle_and_families() {
    let p = ok(&[
        "width",
        "simplex_h.txt",
        "simplex2_b.txt",
        "--mode",
        "oracle",
        "--box",
        "2",
    ]);
    assert_eq!(p["width"], "2");
    assert_eq!(p["box_certified"], true);
    let p = ok(&["width", "simplex_h.txt", "simplex1_b.txt", "--box", "2"]);
    assert_eq!(p["width"], "1");
    for jobs in ["1", "4"] {
        let p = ok(&[
            "width",
            "simplex_h.txt",
            "simplex2_b.txt",
            "families_scaled.json",
            "--mode",
            "families",
            "--jobs",
            jobs,
        ]);
        assert_eq!(p["width"], "2");
        assert_eq!(p["consistent"], true);
    }
}

#[test]
fn oversized_family_on_empty_simplex_warns() {
    let p = ok(&[
        "width",
        "empty_h.txt",
        "empty_b.txt",
        "families_warn.json",
        "--mode",
        "families",
    ]);
    let w = p["warnings"].as_array().unwrap();
    assert_eq!(w.len(), 1);
    assert!(w[0].as_str().unwrap().contains("exceeds Δ = 4"));
}

#[test]
fn verify_small_suites() {
    let p = ok(&["verify", "--suite", "all", "--cases", "5", "--seed", "7"]);
    let suites = p["suites"].as_array().unwrap();
    assert_eq!(suites.len(), deltafpt::verify::SUITES.len());
    assert!(suites.iter().all(|s| s["passed"] == true));
}

#[test]
fn digest_tracks_input_content() {
    let (_, a) = run(&["hnf", "golden_hnf.txt"]);
    let (_, b) = run(&["hnf", "golden_hnf.txt"]);
    let (_, c) = run(&["hnf", "identity2.txt"]);
    assert_eq!(a["inputs_digest"], b["inputs_digest"]);
    assert_ne!(a["inputs_digest"], c["inputs_digest"]);
}
