use super::*;
use crate::exactmat::Matrix;
use proptest::prelude::*;

fn m(rows: &[&[i64]]) -> IntMatrix {
    Matrix::from_i64(rows).unwrap()
}

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

fn simplex(scale: i64) -> SimplexInstance {
    SimplexInstance::new(m(&[&[-1, 0], &[0, -1], &[1, 1]]), ints(&[0, 0, scale])).unwrap()
}

fn r(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

#[test]
fn scaled_triangle_width() {
    let s = simplex(2);
    let res = oracle_width(&s, &Int::from(3)).unwrap();
    assert_eq!(res.width, r(2, 1));
    assert_eq!(res.direction, ints(&[0, 1]));
    assert!(res.box_certified);
    assert_eq!(s.direction_width(&ints(&[1, -1])).unwrap(), r(4, 1));
}

#[test]
fn unit_triangle_width() {
    let res = oracle_width(&simplex(1), &Int::from(2)).unwrap();
    assert_eq!(res.width, r(1, 1));
}

#[test]
fn zero_direction_rejected() {
    assert_eq!(
        simplex(1).direction_width(&ints(&[0, 0])).unwrap_err().kind(),
        "contract"
    );
}

#[test]
fn non_simplices_rejected() {
    // unbounded: two lower bounds and x + y >= 0
    let e = SimplexInstance::new(m(&[&[-1, 0], &[0, -1], &[-1, -1]]), ints(&[0, 0, 0])).unwrap_err();
    assert_eq!(e.kind(), "not-a-simplex");
    // degenerate: a point
    let e = SimplexInstance::new(m(&[&[-1, 0], &[0, -1], &[1, 1]]), ints(&[0, 0, 0])).unwrap_err();
    assert_eq!(e.kind(), "not-a-simplex");
    // parallel rows
    let e = SimplexInstance::new(m(&[&[1, 0], &[-1, 0], &[0, 1]]), ints(&[1, 0, 1])).unwrap_err();
    assert_eq!(e.kind(), "not-a-simplex");
    assert_eq!(
        SimplexInstance::new(m(&[&[1, 0]]), ints(&[1])).unwrap_err().kind(),
        "shape"
    );
}

#[test]
fn vertices_and_lattice_points() {
    let s = simplex(2);
    assert_eq!(s.vertices().len(), 3);
    assert!(s.has_integer_point());
    // x, y >= 1/2 and x + y <= 3/2
    let thin = SimplexInstance::new(m(&[&[-2, 0], &[0, -2], &[2, 2]]), ints(&[-1, -1, 3])).unwrap();
    assert!(!thin.has_integer_point());
}

/// Encodes "width <= k" for a planar simplex: for each `c1`, the admissible
/// `c2` form an interval, and one integer in it gives a flat direction.
fn planar_family(s: &SimplexInstance, k: i64, c_box: i64) -> SubproblemFamily {
    let vs = s.vertices();
    let mut subproblems = Vec::new();
    for c1 in 0..=c_box {
        let mut lo = if c1 == 0 { r(1, 1) } else { r(-c_box, 1) };
        let mut hi = r(c_box, 1);
        let mut empty = false;
        for a in vs {
            for b in vs {
                let d1 = a[0].clone() - &b[0];
                let d2 = a[1].clone() - &b[1];
                let rest = r(k, 1) - d1 * r(c1, 1);
                if d2.is_zero() {
                    empty |= rest.is_negative();
                } else if d2.is_positive() {
                    hi = hi.min(rest / d2);
                } else {
                    lo = lo.max(rest / d2);
                }
            }
        }
        if empty {
            continue;
        }
        subproblems.push(WidthSubproblem::new(RatVec::new(vec![lo]), RatVec::new(vec![hi]), m(&[&[1]])).unwrap());
    }
    SubproblemFamily {
        threshold: r(k, 1),
        rule: DecisionRule::AnyFeasible,
        subproblems,
    }
}

#[test]
fn families_recover_width() {
    for (h, b) in [
        (m(&[&[-1, 0], &[0, -1], &[1, 1]]), ints(&[0, 0, 2])),
        (m(&[&[-1, 0], &[1, -3], &[0, 1]]), ints(&[0, 0, 2])),
        (m(&[&[-2, 1], &[1, -2], &[1, 1]]), ints(&[0, 0, 4])),
    ] {
        let s = SimplexInstance::new(h, b).unwrap();
        let cb = s.certified_direction_box();
        let truth = oracle_width(&s, &cb).unwrap().width;
        let fams: Vec<_> = (0..6)
            .map(|k| planar_family(&s, k, cb.clone().try_into().unwrap()))
            .collect();
        for jobs in [1, 3] {
            let dec = width_from_subproblems(&s, &fams, jobs).unwrap();
            assert!(dec.consistent);
            let w = dec.width.clone().expect("some family certifies");
            assert!(w >= truth && w < truth.clone() + r(1, 1), "{w} vs {truth}");
        }
    }
}

#[test]
fn all_infeasible_rule_and_empty_list() {
    let s = simplex(2);
    let sub = WidthSubproblem::new(
        RatVec::from_fractions(&[(1, 3)]),
        RatVec::from_fractions(&[(2, 3)]),
        m(&[&[1]]),
    )
    .unwrap();
    let fam = SubproblemFamily {
        threshold: r(7, 1),
        rule: DecisionRule::AllInfeasible,
        subproblems: vec![sub],
    };
    let dec = width_from_subproblems(&s, &[fam], 1).unwrap();
    assert_eq!(dec.width, Some(r(7, 1)));
    assert_eq!(width_from_subproblems(&s, &[], 1).unwrap_err().kind(), "contract");
}

#[test]
fn determinant_warning() {
    let s = simplex(2);
    let sub = WidthSubproblem::new(RatVec::from_i64(&[0]), RatVec::from_i64(&[4]), m(&[&[2]])).unwrap();
    let fam = SubproblemFamily {
        threshold: r(2, 1),
        rule: DecisionRule::AnyFeasible,
        subproblems: vec![sub],
    };
    let dec = width_from_subproblems(&s, &[fam], 1).unwrap();
    assert_eq!(dec.warnings.len(), 1);
    assert_eq!(dec.families[0].witnesses[0], Some(ints(&[0])));
}

#[test]
fn parse_family_file() {
    let text = r#"{"n": 3, "families": [{"threshold": "5/2", "rule": "all-infeasible",
        "subproblems": [{"C": [1, 0, 0, 1], "p": [0, "1/2"], "q": [2, 3]},
                        {"C": [[2, 1], [0, 1]], "p": [0, 0], "q": [1, 1]}]}]}"#;
    let (n, fams) = parse_families(text).unwrap();
    assert_eq!(n, 3);
    assert_eq!(fams[0].threshold, r(5, 2));
    assert_eq!(fams[0].rule, DecisionRule::AllInfeasible);
    assert_eq!(fams[0].subproblems[1].c, m(&[&[2, 1], &[0, 1]]));
    assert!(parse_families(
        r#"{"n": 3, "families": [{"threshold": 1, "subproblems": [{"C": [1], "p": [0, 0], "q": [1, 1]}]}]}"#
    )
    .is_err());
    assert!(parse_families("{").is_err());
    assert!(parse_families(r#"{"n": 3, "families": [{"threshold": 1, "rule": "most", "subproblems": []}]}"#).is_err());
}

#[test]
fn subproblem_examples() {
    let sub = WidthSubproblem::new(
        RatVec::from_fractions(&[(1, 2), (0, 1)]),
        RatVec::from_fractions(&[(5, 2), (3, 2)]),
        m(&[&[1, 1], &[0, 1]]),
    )
    .unwrap();
    let w = solve_subproblem(&sub).unwrap().unwrap();
    assert!(sub.contains(&w));
    let empty = WidthSubproblem::new(
        RatVec::from_fractions(&[(1, 3)]),
        RatVec::from_fractions(&[(2, 3)]),
        m(&[&[1]]),
    )
    .unwrap();
    assert_eq!(solve_subproblem(&empty).unwrap(), None);
    assert_eq!(oracle_subproblem(&empty), None);
    let reversed = WidthSubproblem::new(RatVec::from_i64(&[3]), RatVec::from_i64(&[1]), m(&[&[1]])).unwrap();
    assert_eq!(solve_subproblem(&reversed).unwrap(), None);
    assert!(WidthSubproblem::new(
        RatVec::from_i64(&[0, 0]),
        RatVec::from_i64(&[1, 1]),
        m(&[&[1, 2], &[2, 4]])
    )
    .is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn subproblem_agrees_with_scan(
        c in prop::collection::vec(-3i64..=3, 4),
        p in prop::collection::vec((-6i64..=6, 1i64..=3), 2),
        q in prop::collection::vec((-6i64..=6, 1i64..=3), 2),
    ) {
        let cm = m(&[&c[0..2], &c[2..4]]);
        prop_assume!(!det(&cm).unwrap().is_zero());
        let sub = WidthSubproblem::new(RatVec::from_fractions(&p), RatVec::from_fractions(&q), cm).unwrap();
        let got = solve_subproblem(&sub).unwrap();
        let want = oracle_subproblem(&sub);
        prop_assert_eq!(got.is_some(), want.is_some());
        if let Some(x) = got {
            prop_assert!(sub.contains(&x));
        }
    }

    #[test]
    fn certified_box_finds_the_width(
        pts in prop::collection::vec(-4i64..=4, 4),
    ) {
        // triangle with vertices 0, (a, b), (c, d)
        let (a, b, c, d) = (pts[0], pts[1], pts[2], pts[3]);
        let area = a * d - b * c;
        prop_assume!(area != 0);
        let vs = [(0, 0), (a, b), (c, d)];
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for k in 0..3 {
            let (p0, p1) = (vs[(k + 1) % 3], vs[(k + 2) % 3]);
            let mut nrm = [p1.1 - p0.1, p0.0 - p1.0];
            let opp = vs[k];
            let off = nrm[0] * p0.0 + nrm[1] * p0.1;
            if nrm[0] * opp.0 + nrm[1] * opp.1 > off {
                nrm = [-nrm[0], -nrm[1]];
            }
            rows.push(vec![nrm[0], nrm[1]]);
            rhs.push(nrm[0] * p0.0 + nrm[1] * p0.1);
        }
        let s = SimplexInstance::new(Matrix::from_i64(&rows).unwrap(), ints(&rhs)).unwrap();
        let cb = s.certified_direction_box();
        let base = oracle_width(&s, &cb).unwrap();
        prop_assert!(base.box_certified);
        let wider = oracle_width(&s, &(cb.clone() * 2 + 1)).unwrap();
        prop_assert_eq!(base.width, wider.width);
    }
}
