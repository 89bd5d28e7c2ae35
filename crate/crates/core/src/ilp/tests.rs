use super::*;
use crate::exactmat::RatVec;
use num_traits::One;

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

fn inst(h: &[&[i64]], b: &[i64], c: &[i64]) -> IlpInstance {
    IlpInstance::new(IntMatrix::from_i64(h).unwrap(), ints(b), ints(c)).unwrap()
}

fn boxed(r: i64, n: usize) -> Vec<(Int, Int)> {
    vec![(Int::from(-r), Int::from(r)); n]
}

#[test]
fn triangle_example() {
    let i = inst(&[&[-1, 0], &[0, -1], &[2, 3]], &[0, 0, 5], &[1, 1]);
    assert_eq!(i.delta, Int::from(3));
    let r = solve_ilp(&i).unwrap();
    assert_eq!(r.status, IlpStatus::Optimal);
    assert_eq!(r.objective, Some(Int::from(2)));
    assert_eq!(r.x, Some(ints(&[1, 1])));
    assert_eq!(r.basis, Some(vec![1, 2]));
    let o = oracle_ilp(&i, &boxed(5, 2));
    assert_eq!(o.objective, Some(Int::from(2)));
    assert_eq!(o.x, r.x);
    let p = proximity_check(&i, &r).unwrap();
    assert!(p.passed);
    assert!(p.ratio <= Rat::one());
}

#[test]
fn integral_vertex() {
    // Interval constraints 0 <= x1 <= 3, 0 <= x2 <= 2, x1 + x2 <= 4.
    let i = inst(
        &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1], &[1, 1]],
        &[3, 0, 2, 0, 4],
        &[2, 1],
    );
    let r = solve_ilp(&i).unwrap();
    assert_eq!(r.x, Some(ints(&[3, 1])));
    assert_eq!(r.x.as_ref().map(|x| RatVec::from_integers(x)), r.lp_vertex);
    assert!(r.slack.as_ref().unwrap().iter().all(Zero::is_zero));
    assert_eq!(proximity_check(&i, &r).unwrap().ratio, Rat::zero());
}

#[test]
fn zero_objective() {
    let i = inst(&[&[-1, 0], &[0, -1], &[2, 3]], &[0, 0, 5], &[0, 0]);
    let r = solve_ilp(&i).unwrap();
    assert_eq!(r.objective, Some(Int::zero()));
    assert!(i.is_feasible(r.x.as_ref().unwrap()));
}

#[test]
fn infeasible_cases() {
    let i = inst(&[&[1], &[-1]], &[-1, -1], &[1]);
    assert_eq!(solve_ilp(&i).unwrap().status, IlpStatus::Infeasible);
    assert_eq!(oracle_ilp(&i, &boxed(5, 1)).status, IlpStatus::Infeasible);
    // LP feasible (x = 1/2) but no integer point.
    let i = inst(&[&[2], &[-2]], &[1, -1], &[1]);
    assert_eq!(solve_ilp(&i).unwrap().status, IlpStatus::Infeasible);
}

#[test]
fn unbounded_is_flagged() {
    let i = inst(&[&[-1, 0], &[0, -1]], &[0, 0], &[1, 0]);
    let r = solve_ilp(&i).unwrap();
    assert_eq!(r.status, IlpStatus::Unbounded);
    assert!(r.unbounded_caveat);
}

#[test]
fn single_point() {
    let i = inst(&[&[1], &[-1]], &[0, 0], &[1]);
    let r = solve_ilp(&i).unwrap();
    assert_eq!(r.x, Some(ints(&[0])));
    assert_eq!(oracle_ilp(&i, &boxed(3, 1)).objective, Some(Int::zero()));
}

#[test]
fn square_system_is_pure_group_problem() {
    let i = inst(&[&[2, 1], &[-1, 3]], &[7, 4], &[1, 1]);
    let r = solve_ilp(&i).unwrap();
    let o = oracle_ilp(&i, &i.certified_box().unwrap());
    assert_eq!(r.status, o.status);
    assert_eq!(r.objective, o.objective);
    assert_eq!(r.x, o.x);
}

#[test]
fn agrees_with_oracle_on_fixed_cases() {
    let cases: Vec<(Vec<Vec<i64>>, Vec<i64>, Vec<i64>)> = vec![
        (
            vec![vec![3, 1], vec![1, 2], vec![-1, 0], vec![0, -1]],
            vec![11, 9, 0, 0],
            vec![2, 3],
        ),
        (
            vec![
                vec![2, -1, 0],
                vec![0, 2, 1],
                vec![1, 0, 2],
                vec![-1, -1, -1],
                vec![1, 1, 0],
            ],
            vec![5, 6, 7, 3, 4],
            vec![1, -1, 2],
        ),
        (vec![vec![2, 1], vec![-1, 2], vec![-1, -1]], vec![6, 5, -1], vec![-1, 2]),
    ];
    for (h, b, c) in cases {
        let rows: Vec<&[i64]> = h.iter().map(|r| r.as_slice()).collect();
        let i = inst(&rows, &b, &c);
        let r = solve_ilp(&i).unwrap();
        let o = oracle_ilp(&i, &i.certified_box().unwrap());
        assert_eq!(r.status, o.status, "{h:?}");
        assert_eq!(r.objective, o.objective, "{h:?}");
        if r.status == IlpStatus::Optimal {
            assert!(proximity_check(&i, &r).unwrap().passed);
            assert!(Rat::from_integer(r.objective.clone().unwrap()) <= r.lp_value.clone().unwrap());
        }
    }
}

#[test]
fn dimension_errors() {
    let h = IntMatrix::from_i64(&[[1, 0], [0, 1]]).unwrap();
    assert!(matches!(
        IlpInstance::new(h.clone(), ints(&[1]), ints(&[1, 1])),
        Err(Error::Dimension(_))
    ));
    let h = IntMatrix::from_i64(&[[1, 2], [2, 4]]).unwrap();
    assert!(matches!(
        IlpInstance::new(h, ints(&[1, 1]), ints(&[1, 1])),
        Err(Error::Rank { .. })
    ));
}
