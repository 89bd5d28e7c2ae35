use super::*;
use crate::exactmat::Matrix;

fn inst(rows: &[&[i64]], norm: Norm) -> SlvpInstance {
    SlvpInstance::from_matrix(&Matrix::from_i64(rows).unwrap(), norm).unwrap()
}

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

#[test]
fn norm_parsing() {
    assert_eq!("2".parse::<Norm>(), Ok(Norm::P(2)));
    assert_eq!("inf".parse::<Norm>(), Ok(Norm::Inf));
    assert!("0".parse::<Norm>().is_err());
    assert_eq!(Norm::P(3).value(&ints(&[1, -2])), Int::from(9));
    assert_eq!(Norm::Inf.value(&ints(&[1, -2])), Int::from(2));
}

#[test]
fn ceil_roots() {
    assert_eq!(ceil_root(&Int::from(8), 3), Int::from(2));
    assert_eq!(ceil_root(&Int::from(9), 3), Int::from(3));
    assert_eq!(ceil_root(&Int::from(0), 2), Int::from(0));
    assert_eq!(ceil_root(&Int::from(50), 2), Int::from(8));
}

#[test]
fn fast_path_duplicate_pair() {
    let i = inst(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 2]], Norm::P(2));
    let v = fast_path_duplicate(&i).unwrap();
    assert_eq!(v.x, ints(&[1, -1, 0]));
    assert_eq!(v.norm_value, Int::from(2));
    let o = oracle_shortest(&i, &Int::from(3));
    assert_eq!(o.norm_value, Int::from(2));
}

#[test]
fn fast_path_identity_unit_column() {
    let i = inst(&[&[1, 0], &[0, 1]], Norm::P(2));
    let v = fast_path_duplicate(&i).unwrap();
    assert_eq!(v.norm_value, Int::one());
    assert_eq!(v.x, ints(&[1, 0]));
}

#[test]
fn fast_path_negative() {
    let i = inst(&[&[1, 0], &[0, 2]], Norm::P(2));
    assert_eq!(i.system.s, 1);
    assert_eq!(fast_path_duplicate(&i).map(|v| v.norm_value), Some(Int::one()));
    let j = inst(&[&[1, 0], &[1, 2]], Norm::P(2));
    assert!(fast_path_duplicate(&j).is_none());
}

#[test]
fn minkowski_examples() {
    let i = inst(&[&[1, 0], &[0, 1]], Norm::Inf);
    assert_eq!(minkowski_bound(&i), Int::one());
    let i = inst(&[&[1, 0], &[0, 5]], Norm::Inf);
    let m = minkowski_bound(&i);
    assert!(m >= Int::one() && m <= Int::from(5));
    let i = inst(&[&[5]], Norm::P(2));
    assert_eq!(minkowski_bound(&i), Int::from(5));
}

#[test]
fn dp_examples() {
    let i = inst(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], Norm::P(2));
    assert_eq!(solve_dp(&i).unwrap().norm_value, Int::one());

    let i = inst(&[&[2, 0], &[0, 3]], Norm::P(2));
    let v = solve_dp(&i).unwrap();
    assert_eq!(v.norm_value, Int::from(4));
    assert_eq!(v.x, ints(&[2, 0]));

    let i = inst(&[&[1, 0], &[0, 1], &[5, 7]], Norm::P(2));
    let v = solve_dp(&i).unwrap();
    let o = oracle_shortest(&i, &Int::from(10));
    assert_eq!(v.norm_value, o.norm_value);
    assert_eq!(v.norm_value, Int::from(6));
    assert_eq!(v, o);
    assert!(i.is_consistent(&v));
}

#[test]
fn dp_all_norms_agree_with_oracle() {
    let cases: [&[&[i64]]; 4] = [
        &[&[3, 1], &[1, 4], &[2, -2]],
        &[&[2, 1, 0], &[0, 3, 1], &[1, 0, 4], &[1, 1, 1]],
        &[&[4, 1], &[-1, 3]],
        &[&[1, 2, 0], &[0, 2, 2], &[2, 0, 2], &[1, -1, 3], &[0, 1, -2]],
    ];
    for rows in cases {
        for norm in [Norm::P(1), Norm::P(2), Norm::P(3), Norm::Inf] {
            let i = inst(rows, norm);
            let v = solve_dp(&i).unwrap();
            let o = oracle_shortest(&i, &i.certified_box());
            assert_eq!(v.norm_value, o.norm_value, "{rows:?} {norm}");
            assert_eq!(v.t, o.t, "{rows:?} {norm}");
            assert!(i.is_consistent(&v));
            let mx = v.x.iter().map(|x| x.abs()).max().unwrap();
            assert!(mx <= minkowski_bound(&i));
        }
    }
}

#[test]
fn table_cap_is_enforced() {
    let i = inst(&[&[3, 1], &[1, 4], &[2, -2]], Norm::P(2));
    let opts = DpOptions {
        bound: None,
        limits: DpLimits { max_states: 1 },
    };
    assert!(matches!(solve_dp_with(&i, &opts), Err(Error::TableTooLarge { .. })));
}

#[test]
fn cvp_examples() {
    let i = inst(&[&[1, 0], &[0, 1]], Norm::P(2));
    let r = RatVector::zeros(2);
    let c = solve_cvp(&i, &r).unwrap();
    assert!(c.distance.is_zero() && c.vector.x.iter().all(Zero::is_zero));

    let r = RatVector::from_fractions(&[(2, 5), (3, 5)]);
    let c = solve_cvp(&i, &r).unwrap();
    assert_eq!(c.vector.x, ints(&[0, 1]));
    assert_eq!(c.distance, Rat::new(Int::from(8), Int::from(25)));

    let i = inst(&[&[2, 0], &[0, 3]], Norm::P(2));
    let r = RatVector::from_i64(&[1, 1]);
    let c = solve_cvp(&i, &r).unwrap();
    assert_eq!(c.vector.x, ints(&[0, 0]));
    assert_eq!(c.distance, Rat::from_integer(Int::from(2)));
    let o = oracle_closest(&i, &r, &Int::from(3));
    assert_eq!(o, c);
}

#[test]
fn cvp_agrees_with_oracle() {
    let i0 = inst(&[&[2, 1, 0], &[0, 3, 1], &[1, 0, 4], &[1, 1, 1]], Norm::P(2));
    for norm in [Norm::P(1), Norm::P(2), Norm::Inf] {
        let i = SlvpInstance::new(i0.system.clone(), norm).unwrap();
        let r = RatVector::from_fractions(&[(7, 2), (-5, 3), (9, 4), (1, 1)]);
        let c = solve_cvp(&i, &r).unwrap();
        let o = oracle_closest(&i, &r, &i.certified_cvp_box(&r).unwrap());
        assert_eq!(c, o, "{norm}");
    }
}

#[test]
fn wrong_target_length() {
    let i = inst(&[&[1, 0], &[0, 1]], Norm::P(2));
    assert!(matches!(solve_cvp(&i, &RatVector::zeros(3)), Err(Error::Dimension(_))));
}
