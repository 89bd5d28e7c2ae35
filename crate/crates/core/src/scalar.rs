//! The exact scalar abstraction shared by the matrix layer.
//!
//! Everything in [`crate::exactmat`] is written against [`Scalar`], so the
//! same code runs over machine integers (handy for fast property checks on
//! small inputs) and over [`num_bigint::BigInt`], which is what the solvers
//! use. Floating point types deliberately do not qualify: every routine here
//! relies on exact division and Euclidean remainders.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact signed integer type.
pub trait Scalar:
    Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + FromStr + Send + Sync + 'static
{
    fn int(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("i64 fits every scalar")
    }
}

impl<T> Scalar for T where
    T: Integer
        + Signed
        + Clone
        + Debug
        + Display
        + Hash
        + FromPrimitive
        + ToPrimitive
        + FromStr
        + Send
        + Sync
        + 'static
{
}

/// Exact rational over a scalar.
pub type Rational<T> = Ratio<T>;

/// Extended Euclid: returns `(g, x, y)` with `x*a + y*b = g` and `g >= 0`.
pub fn egcd<T: Scalar>(a: &T, b: &T) -> (T, T, T) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (T::one(), T::zero());
    let (mut old_t, mut t) = (T::zero(), T::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = old_r - q.clone() * r.clone();
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = old_s - q.clone() * s.clone();
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = old_t - q * t.clone();
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Smallest integer `>= r`.
pub fn ceil_rat<T: Scalar>(r: &Ratio<T>) -> T {
    r.ceil().to_integer()
}

/// Largest integer `<= r`.
pub fn floor_rat<T: Scalar>(r: &Ratio<T>) -> T {
    r.floor().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn egcd_identity_holds() {
        for a in -12i64..=12 {
            for b in -12i64..=12 {
                let (g, x, y) = egcd(&a, &b);
                assert_eq!(x * a + y * b, g);
                assert_eq!(g, a.gcd(&b));
            }
        }
    }

    #[test]
    fn egcd_bigint() {
        let a = BigInt::from(240);
        let b = BigInt::from(-46);
        let (g, x, y) = egcd(&a, &b);
        assert_eq!(g, BigInt::from(2));
        assert_eq!(x * a + y * b, g);
    }

    #[test]
    fn rational_rounding() {
        let r = Ratio::new(-7i64, 2);
        assert_eq!(ceil_rat(&r), -3);
        assert_eq!(floor_rat(&r), -4);
        let r = Ratio::new(6i64, 3);
        assert_eq!(ceil_rat(&r), 2);
        assert_eq!(floor_rat(&r), 2);
    }
}
