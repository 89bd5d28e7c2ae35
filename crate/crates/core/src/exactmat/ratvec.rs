use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Exact rational vector. Components are kept in lowest terms with a
/// positive denominator (guaranteed by [`Ratio`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatVec<T: Clone + Integer>(Vec<Ratio<T>>);

impl<T: Scalar> RatVec<T> {
    pub fn new(v: Vec<Ratio<T>>) -> Self {
        RatVec(v)
    }

    pub fn from_integers(v: &[T]) -> Self {
        RatVec(v.iter().cloned().map(Ratio::from_integer).collect())
    }

    pub fn from_i64(v: &[i64]) -> Self {
        RatVec(v.iter().map(|&x| Ratio::from_integer(T::int(x))).collect())
    }

    /// `(numerator, denominator)` pairs; denominators must be nonzero.
    pub fn from_fractions(v: &[(i64, i64)]) -> Self {
        RatVec(v.iter().map(|&(n, d)| Ratio::new(T::int(n), T::int(d))).collect())
    }

    pub fn zeros(n: usize) -> Self {
        RatVec(vec![Ratio::zero(); n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Ratio<T>] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Ratio<T>> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Ratio<T>> {
        self.0.iter()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Ratio::is_integer)
    }

    pub fn to_integers(&self) -> Option<Vec<T>> {
        self.is_integral()
            .then(|| self.0.iter().map(|r| r.to_integer()).collect())
    }

    /// Least common multiple of the denominators.
    pub fn common_denominator(&self) -> T {
        self.0.iter().fold(T::one(), |acc, r| acc.lcm(r.denom()))
    }

    pub fn max_abs(&self) -> Ratio<T> {
        self.0.iter().map(|r| r.abs()).max().unwrap_or_else(Ratio::zero)
    }

    pub fn sub(&self, other: &RatVec<T>) -> RatVec<T> {
        RatVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|r| !r.is_negative())
    }
}

impl<T: Scalar> Index<usize> for RatVec<T> {
    type Output = Ratio<T>;
    fn index(&self, i: usize) -> &Ratio<T> {
        &self.0[i]
    }
}

/// Formats one component as `num/den`, or a plain integer.
pub fn format_ratio<T: Scalar>(r: &Ratio<T>) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `num/den` or a plain integer.
pub fn parse_ratio<T: Scalar>(tok: &str) -> std::result::Result<Ratio<T>, String> {
    let int = |s: &str| s.trim().parse::<T>().map_err(|_| format!("`{s}` is not an integer"));
    match tok.split_once('/') {
        Some((n, d)) => {
            let d = int(d)?;
            if d.is_zero() {
                return Err(format!("zero denominator in `{tok}`"));
            }
            Ok(Ratio::new(int(n)?, d))
        }
        None => Ok(Ratio::from_integer(int(tok)?)),
    }
}

impl<T: Scalar> fmt::Display for RatVec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_ratio).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl<T: Scalar> FromStr for RatVec<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v = s
            .split_whitespace()
            .map(parse_ratio)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|message| Error::Parse { line: 1, message })?;
        Ok(RatVec(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn lowest_terms() {
        let v = RatVec::<i64>::from_fractions(&[(2, 4), (3, -6), (0, 5)]);
        assert_eq!(v.to_string(), "1/2 -1/2 0");
        assert_eq!(*v[1].denom(), 2);
        assert_eq!(v.common_denominator(), 2);
    }

    #[test]
    fn parse_round_trip() {
        let v: RatVec<BigInt> = "3/9 -4 7/2".parse().unwrap();
        assert_eq!(v.to_string(), "1/3 -4 7/2");
        assert!("1/0".parse::<RatVec<BigInt>>().is_err());
        assert!("x".parse::<RatVec<BigInt>>().is_err());
    }

    #[test]
    fn integrality() {
        let v = RatVec::<i64>::from_fractions(&[(4, 2), (3, 1)]);
        assert_eq!(v.to_integers(), Some(vec![2, 3]));
        assert_eq!(RatVec::<i64>::from_fractions(&[(1, 2)]).to_integers(), None);
    }
}
