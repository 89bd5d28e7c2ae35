//! Exact solvers for lattice and integer programming problems whose
//! constraint matrices have bounded rank minors.
//!
//! The matrix layer ([`exactmat`]) is generic over any [`Scalar`]; the
//! solvers built on top use arbitrary precision integers through the aliases
//! below.

pub mod error;
pub mod exactmat;
pub mod gen;
pub mod geom;
mod group;
pub mod ilp;
pub mod lattice;
pub mod scalar;
pub mod slvp;
pub mod verify;
pub mod width;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Arbitrary precision integer used by every solver.
pub type Int = num_bigint::BigInt;
/// Exact rational over [`Int`].
pub type Rat = num_rational::BigRational;
pub type IntMatrix = exactmat::Matrix<Int>;
pub type RatVector = exactmat::RatVec<Int>;
pub type HnfResult = exactmat::HnfResult<Int>;
pub type SnfResult = exactmat::SnfResult<Int>;
