//! Exact dense integer and rational linear algebra.

mod det;
mod hnf;
mod matrix;
mod ratvec;
mod snf;
mod solve;
pub mod textfmt;

pub use det::{adjugate, combinations, det, independent_rows, max_minor_abs, max_rank_minor, rank};
pub(crate) use hnf::column_echelon;
pub use hnf::{hnf, HnfResult};
pub use matrix::{dot, Matrix};
pub use ratvec::{format_ratio, parse_ratio, RatVec};
pub use snf::{snf, SnfResult};
pub use solve::{inverse_rational, lattice_coords, solve_rational};
