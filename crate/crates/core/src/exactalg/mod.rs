//! Exact arithmetic substrate: rationals, sparse matrices over the
//! rationals, and Laurent polynomials / truncated series in `q^{1/2}`.
//!
//! Every dimension the engine reports is computed here, over `Q`.

mod matrix;
mod series;
pub mod modp;
pub(crate) use series::pow_q;

pub use matrix::{Echelon, SparseMatrix, SparseRow};
pub use series::{LaurentQ, TruncatedSeries};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational number.
pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}
