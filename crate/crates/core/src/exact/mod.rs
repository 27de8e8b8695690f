//! Exact arithmetic substrate: rationals, polynomials, truncated series.
//!
//! Everything here is immutable after construction and all operations are
//! pure; values can be shared freely across threads.

mod poly;
mod rat;
mod series;

pub use poly::{Poly, Var};
pub use rat::{binom, factorial, Rat};
pub use series::{Coeff, Series};
