//! Exact computation of degenerate combinatorial special functions.
//!
//! The crate is organized around five layers:
//!
//! - [`exact`]: arbitrary-precision rationals ([`Rat`]), dense univariate
//!   polynomials ([`Poly`]) and truncated formal power series ([`Series`]) —
//!   the exact substrate everything else builds on.
//! - [`stirling`]: classical and degenerate Stirling numbers of both kinds,
//!   falling factorials and (degenerate) Bell polynomials, defined by
//!   triangular basis conversion.
//! - [`dowling`]: classical and degenerate (r-)Whitney numbers,
//!   (r-)Dowling polynomials, Charlier polynomials, and the closed-form
//!   right-hand sides of the moment identities.
//! - [`genfun`]: the truncated exponential-generating-function engine that
//!   rebuilds every family from series primitives and extracts `n!·[tⁿ]`.
//! - [`poisson`]: seeded Poisson sampling and Monte-Carlo estimation of
//!   degenerate factorial moments against their exact closed forms.
//!
//! [`verify`] ties the layers together: it enumerates every identity over a
//! parameter grid, certifies polynomial-in-λ identities by evaluation at
//! sufficiently many rational points, and aggregates pass/fail reports.
//!
//! All algebraic computation is exact; floating point appears only in the
//! Monte-Carlo estimator's mean/standard-error accumulation.
//!
//! ```
//! use degenlab::dowling::{deg_r_dowling_poly, thm_rhs, ThmId};
//! use degenlab::stirling::DegParams;
//! use degenlab::{Rat, Var};
//!
//! // D⁽³⁾_{2,1/2}(4, x) and the single-sum closed form for its
//! // coefficients agree exactly, coefficient by coefficient.
//! let params = DegParams::new(Rat::frac(1, 2), 2, 3)?;
//! let dowling = deg_r_dowling_poly(&params, 4);
//! assert_eq!(thm_rhs(ThmId::T8, &params, 4), dowling.with_var(Var::Alpha));
//!
//! // evaluating at x = 2 gives the Poisson degenerate central moment
//! // E[(2X+3)_{4,1/2}] for X ~ Poi(1)
//! assert_eq!(dowling.eval(&Rat::from_int(2)), Rat::from_int(946));
//! # Ok::<(), degenlab::Error>(())
//! ```

pub mod error;
pub mod exact;
#[cfg(test)]
pub(crate) mod test_oracles;
pub mod stirling;
pub mod dowling;
pub mod genfun;
pub mod poisson;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{binom, Poly, Rat, Series, Var};
pub use stirling::DegParams;
