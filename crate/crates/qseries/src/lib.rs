//! Exact formal Laurent series arithmetic over arbitrary-precision rationals.
//!
//! Everything here is exact: coefficients are big rationals (or Gaussian
//! rationals), exponents live on a grid `(1/N)·Z`, and every series carries an
//! explicit truncation bound below which its coefficients are guaranteed
//! correct. Arithmetic propagates the tightest sound truncation, so precision
//! loss is visible in the type rather than silent.
//!
//! The main types:
//!
//! - [`FracSeries`]: a sparse Laurent series in one variable with exponents on
//!   a fractional grid. Supports multiplication, inversion, `log`/`exp`,
//!   infinite products and the monomial substitution `q ↦ −(−q)^k`.
//! - [`LaurentPolyY`]: a finitely supported Laurent polynomial in a second
//!   variable `y` on the half-integer grid (so `y^{1/2}` is representable).
//! - [`BiSeries`]: a series in `q` whose coefficients are [`LaurentPolyY`].
//! - [`GaussRat`]: rationals with `i` adjoined, used when a formal `e^{iλ}`
//!   is needed.
//!
//! ```
//! use qseries::{FracSeries, Rat, Exp};
//!
//! // (1 - q)^{-1} = 1 + q + q^2 + ... exactly, up to the truncation bound
//! let trunc = Exp::from_integer(6);
//! let one_minus_q = FracSeries::<Rat>::from_integer_terms(
//!     trunc,
//!     [(0, Rat::from_integer(1.into())), (1, Rat::from_integer((-1).into()))],
//! );
//! let geom = one_minus_q.inv().unwrap();
//! assert_eq!(geom.coeff_int(5).unwrap(), Rat::from_integer(1.into()));
//! ```

#![forbid(unsafe_code)]

mod bi;
mod coeff;
mod error;
mod poly;
mod series;

pub use bi::BiSeries;
pub use coeff::{factorial_big, i_power, Coeff, GaussRat, Rat};
pub use error::SeriesError;
pub use poly::LaurentPolyY;
pub use series::{binomial_big, infinite_product, Exp, FracSeries};

use num_bigint::BigInt;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for the exact fraction `n/d`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}
