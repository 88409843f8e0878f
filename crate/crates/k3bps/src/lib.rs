//! BPS counting for K3 surfaces in exact arithmetic.
//!
//! This crate implements, as closed formulas over exact rationals:
//!
//! - the two-variable BPS generating function and the integer table
//!   `r_{g,h}` it determines ([`kkv`]);
//! - conversions between BPS tables and potentials in both the
//!   Gromov-Witten (`λ`, sine basis) and stable-pairs (`q`, Laurent basis)
//!   conventions, and the formal variable-change check `−q = e^{iλ}`
//!   ([`potentials`]);
//! - the Kawai-Yoshioka Euler-characteristic series and the signed residue
//!   series derived from it ([`kawai_yoshioka`]);
//! - the stable-pairs multiple cover formula, the exponential/logarithm
//!   dictionary for effective-cone partition functions, and the recursion
//!   they satisfy ([`multicover`]);
//! - even-lattice machinery: discriminants, discriminant groups and cosets,
//!   and refined multiplicities by exact enumeration ([`lattice`]);
//! - Noether-Lefschetz numbers with their degenerate-case rules, the quartic
//!   pencil's modular form `Θ`, and the forward/inverse maps tying curve
//!   counts of a fibration to the fiberwise counts ([`noether_lefschetz`],
//!   [`quartic`]).
//!
//! No floating point is used anywhere: coefficients are big rationals and
//! every published value reproduced here is matched exactly.

#![forbid(unsafe_code)]

pub mod kawai_yoshioka;
pub mod kkv;
pub mod lattice;
mod linalg;
pub mod multicover;
pub mod noether_lefschetz;
pub mod potentials;
pub mod quartic;
pub mod report;
pub mod verify;

pub use qseries;

// Chapters of the guide under book/ are compiled and executed as doctests,
// so the book cannot drift out of sync with the library.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/series-engine.md")]
    mod series_engine {}
    #[doc = include_str!("../../../book/src/bps-tables.md")]
    mod bps_tables {}
    #[doc = include_str!("../../../book/src/stable-pairs.md")]
    mod stable_pairs {}
    #[doc = include_str!("../../../book/src/kawai-yoshioka.md")]
    mod kawai_yoshioka {}
    #[doc = include_str!("../../../book/src/multiple-covers.md")]
    mod multiple_covers {}
    #[doc = include_str!("../../../book/src/lattices.md")]
    mod lattices {}
    #[doc = include_str!("../../../book/src/noether-lefschetz.md")]
    mod noether_lefschetz {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
