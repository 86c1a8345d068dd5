//! Exact-arithmetic cohomology of finite combinatorial groupoid models.
//!
//! The crate builds truncated nerve diagrams of finite groupoids (plus Čech
//! and transformation-groupoid variants), assembles their cochain double
//! complexes over `Z` and `Q`, and computes primary cohomology, secondary
//! invariants (differential characters, multiplicative cohomology, the
//! surjection between them and its kernel, the surrounding long exact
//! sequences) and characteristic classes of combinatorial line bundles with
//! connection. Everything is integer/rational linear algebra; there is no
//! floating point anywhere.
//!
//! Conventions fixed once and used everywhere:
//!
//! * arrows compose left-to-right: `(g, h)` is composable iff `t(g) = s(h)`;
//! * the total differential of a double complex is `D = δ' + (-1)^r δ''`;
//! * cones are `cone(f)^n = A^n ⊕ B^{n-1}` with `d(a, b) = (d a, f(a) - d b)`;
//! * cup products carry the Koszul sign `(-1)^{qr}` between the Čech and
//!   simplicial directions;
//! * gauge action on a differential cocycle is
//!   `(c, h) ↦ (c - Db, h + b + Dλ)`, which leaves the curvature fixed.

#![allow(clippy::needless_range_loop)]

pub mod bundles;
pub mod cochain;
pub mod complexes;
pub mod error;
pub mod groupoid;
pub mod io;
pub mod matrix;
pub mod nerve;
pub mod polyform;
pub mod samples;
pub mod secondary;
pub mod simplicial;
pub mod snf;

pub use error::{Error, Result};

/// Exact integer scalar used throughout.
pub type Int = num_bigint::BigInt;
/// Exact rational scalar used throughout.
pub type Rat = num_rational::BigRational;

/// Crate version string embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[cfg(test)]
pub(crate) fn int(n: i64) -> Int {
    Int::from(n)
}

#[cfg(test)]
pub(crate) fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}
