//! Exact hyper-sums of powers of integers.
//!
//! `S_m^(r)(n)` is the `r`-fold iterated sum of `m`-th powers. This crate
//! builds it as an exact polynomial along several independent routes,
//! expresses it through the Hessenberg-determinant Faulhaber form
//! `S_m^(r) = S_1^(r) G_m^(r)(n + r/2)`, and cross-checks everything.

pub mod cli;
pub mod error;
pub mod exactnum;
pub mod hessenberg;
pub mod hypersum;
pub mod polyring;
pub mod verify;

pub use error::{Error, Result};
pub use exactnum::{Rational, Tables};
pub use hessenberg::{build_h, HessenbergMatrix};
pub use hypersum::{Engine, FaulhaberPoly, HyperSumPoly, Method};
pub use polyring::{Parity, RatPoly, VarTag, Variable};
pub use verify::{golden_fixtures, run_grid, GridSpec, VerifyReport};
