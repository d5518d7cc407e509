//! A query-complexity laboratory for Local Search on hypercubes `{0,1}^n` and
//! grids `[n]^d`.
//!
//! The crate is organised bottom-up:
//!
//! - [`grid`]: coordinate geometry of `[k]^l` and the recursive snake
//!   Hamilton path.
//! - [`oracle`]: query-counted value and membership oracles, plus the
//!   two-query simulation of a value query through membership queries.
//! - [`instances`]: generators for the walk-with-clock hard instances and
//!   their exhaustive verifiers.
//! - [`walkstats`]: exact-rational balls-in-bins parity probabilities and
//!   sticky line-walk distributions, each paired with a brute-force oracle.
//! - [`adversary`]: quantum and relational adversary bound evaluators over
//!   fully enumerated path families.
//! - [`solvers`]: steepest descent, sample-then-descend, and the
//!   divide-and-conquer quantum algorithm for `[n]^2` with simulated
//!   Grover / Dürr–Høyer subroutines.
//! - [`bench`]: the experiment runner, deterministic CSV output and log-log
//!   slope fitting.

pub mod adversary;
pub mod bench;
mod error;
pub mod grid;
pub mod instances;
pub mod oracle;
pub mod solvers;
pub mod walkstats;

pub use error::{Error, Result};
pub use grid::{GridShape, Vertex};
