//! Relaxed Lagrangian–Haar duality for linear infinite and semi-infinite
//! programs over `ℝⁿ`.
//!
//! A program is `inf ⟨c, x⟩ s.t. ⟨a_t, x⟩ ≤ b_t, t ∈ T` where the index set
//! `T` may be infinite. Its Lagrangian–Haar dual ranges over finitely
//! supported multipliers; restricting the admissible supports to a family
//! `ℋ` of finite subsets of `T` gives the relaxed dual `(D_ℋ)`.
//!
//! Everything here reduces to finite linear programs solved by the dense
//! two-phase simplex in [`lp`]:
//!
//! * [`model`] describes instances, index sets, subset families and the
//!   built-in examples;
//! * [`duality`] solves the finite subproblems `(P_H)`/`(D_H)`, searches
//!   `sup (D_ℋ)` over a family and brackets `inf (P)`;
//! * [`certify`] produces and checks finite certificates (cone membership,
//!   `ℋ`-reducibility, the four-statement chain);
//! * [`countable`] follows prefix subproblems of countable programs.
//!
//! The crate is `no_std` and only needs `alloc`. Parsing, file formats and
//! the command-line tool live in the `hdual` crate.

#![cfg_attr(not(test), no_std)]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod certify;
pub mod countable;
pub mod duality;
mod error;
pub mod linalg;
pub mod lp;
pub mod model;
mod tol;

pub use error::{Error, Result};
pub use linalg::{DenseVector, Matrix};
pub use tol::ToleranceConfig;
