//! Certified high-precision evaluation of series of the form
//!
//! ```text
//!   sum_{k>=1} z^k w(k) / (k^a C(3k,k)),   a in {0, 1, 2}
//! ```
//!
//! together with the arctangent/logarithm closed forms they equal, weighted
//! by Fibonacci, Lucas and Horadam numbers.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`] precision contexts, MPFR-backed reals and the
//!   [`ClosedFormExpr`](numerics::ClosedFormExpr) tree.
//! * [`sequences`] exact Fibonacci, Lucas and Horadam numbers.
//! * [`series`] partial sums with certified tails and boundary acceleration.
//! * [`closed_forms`] right-hand sides for every identity family.
//! * [`registry`] the built-in identity catalog.
//! * [`verifier`] LHS/RHS comparison, sweeps and reports.
//! * [`cli`] the command-line front end behind the `tribinom` binary.
//!
//! ```
//! use tribinom::numerics::make_context;
//! use tribinom::registry::builtin_catalog;
//! use tribinom::verifier::{verify, Status};
//!
//! let ctx = make_context(30, 1_000_000).unwrap();
//! let catalog = builtin_catalog();
//! let record = catalog.iter().find(|r| r.id == "eq-italy").unwrap();
//! let report = verify(record, 30, &ctx).unwrap();
//! assert_eq!(report.status, Status::Pass);
//! ```

pub mod cli;
pub mod closed_forms;
mod error;
pub mod numerics;
pub mod registry;
pub mod sequences;
pub mod series;
pub mod verifier;

pub use error::{Error, Result};
