//! Exact toy models of quantum theory over commutative involutive semirings.
//!
//! The crate is layered bottom-up:
//!
//! * [`semiring`]: carriers, involutions, positive cones, axiom checks.
//! * [`matrix`], [`frobenius`]: the dagger compact category `Mat(S)` with
//!   classical structures, group algebras and strong complementarity.
//! * [`cpm`]: doubled (CP) maps, Choi forms, decoherence and the Born rule.
//! * [`phases`]: phase groups, characters, hidden subgroups, Mermin witnesses.
//! * [`nonlocality`]: Bell scenarios, empirical models and LHV solvers.
//! * [`zoo`]: one verifier per toy theory, producing [`zoo::Report`]s.
//!
//! All arithmetic is exact. Loops over independent work items go through
//! [`par::Exec`], which uses rayon when the `parallel` feature is enabled.

pub mod arith;
pub mod check;
pub mod cpm;
pub mod error;
pub mod frobenius;
pub mod linalg;
pub mod matrix;
pub mod nonlocality;
pub mod par;
pub mod phases;
pub mod semiring;
pub mod zoo;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use par::Exec;
pub use semiring::{CarrierSpec, Element, Semiring};

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "SEMIQT_BUDGET";

/// Default cap on the number of items any exhaustive enumeration may visit.
pub const DEFAULT_BUDGET: u128 = 1 << 22;

/// Current enumeration budget.
pub fn enumeration_budget() -> u128 {
    std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET)
}
