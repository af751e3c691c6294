//! Counting and estimation for contingency tables with entrywise bounds.
//!
//! A bounded contingency table is a nonnegative integer matrix with prescribed
//! row sums `R`, column sums `C`, and entrywise caps `K`. This crate provides:
//!
//! - [`tables`]: the margin/bounds data model, validation, margin cloning, the
//!   rank-1 table, and exact feasibility testing (max-flow).
//! - [`count`]: exact arbitrary-precision table counts, polynomial coefficient
//!   counts `(n r)_κ` (coefficient of `x^r` in `(1+x+…+x^κ)^n`), and the
//!   independence-heuristic estimate built from them.
//! - [`tg`]: the truncated geometric family `TG(x;κ)` — the maximum-entropy
//!   distribution on `{0,…,κ}` with mean `x` — its entropy, derivatives, and
//!   the curvature function driving the correlation analysis.
//! - [`maxent`]: the convex dual solver for the per-cell entropy maximum over
//!   the bounded transportation polytope, and the associated log-asymptotics.
//! - [`correlation`]: correlation-sign analysis of row/column margin events,
//!   including parameterized margin scans.
//! - [`verify`]: numeric verification suites for the log-concavity inequality,
//!   Stirling sandwich, concavification quality bound, coefficient limits, and
//!   the generating-function upper bound.
//! - [`schema`]: the JSON document format shared by the CLI and library.
//!
//! Scans and randomized suites evaluate independent work items; with the
//! default `parallel` feature these run on rayon. Building with
//! `--no-default-features` selects a sequential fallback with identical
//! results.

#![forbid(unsafe_code)]

pub mod correlation;
pub mod count;
pub mod maxent;
pub mod schema;
pub mod tables;
pub mod tg;
pub mod verify;

mod bignum;
mod flow;
mod par;
mod simplex;

pub use tables::{BoundsMatrix, Cap, CloneResult, MarginPair};

use thiserror::Error;

/// Default cap on the number of dynamic-programming states held by the exact
/// counters. Overridable per call and via the CLI `BT_BUDGET` env var.
pub const DEFAULT_STATE_BUDGET: u64 = 10_000_000;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input outside an operation's stated domain.
    #[error("domain: {0}")]
    Domain(String),

    /// The margins admit no table under the given bounds.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// An exact counter exceeded its state budget. The partial computation is
    /// discarded; no approximate answer is returned.
    #[error("state budget exceeded: {used} states over budget {budget}")]
    BudgetExceeded { used: u64, budget: u64 },

    /// The dual solver failed to reach the residual tolerance. Carries the
    /// tail of the residual history for diagnosis (margins feasible only on a
    /// lower-dimensional face of the polytope end up here).
    #[error("solver did not converge after {sweeps} sweeps; trailing residuals {residuals:?}")]
    NoConvergence { sweeps: usize, residuals: Vec<f64> },

    /// Malformed JSON input document.
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
