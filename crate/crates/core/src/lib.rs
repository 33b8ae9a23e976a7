//! Two-reflection discrete-time quantum walks on graphs and graph embeddings.
//!
//! A two-reflection walk has transition matrix `U = (2MM^T - I)(2NN^T - I)`,
//! where the columns of `N` and `M` are orthonormal frames on a common state
//! space. All state transfer questions reduce to the projected transition
//! matrix `B = N^T U N = 2DD^T - I` with discriminant `D = N^T M`, because
//! `N^T U^t N = T_t(B)` (Chebyshev polynomial of the first kind).
//!
//! The crate provides:
//! * multigraph and arc-space primitives plus the graph families analyzed
//!   by the verdict engine ([`graphs`]);
//! * rotation systems, face tracing and toroidal grid embeddings
//!   ([`embeddings`]);
//! * the walk constructors (arc-reversal, vertex-face, Szegedy, generic
//!   frames) and the time-evolution oracle ([`walks`]);
//! * dense symmetric eigendecomposition with eigenvalue clustering and
//!   exact rational characteristic polynomials ([`spectral`]);
//! * recognition of eigenvalues as cosines of rational multiples of pi,
//!   with algebraic certificates ([`rationalcosine`]);
//! * the transfer decision engine: perfect/peak state transfer, periodicity,
//!   zero state transfer, and the parameter-level analyzers for strongly
//!   regular graphs and block designs ([`transfer`]);
//! * JSON schemas for graphs, embeddings, frames and verdict reports
//!   ([`io`]).

pub mod embeddings;
pub mod exact;
pub mod graphs;
pub mod io;
pub mod rationalcosine;
pub mod spectral;
pub mod transfer;
pub mod walks;

use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or generator received parameters violating its contract.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// A structural invariant of an input object does not hold.
    #[error("malformed input: {0}")]
    Malformed(String),
    /// The incidence data is not a 2-design; carries the first violation.
    #[error("not a design: {0}")]
    NotADesign(String),
    /// Exact rational arithmetic is unavailable for this walk.
    #[error("exact arithmetic unsupported: {0}")]
    UnsupportedExact(String),
}

pub type Result<T> = std::result::Result<T, Error>;
