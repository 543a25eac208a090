//! Time-space constrained rewriting codes for phase-change memories.
//!
//! A code is `(alpha, beta, p)`-constrained when every window of `alpha`
//! consecutive writes and `beta` contiguous cells sees at most `p` cell
//! flips. This crate provides the constraint verifier, window-weight-limited
//! (WWL) capacity and enumerative coding, executable code constructions,
//! capacity bounds and a constructive coset-code search.

pub mod cell;
pub mod cli;
pub mod code;
pub mod constraint;
pub mod bounds;
pub mod constructions;
pub mod cosets;
pub mod error;
pub mod wwl;

pub use cell::{flip_matrix, hamming_distance, CellState, FlipMatrix, WriteSequence};
pub use code::{measure_rate, simulate, RateReport, RewritingCode, Simulation};
pub use constraint::{check_constraint, ConstraintParams, Verdict};
pub use error::{Error, Result};
