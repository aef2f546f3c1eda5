//! Polynomial invariants for loops with solvable scalar updates.
//!
//! The route from program text to invariants:
//!
//! 1. split the body into guarded paths ([`crate::loopspec::extract_paths`]);
//! 2. solve each path's scalar recurrences into closed forms in a loop
//!    counter and exponential terms ([`crate::recsolve`]);
//! 3. for every short interleaving of paths, compose the closed forms, add
//!    the algebraic relations among the exponential terms, and eliminate
//!    the counters and exponentials with a Gröbner basis — what survives
//!    holds after any run shaped like that interleaving;
//! 4. intersect across interleavings, lengthening them until the ideal
//!    stops shrinking.
//!
//! The result ([`InvariantAnalysis`]) is an ideal over the program's
//! scalars plus symbols for unspecified initial values; every member
//! vanishes at every loop boundary of every run. [`presented_invariants`]
//! reshapes its basis for human eyes, and the [`oracle_from_traces`] /
//! [`run_traces`] pair recovers candidate invariants from concrete runs
//! with no algebra at all, as an independent cross-check.

pub(crate) mod harness;
pub(crate) mod oracle;
pub(crate) mod pipeline;
pub(crate) mod present;

pub use harness::{
    guard_bound_scalars, random_input, run_traces, snapshot_point, vanishes_on_traces,
    HarnessConfig,
};
pub use oracle::{monomials_up_to, oracle_from_traces, OracleResult};
pub use pipeline::{
    choose_init_symbols, invariant_ideal, invariant_ring, written_scalars, InvariantAnalysis,
    PipelineOptions, PolyError, RoundStats,
};
pub use present::{presentation_order, presented_invariants, render};
