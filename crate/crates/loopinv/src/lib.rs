//! Loop invariant synthesis by symbol elimination.
//!
//! Two pipelines over a small imperative loop language:
//!
//! * **Polynomial invariants** for P-solvable loops: per-path recurrence
//!   extraction ([`recsolve`]), exact closed forms with exponential
//!   variables, and Groebner-basis elimination of counters and
//!   exponentials ([`groebner`], [`polyinv`]).
//! * **Quantified first-order invariants** over arrays: update-predicate
//!   axioms in an extended language, saturation with a simplification
//!   order that weighs extended symbols heaviest, and projection of the
//!   saturated set onto the base language ([`folinv`]).
//!
//! Every capability has a runnable demo under `examples/`; start with
//! `cargo run -p loopinv --example polynomial_invariants`. The same
//! functionality is scriptable through the thin `loopinv` binary
//! (`analyze`, `parse`, `trace`, `oracle` subcommands; see [`cli`]).

pub mod cli;
pub mod exactalg;
pub mod folinv;
pub mod groebner;
pub mod loopspec;
pub mod polyinv;
pub mod recsolve;

pub use exactalg::{Polynomial, Rational, Vars};
