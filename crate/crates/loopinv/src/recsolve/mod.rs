//! Recurrence extraction and exact closed forms for loop paths.
//!
//! A guarded path induces, for each scalar it writes, a first-order
//! recurrence `x(k+1) = c·x(k) + q(k)` whose inhomogeneous part may involve
//! the other scalars ([`extract_recurrences`]). Solving the system in
//! dependency order ([`solve_path`]) expresses every scalar after `k`
//! traversals as a polynomial in `k`, in exponential variables `z = c^k`,
//! and in the entry values. The exponentials are tied back to the
//! polynomial world by the ideal of all their algebraic relations
//! ([`relation_ideal`]), so Groebner elimination can later remove both `k`
//! and the `z`s.

mod exprel;
mod extract;
mod faulhaber;
mod solve;

pub use exprel::{relation_ideal, relation_lattice};
pub use extract::{extract_recurrences, PathRecurrences, Recurrence, RecurrenceError};
pub use faulhaber::{power_sum, sum_below};
pub use solve::{shift_images, solve_path, verify_closed_forms, ClosedForms, ZVar};
