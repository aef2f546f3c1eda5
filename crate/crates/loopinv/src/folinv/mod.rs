//! Quantified first-order invariants for loops over arrays.
//!
//! Polynomial methods see only the scalar skeleton of a loop; what a loop
//! does to its arrays ("every cell of `B[0..b)` holds a value the `then`
//! branch produced") needs quantifiers. The route here:
//!
//! 1. *Extend the language.* Alongside the final values a postcondition may
//!    mention, introduce symbols for the run itself: the iteration count
//!    `$n`, per-iteration scalar values `x(i)`, and update predicates
//!    `$upd_A(i, p)` recording that iteration `i` wrote `A[p]`
//!    ([`term`]).
//! 2. *Axiomatize.* Static analysis of the loop body justifies clauses
//!    tying those symbols together — update clauses and their converses,
//!    stepper arithmetic, range coverage for write-once arrays, imported
//!    linear scalar invariants — on top of a fixed integer-order theory
//!    ([`program_axioms`]).
//! 3. *Saturate.* A given-clause loop closes the set under ordered
//!    resolution, factoring, and paramodulation. The term order ranks every
//!    extended symbol above the base language, so inferences tend to
//!    eliminate run-talk ([`saturate`]).
//! 4. *Project.* Derived clauses that survive in the base language — final
//!    values, entry array contents `A0`, declared functions — are loop
//!    invariants, minimized by subsumption ([`base_consequences`]) and
//!    checkable against recorded runs ([`ground_check`]) or an asserted
//!    postcondition ([`assertion_clauses`]).
//!
//! [`analyze_arrays`] runs the whole route, borrowing degree-one facts from
//! the polynomial pipeline when it succeeds on the same loop.

mod axioms;
mod clause;
mod ground;
mod order;
mod saturate;
mod term;
mod tptp;
mod unify;

pub use axioms::{
    arithmetic_axioms, assertion_clauses, program_axioms, to_base, Axiom, AxiomSet,
    ImportedEqualities,
};
pub use clause::{ground_simplify, subsumes};
pub use ground::{ground_check, holds_on_traces, GroundCheck};
pub use order::kbo;
pub use saturate::{
    base_consequences, replays, saturate, saturate_until, BaseClause, Rule, SatClause,
    Saturation, SaturateConfig,
};
pub use term::{Clause, Literal, Symbol, Term};
pub(crate) use term::var_name;
pub use tptp::tptp_problem;

use crate::loopspec::Program;
use crate::polyinv::{invariant_ideal, PipelineOptions};

#[derive(Debug)]
pub struct ArrayAnalysis {
    pub axioms: AxiomSet,
    /// Base-language consequences with program lineage: the invariants,
    /// each pointing back at its derivation record in `saturation`.
    pub invariants: Vec<BaseClause>,
    pub saturation: Saturation,
    /// Whether the invariants subsume every clause of the program's own
    /// `assert`; `None` when there is no (clausifiable) assertion.
    pub covers_assertion: Option<bool>,
}

/// The full pipeline: axiomatize, saturate, project back. When the program
/// carries an assertion, saturation halts as soon as derived invariants
/// subsume every assertion clause; otherwise it runs to quiescence or a
/// resource cap (`saturation.capped` — the invariants are still sound, there
/// may just be fewer of them).
pub fn analyze_arrays(program: &Program, config: &SaturateConfig) -> ArrayAnalysis {
    // Degree-one scalar invariants sharpen the axioms (they relate counters
    // that pace different arrays), but their absence is never fatal.
    let poly = invariant_ideal(program, &PipelineOptions::default()).ok();
    let axioms = match &poly {
        Some(analysis) => program_axioms(
            program,
            Some(ImportedEqualities {
                polys: &analysis.basis,
                init_symbols: &analysis.init_symbols,
            }),
        ),
        None => program_axioms(program, None),
    };
    let sat = match assertion_clauses(program) {
        Some(targets) => {
            let mut open: Vec<Clause> = targets;
            saturate_until(&axioms, config, move |c| {
                if !c.from_program {
                    return false;
                }
                let Some(b) = to_base(&c.clause) else { return false };
                open.retain(|t| !subsumes(&b, t));
                open.is_empty()
            })
        }
        None => saturate(&axioms, config),
    };
    let invariants = base_consequences(&sat);
    let covers_assertion = assertion_clauses(program).map(|targets| {
        targets
            .iter()
            .all(|t| invariants.iter().any(|b| subsumes(&b.clause, t)))
    });
    ArrayAnalysis { axioms, invariants, saturation: sat, covers_assertion }
}
