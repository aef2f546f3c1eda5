//! Empirical validation of derived clauses against recorded runs.
//!
//! A base-language clause talks about final scalar values, final and entry
//! array contents, and the declared uninterpreted functions — all of which a
//! recorded trace pins down exactly. Universally quantified variables are
//! checked over every assignment from a bounded integer box; assignments
//! that index an array outside the recorded extent prove nothing either way
//! and are counted as skipped rather than failed.

use num_traits::Signed;

use crate::exactalg::{Int, Rational};
use crate::loopspec::{Snapshot, Trace};

use super::term::{Clause, Symbol, Term};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroundCheck {
    /// Assignments with a defined truth value.
    pub checked: usize,
    /// Assignments abandoned on an out-of-extent array access.
    pub skipped: usize,
    pub holds: bool,
    /// The falsifying assignment, in variable order, when `holds` is false.
    pub witness: Option<Vec<i64>>,
}

/// Check `clause` over all variable assignments in `[-bound, bound]` at the
/// final state of `trace`. Stops at the first violation.
pub fn ground_check(clause: &Clause, trace: &Trace, bound: i64) -> GroundCheck {
    debug_assert!(!clause.has_extended(), "only base clauses are checkable");
    let vars: Vec<u32> = clause.vars().into_iter().collect();
    let k = vars.len();
    let initial = trace.initial();
    let last = trace.snapshots.last().expect("a trace has at least one snapshot");

    let mut report = GroundCheck { holds: true, ..GroundCheck::default() };
    let mut vals = vec![-bound; k];
    loop {
        let lookup = |v: u32| {
            let slot = vars.iter().position(|&x| x == v).expect("var collected");
            Rational::from_integer(Int::from(vals[slot]))
        };
        let mut truth = Some(false);
        for lit in &clause.lits {
            match eval_literal(lit.pos, &lit.atom, &lookup, initial, last, trace) {
                Some(true) => {
                    truth = Some(true);
                    break;
                }
                Some(false) => {}
                None => truth = None,
            }
        }
        match truth {
            Some(true) => report.checked += 1,
            None => report.skipped += 1,
            Some(false) => {
                report.checked += 1;
                report.holds = false;
                report.witness = Some(vals);
                return report;
            }
        }
        let mut pos = 0;
        loop {
            if pos == k {
                return report;
            }
            vals[pos] += 1;
            if vals[pos] > bound {
                vals[pos] = -bound;
                pos += 1;
            } else {
                break;
            }
        }
    }
}

/// Aggregate [`ground_check`] over several traces: holds iff it holds on
/// every one.
pub fn holds_on_traces(clause: &Clause, traces: &[Trace], bound: i64) -> GroundCheck {
    let mut total = GroundCheck { holds: true, ..GroundCheck::default() };
    for trace in traces {
        let r = ground_check(clause, trace, bound);
        total.checked += r.checked;
        total.skipped += r.skipped;
        if !r.holds {
            total.holds = false;
            total.witness = r.witness;
            return total;
        }
    }
    total
}

fn eval_literal(
    pos: bool,
    atom: &Term,
    lookup: &impl Fn(u32) -> Rational,
    initial: &Snapshot,
    last: &Snapshot,
    trace: &Trace,
) -> Option<bool> {
    let Term::App(head, args) = atom else {
        unreachable!("atoms are predicate applications")
    };
    let a = eval_term(&args[0], lookup, initial, last, trace)?;
    let b = eval_term(&args[1], lookup, initial, last, trace)?;
    let value = match head {
        Symbol::Le => a <= b,
        Symbol::Less => a < b,
        Symbol::Eq => a == b,
        _ => unreachable!("base atoms compare integers"),
    };
    Some(value == pos)
}

fn eval_term(
    t: &Term,
    lookup: &impl Fn(u32) -> Rational,
    initial: &Snapshot,
    last: &Snapshot,
    trace: &Trace,
) -> Option<Rational> {
    match t {
        Term::Var(v) => Some(lookup(*v)),
        Term::App(Symbol::Int(n), _) => Some(Rational::from_integer(n.clone())),
        Term::App(Symbol::Scalar(x), _) => last.scalars.get(x).cloned(),
        Term::App(Symbol::ArrayAt(a), args) => {
            let idx = eval_term(&args[0], lookup, initial, last, trace)?;
            array_cell(last, a, &idx)
        }
        Term::App(Symbol::ArrayInit(a), args) => {
            let idx = eval_term(&args[0], lookup, initial, last, trace)?;
            array_cell(initial, a, &idx)
        }
        Term::App(Symbol::Uf(f, _), args) => {
            let args: Option<Vec<Rational>> = args
                .iter()
                .map(|a| eval_term(a, lookup, initial, last, trace))
                .collect();
            Some(trace.uf.apply(f, &args?))
        }
        Term::App(Symbol::Plus, args) => {
            let a = eval_term(&args[0], lookup, initial, last, trace)?;
            let b = eval_term(&args[1], lookup, initial, last, trace)?;
            Some(a + b)
        }
        Term::App(Symbol::Times, args) => {
            let a = eval_term(&args[0], lookup, initial, last, trace)?;
            let b = eval_term(&args[1], lookup, initial, last, trace)?;
            Some(a * b)
        }
        Term::App(other, _) => unreachable!("{other:?} cannot appear in a base clause"),
    }
}

fn array_cell(snapshot: &Snapshot, name: &str, idx: &Rational) -> Option<Rational> {
    if !idx.is_integer() || idx.is_negative() {
        return None;
    }
    let cells = snapshot.arrays.get(name)?;
    let idx = idx.to_integer();
    if idx >= Int::from(cells.len()) {
        return None;
    }
    let slot = usize::try_from(&idx).ok()?;
    cells.get(slot).cloned()
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use crate::exactalg::rat;
    use crate::loopspec::{interpret, parse_program, LoopInput, UfInterp};

    use super::super::term::Literal;
    use super::*;

    fn fig1_trace() -> Trace {
        let src = std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../corpus/fig1.loop"
        ))
        .unwrap();
        let program = parse_program(&src).unwrap();
        let mut scalars = BTreeMap::new();
        scalars.insert("n".to_string(), rat(5));
        let mut arrays = BTreeMap::new();
        arrays.insert("A".to_string(), vec![rat(1), rat(-2), rat(3), rat(-1), rat(4)]);
        arrays.insert("B".to_string(), vec![rat(0); 5]);
        arrays.insert("C".to_string(), vec![rat(0); 5]);
        let input = LoopInput {
            scalars,
            arrays,
            uf: UfInterp::Seeded { seed: 7 },
            step_cap: 100,
        };
        interpret(&program, &input).unwrap()
    }

    fn le(a: Term, b: Term) -> Term {
        Term::App(Symbol::Le, vec![a, b])
    }

    fn less(a: Term, b: Term) -> Term {
        Term::App(Symbol::Less, vec![a, b])
    }

    #[test]
    fn the_asserted_estimate_holds_on_a_run() {
        let trace = fig1_trace();
        // ~(0 <= p) | ~(p < b) | h(p) < B(p)
        let clause = Clause::new(vec![
            Literal::new(false, le(Term::int(0), Term::Var(0))),
            Literal::new(false, less(Term::Var(0), Term::scalar("b"))),
            Literal::new(
                true,
                less(
                    Term::App(Symbol::Uf("h".into(), 1), vec![Term::Var(0)]),
                    Term::App(Symbol::ArrayAt("B".into()), vec![Term::Var(0)]),
                ),
            ),
        ]);
        let r = ground_check(&clause, &trace, 20);
        assert!(r.holds);
        // every assignment decides: range guards cover out-of-extent cells
        assert_eq!(r.checked, 41);
        assert_eq!(r.skipped, 0);
    }

    #[test]
    fn unguarded_array_talk_skips_cells_outside_the_extent() {
        let trace = fig1_trace();
        let clause = Clause::new(vec![Literal::new(
            true,
            Term::App(
                Symbol::Eq,
                vec![
                    Term::App(Symbol::ArrayInit("B".into()), vec![Term::Var(0)]),
                    Term::int(0),
                ],
            ),
        )]);
        let r = ground_check(&clause, &trace, 20);
        assert!(r.holds);
        assert_eq!(r.checked, 5);
        assert_eq!(r.skipped, 36);
    }

    #[test]
    fn a_false_ground_claim_is_rejected() {
        let trace = fig1_trace();
        // the partition loop saw three positive cells, so b = 3, not 999
        let clause = Clause::new(vec![Literal::new(
            true,
            Term::App(Symbol::Eq, vec![Term::scalar("b"), Term::int(999)]),
        )]);
        let r = ground_check(&clause, &trace, 20);
        assert!(!r.holds);
        assert_eq!(r.checked, 1);
        let b_is_three = Clause::new(vec![Literal::new(
            true,
            Term::App(Symbol::Eq, vec![Term::scalar("b"), Term::int(3)]),
        )]);
        assert!(ground_check(&b_is_three, &trace, 20).holds);
    }

    #[test]
    fn the_first_falsifying_assignment_is_reported() {
        let trace = fig1_trace();
        // B is not identically zero after the run: B(0) picked up A's first
        // positive cell. Indices below the extent are skipped, so the scan
        // from -20 upward first fails at p = 0.
        let clause = Clause::new(vec![Literal::new(
            true,
            Term::App(
                Symbol::Eq,
                vec![
                    Term::App(Symbol::ArrayAt("B".into()), vec![Term::Var(0)]),
                    Term::int(0),
                ],
            ),
        )]);
        let r = ground_check(&clause, &trace, 20);
        assert!(!r.holds);
        assert_eq!(r.witness, Some(vec![0]));
    }

    #[test]
    fn entry_contents_are_read_from_the_first_snapshot() {
        let trace = fig1_trace();
        // B0(p) = 0 for every in-extent p, even though B(p) changed
        let clause = Clause::new(vec![
            Literal::new(false, le(Term::int(0), Term::Var(0))),
            Literal::new(false, less(Term::Var(0), Term::int(5))),
            Literal::new(
                true,
                Term::App(
                    Symbol::Eq,
                    vec![
                        Term::App(Symbol::ArrayInit("B".into()), vec![Term::Var(0)]),
                        Term::int(0),
                    ],
                ),
            ),
        ]);
        assert!(ground_check(&clause, &trace, 20).holds);
    }
}
