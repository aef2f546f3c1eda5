//! The loop language front end: parsing, printing, path enumeration, and an
//! exact reference interpreter.
//!
//! A program declares scalars (and optionally arrays and uninterpreted
//! functions), gives concrete integer initializers for some scalars, and
//! contains exactly one guarded `while` loop whose body is built from
//! assignments and (possibly nested) two-way conditionals. An optional
//! trailing `assert (...)` carries a first-order formula that downstream
//! passes can compare their findings against:
//!
//! ```text
//! vars a, b;
//! arrays A;
//! funs h/1;
//! a := 0;
//! while (a < b) {
//!   A[a] := h(a);
//!   a := a + 1;
//! }
//! assert (forall p (0 <= p && p < a -> A[p] == h(p)));
//! ```
//!
//! `#` starts a line comment. Identifiers are `[A-Za-z_][A-Za-z0-9_]*`; the
//! `$` character is reserved to the analyses for generated symbols, so
//! program identifiers can never collide with them.

mod ast;
mod interp;
mod lexer;
mod parser;
mod paths;
mod print;

pub use ast::{Cond, Expr, Formula, Program, RelOp, Stmt};
pub use interp::{
    eval_cond, eval_expr, interpret, run_assignments, InterpError, LoopInput, Snapshot, State,
    Trace, UfInterp,
};
pub use parser::{parse_program, ParseError};
pub use paths::{extract_paths, AssignStmt, GuardedPath, GuardLit};
pub use print::{cond_text, expr_text, formula_text, to_source};

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use num_traits::{One, Signed, Zero};

    use crate::exactalg::{rat, Int, Rational};

    use super::*;

    fn fig1_source() -> String {
        std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../corpus/fig1.loop"
        ))
        .expect("corpus/fig1.loop present")
    }

    fn fig1_input() -> LoopInput {
        let mut scalars = BTreeMap::new();
        scalars.insert("n".to_string(), rat(3));
        let mut arrays = BTreeMap::new();
        arrays.insert("A".to_string(), vec![rat(1), rat(-2), rat(3)]);
        arrays.insert("B".to_string(), vec![rat(0); 3]);
        arrays.insert("C".to_string(), vec![rat(0); 3]);
        LoopInput {
            scalars,
            arrays,
            uf: UfInterp::Zero,
            step_cap: 1000,
        }
    }

    #[test]
    fn parses_the_partition_loop() {
        let p = parse_program(&fig1_source()).unwrap();
        assert_eq!(p.scalars, ["a", "b", "c", "s", "n"]);
        assert_eq!(p.arrays, ["A", "B", "C"]);
        assert_eq!(p.funs, [("h".to_string(), 1)]);
        for v in ["a", "b", "c", "s"] {
            assert_eq!(p.init_value(v), Some(&Int::zero()));
        }
        assert!(!p.has_concrete_init("n"));
        assert_eq!(p.guard.op, RelOp::Lt);
        assert!(p.assertion.is_some());
    }

    #[test]
    fn partition_loop_has_two_paths() {
        let p = parse_program(&fig1_source()).unwrap();
        let paths = extract_paths(&p);
        assert_eq!(paths.len(), 2);

        // Then-branch first; both paths share the trailing accumulator and
        // counter updates, replicated into each.
        assert_eq!(paths[0].decisions, [true]);
        assert_eq!(paths[1].decisions, [false]);
        assert_eq!(paths[0].assigns.len(), 4);
        assert_eq!(paths[1].assigns.len(), 4);
        for path in &paths {
            assert_eq!(path.guards.len(), 1);
            assert_eq!(path.guards[0].prefix_len, 0);
            assert!(matches!(
                path.assigns.last(),
                Some(AssignStmt::Scalar { var, .. }) if var == "a"
            ));
        }
        assert!(paths[0].guards[0].positive);
        assert!(!paths[1].guards[0].positive);
        assert!(matches!(
            &paths[0].assigns[0],
            AssignStmt::Array { array, .. } if array == "B"
        ));
        assert!(matches!(
            &paths[1].assigns[0],
            AssignStmt::Array { array, .. } if array == "C"
        ));
    }

    #[test]
    fn sequential_and_nested_conditionals_enumerate_all_paths() {
        let sequential = "\
            vars x;\n\
            x := 0;\n\
            while (x < 10) {\n\
              if (x > 1) { x := x + 1; } else { x := x + 2; }\n\
              if (x > 5) { x := x * 2; } else { x := x * 3; }\n\
            }\n";
        let p = parse_program(sequential).unwrap();
        let paths = extract_paths(&p);
        let decisions: Vec<&[bool]> = paths.iter().map(|p| p.decisions.as_slice()).collect();
        assert_eq!(
            decisions,
            [
                &[true, true][..],
                &[true, false],
                &[false, true],
                &[false, false]
            ]
        );

        let nested = "\
            vars x;\n\
            x := 0;\n\
            while (x < 10) {\n\
              if (x > 1) {\n\
                if (x > 5) { x := x + 1; }\n\
              } else { x := x + 2; }\n\
            }\n";
        let p = parse_program(nested).unwrap();
        let paths = extract_paths(&p);
        let decisions: Vec<&[bool]> = paths.iter().map(|p| p.decisions.as_slice()).collect();
        assert_eq!(decisions, [&[true, true][..], &[true, false], &[false]]);
        // The empty implicit else and the empty inner then still count as
        // paths; only their assignment lists shrink.
        assert_eq!(paths[1].assigns.len(), 0);
    }

    #[test]
    fn interprets_the_partition_loop() {
        let p = parse_program(&fig1_source()).unwrap();
        let trace = interpret(&p, &fig1_input()).unwrap();

        assert_eq!(trace.iterations(), 3);
        assert_eq!(trace.snapshots.len(), 4);
        assert_eq!(trace.paths_taken, [0, 1, 0]);
        assert!(!trace.step_capped);

        let end = trace.final_state();
        assert_eq!(end.scalars["a"], rat(3));
        assert_eq!(end.scalars["b"], rat(2));
        assert_eq!(end.scalars["c"], rat(1));
        assert_eq!(end.scalars["s"], rat(14));
        assert_eq!(end.arrays["B"], vec![rat(1), rat(3), rat(0)]);
        assert_eq!(end.arrays["C"], vec![rat(-2), rat(0), rat(0)]);
    }

    #[test]
    fn false_guard_yields_a_single_snapshot() {
        let p = parse_program(&fig1_source()).unwrap();
        let mut input = fig1_input();
        input.scalars.insert("n".to_string(), rat(0));
        let trace = interpret(&p, &input).unwrap();
        assert_eq!(trace.iterations(), 0);
        assert_eq!(trace.snapshots.len(), 1);
        assert!(!trace.step_capped);
    }

    #[test]
    fn step_cap_is_flagged_not_fatal() {
        let p = parse_program(&fig1_source()).unwrap();
        let mut input = fig1_input();
        input.step_cap = 2;
        let trace = interpret(&p, &input).unwrap();
        assert_eq!(trace.iterations(), 2);
        assert!(trace.step_capped);
    }

    #[test]
    fn replaying_recorded_paths_reproduces_snapshots() {
        let p = parse_program(&fig1_source()).unwrap();
        let input = fig1_input();
        let trace = interpret(&p, &input).unwrap();
        let paths = extract_paths(&p);

        for (k, &path_id) in trace.paths_taken.iter().enumerate() {
            let before = &trace.snapshots[k];
            let mut state = State {
                scalars: before.scalars.clone(),
                arrays: before.arrays.clone(),
                uf: input.uf.clone(),
                iteration: k,
            };
            // The recorded path's guards must hold on entry...
            for g in &paths[path_id].guards {
                let mut probe = state.clone();
                run_assignments(&paths[path_id].assigns[..g.prefix_len], &mut probe).unwrap();
                assert_eq!(eval_cond(&g.cond, &probe).unwrap(), g.positive);
            }
            // ...and replaying its assignments gives the next snapshot.
            run_assignments(&paths[path_id].assigns, &mut state).unwrap();
            assert_eq!(&state.snapshot(), &trace.snapshots[k + 1]);
        }
    }

    #[test]
    fn printing_round_trips() {
        let src = fig1_source();
        let p = parse_program(&src).unwrap();
        let printed = to_source(&p);
        let reparsed = parse_program(&printed).unwrap();
        assert_eq!(p, reparsed);
        // Printing is canonical: printing the reparse changes nothing.
        assert_eq!(printed, to_source(&reparsed));
    }

    #[test]
    fn printer_parenthesizes_only_where_needed() {
        let src = "\
            vars x, y;\n\
            x := 0;\n\
            while (x < y) {\n\
              x := (x + 1) * (x - y) - -x * 2;\n\
            }\n";
        let p = parse_program(src).unwrap();
        let printed = to_source(&p);
        assert!(printed.contains("x := (x + 1) * (x - y) - -x * 2;"));
        assert_eq!(parse_program(&printed).unwrap(), p);
    }

    #[test]
    fn static_checks_reject_malformed_programs() {
        let undeclared = "vars x;\nwhile (x < y) { x := x + 1; }\n";
        assert!(matches!(
            parse_program(undeclared),
            Err(ParseError::Check { msg }) if msg.contains("`y`")
        ));

        let duplicate = "vars x, x;\nwhile (x < 3) { x := x + 1; }\n";
        assert!(matches!(
            parse_program(duplicate),
            Err(ParseError::Check { msg }) if msg.contains("duplicate")
        ));

        let arity = "vars x;\nfuns f/2;\nwhile (x < 3) { x := f(x); }\n";
        assert!(matches!(
            parse_program(arity),
            Err(ParseError::Check { msg }) if msg.contains("arity 2")
        ));

        let plain_eq = "vars x;\nx = 0;\nwhile (x < 3) { x := x + 1; }\n";
        assert!(matches!(parse_program(plain_eq), Err(ParseError::Lex(_))));

        let shadowing = "vars x;\nwhile (x < 3) { x := x + 1; }\nassert (forall x x > 0);\n";
        assert!(matches!(
            parse_program(shadowing),
            Err(ParseError::Check { msg }) if msg.contains("shadows")
        ));
    }

    #[test]
    fn out_of_bounds_and_fractional_indices_are_reported() {
        let src = "\
            vars i, n;\n\
            arrays A;\n\
            i := 0;\n\
            while (i < n) {\n\
              A[i] := i;\n\
              i := i + 1;\n\
            }\n";
        let p = parse_program(src).unwrap();
        let mut scalars = BTreeMap::new();
        scalars.insert("n".to_string(), rat(5));
        let mut arrays = BTreeMap::new();
        arrays.insert("A".to_string(), vec![Rational::zero(); 2]);
        let input = LoopInput {
            scalars,
            arrays,
            uf: UfInterp::Zero,
            step_cap: 100,
        };
        match interpret(&p, &input) {
            Err(InterpError::IndexOutOfBounds {
                array,
                index,
                len,
                iteration,
            }) => {
                assert_eq!(array, "A");
                assert_eq!(index, "2");
                assert_eq!(len, 2);
                assert_eq!(iteration, 2);
            }
            other => panic!("expected a bounds error, got {other:?}"),
        }
    }

    #[test]
    fn seeded_function_interpretation_is_deterministic_and_bounded() {
        let uf = UfInterp::Seeded { seed: 17 };
        let args = [rat(4), ratio_half()];
        let first = uf.apply("h", &args);
        assert_eq!(first, uf.apply("h", &args));
        assert!(first.abs() <= rat(10));
        assert!(first.is_integer());
        // Different argument lists land on (generally) different values; at
        // minimum the table must not confuse `h(4)` with `h(5)`.
        assert_ne!(uf.apply("h", &[rat(4)]), uf.apply("h", &[rat(5)]));
        assert_eq!(UfInterp::Identity.apply("h", &args), rat(4));
        assert_eq!(UfInterp::Zero.apply("h", &args), Rational::zero());
    }

    fn ratio_half() -> Rational {
        Rational::new(Int::one(), Int::from(2))
    }
}
