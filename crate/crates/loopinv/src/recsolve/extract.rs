//! From a guarded path to a solvable system of recurrences.
//!
//! Replaying the path's assignments symbolically (sequential semantics, so
//! later assignments see the values written by earlier ones) yields, for
//! every scalar `x` written on the path, its value after one traversal as a
//! polynomial `E_x` in the values all scalars had on entry. The path is in
//! the solvable fragment when each `E_x` is affine in `x` itself with a
//! nonzero rational self-coefficient — `E_x = c·x + q` with `q` free of `x`
//! — and the "`q` of `x` mentions `y`" relation between written scalars is
//! acyclic, so the system can be solved one variable at a time.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::exactalg::{Polynomial, Rational, Vars};
use crate::loopspec::{AssignStmt, Expr, GuardedPath, Program};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RecurrenceError {
    #[error("the update of `{var}` reads arrays or applies functions, so it is not a polynomial in the scalars")]
    NonPolynomialUpdate { var: String },
    #[error("the coefficient of `{var}` in its own update is not a rational constant")]
    NonConstantSelfCoefficient { var: String },
    #[error("`{var}` discards its previous value; updates must keep a nonzero multiple of it")]
    ZeroSelfCoefficient { var: String },
    #[error("the updates of {0:?} depend on each other cyclically")]
    CyclicDependencies(Vec<String>),
}

/// One scalar's update along a fixed path: `x ← self_coeff·x + inhom`, with
/// `inhom` a polynomial in the *other* scalars' entry values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recurrence {
    pub self_coeff: Rational,
    pub inhom: Polynomial,
}

/// The recurrence system of one guarded path over the program's scalars.
#[derive(Clone, Debug)]
pub struct PathRecurrences {
    /// The program's scalar variables, the ambient ring of every `inhom`.
    pub vars: Vars,
    /// Scalars written on this path, in declaration order.
    pub written: Vec<String>,
    pub recurrences: BTreeMap<String, Recurrence>,
    /// `written` reordered so each variable's dependencies precede it.
    pub solve_order: Vec<String>,
}

pub fn extract_recurrences(
    program: &Program,
    path: &GuardedPath,
) -> Result<PathRecurrences, RecurrenceError> {
    let vars = Vars::new(program.scalars.iter().cloned());

    let mut env: BTreeMap<String, Polynomial> = program
        .scalars
        .iter()
        .map(|s| (s.clone(), Polynomial::var(&vars, s).expect("declared")))
        .collect();
    for assign in &path.assigns {
        match assign {
            AssignStmt::Scalar { var, rhs } => {
                let value = expr_poly(rhs, &env, &vars).ok_or_else(|| {
                    RecurrenceError::NonPolynomialUpdate { var: var.clone() }
                })?;
                env.insert(var.clone(), value);
            }
            // Array cells never feed scalar updates in this fragment (a
            // scalar assignment reading an array is caught just above), so
            // array writes are irrelevant to the scalar recurrences.
            AssignStmt::Array { .. } => {}
        }
    }

    let written: Vec<String> = program
        .scalars
        .iter()
        .filter(|s| {
            path.assigns
                .iter()
                .any(|a| matches!(a, AssignStmt::Scalar { var, .. } if var == *s))
        })
        .cloned()
        .collect();

    let mut recurrences = BTreeMap::new();
    for x in &written {
        let idx = vars.index(x).expect("declared");
        let (self_coeff, inhom) = split_affine(&env[x], idx, x)?;
        if self_coeff.is_zero() {
            return Err(RecurrenceError::ZeroSelfCoefficient { var: x.clone() });
        }
        recurrences.insert(x.clone(), Recurrence { self_coeff, inhom });
    }

    let solve_order = topo_order(&vars, &written, &recurrences)?;

    Ok(PathRecurrences {
        vars,
        written,
        recurrences,
        solve_order,
    })
}

/// Split `e` as `c·x + q` with `q` free of `x`. Any term where `x` appears
/// squared or multiplied by another variable makes the self-coefficient
/// non-constant.
fn split_affine(
    e: &Polynomial,
    x_idx: usize,
    name: &str,
) -> Result<(Rational, Polynomial), RecurrenceError> {
    let mut self_coeff = Rational::zero();
    let mut rest = Vec::new();
    for (m, c) in e.terms() {
        match m.exps()[x_idx] {
            0 => rest.push((m.clone(), c.clone())),
            1 if m.degree() == 1 => self_coeff = c.clone(),
            _ => {
                return Err(RecurrenceError::NonConstantSelfCoefficient {
                    var: name.to_string(),
                })
            }
        }
    }
    Ok((self_coeff, Polynomial::from_terms(e.vars(), rest)))
}

/// Order the written scalars so that whenever `inhom` of `x` mentions `y`,
/// `y` comes first. Ties are broken by declaration order, which keeps the
/// generated closed forms stable across runs.
fn topo_order(
    vars: &Vars,
    written: &[String],
    recurrences: &BTreeMap<String, Recurrence>,
) -> Result<Vec<String>, RecurrenceError> {
    let mut remaining: Vec<&String> = written.iter().collect();
    let mut order = Vec::new();
    while !remaining.is_empty() {
        let ready = remaining.iter().position(|x| {
            let inhom = &recurrences[*x].inhom;
            remaining
                .iter()
                .filter(|y| *y != x)
                .all(|y| !inhom.uses_var(vars.index(y).expect("declared")))
        });
        match ready {
            Some(i) => order.push(remaining.remove(i).clone()),
            None => {
                return Err(RecurrenceError::CyclicDependencies(
                    remaining.into_iter().cloned().collect(),
                ))
            }
        }
    }
    Ok(order)
}

fn expr_poly(e: &Expr, env: &BTreeMap<String, Polynomial>, vars: &Vars) -> Option<Polynomial> {
    Some(match e {
        Expr::Const(n) => Polynomial::constant(vars, Rational::from_integer(n.clone())),
        Expr::Var(v) => env[v].clone(),
        Expr::ArrayRead(..) | Expr::Apply(..) => return None,
        Expr::Neg(a) => -&expr_poly(a, env, vars)?,
        Expr::Add(a, b) => &expr_poly(a, env, vars)? + &expr_poly(b, env, vars)?,
        Expr::Sub(a, b) => &expr_poly(a, env, vars)? - &expr_poly(b, env, vars)?,
        Expr::Mul(a, b) => &expr_poly(a, env, vars)? * &expr_poly(b, env, vars)?,
    })
}

#[cfg(test)]
mod tests {
    use crate::exactalg::{parse_polynomial, rat};
    use crate::loopspec::{extract_paths, parse_program};

    use super::*;

    fn recurrences_of(src: &str, path: usize) -> Result<PathRecurrences, RecurrenceError> {
        let p = parse_program(src).unwrap();
        let paths = extract_paths(&p);
        extract_recurrences(&p, &paths[path])
    }

    #[test]
    fn sequential_assignments_compose() {
        // s sees the *old* a (updated after s), while t sees the *new* a.
        let src = "\
            vars a, s, t, n;\n\
            while (a < n) {\n\
              s := s + (a + 1) * (a + 1);\n\
              a := a + 1;\n\
              t := t + a;\n\
            }\n";
        let rec = recurrences_of(src, 0).unwrap();
        assert_eq!(rec.written, ["a", "s", "t"]);

        let s = &rec.recurrences["s"];
        assert_eq!(s.self_coeff, rat(1));
        assert_eq!(
            s.inhom,
            parse_polynomial("a^2 + 2*a + 1", &rec.vars).unwrap()
        );

        let t = &rec.recurrences["t"];
        assert_eq!(
            t.inhom,
            parse_polynomial("a + 1", &rec.vars).unwrap(),
            "t := t + a runs after a := a + 1"
        );
    }

    #[test]
    fn self_coefficients_may_be_any_nonzero_constant() {
        let src = "\
            vars x, y, n;\n\
            while (x < n) {\n\
              x := 2 * x + 3;\n\
              y := y - x;\n\
            }\n";
        let rec = recurrences_of(src, 0).unwrap();
        let x = &rec.recurrences["x"];
        assert_eq!(x.self_coeff, rat(2));
        assert_eq!(x.inhom, parse_polynomial("3", &rec.vars).unwrap());

        // y := y - x reads the already-updated x = 2x + 3.
        let y = &rec.recurrences["y"];
        assert_eq!(y.self_coeff, rat(1));
        assert_eq!(y.inhom, parse_polynomial("-2*x - 3", &rec.vars).unwrap());
        assert_eq!(rec.solve_order, ["x", "y"]);
    }

    #[test]
    fn dependency_order_is_topological() {
        let src = "\
            vars u, v, w, n;\n\
            while (n > 0) {\n\
              w := w + v;\n\
              v := v + u;\n\
              u := u + 1;\n\
            }\n";
        let rec = recurrences_of(src, 0).unwrap();
        assert_eq!(rec.solve_order, ["u", "v", "w"]);
    }

    #[test]
    fn rejects_updates_outside_the_fragment() {
        let nonlinear = "vars x, n;\nwhile (x < n) { x := x * x; }\n";
        assert_eq!(
            recurrences_of(nonlinear, 0).unwrap_err(),
            RecurrenceError::NonConstantSelfCoefficient { var: "x".into() }
        );

        let symbolic_coeff = "vars x, n;\nwhile (x < n) { x := n * x; }\n";
        assert_eq!(
            recurrences_of(symbolic_coeff, 0).unwrap_err(),
            RecurrenceError::NonConstantSelfCoefficient { var: "x".into() }
        );

        let reset = "vars x, y, n;\nwhile (x < n) { x := y + 1; }\n";
        assert_eq!(
            recurrences_of(reset, 0).unwrap_err(),
            RecurrenceError::ZeroSelfCoefficient { var: "x".into() }
        );

        let cyclic = "\
            vars x, y, n;\n\
            while (x < n) { x := x + y; y := y + x; }\n";
        assert_eq!(
            recurrences_of(cyclic, 0).unwrap_err(),
            RecurrenceError::CyclicDependencies(vec!["x".into(), "y".into()])
        );

        let array_read = "\
            vars x, n;\narrays A;\n\
            while (x < n) { x := x + A[x]; }\n";
        assert_eq!(
            recurrences_of(array_read, 0).unwrap_err(),
            RecurrenceError::NonPolynomialUpdate { var: "x".into() }
        );
    }

    #[test]
    fn cancelling_self_terms_still_count_by_final_coefficient() {
        // x := 3*x - x*1 leaves coefficient 2; x := x - x is a reset.
        let fine = "vars x, n;\nwhile (x < n) { x := 3 * x - x; }\n";
        let rec = recurrences_of(fine, 0).unwrap();
        assert_eq!(rec.recurrences["x"].self_coeff, rat(2));

        let reset = "vars x, n;\nwhile (x < n) { x := x - x; }\n";
        assert_eq!(
            recurrences_of(reset, 0).unwrap_err(),
            RecurrenceError::ZeroSelfCoefficient { var: "x".into() }
        );
    }
}
