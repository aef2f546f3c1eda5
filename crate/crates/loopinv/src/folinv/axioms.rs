//! From a loop to a clause set whose consequences include quantified
//! invariants.
//!
//! The translation rests on a handful of run-level facts, each emitted only
//! when static analysis justifies it:
//!
//! - every executed iteration satisfies the loop guard, and iteration `$n`
//!   (the first not executed) falsifies it;
//! - an array write behind branch conditions yields an *update* clause:
//!   guard and conditions at iteration `i` imply `$upd_A(i, index)`;
//! - conversely, for an array with a single write site, `$upd_A(i, p)`
//!   implies the conditions held and `p` was that index;
//! - scalars that grow by 0 or 1 each iteration ("steppers") get initial
//!   value, step, and monotonicity clauses;
//! - when an array is indexed by a stepper that starts at 0 and steps
//!   exactly on the writing paths, every cell of `[0, ctr($n))` is written
//!   exactly once: a Skolem witness covers the range, the written value is
//!   the final value, and cells outside the range keep their entry values;
//! - linear polynomial invariants may be imported as equations over the
//!   per-iteration values.
//!
//! Everything is expressed without subtraction: expressions are split into
//! a positive and a negative part and the parts move across the relation.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::exactalg::{Int, Polynomial};
use crate::loopspec::{extract_paths, AssignStmt, Cond, Expr, Formula, Program, RelOp};
use crate::recsolve::extract_recurrences;

use super::term::{Clause, Literal, Symbol, Term};

#[derive(Clone, Debug)]
pub struct Axiom {
    pub clause: Clause,
    /// Clauses descending only from arithmetic axioms are background facts,
    /// not invariants; the flag propagates through inferences.
    pub from_program: bool,
    pub label: String,
}

#[derive(Clone, Debug, Default)]
pub struct AxiomSet {
    pub axioms: Vec<Axiom>,
    /// What the static analysis concluded (and what it had to skip), for
    /// reports and debugging.
    pub notes: Vec<String>,
}

impl AxiomSet {
    fn push(&mut self, label: impl Into<String>, from_program: bool, lits: Vec<Literal>) {
        self.axioms.push(Axiom {
            clause: Clause::new(lits),
            from_program,
            label: label.into(),
        });
    }

    fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }
}

/// Linear equalities over scalars and initial-value symbols, usually the
/// degree-one part of a polynomial invariant basis.
pub struct ImportedEqualities<'a> {
    pub polys: &'a [Polynomial],
    /// scalar name -> initial-value symbol name, as chosen by the analysis.
    pub init_symbols: &'a BTreeMap<String, String>,
}

pub fn program_axioms(program: &Program, imported: Option<ImportedEqualities>) -> AxiomSet {
    let mut set = AxiomSet::default();
    let paths = extract_paths(program);
    let tr = Translator::at_iteration(program, Term::Var(0));

    // Guard behaviour: holds during the run, fails at the exit boundary.
    let i = Term::Var(0);
    if let Some(guard) = tr.cond_literal(&program.guard, true) {
        set.push(
            "guard_holds",
            true,
            vec![
                not_le(Term::int(0), i.clone()),
                not_less(i.clone(), Term::counter()),
                guard,
            ],
        );
        let exit_tr = Translator::at_iteration(program, Term::counter());
        let exit = exit_tr
            .cond_literal(&program.guard, true)
            .expect("guard translated once already");
        set.push("guard_exit", true, vec![exit.negated()]);
    } else {
        set.note("guard reads a written array; guard axioms skipped");
    }
    set.push(
        "counter_nonnegative",
        true,
        vec![Literal::new(true, le(Term::int(0), Term::counter()))],
    );

    let steppers = stepper_deltas(program, &paths, &mut set);
    stepper_axioms(program, &steppers, &mut set);

    let writes = collect_writes(&paths);
    array_axioms(program, &tr, &steppers, &writes, paths.len(), &mut set);

    if let Some(imported) = imported {
        import_equalities(program, &imported, &mut set);
    }

    for (idx, clause) in arithmetic_axioms().into_iter().enumerate() {
        set.axioms.push(Axiom {
            clause,
            from_program: false,
            label: format!("arith_{idx}"),
        });
    }
    set
}

/// The background theory of `<=`, `<`, `=`, and `+` used by every loop:
/// order axioms, discreteness of the integers, and guarded bridges that
/// let a strict bound cross an addition. The bridges carry an equality
/// premise (in both argument orders) because ordered resolution never
/// resolves below the maximal literal of `x < x + y`-style facts.
pub fn arithmetic_axioms() -> Vec<Clause> {
    let (x, y, z) = (Term::Var(0), Term::Var(1), Term::Var(2));
    let mut out = vec![
        // reflexivity and irreflexivity
        Clause::new(vec![Literal::new(true, le(x.clone(), x.clone()))]),
        Clause::new(vec![not_less(x.clone(), x.clone())]),
        // transitivity in all polarity mixes
        Clause::new(vec![
            not_le(x.clone(), y.clone()),
            not_le(y.clone(), z.clone()),
            Literal::new(true, le(x.clone(), z.clone())),
        ]),
        Clause::new(vec![
            not_less(x.clone(), y.clone()),
            not_less(y.clone(), z.clone()),
            Literal::new(true, less(x.clone(), z.clone())),
        ]),
        Clause::new(vec![
            not_le(x.clone(), y.clone()),
            not_less(y.clone(), z.clone()),
            Literal::new(true, less(x.clone(), z.clone())),
        ]),
        Clause::new(vec![
            not_less(x.clone(), y.clone()),
            not_le(y.clone(), z.clone()),
            Literal::new(true, less(x.clone(), z.clone())),
        ]),
        // weakening and totality
        Clause::new(vec![
            not_less(x.clone(), y.clone()),
            Literal::new(true, le(x.clone(), y.clone())),
        ]),
        Clause::new(vec![
            Literal::new(true, le(x.clone(), y.clone())),
            Literal::new(true, less(y.clone(), x.clone())),
        ]),
        // discreteness: x < y  <=>  x + 1 <= y
        Clause::new(vec![Literal::new(
            true,
            less(x.clone(), Term::plus(x.clone(), Term::int(1))),
        )]),
        Clause::new(vec![
            not_less(x.clone(), y.clone()),
            Literal::new(true, le(Term::plus(x.clone(), Term::int(1)), y.clone())),
        ]),
        Clause::new(vec![
            Literal::new(false, le(Term::plus(x.clone(), Term::int(1)), y.clone())),
            Literal::new(true, less(x.clone(), y.clone())),
        ]),
    ];
    // guarded bridges: 0 < x and z = x + y imply y < z
    for (a, b) in [(x.clone(), y.clone()), (y.clone(), x.clone())] {
        for eq_args in [
            (z.clone(), Term::plus(a.clone(), b.clone())),
            (Term::plus(a.clone(), b.clone()), z.clone()),
        ] {
            out.push(Clause::new(vec![
                not_less(Term::int(0), a.clone()),
                Literal::new(false, Term::App(Symbol::Eq, vec![eq_args.0, eq_args.1])),
                Literal::new(true, less(b.clone(), z.clone())),
            ]));
        }
    }
    out
}

// ---------------------------------------------------------------------
// expression translation

struct Translator {
    written: BTreeSet<String>,
    written_arrays: BTreeSet<String>,
    bound: BTreeMap<String, u32>,
    /// `Some(i)`: scalars written by the loop become `x(i)`.
    /// `None`: everything is a final (base) value.
    at: Option<Term>,
}

impl Translator {
    fn at_iteration(program: &Program, at: Term) -> Translator {
        Translator { at: Some(at), ..Translator::base(program) }
    }

    fn base(program: &Program) -> Translator {
        Translator {
            written: written_scalar_set(program),
            written_arrays: written_array_set(program),
            bound: BTreeMap::new(),
            at: None,
        }
    }

    /// `e` as (positive part, negative part), both subtraction-free. `None`
    /// when the expression reads a written array (its mid-run contents have
    /// no symbol) or needs a signed term in an index or argument position.
    fn term_pair(&self, e: &Expr) -> Option<(Term, Term)> {
        match e {
            Expr::Const(c) => {
                if c >= &Int::zero() {
                    Some((Term::int(c.clone()), Term::int(0)))
                } else {
                    Some((Term::int(0), Term::int(-c.clone())))
                }
            }
            Expr::Var(x) => {
                if let Some(v) = self.bound.get(x) {
                    return Some((Term::Var(*v), Term::int(0)));
                }
                let t = match &self.at {
                    Some(at) if self.written.contains(x) => Term::iter_val(x, at.clone()),
                    _ => Term::scalar(x),
                };
                Some((t, Term::int(0)))
            }
            Expr::ArrayRead(a, idx) => {
                if self.written_arrays.contains(a) && self.at.is_some() {
                    return None;
                }
                let idx = self.term_of(idx)?;
                Some((Term::App(Symbol::ArrayAt(a.clone()), vec![idx]), Term::int(0)))
            }
            Expr::Apply(f, args) => {
                let args: Option<Vec<Term>> = args.iter().map(|a| self.term_of(a)).collect();
                let sym = Symbol::Uf(f.clone(), args.as_ref()?.len() as u8);
                Some((Term::App(sym, args?), Term::int(0)))
            }
            Expr::Neg(a) => {
                let (p, n) = self.term_pair(a)?;
                Some((n, p))
            }
            Expr::Add(a, b) => {
                let (ap, an) = self.term_pair(a)?;
                let (bp, bn) = self.term_pair(b)?;
                Some((splus(ap, bp), splus(an, bn)))
            }
            Expr::Sub(a, b) => {
                let (ap, an) = self.term_pair(a)?;
                let (bp, bn) = self.term_pair(b)?;
                Some((splus(ap, bn), splus(an, bp)))
            }
            Expr::Mul(a, b) => {
                // (ap - an)(bp - bn) = (ap bp + an bn) - (ap bn + an bp)
                let (ap, an) = self.term_pair(a)?;
                let (bp, bn) = self.term_pair(b)?;
                Some((
                    splus(stimes(ap.clone(), bp.clone()), stimes(an.clone(), bn.clone())),
                    splus(stimes(ap, bn), stimes(an, bp)),
                ))
            }
        }
    }

    /// A plain term: the expression must have an empty negative part.
    fn term_of(&self, e: &Expr) -> Option<Term> {
        let (p, n) = self.term_pair(e)?;
        n.as_int().is_some_and(Zero::is_zero).then_some(p)
    }

    /// The condition as a literal; `positive` false states its negation.
    fn cond_literal(&self, cond: &Cond, positive: bool) -> Option<Literal> {
        let (lp, ln) = self.term_pair(&cond.lhs)?;
        let (rp, rn) = self.term_pair(&cond.rhs)?;
        let a = splus(lp, rn);
        let b = splus(rp, ln);
        let (atom, pos) = match cond.op {
            RelOp::Lt => (less(a, b), positive),
            RelOp::Le => (le(a, b), positive),
            RelOp::Gt => (less(b, a), positive),
            RelOp::Ge => (le(b, a), positive),
            RelOp::Eq => (Term::App(Symbol::Eq, vec![a, b]), positive),
            RelOp::Ne => (Term::App(Symbol::Eq, vec![a, b]), !positive),
        };
        Some(Literal::new(pos, atom))
    }
}

fn written_scalar_set(program: &Program) -> BTreeSet<String> {
    crate::polyinv::written_scalars(program).into_iter().collect()
}

fn written_array_set(program: &Program) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for path in extract_paths(program) {
        for assign in path.assigns {
            if let AssignStmt::Array { array, .. } = assign {
                out.insert(array);
            }
        }
    }
    out
}

fn splus(a: Term, b: Term) -> Term {
    match (a.as_int(), b.as_int()) {
        (Some(x), Some(y)) => Term::int(x + y),
        (Some(x), None) if x.is_zero() => b,
        (None, Some(y)) if y.is_zero() => a,
        _ => Term::plus(a, b),
    }
}

fn stimes(a: Term, b: Term) -> Term {
    match (a.as_int(), b.as_int()) {
        (Some(x), Some(y)) => Term::int(x * y),
        (Some(x), None) if x.is_zero() => Term::int(0),
        (None, Some(y)) if y.is_zero() => Term::int(0),
        (Some(x), None) if x.is_one() => b,
        (None, Some(y)) if y.is_one() => a,
        _ => Term::times(a, b),
    }
}

fn le(a: Term, b: Term) -> Term {
    Term::App(Symbol::Le, vec![a, b])
}

fn less(a: Term, b: Term) -> Term {
    Term::App(Symbol::Less, vec![a, b])
}

fn not_le(a: Term, b: Term) -> Literal {
    Literal::new(false, le(a, b))
}

fn not_less(a: Term, b: Term) -> Literal {
    Literal::new(false, less(a, b))
}

fn eq(a: Term, b: Term) -> Literal {
    Literal::new(true, Term::App(Symbol::Eq, vec![a, b]))
}

/// Range premise shared by per-iteration clauses: `0 <= i` and `i < $n`.
fn executed(i: &Term) -> Vec<Literal> {
    vec![
        not_le(Term::int(0), i.clone()),
        not_less(i.clone(), Term::counter()),
    ]
}

// ---------------------------------------------------------------------
// scalar analysis

/// Per-path growth of each scalar that increases by 0 or 1 every iteration.
fn stepper_deltas(
    program: &Program,
    paths: &[crate::loopspec::GuardedPath],
    set: &mut AxiomSet,
) -> BTreeMap<String, Vec<Int>> {
    let written = written_scalar_set(program);
    let mut deltas: BTreeMap<String, Vec<Int>> = BTreeMap::new();
    let mut dropped: BTreeSet<String> = BTreeSet::new();
    for path in paths {
        let recs = match extract_recurrences(program, path) {
            Ok(r) => r,
            Err(e) => {
                set.note(format!("scalar updates outside the solvable fragment ({e}); stepper axioms skipped"));
                return BTreeMap::new();
            }
        };
        for x in program.scalars.iter().filter(|x| written.contains(*x)) {
            let delta = match recs.recurrences.get(x) {
                None => Some(Int::zero()),
                Some(rec) => step_of(&rec.self_coeff, &rec.inhom),
            };
            match delta {
                Some(d) if d.is_zero() || d.is_one() => {
                    deltas.entry(x.clone()).or_default().push(d);
                }
                _ => {
                    dropped.insert(x.clone());
                }
            }
        }
    }
    for x in dropped {
        deltas.remove(&x);
    }
    deltas.retain(|_, d| d.len() == paths.len());
    if !deltas.is_empty() {
        let names: Vec<&str> = deltas.keys().map(String::as_str).collect();
        set.note(format!("steppers: {}", names.join(", ")));
    }
    deltas
}

/// The constant growth of `x(k+1) = c x(k) + q`, if `c = 1` and `q` is
/// constant.
fn step_of(self_coeff: &crate::exactalg::Rational, inhom: &Polynomial) -> Option<Int> {
    if !self_coeff.is_one() {
        return None;
    }
    if inhom.is_zero() {
        return Some(Int::zero());
    }
    if inhom.total_degree() != Some(0) {
        return None;
    }
    let (_, c) = inhom.terms().next().expect("nonzero constant");
    c.is_integer().then(|| c.to_integer())
}

fn stepper_axioms(program: &Program, steppers: &BTreeMap<String, Vec<Int>>, set: &mut AxiomSet) {
    let i = Term::Var(0);
    let j = Term::Var(1);
    for (x, deltas) in steppers {
        if let Some((_, v)) = program.inits.iter().find(|(name, _)| name == x) {
            set.push(
                format!("init_{x}"),
                true,
                vec![eq(Term::iter_val(x, Term::int(0)), Term::int(v.clone()))],
            );
        }
        // x(i+1) = x(i) + d for one of the per-path growths d
        let mut step = executed(&i);
        let mut seen = BTreeSet::new();
        for d in deltas {
            if seen.insert(d.clone()) {
                step.push(eq(
                    Term::iter_val(x, Term::plus(i.clone(), Term::int(1))),
                    splus(Term::iter_val(x, i.clone()), Term::int(d.clone())),
                ));
            }
        }
        set.push(format!("step_{x}"), true, step);
        set.push(
            format!("mono_{x}"),
            true,
            vec![
                not_le(Term::int(0), i.clone()),
                not_le(i.clone(), j.clone()),
                not_le(j.clone(), Term::counter()),
                Literal::new(true, le(Term::iter_val(x, i.clone()), Term::iter_val(x, j.clone()))),
            ],
        );
    }
}

// ---------------------------------------------------------------------
// array analysis

/// One array write, with index, value, and branch conditions rewritten to
/// iteration-entry values by replaying the path's earlier assignments.
struct ArrayWrite {
    array: String,
    path: usize,
    index: Expr,
    value: Expr,
    conds: Vec<(Cond, bool)>,
}

fn collect_writes(paths: &[crate::loopspec::GuardedPath]) -> Vec<ArrayWrite> {
    let mut out = Vec::new();
    for (path_idx, path) in paths.iter().enumerate() {
        let mut envs: Vec<BTreeMap<String, Expr>> = vec![BTreeMap::new()];
        for assign in &path.assigns {
            let env = envs.last().unwrap().clone();
            let mut next = env.clone();
            if let AssignStmt::Scalar { var, rhs } = assign {
                next.insert(var.clone(), subst_scalars(rhs, &env));
            }
            envs.push(next);
        }
        for (k, assign) in path.assigns.iter().enumerate() {
            if let AssignStmt::Array { array, index, rhs } = assign {
                let env = &envs[k];
                let conds = path
                    .guards
                    .iter()
                    .map(|g| {
                        let e = &envs[g.prefix_len];
                        (
                            Cond {
                                lhs: subst_scalars(&g.cond.lhs, e),
                                op: g.cond.op,
                                rhs: subst_scalars(&g.cond.rhs, e),
                            },
                            g.positive,
                        )
                    })
                    .collect();
                out.push(ArrayWrite {
                    array: array.clone(),
                    path: path_idx,
                    index: subst_scalars(index, env),
                    value: subst_scalars(rhs, env),
                    conds,
                });
            }
        }
    }
    out
}

fn subst_scalars(e: &Expr, env: &BTreeMap<String, Expr>) -> Expr {
    match e {
        Expr::Const(_) => e.clone(),
        Expr::Var(x) => env.get(x).cloned().unwrap_or_else(|| e.clone()),
        Expr::ArrayRead(a, idx) => {
            Expr::ArrayRead(a.clone(), Box::new(subst_scalars(idx, env)))
        }
        Expr::Apply(f, args) => {
            Expr::Apply(f.clone(), args.iter().map(|a| subst_scalars(a, env)).collect())
        }
        Expr::Neg(a) => Expr::Neg(Box::new(subst_scalars(a, env))),
        Expr::Add(a, b) => Expr::Add(
            Box::new(subst_scalars(a, env)),
            Box::new(subst_scalars(b, env)),
        ),
        Expr::Sub(a, b) => Expr::Sub(
            Box::new(subst_scalars(a, env)),
            Box::new(subst_scalars(b, env)),
        ),
        Expr::Mul(a, b) => Expr::Mul(
            Box::new(subst_scalars(a, env)),
            Box::new(subst_scalars(b, env)),
        ),
    }
}

fn array_axioms(
    program: &Program,
    tr: &Translator,
    steppers: &BTreeMap<String, Vec<Int>>,
    writes: &[ArrayWrite],
    path_count: usize,
    set: &mut AxiomSet,
) {
    let i = Term::Var(0);
    let p = Term::Var(1);
    let guard = tr.cond_literal(&program.guard, true);

    let arrays: BTreeSet<&String> = writes.iter().map(|w| &w.array).collect();
    for array in arrays {
        let of_array: Vec<&ArrayWrite> = writes.iter().filter(|w| &w.array == array).collect();

        // update clauses, one per write site
        for (site, w) in of_array.iter().enumerate() {
            let Some(index) = tr.term_of(&w.index) else {
                set.note(format!("{array}: index not translatable; update axiom skipped"));
                continue;
            };
            let mut lits = executed(&i);
            let Some(g) = guard.clone() else {
                continue;
            };
            lits.push(g.negated());
            let mut ok = true;
            for (cond, positive) in &w.conds {
                match tr.cond_literal(cond, *positive) {
                    Some(l) => lits.push(l.negated()),
                    None => {
                        ok = false;
                        set.note(format!(
                            "{array}: branch condition not translatable; update axiom skipped"
                        ));
                    }
                }
            }
            if !ok {
                continue;
            }
            lits.push(Literal::new(
                true,
                Term::App(Symbol::Upd(array.clone()), vec![i.clone(), index]),
            ));
            set.push(format!("write_{array}_{site}"), true, lits);
        }

        // the converse needs a unique write site
        if of_array.len() != 1 {
            set.note(format!("{array}: several write sites; no update converse"));
            continue;
        }
        let w = of_array[0];
        let upd = Literal::new(
            false,
            Term::App(Symbol::Upd(array.clone()), vec![i.clone(), p.clone()]),
        );
        set.push(
            format!("updated_in_range_low_{array}"),
            true,
            vec![upd.clone(), Literal::new(true, le(Term::int(0), i.clone()))],
        );
        set.push(
            format!("updated_in_range_high_{array}"),
            true,
            vec![upd.clone(), Literal::new(true, less(i.clone(), Term::counter()))],
        );
        if let Some(index) = tr.term_of(&w.index) {
            set.push(
                format!("updated_at_index_{array}"),
                true,
                vec![upd.clone(), eq(p.clone(), index)],
            );
        }
        if let Some(g) = guard.clone() {
            set.push(format!("updated_under_guard_{array}"), true, vec![upd.clone(), g]);
        }
        for (c, (cond, positive)) in w.conds.iter().enumerate() {
            if let Some(l) = tr.cond_literal(cond, *positive) {
                set.push(format!("updated_under_cond_{array}_{c}"), true, vec![upd.clone(), l]);
            }
        }

        // write-once analysis: index is a stepper from 0 that steps exactly
        // on the writing paths
        let Expr::Var(ctr) = &w.index else {
            set.note(format!("{array}: index is not a plain counter; no coverage axioms"));
            continue;
        };
        let Some(deltas) = steppers.get(ctr) else {
            set.note(format!("{array}: index {ctr} is not a stepper; no coverage axioms"));
            continue;
        };
        let zero_init = program
            .inits
            .iter()
            .any(|(name, v)| name == ctr && v.is_zero());
        let steps_match = (0..path_count).all(|path| {
            let writes_here = of_array.iter().filter(|w| w.path == path).count();
            deltas[path] == Int::from(writes_here)
        });
        if !zero_init || !steps_match {
            set.note(format!(
                "{array}: counter {ctr} does not pace the writes; no coverage axioms"
            ));
            continue;
        }
        set.note(format!("{array}: write-once via counter {ctr}"));

        let witness = Term::App(Symbol::Skolem(format!("w_{array}")), vec![p.clone()]);
        let ctr_final = Term::iter_val(ctr, Term::counter());
        set.push(
            format!("covered_{array}"),
            true,
            vec![
                not_le(Term::int(0), p.clone()),
                not_less(p.clone(), ctr_final.clone()),
                Literal::new(
                    true,
                    Term::App(Symbol::Upd(array.clone()), vec![witness, p.clone()]),
                ),
            ],
        );
        if let Some(value) = tr.term_pair(&w.value) {
            let final_at = Term::App(Symbol::ArrayAt(array.clone()), vec![p.clone()]);
            set.push(
                format!("updated_value_{array}"),
                true,
                vec![upd.clone(), eq(splus(final_at, value.1), value.0)],
            );
        } else {
            set.note(format!("{array}: written value not translatable; no value axiom"));
        }
        let entry_at = Term::App(Symbol::ArrayInit(array.clone()), vec![p.clone()]);
        let final_at = Term::App(Symbol::ArrayAt(array.clone()), vec![p.clone()]);
        set.push(
            format!("untouched_below_{array}"),
            true,
            vec![
                Literal::new(true, le(Term::int(0), p.clone())),
                eq(final_at.clone(), entry_at.clone()),
            ],
        );
        set.push(
            format!("untouched_above_{array}"),
            true,
            vec![
                Literal::new(true, less(p.clone(), ctr_final)),
                eq(final_at, entry_at),
            ],
        );
    }
}

// ---------------------------------------------------------------------
// imported equalities and the assertion

fn import_equalities(program: &Program, imported: &ImportedEqualities, set: &mut AxiomSet) {
    use num_traits::Signed;

    let written = written_scalar_set(program);
    let by_symbol: BTreeMap<&String, &String> =
        imported.init_symbols.iter().map(|(s, sym)| (sym, s)).collect();
    let k = Term::Var(0);
    for (idx, poly) in imported.polys.iter().enumerate() {
        if poly.is_zero() || poly.total_degree() > Some(1) {
            continue;
        }
        let poly = poly.primitive_integer_scaled();
        let names = poly.vars().names().to_vec();
        let nvars = names.len();
        // Walk coefficients in declaration order; a degree-one polynomial is
        // exactly a constant plus single-variable terms.
        let mut monomials = vec![(crate::exactalg::Monomial::from_exps(vec![0; nvars]), None)];
        monomials.extend(
            (0..nvars).map(|v| (crate::exactalg::Monomial::var(nvars, v), Some(v))),
        );
        let mut lhs: Vec<Term> = Vec::new();
        let mut rhs: Vec<Term> = Vec::new();
        let mut ok = true;
        for (m, var) in monomials {
            let c = poly.coeff(&m);
            if c.is_zero() {
                continue;
            }
            let base = match var {
                None => Term::int(1),
                Some(v) => {
                    let name = &names[v];
                    if program.scalars.contains(name) {
                        if written.contains(name) {
                            Term::iter_val(name, k.clone())
                        } else {
                            Term::scalar(name)
                        }
                    } else if let Some(scalar) = by_symbol.get(name) {
                        Term::iter_val(scalar, Term::int(0))
                    } else {
                        ok = false;
                        break;
                    }
                }
            };
            let scaled = stimes(Term::int(c.to_integer().abs()), base);
            if c.is_negative() {
                rhs.push(scaled);
            } else {
                lhs.push(scaled);
            }
        }
        if !ok {
            continue;
        }
        let fold = |mut side: Vec<Term>| -> Term {
            match side.pop() {
                None => Term::int(0),
                Some(last) => side.into_iter().rev().fold(last, |acc, t| splus(t, acc)),
            }
        };
        let equation = eq(fold(lhs), fold(rhs));
        let lits = if equation.atom.has_extended() {
            vec![
                not_le(Term::int(0), k.clone()),
                not_le(k.clone(), Term::counter()),
                equation,
            ]
        } else {
            // A fact with no per-iteration symbol needs no boundary guard.
            vec![equation]
        };
        set.push(format!("imported_{idx}"), true, lits);
    }
}

/// The `assert` formula as clauses over the base language (final values),
/// for checking what saturation found. Only universal assertions clausify.
pub fn assertion_clauses(program: &Program) -> Option<Vec<Clause>> {
    let formula = program.assertion.as_ref()?;
    let mut tr = Translator::base(program);
    let mut next_var = 0;
    let nf = clausify(formula, true, &mut tr, &mut next_var)?;
    Some(nf.into_iter().map(Clause::new).collect())
}

/// Negation-normal clausification for quantifier-prefix formulas.
fn clausify(
    f: &Formula,
    positive: bool,
    tr: &mut Translator,
    next_var: &mut u32,
) -> Option<Vec<Vec<Literal>>> {
    match (f, positive) {
        (Formula::Atom(cond), _) => Some(vec![vec![tr.cond_literal(cond, positive)?]]),
        (Formula::Not(inner), _) => clausify(inner, !positive, tr, next_var),
        (Formula::And(a, b), true) | (Formula::Or(a, b), false) => {
            let mut out = clausify(a, positive, tr, next_var)?;
            out.extend(clausify(b, positive, tr, next_var)?);
            Some(out)
        }
        (Formula::Or(a, b), true) | (Formula::And(a, b), false) => {
            let left = clausify(a, positive, tr, next_var)?;
            let right = clausify(b, positive, tr, next_var)?;
            let mut out = Vec::new();
            for l in &left {
                for r in &right {
                    let mut joined = l.clone();
                    joined.extend(r.iter().cloned());
                    out.push(joined);
                }
            }
            Some(out)
        }
        (Formula::Implies(a, b), true) => {
            clausify(&Formula::Or(Box::new(Formula::Not(a.clone())), b.clone()), true, tr, next_var)
        }
        (Formula::Implies(a, b), false) => {
            let mut out = clausify(a, true, tr, next_var)?;
            out.extend(clausify(b, false, tr, next_var)?);
            Some(out)
        }
        (Formula::Forall(x, inner), true) | (Formula::Exists(x, inner), false) => {
            let v = *next_var;
            *next_var += 1;
            let shadowed = tr.bound.insert(x.clone(), v);
            let out = clausify(inner, positive, tr, next_var);
            match shadowed {
                Some(old) => tr.bound.insert(x.clone(), old),
                None => tr.bound.remove(x),
            };
            out
        }
        (Formula::Forall(..), false) | (Formula::Exists(..), true) => None,
    }
}

/// Project a clause into the base language: per-iteration values at the
/// exit boundary become final scalars, and any other extended symbol
/// disqualifies the clause.
pub fn to_base(clause: &Clause) -> Option<Clause> {
    let lits = clause
        .lits
        .iter()
        .map(|l| Some(Literal { pos: l.pos, atom: baseify(&l.atom)? }))
        .collect::<Option<Vec<_>>>()?;
    Some(Clause::new(lits))
}

fn baseify(t: &Term) -> Option<Term> {
    match t {
        Term::Var(_) => Some(t.clone()),
        Term::App(Symbol::IterVal(x), args) => {
            matches!(&args[0], Term::App(Symbol::Counter, _)).then(|| Term::scalar(x))
        }
        Term::App(s, args) => {
            if s.is_extended() {
                return None;
            }
            let args = args.iter().map(baseify).collect::<Option<Vec<_>>>()?;
            Some(Term::App(s.clone(), args))
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::loopspec::parse_program;

    use super::*;

    fn fig1() -> Program {
        let src = std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../corpus/fig1.loop"
        ))
        .unwrap();
        parse_program(&src).unwrap()
    }

    fn labelled<'a>(set: &'a AxiomSet, label: &str) -> &'a Clause {
        &set
            .axioms
            .iter()
            .find(|a| a.label == label)
            .unwrap_or_else(|| panic!("no axiom {label}"))
            .clause
    }

    #[test]
    fn partition_loop_axioms_cover_the_expected_shape() {
        let program = fig1();
        let set = program_axioms(&program, None);

        assert_eq!(
            labelled(&set, "guard_holds").to_string(),
            "~(0 <= p) | ~(p < $n) | a(p) < n"
        );
        assert_eq!(labelled(&set, "guard_exit").to_string(), "~(a($n) < n)");
        assert_eq!(
            labelled(&set, "write_B_0").to_string(),
            "~(0 <= p) | ~(p < $n) | ~(0 < A(a(p))) | ~(a(p) < n) | $upd_B(p, b(p))"
        );
        assert_eq!(
            labelled(&set, "updated_at_index_B").to_string(),
            "~($upd_B(p, q)) | q = b(p)"
        );
        assert_eq!(
            labelled(&set, "updated_under_cond_B_0").to_string(),
            "~($upd_B(p, q)) | 0 < A(a(p))"
        );
        assert_eq!(
            labelled(&set, "covered_B").to_string(),
            "~(0 <= p) | ~(p < b($n)) | $upd_B($w_B(p), p)"
        );
        assert_eq!(
            labelled(&set, "updated_value_B").to_string(),
            "~($upd_B(p, q)) | B(q) = (A(a(p)) + h(b(p)))"
        );
        assert_eq!(
            labelled(&set, "step_a").to_string(),
            "~(0 <= p) | ~(p < $n) | a((p + 1)) = (a(p) + 1)"
        );
        // b steps on one path and stays on the other
        let step_b = labelled(&set, "step_b").to_string();
        assert!(step_b.contains("b((p + 1)) = (b(p) + 1)"), "{step_b}");
        assert!(step_b.contains("b((p + 1)) = b(p)"), "{step_b}");
        assert!(set.notes.iter().any(|n| n.contains("write-once via counter b")));
        assert!(set.notes.iter().any(|n| n.contains("write-once via counter c")));
    }

    #[test]
    fn sign_splitting_moves_negative_parts_across_the_relation() {
        let program = parse_program(
            "vars x, n;\narrays A;\nx := 0;\nwhile (x < n) { if (A[x] - 3 > -x) { x := x + 1; } else { x := x + 1; } }\n",
        )
        .unwrap();
        let tr = Translator::at_iteration(&program, Term::Var(0));
        let cond = match &program.body[0] {
            crate::loopspec::Stmt::If { cond, .. } => cond.clone(),
            _ => panic!("expected if"),
        };
        // A[x] - 3 > -x  becomes  x(i) + (A(x(i)) + -3·(sign-split)) ...
        // concretely: 0 + 3 < A(x(i)) + x(i) after moving parts.
        let lit = tr.cond_literal(&cond, true).unwrap();
        assert_eq!(lit.to_string(), "3 < (A(x(p)) + x(p))");
    }

    #[test]
    fn assertion_clausifies_to_the_expected_single_clause() {
        let program = fig1();
        let clauses = assertion_clauses(&program).unwrap();
        assert_eq!(clauses.len(), 1);
        assert_eq!(
            clauses[0].to_string(),
            "~(0 <= p) | ~(p < b) | h(p) < B(p)"
        );
    }

    #[test]
    fn base_projection_keeps_exit_values_and_drops_run_talk() {
        let exit_fact = Clause::new(vec![not_less(
            Term::iter_val("a", Term::counter()),
            Term::scalar("n"),
        )]);
        assert_eq!(to_base(&exit_fact).unwrap().to_string(), "~(a < n)");
        let run_fact = Clause::new(vec![eq(
            Term::iter_val("a", Term::Var(0)),
            Term::Var(0),
        )]);
        assert_eq!(to_base(&run_fact), None);
    }

    #[test]
    fn linear_invariants_import_as_guarded_equations() {
        let program = fig1();
        let vars = crate::exactalg::Vars::new(["a", "b", "c", "s", "n"]);
        let poly = crate::exactalg::parse_polynomial("a - b - c", &vars).unwrap();
        let polys = [poly];
        let init_symbols = BTreeMap::new();
        let mut set = AxiomSet::default();
        import_equalities(
            &program,
            &ImportedEqualities { polys: &polys, init_symbols: &init_symbols },
            &mut set,
        );
        assert_eq!(set.axioms.len(), 1);
        assert_eq!(
            set.axioms[0].clause.to_string(),
            "~(p <= $n) | ~(0 <= p) | a(p) = (b(p) + c(p))"
        );
    }
}
