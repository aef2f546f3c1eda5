//! Clause-level redundancy: subsumption and numeral evaluation.

use num_traits::Zero;

use super::term::{Clause, Literal, Symbol, Term};
use super::unify::{match_onto, Subst};

/// Does `c` subsume `d` — is there a substitution mapping every literal of
/// `c` onto a distinct literal of `d`? Callers must pass clauses with
/// disjoint variables (clauses built by [`Clause::new`] share numbering, so
/// rename one side first).
pub fn subsumes(c: &Clause, d: &Clause) -> bool {
    if c.lits.len() > d.lits.len() {
        return false;
    }
    let offset = d.vars().iter().max().map_or(0, |m| m + 1);
    let c = c.rename_above(offset);
    let mut used = vec![false; d.lits.len()];
    assign(&c.lits, 0, d, &mut used, &Subst::new())
}

fn assign(lits: &[Literal], at: usize, d: &Clause, used: &mut Vec<bool>, s: &Subst) -> bool {
    let Some(lit) = lits.get(at) else {
        return true;
    };
    for (j, cand) in d.lits.iter().enumerate() {
        if used[j] || cand.pos != lit.pos {
            continue;
        }
        let mut attempt = s.clone();
        if match_onto(&lit.atom, &cand.atom, &mut attempt) {
            used[j] = true;
            if assign(lits, at + 1, d, used, &attempt) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}

/// Fold numeral arithmetic and drop decided literals. `None` means the
/// clause became trivially true (a literal evaluated to true); an empty
/// clause in `Some` is a genuine contradiction.
pub fn ground_simplify(clause: &Clause) -> Option<Clause> {
    let mut lits = Vec::with_capacity(clause.lits.len());
    for lit in &clause.lits {
        let atom = fold(&lit.atom);
        match decide(&atom) {
            Some(truth) => {
                if truth == lit.pos {
                    return None;
                }
                // decided against the literal: drop it
            }
            None => lits.push(Literal { pos: lit.pos, atom }),
        }
    }
    let out = Clause::new(lits);
    if out.is_tautology() {
        None
    } else {
        Some(out)
    }
}

/// Bottom-up numeral folding plus unit laws for + and *.
fn fold(t: &Term) -> Term {
    match t {
        Term::Var(_) => t.clone(),
        Term::App(head, args) => {
            let args: Vec<Term> = args.iter().map(fold).collect();
            match head {
                Symbol::Plus => {
                    if let (Some(a), Some(b)) = (args[0].as_int(), args[1].as_int()) {
                        return Term::int(a + b);
                    }
                    if args[0].as_int().is_some_and(Zero::is_zero) {
                        return args[1].clone();
                    }
                    if args[1].as_int().is_some_and(Zero::is_zero) {
                        return args[0].clone();
                    }
                    Term::App(Symbol::Plus, args)
                }
                Symbol::Times => {
                    if let (Some(a), Some(b)) = (args[0].as_int(), args[1].as_int()) {
                        return Term::int(a * b);
                    }
                    for (this, other) in [(0, 1), (1, 0)] {
                        if let Some(v) = args[this].as_int() {
                            if v.is_zero() {
                                return Term::int(0);
                            }
                            if *v == 1.into() {
                                return args[other].clone();
                            }
                        }
                    }
                    Term::App(Symbol::Times, args)
                }
                _ => Term::App(head.clone(), args),
            }
        }
    }
}

/// Truth value of a comparison between two numerals.
fn decide(atom: &Term) -> Option<bool> {
    let Term::App(head, args) = atom else {
        return None;
    };
    let (a, b) = (args.first()?.as_int()?, args.get(1)?.as_int()?);
    match head {
        Symbol::Le => Some(a <= b),
        Symbol::Less => Some(a < b),
        Symbol::Eq => Some(a == b),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn less(a: Term, b: Term) -> Literal {
        Literal::new(true, Term::App(Symbol::Less, vec![a, b]))
    }

    fn not_less(a: Term, b: Term) -> Literal {
        Literal::new(false, Term::App(Symbol::Less, vec![a, b]))
    }

    #[test]
    fn a_general_clause_subsumes_its_instances_and_weakenings() {
        let general = Clause::new(vec![less(Term::Var(0), Term::scalar("n"))]);
        let instance = Clause::new(vec![
            less(Term::int(3), Term::scalar("n")),
            not_less(Term::scalar("a"), Term::int(0)),
        ]);
        assert!(subsumes(&general, &instance));
        assert!(!subsumes(&instance, &general));
    }

    #[test]
    fn subsumption_respects_polarity_and_injectivity() {
        let c = Clause::new(vec![
            less(Term::Var(0), Term::Var(1)),
            less(Term::Var(1), Term::Var(0)),
        ]);
        // Both literals would have to map onto the single literal of d.
        let d = Clause::new(vec![less(Term::int(0), Term::int(1))]);
        assert!(!subsumes(&c, &d));
        let neg = Clause::new(vec![not_less(Term::Var(0), Term::Var(1))]);
        assert!(!subsumes(&neg, &d));
    }

    #[test]
    fn shared_variable_numbering_does_not_block_subsumption() {
        // Both canonicalize to variable 0; matching still needs renaming.
        let c = Clause::new(vec![less(Term::Var(0), Term::scalar("n"))]);
        let d = Clause::new(vec![
            less(Term::Var(0), Term::scalar("n")),
            not_less(Term::Var(0), Term::int(7)),
        ]);
        assert!(subsumes(&c, &d));
    }

    #[test]
    fn numerals_decide_literals_and_collapse_terms() {
        // 2 < 1 + 3 becomes true and deletes the clause.
        let c = Clause::new(vec![less(Term::int(2), Term::plus(Term::int(1), Term::int(3)))]);
        assert_eq!(ground_simplify(&c), None);
        // A false literal drops out, the rest stays.
        let c = Clause::new(vec![
            less(Term::int(5), Term::int(2)),
            less(Term::scalar("a"), Term::times(Term::int(1), Term::scalar("n"))),
        ]);
        let simplified = ground_simplify(&c).unwrap();
        assert_eq!(simplified.to_string(), "a < n");
        // All literals false: the empty clause survives as a contradiction.
        let c = Clause::new(vec![less(Term::int(5), Term::int(2))]);
        assert_eq!(ground_simplify(&c), Some(Clause::new(vec![])));
    }
}
