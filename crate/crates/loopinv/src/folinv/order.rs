//! Knuth–Bendix ordering with unit weights.
//!
//! Every symbol and every variable weighs 1, so the weight of a term is its
//! size; ties fall through to symbol precedence and then to the leftmost
//! differing argument. The ordering is partial on non-ground terms — `None`
//! means incomparable, and anything claiming `Greater` has passed the
//! variable-count condition, so it stays greater under every instantiation.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::term::{Clause, Literal, Term};

pub fn kbo(s: &Term, t: &Term) -> Option<Ordering> {
    if s == t {
        return Some(Ordering::Equal);
    }
    match (s, t) {
        (Term::Var(x), _) => t.occurs(*x).then_some(Ordering::Less),
        (_, Term::Var(y)) => s.occurs(*y).then_some(Ordering::Greater),
        (Term::App(f, fs), Term::App(g, gs)) => {
            let (ws, wt) = (s.size(), t.size());
            if ws > wt {
                return covers(s, t).then_some(Ordering::Greater);
            }
            if wt > ws {
                return covers(t, s).then_some(Ordering::Less);
            }
            match f.precedence(g) {
                Ordering::Greater => covers(s, t).then_some(Ordering::Greater),
                Ordering::Less => covers(t, s).then_some(Ordering::Less),
                Ordering::Equal => {
                    for (a, b) in fs.iter().zip(gs) {
                        if a == b {
                            continue;
                        }
                        return match kbo(a, b)? {
                            Ordering::Greater => covers(s, t).then_some(Ordering::Greater),
                            Ordering::Less => covers(t, s).then_some(Ordering::Less),
                            Ordering::Equal => None,
                        };
                    }
                    Some(Ordering::Equal)
                }
            }
        }
    }
}

/// Does `s` contain every variable of `t` at least as often?
fn covers(s: &Term, t: &Term) -> bool {
    let mut counts: BTreeMap<u32, i64> = BTreeMap::new();
    count(s, 1, &mut counts);
    count(t, -1, &mut counts);
    counts.values().all(|&c| c >= 0)
}

fn count(t: &Term, sign: i64, counts: &mut BTreeMap<u32, i64>) {
    match t {
        Term::Var(v) => *counts.entry(*v).or_insert(0) += sign,
        Term::App(_, args) => args.iter().for_each(|a| count(a, sign, counts)),
    }
}

/// Literal comparison for eligibility: larger atom wins; on the same atom
/// the negative literal is the larger one.
pub fn lit_greater(a: &Literal, b: &Literal) -> bool {
    if a.atom == b.atom {
        return !a.pos && b.pos;
    }
    kbo(&a.atom, &b.atom) == Some(Ordering::Greater)
}

/// Indices of literals not strictly below any other literal.
pub fn maximal_indices(clause: &Clause) -> Vec<usize> {
    (0..clause.lits.len())
        .filter(|&i| {
            clause
                .lits
                .iter()
                .enumerate()
                .all(|(j, other)| j == i || !lit_greater(other, &clause.lits[i]))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::term::Symbol;
    use super::*;

    fn sk(name: &str, arg: Term) -> Term {
        Term::App(Symbol::Skolem(name.into()), vec![arg])
    }

    #[test]
    fn heavier_terms_are_greater_when_they_cover_the_variables() {
        let b_of_w = Term::App(Symbol::IterVal("b".into()), vec![sk("w", Term::Var(0))]);
        assert_eq!(kbo(&b_of_w, &Term::Var(0)), Some(Ordering::Greater));
        // x + y vs x: y is not covered, so the comparison stays open.
        let sum = Term::plus(Term::Var(0), Term::Var(1));
        assert_eq!(kbo(&sum, &Term::Var(0)), Some(Ordering::Greater));
        assert_eq!(kbo(&Term::Var(0), &sum), Some(Ordering::Less));
        assert_eq!(kbo(&sum, &Term::Var(2)), None);
    }

    #[test]
    fn extended_symbols_beat_base_symbols_at_equal_weight() {
        let iter = Term::iter_val("a", Term::Var(0));
        let base = Term::App(Symbol::ArrayAt("A".into()), vec![Term::Var(0)]);
        assert_eq!(kbo(&iter, &base), Some(Ordering::Greater));
        assert_eq!(kbo(&base, &iter), Some(Ordering::Less));
    }

    #[test]
    fn ordering_is_stable_under_instantiation_spot_check() {
        // b($w(p)) > p instantiated with p := 0 keeps the direction.
        let lhs = Term::App(Symbol::IterVal("b".into()), vec![sk("w", Term::int(0))]);
        assert_eq!(kbo(&lhs, &Term::int(0)), Some(Ordering::Greater));
    }

    #[test]
    fn negative_literal_dominates_its_positive_twin() {
        let atom = Term::App(Symbol::Le, vec![Term::Var(0), Term::Var(1)]);
        let pos = Literal::new(true, atom.clone());
        let neg = Literal::new(false, atom);
        assert!(lit_greater(&neg, &pos));
        assert!(!lit_greater(&pos, &neg));
        let c = Clause::new(vec![pos.clone(), neg.clone()]);
        let max = maximal_indices(&c);
        assert_eq!(max.len(), 1);
        assert!(!c.lits[max[0]].pos);
    }
}
