//! Unification and one-way matching over triangular substitutions.

use std::collections::BTreeMap;

use super::term::Term;

/// Bindings are triangular: a bound term may mention other bound variables,
/// and `apply` resolves them recursively. The occurs check at binding time
/// keeps that resolution finite.
#[derive(Clone, Debug, Default)]
pub struct Subst {
    map: BTreeMap<u32, Term>,
}

impl Subst {
    pub fn new() -> Subst {
        Subst::default()
    }

    pub fn apply(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => match self.map.get(v) {
                Some(bound) => self.apply(bound),
                None => t.clone(),
            },
            Term::App(s, args) => {
                Term::App(s.clone(), args.iter().map(|a| self.apply(a)).collect())
            }
        }
    }

    /// Follow variable bindings at the root only.
    fn walk<'a>(&'a self, mut t: &'a Term) -> &'a Term {
        while let Term::Var(v) = t {
            match self.map.get(v) {
                Some(next) => t = next,
                None => break,
            }
        }
        t
    }

    fn occurs(&self, var: u32, t: &Term) -> bool {
        match self.walk(t) {
            Term::Var(v) => *v == var,
            Term::App(_, args) => args.iter().any(|a| self.occurs(var, a)),
        }
    }
}

/// Extend `s` to make `a` and `b` equal; on failure `s` is left in a partial
/// state, so unify into a clone when the outcome is uncertain.
pub fn unify(a: &Term, b: &Term, s: &mut Subst) -> bool {
    let (a, b) = (s.walk(a).clone(), s.walk(b).clone());
    match (&a, &b) {
        (Term::Var(x), Term::Var(y)) if x == y => true,
        (Term::Var(x), _) => {
            if s.occurs(*x, &b) {
                false
            } else {
                s.map.insert(*x, b);
                true
            }
        }
        (_, Term::Var(y)) => {
            if s.occurs(*y, &a) {
                false
            } else {
                s.map.insert(*y, a);
                true
            }
        }
        (Term::App(f, fs), Term::App(g, gs)) => {
            f == g && fs.len() == gs.len() && fs.iter().zip(gs).all(|(x, y)| unify(x, y, s))
        }
    }
}

/// One-way matching: bind variables of `pattern` so it becomes exactly
/// `target`; variables in `target` are rigid.
pub fn match_onto(pattern: &Term, target: &Term, s: &mut Subst) -> bool {
    match pattern {
        Term::Var(v) => match s.map.get(v) {
            Some(bound) => bound == target,
            None => {
                s.map.insert(*v, target.clone());
                true
            }
        },
        Term::App(f, fs) => match target {
            Term::App(g, gs) => {
                f == g && fs.len() == gs.len() && fs.iter().zip(gs).all(|(p, t)| match_onto(p, t, s))
            }
            Term::Var(_) => false,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::super::term::Symbol;
    use super::*;

    fn h(arg: Term) -> Term {
        Term::App(Symbol::Uf("h".into(), 1), vec![arg])
    }

    #[test]
    fn unification_solves_both_directions() {
        // h(x) + y  ~  h(0) + h(1)
        let lhs = Term::plus(h(Term::Var(0)), Term::Var(1));
        let rhs = Term::plus(h(Term::int(0)), h(Term::int(1)));
        let mut s = Subst::new();
        assert!(unify(&lhs, &rhs, &mut s));
        assert_eq!(s.apply(&lhs), rhs);
        assert_eq!(s.apply(&Term::Var(1)), h(Term::int(1)));
    }

    #[test]
    fn occurs_check_rejects_cyclic_solutions() {
        let mut s = Subst::new();
        assert!(!unify(&Term::Var(0), &h(Term::Var(0)), &mut s));
        // ... including cycles through earlier bindings: x ~ y, then y ~ h(x).
        let mut s = Subst::new();
        assert!(unify(&Term::Var(0), &Term::Var(1), &mut s));
        assert!(!unify(&Term::Var(1), &h(Term::Var(0)), &mut s));
    }

    #[test]
    fn matching_is_one_way() {
        let mut s = Subst::new();
        assert!(match_onto(&h(Term::Var(0)), &h(Term::scalar("a")), &mut s));
        assert_eq!(s.apply(&Term::Var(0)), Term::scalar("a"));
        // The target's variables are constants: h(a) does not match h(x).
        let mut s = Subst::new();
        assert!(!match_onto(&h(Term::scalar("a")), &h(Term::Var(0)), &mut s));
        // A pattern variable cannot take two values.
        let mut s = Subst::new();
        let twice = Term::plus(Term::Var(0), Term::Var(0));
        let differ = Term::plus(Term::int(1), Term::int(2));
        assert!(!match_onto(&twice, &differ, &mut s));
    }
}
