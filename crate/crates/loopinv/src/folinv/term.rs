//! Terms, literals, and clauses for the saturation engine.
//!
//! The signature is split in two. *Base* symbols talk about the state after
//! the loop: final scalar values, final and entry array contents, the
//! declared uninterpreted functions, integers, `+`, `*`, and the predicates
//! `<=`, `<`, `=`. *Extended* symbols talk about the run itself: the
//! per-iteration value `x(i)` of a scalar, the iteration count `$n`, update
//! predicates `$upd_A(i, p)` ("A was written at p during iteration i"), and
//! Skolem witnesses. Extended symbols order above every base symbol, which
//! is what steers saturation toward consequences that survive in the base
//! language.

use std::collections::BTreeSet;
use std::fmt;

use crate::exactalg::Int;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Symbol {
    Int(Int),
    Scalar(String),
    ArrayAt(String),
    ArrayInit(String),
    Uf(String, u8),
    Plus,
    Times,
    Le,
    Less,
    Eq,
    IterVal(String),
    Upd(String),
    Skolem(String),
    Counter,
}

impl Symbol {
    pub fn arity(&self) -> usize {
        match self {
            Symbol::Int(_) | Symbol::Scalar(_) | Symbol::Counter => 0,
            Symbol::ArrayAt(_) | Symbol::ArrayInit(_) | Symbol::IterVal(_) => 1,
            Symbol::Skolem(_) => 1,
            Symbol::Uf(_, k) => *k as usize,
            Symbol::Plus | Symbol::Times | Symbol::Le | Symbol::Less | Symbol::Eq => 2,
            Symbol::Upd(_) => 2,
        }
    }

    pub fn is_extended(&self) -> bool {
        matches!(
            self,
            Symbol::IterVal(_) | Symbol::Upd(_) | Symbol::Skolem(_) | Symbol::Counter
        )
    }

    pub fn is_predicate(&self) -> bool {
        matches!(self, Symbol::Le | Symbol::Less | Symbol::Eq | Symbol::Upd(_))
    }

    /// Total precedence: extended above base, then arity, then a stable
    /// per-variant rank, then the name (numerals by value).
    pub fn precedence(&self, other: &Symbol) -> std::cmp::Ordering {
        self.prec_key().cmp(&other.prec_key())
    }

    fn prec_key(&self) -> (bool, usize, u8, &str, Option<&Int>) {
        let rank = match self {
            Symbol::Int(_) => 0,
            Symbol::Scalar(_) => 1,
            Symbol::ArrayAt(_) => 2,
            Symbol::ArrayInit(_) => 3,
            Symbol::Uf(..) => 4,
            Symbol::Plus => 5,
            Symbol::Times => 6,
            Symbol::Le => 7,
            Symbol::Less => 8,
            Symbol::Eq => 9,
            Symbol::IterVal(_) => 0,
            Symbol::Upd(_) => 1,
            Symbol::Skolem(_) => 2,
            Symbol::Counter => 3,
        };
        let name = match self {
            Symbol::Scalar(n)
            | Symbol::ArrayAt(n)
            | Symbol::ArrayInit(n)
            | Symbol::Uf(n, _)
            | Symbol::IterVal(n)
            | Symbol::Upd(n)
            | Symbol::Skolem(n) => n.as_str(),
            _ => "",
        };
        let value = match self {
            Symbol::Int(v) => Some(v),
            _ => None,
        };
        (self.is_extended(), self.arity(), rank, name, value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Term {
    Var(u32),
    App(Symbol, Vec<Term>),
}

impl Term {
    pub fn int(v: impl Into<Int>) -> Term {
        Term::App(Symbol::Int(v.into()), Vec::new())
    }

    pub fn counter() -> Term {
        Term::App(Symbol::Counter, Vec::new())
    }

    pub fn scalar(name: &str) -> Term {
        Term::App(Symbol::Scalar(name.to_string()), Vec::new())
    }

    pub fn iter_val(name: &str, at: Term) -> Term {
        Term::App(Symbol::IterVal(name.to_string()), vec![at])
    }

    pub fn plus(a: Term, b: Term) -> Term {
        Term::App(Symbol::Plus, vec![a, b])
    }

    pub fn times(a: Term, b: Term) -> Term {
        Term::App(Symbol::Times, vec![a, b])
    }

    pub fn as_int(&self) -> Option<&Int> {
        match self {
            Term::App(Symbol::Int(v), _) => Some(v),
            _ => None,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn occurs(&self, var: u32) -> bool {
        match self {
            Term::Var(v) => *v == var,
            Term::App(_, args) => args.iter().any(|a| a.occurs(var)),
        }
    }

    pub fn vars_into(&self, out: &mut BTreeSet<u32>) {
        match self {
            Term::Var(v) => {
                out.insert(*v);
            }
            Term::App(_, args) => args.iter().for_each(|a| a.vars_into(out)),
        }
    }

    pub fn var_count(&self, var: u32) -> usize {
        match self {
            Term::Var(v) => usize::from(*v == var),
            Term::App(_, args) => args.iter().map(|a| a.var_count(var)).sum(),
        }
    }

    pub fn has_extended(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(s, args) => s.is_extended() || args.iter().any(Term::has_extended),
        }
    }

    pub fn map_vars(&self, f: &impl Fn(u32) -> Term) -> Term {
        match self {
            Term::Var(v) => f(*v),
            Term::App(s, args) => {
                Term::App(s.clone(), args.iter().map(|a| a.map_vars(f)).collect())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Literal {
    pub pos: bool,
    pub atom: Term,
}

impl Literal {
    pub fn new(pos: bool, atom: Term) -> Literal {
        debug_assert!(matches!(&atom, Term::App(s, _) if s.is_predicate()));
        Literal { pos, atom }
    }

    pub fn negated(&self) -> Literal {
        Literal { pos: !self.pos, atom: self.atom.clone() }
    }

    pub fn size(&self) -> usize {
        self.atom.size()
    }

    pub fn has_extended(&self) -> bool {
        self.atom.has_extended()
    }

    /// The positive-equality view used by paramodulation.
    pub fn as_equation(&self) -> Option<(&Term, &Term)> {
        match &self.atom {
            Term::App(Symbol::Eq, args) if self.pos => Some((&args[0], &args[1])),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Clause {
    pub lits: Vec<Literal>,
}

impl Clause {
    /// Deduplicate, sort, and renumber variables in order of first
    /// occurrence, so structurally equal clauses compare equal.
    pub fn new(lits: Vec<Literal>) -> Clause {
        let mut c = Clause { lits };
        c.canonicalize();
        c
    }

    fn canonicalize(&mut self) {
        self.lits.sort();
        self.lits.dedup();
        let mut order: Vec<u32> = Vec::new();
        let mut seen = BTreeSet::new();
        for lit in &self.lits {
            collect_in_order(&lit.atom, &mut order, &mut seen);
        }
        let rename = |v: u32| Term::Var(order.iter().position(|&x| x == v).unwrap() as u32);
        for lit in &mut self.lits {
            lit.atom = lit.atom.map_vars(&rename);
        }
        self.lits.sort();
        self.lits.dedup();
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.lits.iter().map(Literal::size).sum()
    }

    pub fn vars(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        for lit in &self.lits {
            lit.atom.vars_into(&mut out);
        }
        out
    }

    pub fn rename_above(&self, offset: u32) -> Clause {
        Clause {
            lits: self
                .lits
                .iter()
                .map(|l| Literal {
                    pos: l.pos,
                    atom: l.atom.map_vars(&|v| Term::Var(v + offset)),
                })
                .collect(),
        }
    }

    pub fn has_extended(&self) -> bool {
        self.lits.iter().any(Literal::has_extended)
    }

    /// Render as a universally quantified implication: negative literals
    /// become the antecedent conjunction, positive ones the consequent
    /// disjunction. `~(0 <= p) | ~(p < b) | h(p) < B(p)` reads
    /// `forall p. 0 <= p & p < b -> h(p) < B(p)`.
    pub fn implication_form(&self) -> String {
        if self.lits.is_empty() {
            return "false".to_string();
        }
        let side = |pos: bool, sep: &str| -> String {
            self.lits
                .iter()
                .filter(|l| l.pos == pos)
                .map(|l| l.atom.to_string())
                .collect::<Vec<_>>()
                .join(sep)
        };
        let ante = side(false, " & ");
        let cons = side(true, " | ");
        let body = match (ante.is_empty(), cons.is_empty()) {
            (true, _) => cons,
            (false, true) => format!("{ante} -> false"),
            (false, false) => format!("{ante} -> {cons}"),
        };
        let vars = self.vars();
        if vars.is_empty() {
            body
        } else {
            let names: Vec<String> = vars.into_iter().map(var_name).collect();
            format!("forall {}. {}", names.join(", "), body)
        }
    }

    /// Complementary literal pair, or a positive trivial equation.
    pub fn is_tautology(&self) -> bool {
        for (i, a) in self.lits.iter().enumerate() {
            if let Some((s, t)) = a.as_equation() {
                if s == t {
                    return true;
                }
            }
            for b in &self.lits[i + 1..] {
                if a.pos != b.pos && a.atom == b.atom {
                    return true;
                }
            }
        }
        false
    }
}

fn collect_in_order(t: &Term, order: &mut Vec<u32>, seen: &mut BTreeSet<u32>) {
    match t {
        Term::Var(v) => {
            if seen.insert(*v) {
                order.push(*v);
            }
        }
        Term::App(_, args) => args.iter().for_each(|a| collect_in_order(a, order, seen)),
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{}", var_name(*v)),
            Term::App(Symbol::Int(n), _) => write!(f, "{n}"),
            Term::App(Symbol::Scalar(s), _) => write!(f, "{s}"),
            Term::App(Symbol::Counter, _) => write!(f, "$n"),
            Term::App(Symbol::Plus, args) => write!(f, "({} + {})", args[0], args[1]),
            Term::App(Symbol::Times, args) => write!(f, "({} * {})", args[0], args[1]),
            Term::App(Symbol::Le, args) => write!(f, "{} <= {}", args[0], args[1]),
            Term::App(Symbol::Less, args) => write!(f, "{} < {}", args[0], args[1]),
            Term::App(Symbol::Eq, args) => write!(f, "{} = {}", args[0], args[1]),
            Term::App(head, args) => {
                let name = match head {
                    Symbol::ArrayAt(a) => a.clone(),
                    Symbol::ArrayInit(a) => format!("{a}0"),
                    Symbol::Uf(g, _) => g.clone(),
                    Symbol::IterVal(x) => x.clone(),
                    Symbol::Upd(a) => format!("$upd_{a}"),
                    Symbol::Skolem(w) => format!("${w}"),
                    _ => unreachable!("all nullary and infix heads matched above"),
                };
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

pub(crate) fn var_name(v: u32) -> String {
    // p, q, r, .. then p1, q1, ..: invariant variables read naturally.
    let letters = ['p', 'q', 'r', 'u', 'v'];
    let letter = letters[(v as usize) % letters.len()];
    let tier = (v as usize) / letters.len();
    if tier == 0 {
        letter.to_string()
    } else {
        format!("{letter}{tier}")
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pos {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "~({})", self.atom)
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lits.is_empty() {
            return write!(f, "$false");
        }
        for (i, lit) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{lit}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn le(a: Term, b: Term) -> Term {
        Term::App(Symbol::Le, vec![a, b])
    }

    #[test]
    fn clauses_canonicalize_variable_names_and_literal_order() {
        let a = Clause::new(vec![
            Literal::new(false, le(Term::Var(7), Term::Var(3))),
            Literal::new(true, le(Term::Var(3), Term::int(0))),
        ]);
        let b = Clause::new(vec![
            Literal::new(true, le(Term::Var(0), Term::int(0))),
            Literal::new(false, le(Term::Var(1), Term::Var(0))),
        ]);
        assert_eq!(a, b);
        assert_eq!(a.vars().len(), 2);
    }

    #[test]
    fn tautology_detection_sees_complements_and_trivial_equations() {
        let atom = le(Term::scalar("a"), Term::int(4));
        let taut = Clause::new(vec![Literal::new(true, atom.clone()), Literal::new(false, atom)]);
        assert!(taut.is_tautology());
        let eq = Term::App(Symbol::Eq, vec![Term::Var(0), Term::Var(0)]);
        assert!(Clause::new(vec![Literal::new(true, eq.clone())]).is_tautology());
        assert!(!Clause::new(vec![Literal::new(false, eq)]).is_tautology());
    }

    #[test]
    fn extended_symbols_rank_above_every_base_symbol() {
        let ext = Symbol::IterVal("a".into());
        for base in [
            Symbol::Int(0.into()),
            Symbol::Scalar("z".into()),
            Symbol::Times,
            Symbol::Eq,
            Symbol::Uf("h".into(), 1),
        ] {
            assert_eq!(ext.precedence(&base), std::cmp::Ordering::Greater);
            assert_eq!(base.precedence(&ext), std::cmp::Ordering::Less);
        }
        assert_eq!(
            Symbol::Scalar("a".into()).precedence(&Symbol::Scalar("b".into())),
            std::cmp::Ordering::Less
        );
    }

    #[test]
    fn display_reads_like_the_source_language() {
        let lit = Literal::new(
            false,
            Term::App(
                Symbol::Less,
                vec![
                    Term::App(Symbol::Uf("h".into(), 1), vec![Term::Var(0)]),
                    Term::App(Symbol::ArrayAt("B".into()), vec![Term::Var(0)]),
                ],
            ),
        );
        assert_eq!(lit.to_string(), "~(h(p) < B(p))");
        let upd = Term::App(
            Symbol::Upd("B".into()),
            vec![
                Term::App(Symbol::Skolem("w_B".into()), vec![Term::Var(0)]),
                Term::Var(0),
            ],
        );
        assert_eq!(upd.to_string(), "$upd_B($w_B(p), p)");
    }

    #[test]
    fn implication_form_splits_on_literal_sign() {
        let guarded = Clause::new(vec![
            Literal::new(false, le(Term::int(0), Term::Var(0))),
            Literal::new(false, Term::App(Symbol::Less, vec![Term::Var(0), Term::scalar("b")])),
            Literal::new(
                true,
                Term::App(
                    Symbol::Less,
                    vec![
                        Term::App(Symbol::Uf("h".into(), 1), vec![Term::Var(0)]),
                        Term::App(Symbol::ArrayAt("B".into()), vec![Term::Var(0)]),
                    ],
                ),
            ),
        ]);
        assert_eq!(
            guarded.implication_form(),
            "forall p. 0 <= p & p < b -> h(p) < B(p)"
        );
        let fact = Clause::new(vec![Literal::new(
            true,
            Term::App(Symbol::Eq, vec![Term::scalar("b"), Term::int(3)]),
        )]);
        assert_eq!(fact.implication_form(), "b = 3");
        let refutation = Clause::new(vec![Literal::new(false, le(Term::int(0), Term::int(0)))]);
        assert_eq!(refutation.implication_form(), "0 <= 0 -> false");
    }
}
