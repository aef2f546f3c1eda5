//! Clause export in TPTP `cnf` syntax, so axiom sets and derived invariants
//! can be replayed or cross-checked with off-the-shelf provers.
//!
//! Program identifiers are case-sensitive and may collide once lowercased
//! for TPTP functors (a scalar `b` next to an array `B`), so every symbol
//! goes through a mangler: arrays get an `_arr` suffix (`_arr0` for entry
//! contents), per-iteration values an `_at` suffix, update predicates an
//! `upd_` prefix, and remaining clashes a numeric tiebreak. Equality prints
//! as the built-in `=` / `!=`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::axioms::AxiomSet;
use super::term::{Clause, Literal, Symbol, Term};

pub fn tptp_problem(axioms: &AxiomSet, derived: &[Clause]) -> String {
    let mut mangler = Mangler::default();
    let mut names = Mangler::default();
    let mut out = String::new();
    for note in &axioms.notes {
        let _ = writeln!(out, "% {note}");
    }
    if !axioms.notes.is_empty() {
        out.push('\n');
    }
    for axiom in &axioms.axioms {
        let name = names.fresh(&axiom.label);
        let _ = writeln!(out, "cnf({name}, axiom, ({})).", clause(&axiom.clause, &mut mangler));
    }
    for (i, c) in derived.iter().enumerate() {
        let name = names.fresh(&format!("derived_{i}"));
        let _ = writeln!(out, "cnf({name}, lemma, ({})).", clause(c, &mut mangler));
    }
    out
}

fn clause(c: &Clause, mangler: &mut Mangler) -> String {
    if c.lits.is_empty() {
        return "$false".to_string();
    }
    let parts: Vec<String> = c.lits.iter().map(|l| literal(l, mangler)).collect();
    parts.join(" | ")
}

fn literal(l: &Literal, mangler: &mut Mangler) -> String {
    if let Term::App(Symbol::Eq, args) = &l.atom {
        let op = if l.pos { "=" } else { "!=" };
        return format!("{} {op} {}", term(&args[0], mangler), term(&args[1], mangler));
    }
    let atom = term(&l.atom, mangler);
    if l.pos {
        atom
    } else {
        format!("~ {atom}")
    }
}

fn term(t: &Term, mangler: &mut Mangler) -> String {
    match t {
        Term::Var(v) => var_name(*v),
        Term::App(Symbol::Int(n), _) => n.to_string(),
        Term::App(head, args) => {
            let name = mangler.functor(head);
            if args.is_empty() {
                name
            } else {
                let args: Vec<String> = args.iter().map(|a| term(a, mangler)).collect();
                format!("{name}({})", args.join(", "))
            }
        }
    }
}

fn var_name(v: u32) -> String {
    let letters = ['P', 'Q', 'R', 'U', 'V'];
    let letter = letters[(v as usize) % letters.len()];
    let tier = (v as usize) / letters.len();
    if tier == 0 {
        letter.to_string()
    } else {
        format!("{letter}{tier}")
    }
}

#[derive(Default)]
struct Mangler {
    names: BTreeMap<Symbol, String>,
    taken: BTreeSet<String>,
}

impl Mangler {
    fn functor(&mut self, sym: &Symbol) -> String {
        if let Some(name) = self.names.get(sym) {
            return name.clone();
        }
        let base = match sym {
            Symbol::Scalar(x) => sanitize(x),
            Symbol::ArrayAt(a) => format!("{}_arr", sanitize(a)),
            Symbol::ArrayInit(a) => format!("{}_arr0", sanitize(a)),
            Symbol::Uf(f, _) => sanitize(f),
            Symbol::Plus => "plus".to_string(),
            Symbol::Times => "times".to_string(),
            Symbol::Le => "leq".to_string(),
            Symbol::Less => "lt".to_string(),
            Symbol::IterVal(x) => format!("{}_at", sanitize(x)),
            Symbol::Upd(a) => format!("upd_{}", sanitize(a)),
            Symbol::Skolem(w) => format!("sk_{}", sanitize(w)),
            Symbol::Counter => "n_iter".to_string(),
            Symbol::Int(_) | Symbol::Eq => unreachable!("rendered without the mangler"),
        };
        let name = self.fresh(&base);
        self.names.insert(sym.clone(), name.clone());
        name
    }

    /// `base` sanitized and disambiguated against everything handed out so
    /// far.
    fn fresh(&mut self, base: &str) -> String {
        let base = sanitize(base);
        let mut name = base.clone();
        let mut i = 2;
        while self.taken.contains(&name) {
            name = format!("{base}_{i}");
            i += 1;
        }
        self.taken.insert(name.clone());
        name
    }
}

fn sanitize(raw: &str) -> String {
    let mut out: String = raw
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' {
                c.to_ascii_lowercase()
            } else {
                '_'
            }
        })
        .collect();
    if !out.starts_with(|c: char| c.is_ascii_lowercase()) {
        out.insert(0, 'x');
    }
    out
}

#[cfg(test)]
mod tests {
    use crate::loopspec::parse_program;

    use super::super::axioms::program_axioms;
    use super::*;

    #[test]
    fn partition_loop_axioms_print_as_wellformed_cnf() {
        let src = std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../corpus/fig1.loop"
        ))
        .unwrap();
        let program = parse_program(&src).unwrap();
        let set = program_axioms(&program, None);
        let text = tptp_problem(&set, &[]);
        assert!(text.contains("cnf(guard_exit, axiom, (~ lt(a_at(n_iter), n)))."));
        assert!(text.contains("upd_b(P, b_at(P))"));
        assert!(text.contains("sk_w_b(P)"));
        for line in text.lines().filter(|l| !l.is_empty() && !l.starts_with('%')) {
            assert!(line.starts_with("cnf("), "{line}");
            assert!(line.ends_with(")).") , "{line}");
        }
    }

    #[test]
    fn lowercase_collisions_get_numeric_tiebreaks() {
        let mut m = Mangler::default();
        let scalar = m.functor(&Symbol::Scalar("b".into()));
        // the array B lowercases next to the scalar b but lands on b_arr
        let array = m.functor(&Symbol::ArrayAt("B".into()));
        assert_eq!(scalar, "b");
        assert_eq!(array, "b_arr");
        // a scalar literally named b_arr now needs the tiebreak
        let clash = m.functor(&Symbol::Scalar("b_arr".into()));
        assert_eq!(clash, "b_arr_2");
    }

    #[test]
    fn derived_clauses_export_with_equality_sugar() {
        let clause = Clause::new(vec![Literal::new(
            false,
            Term::App(
                Symbol::Eq,
                vec![Term::scalar("a"), Term::plus(Term::scalar("b"), Term::int(1))],
            ),
        )]);
        let set = super::super::axioms::AxiomSet::default();
        let text = tptp_problem(&set, &[clause]);
        assert_eq!(text.trim(), "cnf(derived_0, lemma, (a != plus(b, 1))).");
    }
}
