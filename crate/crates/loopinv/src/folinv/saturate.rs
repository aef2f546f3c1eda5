//! Given-clause saturation.
//!
//! The loop keeps an *active* set (clauses already picked) and a *passive*
//! queue. Every input axiom is activated before anything derived gets a
//! turn; after that, each round picks a given clause — clauses mentioning an
//! update predicate or witness first, oldest first, then lightest-or-oldest
//! among the rest — and combines it with every active clause under three
//! rules:
//!
//! - ordered binary resolution, with a selection function that picks all
//!   negative update-predicate literals when present (update facts should be
//!   consumed, not carried around) and otherwise falls back to the maximal
//!   literals of the Knuth–Bendix order;
//! - positive factoring on maximal literals;
//! - paramodulation from positive equations, oriented by the same order,
//!   into eligible literals (never directly into a variable).
//!
//! Pairs of clauses that both lack program lineage are skipped — pure
//! background theory cannot contain an invariant. New clauses are simplified
//! by numeral evaluation, dropped when a kept clause subsumes them or when
//! they outgrow the size limits, and kill any clause they subsume in turn.
//! Because extended symbols order above base symbols, rewriting tends to
//! push run-talk out of derived clauses; whatever lands back in the base
//! language (see [`base_consequences`]) is an invariant of the loop's final
//! state.
//!
//! Saturation is consequence generation here, not refutation, so the loop
//! has no empty-clause exit; it runs until the passive queue drains or a
//! resource cap trips.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use super::axioms::{to_base, AxiomSet};
use super::clause::{ground_simplify, subsumes};
use super::order::kbo;
use super::order::maximal_indices;
use super::term::{Clause, Symbol, Term};
use super::unify::{unify, Subst};

#[derive(Clone, Copy, Debug)]
pub struct SaturateConfig {
    pub max_retained: usize,
    pub max_generated: usize,
    /// Derived clauses with more literals than this are discarded outright.
    /// Resolving against a transitivity-style lemma grows a clause by one
    /// literal per step, so chains of them produce ever-longer variants of
    /// the same fact; cutting at a fixed width stops that family cold while
    /// leaving room for the several-guards-plus-a-claim shape that useful
    /// consequences take. Input axioms are exempt.
    pub max_literals: usize,
    /// Companion cap on total symbol weight, for derived clauses that stay
    /// narrow but pile up structure (nested successors, say).
    pub max_weight: usize,
}

impl Default for SaturateConfig {
    fn default() -> SaturateConfig {
        SaturateConfig {
            max_retained: 10_000,
            max_generated: 50_000,
            max_literals: 6,
            max_weight: 40,
        }
    }
}

/// How a retained clause came to be. Indices in the companion `parents`
/// vector point into [`Saturation::clauses`]; re-running the rule on those
/// parents reproduces the clause (see [`replays`]).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    Input,
    Resolve,
    Factor,
    /// Paramodulation from the first parent's equation into the second.
    Paramod,
}

#[derive(Clone, Debug)]
pub struct SatClause {
    pub clause: Clause,
    pub from_program: bool,
    pub rule: Rule,
    pub parents: Vec<usize>,
    alive: bool,
}

#[derive(Debug)]
pub struct Saturation {
    /// Every clause ever retained, in derivation order; subsumed ones are
    /// marked dead rather than removed.
    pub clauses: Vec<SatClause>,
    pub capped: bool,
    /// True when an early-stop goal was met.
    pub stopped: bool,
    pub generated: usize,
    /// Derived clauses dropped for exceeding the size limits. A nonzero
    /// count means the run explored a pruned space, like `capped` does.
    pub discarded: usize,
}

impl Saturation {
    pub fn alive(&self) -> impl Iterator<Item = &SatClause> {
        self.clauses.iter().filter(|c| c.alive)
    }
}

pub fn saturate(axioms: &AxiomSet, config: &SaturateConfig) -> Saturation {
    saturate_until(axioms, config, |_| false)
}

/// Like [`saturate`], but halts as soon as `goal` accepts a retained clause.
/// Useful when the caller is after one particular consequence (say, a clause
/// subsuming an asserted postcondition) rather than the full harvest.
pub fn saturate_until(
    axioms: &AxiomSet,
    config: &SaturateConfig,
    goal: impl FnMut(&SatClause) -> bool,
) -> Saturation {
    let mut st = State {
        clauses: Vec::new(),
        passive: Vec::new(),
        active: Vec::new(),
        generated: 0,
        capped: false,
        stopped: false,
        discarded: 0,
        config: *config,
        goal,
    };
    for ax in &axioms.axioms {
        st.add(ax.clause.clone(), ax.from_program, Rule::Input, Vec::new(), true);
    }
    // Activate every input axiom before touching anything derived. The input
    // set is small, and deferring any part of it (an arithmetic lemma, say)
    // can stall a derivation whose other premises are all in play.
    let initial: Vec<usize> = st.passive.drain(..).collect();
    for given in initial {
        if st.capped || st.stopped {
            break;
        }
        if !st.clauses[given].alive {
            continue;
        }
        st.active.push(given);
        st.infer_with(given);
    }
    let mut picks = 0usize;
    while !st.capped && !st.stopped {
        let Some(given) = st.pick(&mut picks) else { break };
        st.active.push(given);
        st.infer_with(given);
    }
    Saturation {
        clauses: st.clauses,
        capped: st.capped,
        stopped: st.stopped,
        generated: st.generated,
        discarded: st.discarded,
    }
}

/// A base-language invariant together with the retained clause it projects
/// from, so callers can walk the derivation record.
#[derive(Clone, Debug)]
pub struct BaseClause {
    /// Index into [`Saturation::clauses`].
    pub origin: usize,
    pub clause: Clause,
}

/// The base-language invariants of a finished run: clauses with program
/// lineage that project out of the extended signature, minimized by
/// subsumption and sorted smallest-first. Subsumed (dead) clauses still
/// count — their killers live in the extended language and may not project,
/// and a sound consequence stays sound.
pub fn base_consequences(sat: &Saturation) -> Vec<BaseClause> {
    let mut seen = BTreeSet::new();
    let mut bases = Vec::new();
    for (i, c) in sat.clauses.iter().enumerate() {
        if !c.from_program {
            continue;
        }
        let Some(b) = to_base(&c.clause) else { continue };
        let Some(b) = ground_simplify(&b) else { continue };
        if b.is_tautology() || b.is_empty() {
            continue;
        }
        if seen.insert(b.clone()) {
            bases.push(BaseClause { origin: i, clause: b });
        }
    }
    bases.sort_by_key(|b| (b.clause.weight(), b.clause.lits.len(), b.clause.to_string()));
    let mut kept: Vec<BaseClause> = Vec::new();
    for b in bases {
        if !kept.iter().any(|k| subsumes(&k.clause, &b.clause)) {
            kept.push(b);
        }
    }
    kept
}

struct State<G> {
    clauses: Vec<SatClause>,
    passive: Vec<usize>,
    active: Vec<usize>,
    generated: usize,
    capped: bool,
    stopped: bool,
    discarded: usize,
    config: SaturateConfig,
    goal: G,
}

impl<G: FnMut(&SatClause) -> bool> State<G> {
    fn pick(&mut self, picks: &mut usize) -> Option<usize> {
        self.passive.retain(|&i| self.clauses[i].alive);
        if self.passive.is_empty() {
            return None;
        }
        *picks += 1;
        // Clauses that still mention an update predicate or its witness are
        // scheduled ahead of everything else, oldest first. Every derived
        // array invariant passes through that cluster, and first-in first-out
        // keeps late-born chatter from starving the clauses a derivation in
        // flight is waiting on. The rest alternate lightest-first with every
        // fifth pick by age, so nothing starves outright.
        let slot = if let Some(eager) = self
            .passive
            .iter()
            .enumerate()
            .filter(|(_, &c)| array_talk(&self.clauses[c].clause))
            .min_by_key(|(_, &c)| c)
        {
            Some(eager)
        } else if *picks % 5 == 0 {
            self.passive.iter().enumerate().min_by_key(|(_, &c)| c)
        } else {
            self.passive
                .iter()
                .enumerate()
                .min_by_key(|(_, &c)| (self.clauses[c].clause.weight(), c))
        };
        let pos = slot.expect("nonempty passive queue").0;
        Some(self.passive.swap_remove(pos))
    }

    fn infer_with(&mut self, given: usize) {
        for f in factors(&self.clauses[given].clause) {
            let lineage = self.clauses[given].from_program;
            self.record(f, lineage, Rule::Factor, vec![given]);
            if self.capped {
                return;
            }
        }
        let partners = self.active.clone();
        for other in partners {
            if !self.clauses[given].alive {
                return;
            }
            if !self.clauses[other].alive {
                continue;
            }
            let lineage = self.clauses[given].from_program || self.clauses[other].from_program;
            // Set-of-support: two background clauses only ever produce more
            // background theory, never an invariant. Skipping those pairs
            // keeps the search centered on the program.
            if !lineage {
                continue;
            }
            let g = self.clauses[given].clause.clone();
            let o = self.clauses[other].clause.clone();
            let mut products: Vec<(Clause, Rule, Vec<usize>)> = resolvents(&g, &o)
                .into_iter()
                .map(|c| (c, Rule::Resolve, vec![given, other]))
                .collect();
            products.extend(
                paramods(&g, &o).into_iter().map(|c| (c, Rule::Paramod, vec![given, other])),
            );
            if other != given {
                products.extend(
                    paramods(&o, &g).into_iter().map(|c| (c, Rule::Paramod, vec![other, given])),
                );
            }
            for (p, rule, parents) in products {
                self.record(p, lineage, rule, parents);
                if self.capped {
                    return;
                }
            }
        }
    }

    fn record(&mut self, clause: Clause, from_program: bool, rule: Rule, parents: Vec<usize>) {
        self.generated += 1;
        if self.generated > self.config.max_generated {
            self.capped = true;
            return;
        }
        self.add(clause, from_program, rule, parents, false);
        if self.clauses.len() >= self.config.max_retained {
            self.capped = true;
        }
    }

    fn add(
        &mut self,
        clause: Clause,
        from_program: bool,
        rule: Rule,
        parents: Vec<usize>,
        input: bool,
    ) {
        let Some(clause) = ground_simplify(&clause) else { return };
        if clause.is_tautology() {
            return;
        }
        debug_assert!(!clause.is_empty(), "axioms are consistent; the empty clause is a bug");
        if !input
            && (clause.lits.len() > self.config.max_literals
                || clause.weight() > self.config.max_weight)
        {
            self.discarded += 1;
            return;
        }
        if self
            .clauses
            .iter()
            .any(|c| c.alive && subsumes(&c.clause, &clause))
        {
            return;
        }
        for c in &mut self.clauses {
            if c.alive && subsumes(&clause, &c.clause) {
                c.alive = false;
            }
        }
        self.clauses.push(SatClause { clause, from_program, rule, parents, alive: true });
        self.passive.push(self.clauses.len() - 1);
        if (self.goal)(self.clauses.last().expect("just pushed")) {
            self.stopped = true;
        }
    }
}

/// Can `sat.clauses[i]` be re-derived from its recorded parents? Replaying
/// applies the recorded rule and asks whether some product simplifies to the
/// recorded clause — the derivation log is evidence, not decoration.
pub fn replays(sat: &Saturation, i: usize) -> bool {
    let c = &sat.clauses[i];
    let parent = |k: usize| &sat.clauses[c.parents[k]].clause;
    let products = match c.rule {
        Rule::Input => return c.parents.is_empty(),
        Rule::Factor => factors(parent(0)),
        Rule::Resolve => resolvents(parent(0), parent(1)),
        Rule::Paramod => paramods(parent(0), parent(1)),
    };
    products
        .iter()
        .any(|p| ground_simplify(p).is_some_and(|s| s == c.clause))
}

/// Does the clause still mention an update predicate or a coverage witness?
fn array_talk(c: &Clause) -> bool {
    fn in_term(t: &Term) -> bool {
        match t {
            Term::Var(_) => false,
            Term::App(s, args) => {
                matches!(s, Symbol::Upd(_) | Symbol::Skolem(_)) || args.iter().any(in_term)
            }
        }
    }
    c.lits.iter().any(|l| in_term(&l.atom))
}

struct Eligible {
    idx: Vec<usize>,
    /// True when negative update literals were selected; such a clause can
    /// only act through them.
    selected: bool,
}

fn eligible(c: &Clause) -> Eligible {
    let selected: Vec<usize> = c
        .lits
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.pos && matches!(&l.atom, Term::App(Symbol::Upd(_), _)))
        .map(|(i, _)| i)
        .collect();
    if selected.is_empty() {
        Eligible { idx: maximal_indices(c), selected: false }
    } else {
        Eligible { idx: selected, selected: true }
    }
}

fn var_offset(c: &Clause) -> u32 {
    c.vars().into_iter().next_back().map_or(0, |v| v + 1)
}

fn resolvents(a: &Clause, b: &Clause) -> Vec<Clause> {
    let b = b.rename_above(var_offset(a));
    let ea = eligible(a);
    let eb = eligible(&b);
    let mut out = Vec::new();
    for &i in &ea.idx {
        for &j in &eb.idx {
            let la = &a.lits[i];
            let lb = &b.lits[j];
            if la.pos == lb.pos {
                continue;
            }
            let mut s = Subst::new();
            if !unify(&la.atom, &lb.atom, &mut s) {
                continue;
            }
            let lits = a
                .lits
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, l)| l)
                .chain(b.lits.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, l)| l))
                .map(|l| super::term::Literal { pos: l.pos, atom: s.apply(&l.atom) })
                .collect();
            out.push(Clause::new(lits));
        }
    }
    out
}

fn factors(c: &Clause) -> Vec<Clause> {
    let e = eligible(c);
    if e.selected {
        return Vec::new();
    }
    let mut out = Vec::new();
    for &i in &e.idx {
        if !c.lits[i].pos {
            continue;
        }
        for (j, lj) in c.lits.iter().enumerate() {
            if j == i || !lj.pos {
                continue;
            }
            let mut s = Subst::new();
            if !unify(&c.lits[i].atom, &lj.atom, &mut s) {
                continue;
            }
            let lits = c
                .lits
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, l)| super::term::Literal { pos: l.pos, atom: s.apply(&l.atom) })
                .collect();
            out.push(Clause::new(lits));
        }
    }
    out
}

fn paramods(from: &Clause, into: &Clause) -> Vec<Clause> {
    let into = into.rename_above(var_offset(from));
    let ef = eligible(from);
    let ei = eligible(&into);
    let mut out = Vec::new();
    for &i in &ef.idx {
        let Some((l, r)) = from.lits[i].as_equation() else { continue };
        let oriented: Vec<(&Term, &Term)> = match kbo(l, r) {
            Some(Ordering::Greater) => vec![(l, r)],
            Some(Ordering::Less) => vec![(r, l)],
            None => vec![(l, r), (r, l)],
            Some(Ordering::Equal) => Vec::new(),
        };
        for (s, t) in oriented {
            if matches!(s, Term::Var(_)) {
                continue;
            }
            for &j in &ei.idx {
                let atom = &into.lits[j].atom;
                let mut prefix = Vec::new();
                let mut spots = Vec::new();
                positions(atom, &mut prefix, &mut spots);
                for (path, sub) in spots {
                    let mut subst = Subst::new();
                    if !unify(sub, s, &mut subst) {
                        continue;
                    }
                    let rewritten = replace_at(atom, &path, t);
                    let lits = into
                        .lits
                        .iter()
                        .enumerate()
                        .map(|(k, lit)| super::term::Literal {
                            pos: lit.pos,
                            atom: subst.apply(if k == j { &rewritten } else { &lit.atom }),
                        })
                        .chain(
                            from.lits
                                .iter()
                                .enumerate()
                                .filter(|&(k, _)| k != i)
                                .map(|(_, l)| super::term::Literal {
                                    pos: l.pos,
                                    atom: subst.apply(&l.atom),
                                }),
                        )
                        .collect();
                    out.push(Clause::new(lits));
                }
            }
        }
    }
    out
}

/// Every proper application subterm of `t`, with its path from the root.
fn positions<'a>(
    t: &'a Term,
    prefix: &mut Vec<usize>,
    out: &mut Vec<(Vec<usize>, &'a Term)>,
) {
    if let Term::App(_, args) = t {
        for (k, a) in args.iter().enumerate() {
            prefix.push(k);
            if matches!(a, Term::App(..)) {
                out.push((prefix.clone(), a));
            }
            positions(a, prefix, out);
            prefix.pop();
        }
    }
}

fn replace_at(t: &Term, path: &[usize], rep: &Term) -> Term {
    match path.split_first() {
        None => rep.clone(),
        Some((&k, rest)) => {
            let Term::App(s, args) = t else {
                unreachable!("paths lead through applications")
            };
            let mut args = args.clone();
            args[k] = replace_at(&args[k], rest, rep);
            Term::App(s.clone(), args)
        }
    }
}
