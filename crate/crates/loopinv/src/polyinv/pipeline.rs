//! The polynomial invariant pipeline: from a parsed loop to the ideal of
//! polynomial identities that hold at every iteration boundary.
//!
//! For a fixed sequence of guarded paths, traversed `k_1, ..., k_m` times
//! respectively, composing the paths' closed forms expresses every scalar's
//! final value over the initial values, the counters, and exponential
//! variables. The valid identities of that sequence are exactly the
//! polynomials in the ideal generated by `x - closed_form(x)` together with
//! all algebraic relations of the exponentials, intersected with the ring
//! that only mentions final values and initials — an elimination ideal.
//! Identities of the whole loop are those valid for *every* path sequence:
//! an intersection of ideals. Sequences of growing length are folded in
//! until the ideal stops shrinking; conclusions never weaken when it has
//! stabilized early.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::exactalg::{Polynomial, Rational, Vars};
use crate::groebner::{eliminate, intersect, GroebnerError, Ideal, Limits};
use crate::loopspec::{extract_paths, Program, Stmt};
use crate::recsolve::{
    extract_recurrences, relation_ideal, solve_path, ClosedForms, PathRecurrences, RecurrenceError,
};

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("path {path}: {source}")]
    UnsupportedPath {
        path: usize,
        source: RecurrenceError,
    },
    #[error(transparent)]
    Resource(#[from] GroebnerError),
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    /// Longest path sequence folded into the invariant ideal.
    pub max_sequence_length: usize,
    pub limits: Limits,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            max_sequence_length: 3,
            limits: Limits::default(),
        }
    }
}

/// Per-round accounting, reported alongside the result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundStats {
    pub length: usize,
    pub sequences: usize,
    pub basis_size: usize,
}

/// The invariant ideal of a loop, over the scalars and the symbolic
/// initial-value variables.
#[derive(Clone, Debug)]
pub struct InvariantAnalysis {
    /// Scalars first, then the initial-value symbols.
    pub vars: Vars,
    /// Reduced degree-reverse-lexicographic Groebner basis of the ideal.
    pub basis: Vec<Polynomial>,
    /// Initial-value symbol chosen for each written scalar without a
    /// concrete initializer (`x` ↦ `x0` unless taken).
    pub init_symbols: BTreeMap<String, String>,
    /// Scalars assigned somewhere in the loop body.
    pub written: Vec<String>,
    pub paths: usize,
    pub rounds: Vec<RoundStats>,
    /// True when the last round added nothing: the ideal is a fixed point
    /// of sequence folding. Otherwise longer interleavings might still
    /// shrink it.
    pub stabilized: bool,
}

impl InvariantAnalysis {
    /// Is `p` (over any subset of the analysis variables) a consequence of
    /// the invariants?
    pub fn implies(&self, p: &Polynomial, limits: &Limits) -> Result<bool, GroebnerError> {
        let ideal = Ideal::new(&self.vars, self.basis.clone())?;
        let aligned = p.align_to(&self.vars)?;
        crate::groebner::ideal_member(&aligned, &ideal, limits)
    }
}

/// Run the full pipeline on a parsed program.
pub fn invariant_ideal(
    program: &Program,
    options: &PipelineOptions,
) -> Result<InvariantAnalysis, PolyError> {
    let paths = extract_paths(program);
    let recurrences: Vec<PathRecurrences> = paths
        .iter()
        .enumerate()
        .map(|(i, p)| {
            extract_recurrences(program, p)
                .map_err(|source| PolyError::UnsupportedPath { path: i, source })
        })
        .collect::<Result<_, _>>()?;

    let written = written_scalars(program);
    let init_symbols = choose_init_symbols(program, &written);
    let ring = invariant_ring(program, &init_symbols);

    let mut rounds = Vec::new();
    let mut stabilized = false;
    let mut current: Option<Ideal> = None;
    let mut previous_basis: Option<Vec<Polynomial>> = None;

    for length in 1..=options.max_sequence_length.max(1) {
        let seqs = path_sequences(paths.len(), length);
        if seqs.is_empty() {
            // A single path has no longer interleavings: already a fixed point.
            stabilized = true;
            break;
        }
        for seq in &seqs {
            let ideal = sequence_ideal(program, &recurrences, seq, &init_symbols, &ring, options)?;
            current = Some(match current.take() {
                None => ideal,
                Some(acc) => intersect(&acc, &ideal, &options.limits)?,
            });
        }
        let basis = current.as_ref().expect("at least one sequence").generators.clone();
        rounds.push(RoundStats {
            length,
            sequences: seqs.len(),
            basis_size: basis.len(),
        });
        if previous_basis.as_ref() == Some(&basis) {
            stabilized = true;
            break;
        }
        previous_basis = Some(basis);
    }

    let basis = current.map(|i| i.generators).unwrap_or_default();
    Ok(InvariantAnalysis {
        vars: ring,
        basis,
        init_symbols,
        written,
        paths: paths.len(),
        rounds,
        stabilized,
    })
}

/// Scalars assigned anywhere in the loop body, in declaration order.
pub fn written_scalars(program: &Program) -> Vec<String> {
    fn visit(stmts: &[Stmt], acc: &mut BTreeSet<String>) {
        for s in stmts {
            match s {
                Stmt::Assign { var, .. } => {
                    acc.insert(var.clone());
                }
                Stmt::ArrayAssign { .. } => {}
                Stmt::If {
                    then_branch,
                    else_branch,
                    ..
                } => {
                    visit(then_branch, acc);
                    visit(else_branch, acc);
                }
            }
        }
    }
    let mut set = BTreeSet::new();
    visit(&program.body, &mut set);
    program
        .scalars
        .iter()
        .filter(|s| set.contains(*s))
        .cloned()
        .collect()
}

/// Name an initial-value symbol for each written scalar lacking a concrete
/// initializer: `x0`, falling back to `x_0`, `x_init`, ... when taken.
pub fn choose_init_symbols(program: &Program, written: &[String]) -> BTreeMap<String, String> {
    let mut taken: BTreeSet<String> = program.scalars.iter().cloned().collect();
    taken.extend(program.arrays.iter().cloned());
    taken.extend(program.funs.iter().map(|(n, _)| n.clone()));

    let mut chosen = BTreeMap::new();
    for x in written {
        if program.has_concrete_init(x) {
            continue;
        }
        let mut candidates = vec![format!("{x}0"), format!("{x}_0"), format!("{x}_init")];
        let mut n = 2;
        let name = loop {
            if let Some(c) = candidates.iter().find(|c| !taken.contains(*c)) {
                break c.clone();
            }
            candidates = vec![format!("{x}_init{n}")];
            n += 1;
        };
        taken.insert(name.clone());
        chosen.insert(x.clone(), name);
    }
    chosen
}

/// The ring of reportable invariants: scalars, then initial-value symbols
/// in the declaration order of their scalars.
pub fn invariant_ring(program: &Program, init_symbols: &BTreeMap<String, String>) -> Vars {
    let extra: Vec<String> = program
        .scalars
        .iter()
        .filter_map(|s| init_symbols.get(s).cloned())
        .collect();
    Vars::new(program.scalars.iter().cloned()).extended(extra)
}

/// All sequences of the given length where consecutive entries differ.
/// Repeating a path consecutively never reaches new states (the two
/// counters merge into one), and length-1 sequences with counter 0 cover
/// the empty run, so these sequences cover every interleaving up to the
/// given length.
fn path_sequences(paths: usize, length: usize) -> Vec<Vec<usize>> {
    if length == 1 {
        return (0..paths).map(|p| vec![p]).collect();
    }
    if paths <= 1 {
        return Vec::new();
    }
    let shorter = path_sequences(paths, length - 1);
    let mut out = Vec::new();
    for s in &shorter {
        for p in 0..paths {
            if s.last() != Some(&p) {
                let mut next = s.clone();
                next.push(p);
                out.push(next);
            }
        }
    }
    out
}

/// The elimination ideal of one path sequence: identities between final
/// values and initials valid for all counter values `k_j ≥ 0`.
fn sequence_ideal(
    program: &Program,
    recurrences: &[PathRecurrences],
    seq: &[usize],
    init_symbols: &BTreeMap<String, String>,
    ring: &Vars,
    options: &PipelineOptions,
) -> Result<Ideal, PolyError> {
    // Solve each segment with its own counter and exponential block.
    let segments: Vec<ClosedForms> = seq
        .iter()
        .enumerate()
        .map(|(j, &p)| {
            solve_path(
                &recurrences[p],
                &format!("$k{}", j + 1),
                &format!("$z{}_", j + 1),
            )
        })
        .collect();

    let mut generated: Vec<String> = Vec::new();
    for cf in &segments {
        generated.push(cf.counter.clone());
        generated.extend(cf.zvars.iter().map(|z| z.name.clone()));
    }
    let ambient = ring.extended(generated.clone());

    // Initial images: concrete value, initial symbol, or the scalar itself
    // (when never written, its entry value *is* its current value).
    let mut values: BTreeMap<String, Polynomial> = BTreeMap::new();
    for x in &program.scalars {
        let image = match (program.init_value(x), init_symbols.get(x)) {
            (Some(v), _) => Polynomial::constant(&ambient, Rational::from_integer(v.clone())),
            (None, Some(sym)) => Polynomial::var(&ambient, sym).expect("in ring"),
            (None, None) => Polynomial::var(&ambient, x).expect("scalar"),
        };
        values.insert(x.clone(), image);
    }

    // Compose: after segment j, `values[x]` is x over initials, counters
    // k_1..k_j, and the exponential blocks so far.
    for cf in &segments {
        let images: Vec<Polynomial> = (0..ambient.len())
            .map(|i| {
                let name = ambient.name(i);
                match values.get(name) {
                    Some(v) => v.clone(),
                    None => Polynomial::var_idx(&ambient, i),
                }
            })
            .collect();
        let mut next = BTreeMap::new();
        for x in &program.scalars {
            let lifted = cf.forms[x].align_to(&ambient).expect("ambient superset");
            next.insert(x.clone(), lifted.substitute(&images));
        }
        values = next;
    }

    let mut generators = Vec::new();
    for x in &program.scalars {
        let final_var = Polynomial::var(&ambient, x).expect("scalar");
        let g = &final_var - &values[x];
        if !g.is_zero() {
            generators.push(g);
        }
    }
    for cf in &segments {
        for rel in relation_ideal(&cf.zvars, &options.limits)? {
            generators.push(rel.align_to(&ambient).expect("ambient superset"));
        }
    }

    let ideal = Ideal::new(&ambient, generators)?;
    let drop: Vec<&str> = generated.iter().map(String::as_str).collect();
    Ok(eliminate(&ideal, &drop, &options.limits)?)
}
