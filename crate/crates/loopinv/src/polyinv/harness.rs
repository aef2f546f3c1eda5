//! Randomized concrete runs for cross-checking the symbolic results.
//!
//! Sampling is deliberately lopsided: scalars that appear in the guard but
//! are never assigned bound the iteration count, so they draw from a large
//! range (30–60) to let loops run long, while ordinary inputs stay small
//! (−5..5) and arrays hold small values. Everything derives from one seed,
//! so a reported discrepancy can be replayed exactly.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactalg::{rat, Polynomial, Rational, Vars};
use crate::loopspec::{
    interpret, Expr, InterpError, LoopInput, Program, Snapshot, Trace, UfInterp,
};

use super::pipeline::written_scalars;

#[derive(Clone, Debug)]
pub struct HarnessConfig {
    pub seed: u64,
    pub traces: usize,
    pub step_cap: usize,
    pub array_len: usize,
    /// Fixed interpretation for declared functions; `None` draws a fresh
    /// seeded table per trace.
    pub uf: Option<UfInterp>,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            seed: 1,
            traces: 25,
            step_cap: 200,
            array_len: 64,
            uf: None,
        }
    }
}

/// Scalars read by the guard but never assigned in the body.
pub fn guard_bound_scalars(program: &Program) -> BTreeSet<String> {
    let mut in_guard = BTreeSet::new();
    collect_scalars(&program.guard.lhs, program, &mut in_guard);
    collect_scalars(&program.guard.rhs, program, &mut in_guard);
    let written: BTreeSet<String> = written_scalars(program).into_iter().collect();
    in_guard.difference(&written).cloned().collect()
}

fn collect_scalars(e: &Expr, program: &Program, acc: &mut BTreeSet<String>) {
    match e {
        Expr::Const(_) => {}
        Expr::Var(v) => {
            if program.scalars.contains(v) {
                acc.insert(v.clone());
            }
        }
        Expr::ArrayRead(_, idx) => collect_scalars(idx, program, acc),
        Expr::Apply(_, args) => {
            for a in args {
                collect_scalars(a, program, acc);
            }
        }
        Expr::Neg(a) => collect_scalars(a, program, acc),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
            collect_scalars(a, program, acc);
            collect_scalars(b, program, acc);
        }
    }
}

pub fn random_input<R: Rng>(
    program: &Program,
    config: &HarnessConfig,
    rng: &mut R,
) -> LoopInput {
    let bounds = guard_bound_scalars(program);
    let mut scalars = BTreeMap::new();
    for x in &program.scalars {
        if program.has_concrete_init(x) {
            continue;
        }
        let v = if bounds.contains(x) {
            rng.gen_range(30..=60)
        } else {
            rng.gen_range(-5..=5)
        };
        scalars.insert(x.clone(), rat(v));
    }
    let mut arrays = BTreeMap::new();
    for a in &program.arrays {
        let contents = (0..config.array_len)
            .map(|_| rat(rng.gen_range(-10..=10)))
            .collect();
        arrays.insert(a.clone(), contents);
    }
    LoopInput {
        scalars,
        arrays,
        uf: config
            .uf
            .clone()
            .unwrap_or_else(|| UfInterp::Seeded { seed: rng.gen() }),
        step_cap: config.step_cap,
    }
}

pub fn run_traces(program: &Program, config: &HarnessConfig) -> Result<Vec<Trace>, InterpError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    (0..config.traces)
        .map(|_| interpret(program, &random_input(program, config, &mut rng)))
        .collect()
}

/// Valuation of the invariant-ring variables at one snapshot: scalars from
/// the snapshot, initial-value symbols from the trace's first snapshot.
pub fn snapshot_point(
    vars: &Vars,
    init_symbols: &BTreeMap<String, String>,
    trace: &Trace,
    snapshot: &Snapshot,
) -> Vec<Rational> {
    let initial = trace.initial();
    vars.names()
        .iter()
        .map(|name| {
            if let Some(v) = snapshot.scalars.get(name) {
                return v.clone();
            }
            let scalar = init_symbols
                .iter()
                .find(|(_, sym)| *sym == name)
                .map(|(s, _)| s)
                .expect("invariant-ring variable is a scalar or an initial symbol");
            initial.scalars[scalar].clone()
        })
        .collect()
}

/// Does `p` (over the invariant ring) vanish at every iteration boundary of
/// every trace?
pub fn vanishes_on_traces(
    p: &Polynomial,
    init_symbols: &BTreeMap<String, String>,
    traces: &[Trace],
) -> bool {
    use num_traits::Zero;
    traces.iter().all(|t| {
        t.snapshots.iter().all(|s| {
            p.eval(&snapshot_point(p.vars(), init_symbols, t, s)).is_zero()
        })
    })
}
