use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactalg::{Int, Rational};

use super::ast::{Cond, Expr, Program, RelOp, Stmt};
use super::paths::{extract_paths, AssignStmt};

/// Interpretation of the uninterpreted function symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UfInterp {
    /// Every application evaluates to 0.
    Zero,
    /// Every application evaluates to its first argument (0 for arity 0).
    Identity,
    /// Deterministic pseudo-random table: the value depends only on the
    /// seed, the function name, and the exact arguments.
    Seeded { seed: u64 },
}

impl UfInterp {
    pub fn apply(&self, name: &str, args: &[Rational]) -> Rational {
        match self {
            UfInterp::Zero => Rational::zero(),
            UfInterp::Identity => args.first().cloned().unwrap_or_else(Rational::zero),
            UfInterp::Seeded { seed } => {
                // FNV-1a over the seed, name, and canonical argument text,
                // folded into [-10, 10].
                let mut h: u64 = 0xcbf29ce484222325;
                let mut eat = |bytes: &[u8]| {
                    for &b in bytes {
                        h ^= b as u64;
                        h = h.wrapping_mul(0x100000001b3);
                    }
                };
                eat(&seed.to_le_bytes());
                eat(name.as_bytes());
                for a in args {
                    eat(a.to_string().as_bytes());
                    eat(b",");
                }
                let v = (h % 21) as i64 - 10;
                Rational::from_integer(Int::from(v))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            UfInterp::Zero => "zero".into(),
            UfInterp::Identity => "identity".into(),
            UfInterp::Seeded { seed } => format!("seeded({seed})"),
        }
    }
}

/// Concrete inputs for a run: values for every scalar without a program
/// initializer, full contents for every declared array, a function
/// interpretation, and an iteration cap.
#[derive(Clone, Debug)]
pub struct LoopInput {
    pub scalars: BTreeMap<String, Rational>,
    pub arrays: BTreeMap<String, Vec<Rational>>,
    pub uf: UfInterp,
    pub step_cap: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub scalars: BTreeMap<String, Rational>,
    pub arrays: BTreeMap<String, Vec<Rational>>,
}

/// A recorded run: `snapshots[k]` is the state before iteration `k`
/// (so there are `iterations + 1` snapshots), and `paths_taken[k]` is the
/// id of the guarded path iteration `k` followed.
#[derive(Clone, Debug)]
pub struct Trace {
    pub snapshots: Vec<Snapshot>,
    pub paths_taken: Vec<usize>,
    pub step_capped: bool,
    pub uf: UfInterp,
}

impl Trace {
    pub fn iterations(&self) -> usize {
        self.paths_taken.len()
    }

    pub fn initial(&self) -> &Snapshot {
        self.snapshots.first().expect("at least one snapshot")
    }

    pub fn final_state(&self) -> &Snapshot {
        self.snapshots.last().expect("at least one snapshot")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InterpError {
    #[error("scalar `{0}` has no initializer and no input value")]
    MissingScalar(String),
    #[error("array `{0}` missing from the input")]
    MissingArray(String),
    #[error("iteration {iteration}: index {index} out of bounds for `{array}` (length {len})")]
    IndexOutOfBounds {
        array: String,
        index: String,
        len: usize,
        iteration: usize,
    },
    #[error("iteration {iteration}: non-integer index {index} into `{array}`")]
    NonIntegerIndex {
        array: String,
        index: String,
        iteration: usize,
    },
}

#[derive(Clone, Debug)]
pub struct State {
    pub scalars: BTreeMap<String, Rational>,
    pub arrays: BTreeMap<String, Vec<Rational>>,
    pub uf: UfInterp,
    pub iteration: usize,
}

impl State {
    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            scalars: self.scalars.clone(),
            arrays: self.arrays.clone(),
        }
    }
}

/// Run the loop with exact rational arithmetic. Stops when the guard goes
/// false or after `step_cap` iterations (flagged, not an error).
pub fn interpret(program: &Program, input: &LoopInput) -> Result<Trace, InterpError> {
    let mut scalars = BTreeMap::new();
    for name in &program.scalars {
        if let Some(v) = program.init_value(name) {
            scalars.insert(name.clone(), Rational::from_integer(v.clone()));
        } else if let Some(v) = input.scalars.get(name) {
            scalars.insert(name.clone(), v.clone());
        } else {
            return Err(InterpError::MissingScalar(name.clone()));
        }
    }
    let mut arrays = BTreeMap::new();
    for name in &program.arrays {
        match input.arrays.get(name) {
            Some(contents) => {
                arrays.insert(name.clone(), contents.clone());
            }
            None => return Err(InterpError::MissingArray(name.clone())),
        }
    }

    let paths = extract_paths(program);
    let mut by_decisions = BTreeMap::new();
    for (id, p) in paths.iter().enumerate() {
        by_decisions.insert(p.decisions.clone(), id);
    }

    let mut state = State {
        scalars,
        arrays,
        uf: input.uf.clone(),
        iteration: 0,
    };
    let mut snapshots = vec![state.snapshot()];
    let mut paths_taken = Vec::new();
    let mut step_capped = false;

    loop {
        if paths_taken.len() >= input.step_cap {
            step_capped = eval_cond(&program.guard, &state)?;
            break;
        }
        if !eval_cond(&program.guard, &state)? {
            break;
        }
        let mut decisions = Vec::new();
        run_stmts(&program.body, &mut state, &mut decisions)?;
        let id = *by_decisions
            .get(&decisions)
            .expect("executed decisions match an enumerated path");
        paths_taken.push(id);
        state.iteration += 1;
        snapshots.push(state.snapshot());
    }

    Ok(Trace {
        snapshots,
        paths_taken,
        step_capped,
        uf: input.uf.clone(),
    })
}

fn run_stmts(
    stmts: &[Stmt],
    state: &mut State,
    decisions: &mut Vec<bool>,
) -> Result<(), InterpError> {
    for s in stmts {
        match s {
            Stmt::Assign { var, rhs } => {
                let v = eval_expr(rhs, state)?;
                state.scalars.insert(var.clone(), v);
            }
            Stmt::ArrayAssign { array, index, rhs } => {
                let v = eval_expr(rhs, state)?;
                write_array(array, index, v, state)?;
            }
            Stmt::If {
                cond,
                then_branch,
                else_branch,
            } => {
                let taken = eval_cond(cond, state)?;
                decisions.push(taken);
                run_stmts(if taken { then_branch } else { else_branch }, state, decisions)?;
            }
        }
    }
    Ok(())
}

/// Replay a straight-line path body (used by trace validation: replaying
/// the recorded path from snapshot k must reproduce snapshot k+1).
pub fn run_assignments(assigns: &[AssignStmt], state: &mut State) -> Result<(), InterpError> {
    for a in assigns {
        match a {
            AssignStmt::Scalar { var, rhs } => {
                let v = eval_expr(rhs, state)?;
                state.scalars.insert(var.clone(), v);
            }
            AssignStmt::Array { array, index, rhs } => {
                let v = eval_expr(rhs, state)?;
                write_array(array, index, v, state)?;
            }
        }
    }
    Ok(())
}

fn write_array(
    array: &str,
    index: &Expr,
    value: Rational,
    state: &mut State,
) -> Result<(), InterpError> {
    let idx = array_index(array, index, state)?;
    state.arrays.get_mut(array).expect("checked array")[idx] = value;
    Ok(())
}

fn array_index(array: &str, index: &Expr, state: &State) -> Result<usize, InterpError> {
    let iv = eval_expr(index, state)?;
    if !iv.is_integer() {
        return Err(InterpError::NonIntegerIndex {
            array: array.to_string(),
            index: iv.to_string(),
            iteration: state.iteration,
        });
    }
    let len = state.arrays.get(array).map(|a| a.len()).unwrap_or(0);
    let as_int = iv.to_integer();
    let idx_opt = if as_int.is_negative() {
        None
    } else {
        as_int.to_usize().filter(|&i| i < len)
    };
    idx_opt.ok_or_else(|| InterpError::IndexOutOfBounds {
        array: array.to_string(),
        index: as_int.to_string(),
        len,
        iteration: state.iteration,
    })
}

pub fn eval_cond(c: &Cond, state: &State) -> Result<bool, InterpError> {
    let l = eval_expr(&c.lhs, state)?;
    let r = eval_expr(&c.rhs, state)?;
    Ok(match c.op {
        RelOp::Lt => l < r,
        RelOp::Le => l <= r,
        RelOp::Gt => l > r,
        RelOp::Ge => l >= r,
        RelOp::Eq => l == r,
        RelOp::Ne => l != r,
    })
}

pub fn eval_expr(e: &Expr, state: &State) -> Result<Rational, InterpError> {
    Ok(match e {
        Expr::Const(n) => Rational::from_integer(n.clone()),
        Expr::Var(v) => state
            .scalars
            .get(v)
            .cloned()
            .ok_or_else(|| InterpError::MissingScalar(v.clone()))?,
        Expr::ArrayRead(a, idx) => {
            let i = array_index(a, idx, state)?;
            state.arrays[a][i].clone()
        }
        Expr::Apply(f, args) => {
            let mut vals = Vec::with_capacity(args.len());
            for a in args {
                vals.push(eval_expr(a, state)?);
            }
            state.uf.apply(f, &vals)
        }
        Expr::Neg(a) => -eval_expr(a, state)?,
        Expr::Add(a, b) => eval_expr(a, state)? + eval_expr(b, state)?,
        Expr::Sub(a, b) => eval_expr(a, state)? - eval_expr(b, state)?,
        Expr::Mul(a, b) => eval_expr(a, state)? * eval_expr(b, state)?,
    })
}
