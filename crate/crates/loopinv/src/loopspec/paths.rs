use super::ast::{Cond, Expr, Program, Stmt};

/// One branch-free way through the loop body. Statements shared by several
/// branches (prefixes and suffixes around conditionals) are replicated into
/// every path, so replaying `assigns` in order is exactly one iteration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardedPath {
    /// Branch conditions in the order they were tested.
    pub guards: Vec<GuardLit>,
    pub assigns: Vec<AssignStmt>,
    /// Then/else choices in test order; used to match interpreter runs to
    /// path ids.
    pub decisions: Vec<bool>,
}

/// A branch condition with its polarity and the number of assignments that
/// had already executed when it was tested (needed to express the condition
/// over iteration-entry values later).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardLit {
    pub cond: Cond,
    pub positive: bool,
    pub prefix_len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AssignStmt {
    Scalar { var: String, rhs: Expr },
    Array { array: String, index: Expr, rhs: Expr },
}

/// Enumerate all guarded paths of the loop body, then-branch first, so path
/// ids are stable across runs and match the interpreter's decision order.
pub fn extract_paths(program: &Program) -> Vec<GuardedPath> {
    let mut out = Vec::new();
    let work: Vec<&Stmt> = program.body.iter().collect();
    walk(
        &work,
        GuardedPath {
            guards: Vec::new(),
            assigns: Vec::new(),
            decisions: Vec::new(),
        },
        &mut out,
    );
    out
}

fn walk(work: &[&Stmt], acc: GuardedPath, out: &mut Vec<GuardedPath>) {
    let Some((first, rest)) = work.split_first() else {
        out.push(acc);
        return;
    };
    match first {
        Stmt::Assign { var, rhs } => {
            let mut acc = acc;
            acc.assigns.push(AssignStmt::Scalar {
                var: var.clone(),
                rhs: rhs.clone(),
            });
            walk(rest, acc, out);
        }
        Stmt::ArrayAssign { array, index, rhs } => {
            let mut acc = acc;
            acc.assigns.push(AssignStmt::Array {
                array: array.clone(),
                index: index.clone(),
                rhs: rhs.clone(),
            });
            walk(rest, acc, out);
        }
        Stmt::If {
            cond,
            then_branch,
            else_branch,
        } => {
            for (takes_then, branch) in [(true, then_branch), (false, else_branch)] {
                let mut next = acc.clone();
                next.guards.push(GuardLit {
                    cond: cond.clone(),
                    positive: takes_then,
                    prefix_len: next.assigns.len(),
                });
                next.decisions.push(takes_then);
                let mut extended: Vec<&Stmt> = branch.iter().collect();
                extended.extend_from_slice(rest);
                walk(&extended, next, out);
            }
        }
    }
}
