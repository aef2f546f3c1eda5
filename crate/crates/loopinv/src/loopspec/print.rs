//! Canonical source rendering. `parse_program(to_source(p)) == p` for every
//! well-formed program, which the round-trip tests pin down.

use super::ast::*;

pub fn to_source(p: &Program) -> String {
    let mut out = String::new();
    out.push_str(&format!("vars {};\n", p.scalars.join(", ")));
    if !p.arrays.is_empty() {
        out.push_str(&format!("arrays {};\n", p.arrays.join(", ")));
    }
    if !p.funs.is_empty() {
        let sigs: Vec<String> = p
            .funs
            .iter()
            .map(|(n, a)| format!("{n}/{a}"))
            .collect();
        out.push_str(&format!("funs {};\n", sigs.join(", ")));
    }
    for (name, value) in &p.inits {
        out.push_str(&format!("{name} := {value};\n"));
    }
    out.push_str(&format!("while ({}) {{\n", cond_text(&p.guard)));
    for s in &p.body {
        stmt_text(s, 1, &mut out);
    }
    out.push_str("}\n");
    if let Some(f) = &p.assertion {
        out.push_str(&format!("assert ({});\n", formula_text(f)));
    }
    out
}

fn indent(depth: usize, out: &mut String) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn stmt_text(s: &Stmt, depth: usize, out: &mut String) {
    match s {
        Stmt::Assign { var, rhs } => {
            indent(depth, out);
            out.push_str(&format!("{var} := {};\n", expr_text(rhs, 0)));
        }
        Stmt::ArrayAssign { array, index, rhs } => {
            indent(depth, out);
            out.push_str(&format!(
                "{array}[{}] := {};\n",
                expr_text(index, 0),
                expr_text(rhs, 0)
            ));
        }
        Stmt::If {
            cond,
            then_branch,
            else_branch,
        } => {
            indent(depth, out);
            out.push_str(&format!("if ({}) {{\n", cond_text(cond)));
            for s in then_branch {
                stmt_text(s, depth + 1, out);
            }
            indent(depth, out);
            if else_branch.is_empty() {
                out.push_str("}\n");
            } else {
                out.push_str("} else {\n");
                for s in else_branch {
                    stmt_text(s, depth + 1, out);
                }
                indent(depth, out);
                out.push_str("}\n");
            }
        }
    }
}

pub fn cond_text(c: &Cond) -> String {
    format!(
        "{} {} {}",
        expr_text(&c.lhs, 0),
        c.op.text(),
        expr_text(&c.rhs, 0)
    )
}

/// Precedence levels: 0 additive, 1 multiplicative, 2 unary/atoms.
pub fn expr_text(e: &Expr, ctx: u8) -> String {
    let (text, level) = match e {
        Expr::Const(n) => (n.to_string(), 2),
        Expr::Var(v) => (v.clone(), 2),
        Expr::ArrayRead(a, idx) => (format!("{a}[{}]", expr_text(idx, 0)), 2),
        Expr::Apply(f, args) => {
            let rendered: Vec<String> = args.iter().map(|a| expr_text(a, 0)).collect();
            (format!("{f}({})", rendered.join(", ")), 2)
        }
        Expr::Neg(a) => (format!("-{}", expr_text(a, 2)), 1),
        Expr::Add(a, b) => (
            format!("{} + {}", expr_text(a, 0), expr_text(b, 1)),
            0,
        ),
        Expr::Sub(a, b) => (
            format!("{} - {}", expr_text(a, 0), expr_text(b, 1)),
            0,
        ),
        Expr::Mul(a, b) => (
            format!("{} * {}", expr_text(a, 1), expr_text(b, 2)),
            1,
        ),
    };
    if level < ctx {
        format!("({text})")
    } else {
        text
    }
}

pub fn formula_text(f: &Formula) -> String {
    formula_prec(f, 0)
}

/// Precedence: 0 implies, 1 or, 2 and, 3 unary.
fn formula_prec(f: &Formula, ctx: u8) -> String {
    let (text, level) = match f {
        Formula::Atom(c) => (cond_text(c), 3),
        Formula::Not(inner) => (format!("!{}", formula_prec(inner, 3)), 3),
        Formula::Forall(v, inner) => (format!("forall {v} {}", formula_prec(inner, 3)), 3),
        Formula::Exists(v, inner) => (format!("exists {v} {}", formula_prec(inner, 3)), 3),
        Formula::And(a, b) => (
            format!("{} && {}", formula_prec(a, 2), formula_prec(b, 3)),
            2,
        ),
        Formula::Or(a, b) => (
            format!("{} || {}", formula_prec(a, 1), formula_prec(b, 2)),
            1,
        ),
        Formula::Implies(a, b) => (
            format!("{} -> {}", formula_prec(a, 1), formula_prec(b, 0)),
            0,
        ),
    };
    if level < ctx {
        format!("({text})")
    } else {
        text
    }
}
