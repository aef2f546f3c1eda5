use thiserror::Error;

use crate::exactalg::Int;

use super::ast::*;
use super::lexer::{lex, LexError, Tok, Token};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{0}")]
    Lex(#[from] LexError),
    #[error("line {line}, column {col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("end of input: {msg}")]
    Eof { msg: String },
    #[error("{msg}")]
    Check { msg: String },
}

/// Parse program text and run the static checks (declaration uniqueness,
/// declared-before-use, function arities).
pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let program = p.program()?;
    check(&program)?;
    Ok(program)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        match self.tokens.get(self.pos) {
            Some(t) => Err(ParseError::Syntax {
                line: t.line,
                col: t.col,
                msg: msg.into(),
            }),
            None => Err(ParseError::Eof { msg: msg.into() }),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if let Some(Tok::Ident(s)) = self.peek() {
            if s == kw {
                self.pos += 1;
                return true;
            }
        }
        false
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        if !self.keyword("vars") {
            return self.err("expected `vars` declaration");
        }
        let scalars = self.id_list()?;
        self.expect(Tok::Semi, "`;` after vars")?;

        let mut arrays = Vec::new();
        if self.keyword("arrays") {
            arrays = self.id_list()?;
            self.expect(Tok::Semi, "`;` after arrays")?;
        }

        let mut funs = Vec::new();
        if self.keyword("funs") {
            loop {
                let name = self.ident("function name")?;
                self.expect(Tok::Slash, "`/` before arity")?;
                let arity = match self.bump() {
                    Some(Tok::Int(s)) => s.parse::<u32>().map_err(|_| ParseError::Check {
                        msg: format!("arity of `{name}` out of range"),
                    })?,
                    _ => return self.err("expected arity"),
                };
                funs.push((name, arity));
                if self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            self.expect(Tok::Semi, "`;` after funs")?;
        }

        let mut inits = Vec::new();
        while matches!(self.peek(), Some(Tok::Ident(s)) if s != "while") {
            let name = self.ident("identifier")?;
            self.expect(Tok::Assign, "`:=` in initializer")?;
            let negative = if self.peek() == Some(&Tok::Minus) {
                self.pos += 1;
                true
            } else {
                false
            };
            let value: Int = match self.bump() {
                Some(Tok::Int(s)) => s.parse().expect("digit string"),
                _ => return self.err("expected integer constant in initializer"),
            };
            inits.push((name, if negative { -value } else { value }));
            self.expect(Tok::Semi, "`;` after initializer")?;
        }

        if !self.keyword("while") {
            return self.err("expected `while`");
        }
        self.expect(Tok::LParen, "`(` after while")?;
        let guard = self.cond()?;
        self.expect(Tok::RParen, "`)` after loop condition")?;
        self.expect(Tok::LBrace, "`{` opening the loop body")?;
        let body = self.stmt_list()?;
        self.expect(Tok::RBrace, "`}` closing the loop body")?;

        let mut assertion = None;
        if self.keyword("assert") {
            self.expect(Tok::LParen, "`(` after assert")?;
            let f = self.formula()?;
            self.expect(Tok::RParen, "`)` after assertion")?;
            self.expect(Tok::Semi, "`;` after assertion")?;
            assertion = Some(f);
        }

        if self.pos < self.tokens.len() {
            return self.err("trailing input after program");
        }

        Ok(Program {
            scalars,
            arrays,
            funs,
            inits,
            guard,
            body,
            assertion,
        })
    }

    fn id_list(&mut self) -> Result<Vec<String>, ParseError> {
        let mut out = vec![self.ident("identifier")?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            out.push(self.ident("identifier")?);
        }
        Ok(out)
    }

    fn stmt_list(&mut self) -> Result<Vec<Stmt>, ParseError> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::RBrace) | None => return Ok(out),
                _ => out.push(self.stmt()?),
            }
        }
    }

    fn stmt(&mut self) -> Result<Stmt, ParseError> {
        if self.at_keyword("if") {
            self.pos += 1;
            self.expect(Tok::LParen, "`(` after if")?;
            let cond = self.cond()?;
            self.expect(Tok::RParen, "`)` after condition")?;
            self.expect(Tok::LBrace, "`{` opening then-branch")?;
            let then_branch = self.stmt_list()?;
            self.expect(Tok::RBrace, "`}` closing then-branch")?;
            let else_branch = if self.at_keyword("else") {
                self.pos += 1;
                self.expect(Tok::LBrace, "`{` opening else-branch")?;
                let b = self.stmt_list()?;
                self.expect(Tok::RBrace, "`}` closing else-branch")?;
                b
            } else {
                Vec::new()
            };
            return Ok(Stmt::If {
                cond,
                then_branch,
                else_branch,
            });
        }
        let name = self.ident("assignment target")?;
        if self.peek() == Some(&Tok::LBracket) {
            self.pos += 1;
            let index = self.expr()?;
            self.expect(Tok::RBracket, "`]` after index")?;
            self.expect(Tok::Assign, "`:=`")?;
            let rhs = self.expr()?;
            self.expect(Tok::Semi, "`;` after assignment")?;
            Ok(Stmt::ArrayAssign {
                array: name,
                index,
                rhs,
            })
        } else {
            self.expect(Tok::Assign, "`:=`")?;
            let rhs = self.expr()?;
            self.expect(Tok::Semi, "`;` after assignment")?;
            Ok(Stmt::Assign { var: name, rhs })
        }
    }

    fn cond(&mut self) -> Result<Cond, ParseError> {
        let lhs = self.expr()?;
        let op = match self.peek() {
            Some(Tok::Lt) => RelOp::Lt,
            Some(Tok::Le) => RelOp::Le,
            Some(Tok::Gt) => RelOp::Gt,
            Some(Tok::Ge) => RelOp::Ge,
            Some(Tok::EqEq) => RelOp::Eq,
            Some(Tok::Ne) => RelOp::Ne,
            _ => return self.err("expected relational operator"),
        };
        self.pos += 1;
        let rhs = self.expr()?;
        Ok(Cond { lhs, op, rhs })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.expr_term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = Expr::Add(Box::new(acc), Box::new(self.expr_term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = Expr::Sub(Box::new(acc), Box::new(self.expr_term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn expr_term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.expr_factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = Expr::Mul(Box::new(acc), Box::new(self.expr_factor()?));
        }
        Ok(acc)
    }

    fn expr_factor(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.expr_factor()?)))
            }
            Some(Tok::Int(_)) => {
                let Some(Tok::Int(s)) = self.bump() else {
                    unreachable!()
                };
                Ok(Expr::Const(s.parse().expect("digit string")))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::Ident(_)) => {
                let name = self.ident("identifier")?;
                match self.peek() {
                    Some(Tok::LBracket) => {
                        self.pos += 1;
                        let idx = self.expr()?;
                        self.expect(Tok::RBracket, "`]`")?;
                        Ok(Expr::ArrayRead(name, Box::new(idx)))
                    }
                    Some(Tok::LParen) => {
                        self.pos += 1;
                        let mut args = Vec::new();
                        if self.peek() != Some(&Tok::RParen) {
                            args.push(self.expr()?);
                            while self.peek() == Some(&Tok::Comma) {
                                self.pos += 1;
                                args.push(self.expr()?);
                            }
                        }
                        self.expect(Tok::RParen, "`)` after arguments")?;
                        Ok(Expr::Apply(name, args))
                    }
                    _ => Ok(Expr::Var(name)),
                }
            }
            _ => self.err("expected expression"),
        }
    }

    // Formula grammar: implication is right-associative and binds loosest,
    // then ||, then &&, then `!`/quantifier prefixes, then parens/atoms.
    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.formula_or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.formula()?;
            Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn formula_or(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.formula_and()?;
        while self.peek() == Some(&Tok::OrOr) {
            self.pos += 1;
            acc = Formula::Or(Box::new(acc), Box::new(self.formula_and()?));
        }
        Ok(acc)
    }

    fn formula_and(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.formula_unary()?;
        while self.peek() == Some(&Tok::AndAnd) {
            self.pos += 1;
            acc = Formula::And(Box::new(acc), Box::new(self.formula_unary()?));
        }
        Ok(acc)
    }

    fn formula_unary(&mut self) -> Result<Formula, ParseError> {
        if self.peek() == Some(&Tok::Bang) {
            self.pos += 1;
            return Ok(Formula::Not(Box::new(self.formula_unary()?)));
        }
        if self.at_keyword("forall") || self.at_keyword("exists") {
            let is_forall = self.at_keyword("forall");
            self.pos += 1;
            let var = self.ident("quantified variable")?;
            let body = Box::new(self.formula_unary()?);
            return Ok(if is_forall {
                Formula::Forall(var, body)
            } else {
                Formula::Exists(var, body)
            });
        }
        self.formula_primary()
    }

    fn formula_primary(&mut self) -> Result<Formula, ParseError> {
        if self.peek() == Some(&Tok::LParen) && !self.paren_is_expr() {
            self.pos += 1;
            let f = self.formula()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(f);
        }
        Ok(Formula::Atom(self.cond()?))
    }

    /// Disambiguate `(`: try to parse a parenthesized *formula*; if that
    /// fails the parens belong to an arithmetic expression inside an atom.
    fn paren_is_expr(&self) -> bool {
        let mut probe = Parser {
            tokens: self.tokens.clone(),
            pos: self.pos + 1,
        };
        let as_formula = probe.formula().is_ok() && probe.peek() == Some(&Tok::RParen);
        !as_formula
    }
}

fn check(p: &Program) -> Result<(), ParseError> {
    let dup_msg = |name: &str| ParseError::Check {
        msg: format!("duplicate declaration of `{name}`"),
    };
    let mut seen = std::collections::BTreeSet::new();
    for name in p
        .scalars
        .iter()
        .chain(p.arrays.iter())
        .chain(p.funs.iter().map(|(n, _)| n))
    {
        if !seen.insert(name.clone()) {
            return Err(dup_msg(name));
        }
    }
    for (name, _) in &p.inits {
        if !p.scalars.contains(name) {
            return Err(ParseError::Check {
                msg: format!("initializer for undeclared scalar `{name}`"),
            });
        }
        if p.inits.iter().filter(|(n, _)| n == name).count() > 1 {
            return Err(ParseError::Check {
                msg: format!("duplicate initializer for `{name}`"),
            });
        }
    }

    check_expr_decls(p, &p.guard.lhs, &mut Vec::new())?;
    check_expr_decls(p, &p.guard.rhs, &mut Vec::new())?;
    check_stmts(p, &p.body)?;
    if let Some(f) = &p.assertion {
        check_formula(p, f, &mut Vec::new())?;
    }
    Ok(())
}

fn check_stmts(p: &Program, stmts: &[Stmt]) -> Result<(), ParseError> {
    for s in stmts {
        match s {
            Stmt::Assign { var, rhs } => {
                if !p.scalars.contains(var) {
                    return Err(ParseError::Check {
                        msg: format!("assignment to undeclared scalar `{var}`"),
                    });
                }
                check_expr_decls(p, rhs, &mut Vec::new())?;
            }
            Stmt::ArrayAssign { array, index, rhs } => {
                if !p.arrays.contains(array) {
                    return Err(ParseError::Check {
                        msg: format!("assignment to undeclared array `{array}`"),
                    });
                }
                check_expr_decls(p, index, &mut Vec::new())?;
                check_expr_decls(p, rhs, &mut Vec::new())?;
            }
            Stmt::If {
                cond,
                then_branch,
                else_branch,
            } => {
                check_expr_decls(p, &cond.lhs, &mut Vec::new())?;
                check_expr_decls(p, &cond.rhs, &mut Vec::new())?;
                check_stmts(p, then_branch)?;
                check_stmts(p, else_branch)?;
            }
        }
    }
    Ok(())
}

fn check_expr_decls(p: &Program, e: &Expr, bound: &mut Vec<String>) -> Result<(), ParseError> {
    match e {
        Expr::Const(_) => Ok(()),
        Expr::Var(name) => {
            if p.scalars.contains(name) || bound.contains(name) {
                Ok(())
            } else {
                Err(ParseError::Check {
                    msg: format!("use of undeclared identifier `{name}`"),
                })
            }
        }
        Expr::ArrayRead(name, idx) => {
            if !p.arrays.contains(name) {
                return Err(ParseError::Check {
                    msg: format!("read of undeclared array `{name}`"),
                });
            }
            check_expr_decls(p, idx, bound)
        }
        Expr::Apply(name, args) => {
            let Some((_, arity)) = p.funs.iter().find(|(n, _)| n == name) else {
                return Err(ParseError::Check {
                    msg: format!("call of undeclared function `{name}`"),
                });
            };
            if *arity as usize != args.len() {
                return Err(ParseError::Check {
                    msg: format!(
                        "function `{name}` has arity {arity} but is applied to {} arguments",
                        args.len()
                    ),
                });
            }
            for a in args {
                check_expr_decls(p, a, bound)?;
            }
            Ok(())
        }
        Expr::Neg(a) => check_expr_decls(p, a, bound),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
            check_expr_decls(p, a, bound)?;
            check_expr_decls(p, b, bound)
        }
    }
}

fn check_formula(p: &Program, f: &Formula, bound: &mut Vec<String>) -> Result<(), ParseError> {
    match f {
        Formula::Atom(c) => {
            check_expr_decls(p, &c.lhs, bound)?;
            check_expr_decls(p, &c.rhs, bound)
        }
        Formula::Not(inner) => check_formula(p, inner, bound),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            check_formula(p, a, bound)?;
            check_formula(p, b, bound)
        }
        Formula::Forall(v, inner) | Formula::Exists(v, inner) => {
            if p.scalars.contains(v) || p.arrays.contains(v) || p.funs.iter().any(|(n, _)| n == v)
            {
                return Err(ParseError::Check {
                    msg: format!("quantified variable `{v}` shadows a declaration"),
                });
            }
            bound.push(v.clone());
            check_formula(p, inner, bound)?;
            bound.pop();
            Ok(())
        }
    }
}
