use crate::exactalg::Int;

/// A parsed loop program: declarations, concrete initializers, one guarded
/// loop, and an optional first-order assertion (parsed and printed but not
/// interpreted by the analyses).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub scalars: Vec<String>,
    pub arrays: Vec<String>,
    pub funs: Vec<(String, u32)>,
    pub inits: Vec<(String, Int)>,
    pub guard: Cond,
    pub body: Vec<Stmt>,
    pub assertion: Option<Formula>,
}

impl Program {
    pub fn has_concrete_init(&self, scalar: &str) -> bool {
        self.inits.iter().any(|(n, _)| n == scalar)
    }

    pub fn init_value(&self, scalar: &str) -> Option<&Int> {
        self.inits
            .iter()
            .find(|(n, _)| n == scalar)
            .map(|(_, v)| v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Assign {
        var: String,
        rhs: Expr,
    },
    ArrayAssign {
        array: String,
        index: Expr,
        rhs: Expr,
    },
    If {
        cond: Cond,
        then_branch: Vec<Stmt>,
        else_branch: Vec<Stmt>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Const(Int),
    Var(String),
    ArrayRead(String, Box<Expr>),
    Apply(String, Vec<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

impl Expr {
    /// True when no array read or function application occurs anywhere.
    pub fn is_scalar_polynomial(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var(_) => true,
            Expr::ArrayRead(..) | Expr::Apply(..) => false,
            Expr::Neg(e) => e.is_scalar_polynomial(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.is_scalar_polynomial() && b.is_scalar_polynomial()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl RelOp {
    pub fn text(self) -> &'static str {
        match self {
            RelOp::Lt => "<",
            RelOp::Le => "<=",
            RelOp::Gt => ">",
            RelOp::Ge => ">=",
            RelOp::Eq => "==",
            RelOp::Ne => "!=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cond {
    pub lhs: Expr,
    pub op: RelOp,
    pub rhs: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Atom(Cond),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}
