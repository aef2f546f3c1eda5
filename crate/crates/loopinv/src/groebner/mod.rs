//! Groebner bases over the rationals: Buchberger's algorithm with the
//! coprimality and chain criteria, reduced-basis normalization, and the
//! ideal operations the invariant pipeline needs — variable elimination
//! through block orders, intersection via the tag-variable trick, and
//! membership through normal forms.
//!
//! Bases here are always *reduced* (monic, autoreduced, sorted by leading
//! monomial), so a basis is a canonical form of its ideal: permuting input
//! generators yields an identical basis vector.

mod buchberger;
mod ops;

pub use buchberger::{buchberger, s_polynomial, GroebnerBasis};
pub use ops::{eliminate, ideal_member, intersect};

use thiserror::Error;

use crate::exactalg::{Polynomial, Vars};

/// Resource limits for basis computations. The defaults bound every
/// computation the toolkit performs; exceeding them is reported as an
/// error, never as a wrong or truncated answer.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    /// Maximum number of basis candidates Buchberger may accumulate.
    pub max_basis: usize,
    /// Maximum total degree of any intermediate basis element.
    pub max_degree: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_basis: 5000,
            max_degree: 40,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("basis candidate cap exceeded ({limit} polynomials)")]
    BasisCap { limit: usize },
    #[error("total degree cap exceeded (degree {degree} > {limit})")]
    DegreeCap { degree: u64, limit: u64 },
    #[error("generator uses variable `{0}` missing from the ambient list")]
    Alignment(String),
}

impl From<crate::exactalg::AlignError> for GroebnerError {
    fn from(e: crate::exactalg::AlignError) -> Self {
        match e {
            crate::exactalg::AlignError::MissingVariable(v) => GroebnerError::Alignment(v),
        }
    }
}

/// A polynomial ideal presented by generators over an ambient variable list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    pub vars: Vars,
    pub generators: Vec<Polynomial>,
}

impl Ideal {
    /// Build an ideal, aligning every generator to `vars` by name and
    /// dropping zero generators.
    pub fn new(
        vars: &Vars,
        generators: impl IntoIterator<Item = Polynomial>,
    ) -> Result<Self, GroebnerError> {
        let mut gens = Vec::new();
        for g in generators {
            let aligned = g.align_to(vars)?;
            if !aligned.is_zero() {
                gens.push(aligned);
            }
        }
        Ok(Ideal {
            vars: vars.clone(),
            generators: gens,
        })
    }
}
