//! Ansatz-based invariant discovery from concrete traces.
//!
//! Independent of the symbolic pipeline: fix a degree bound, list every
//! monomial over the loop's scalars and initial-value symbols, and treat
//! each snapshot of each trace as a linear constraint "the unknown
//! coefficient vector is orthogonal to this monomial valuation". The null
//! space of the constraint matrix — computed with exact rational
//! elimination, never floats — is then a basis of candidate invariants.
//!
//! Candidates are only as good as the traces that produced them, which is
//! the point: agreement with the algebraic pipeline is evidence for both.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::exactalg::{Monomial, MonomialOrder, Polynomial, Rational, Vars};
use crate::loopspec::{Program, Trace};

use super::harness::snapshot_point;
use super::pipeline::{choose_init_symbols, invariant_ring, written_scalars};

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub vars: Vars,
    pub init_symbols: BTreeMap<String, String>,
    /// Primitive integer candidates; together they span every degree-bounded
    /// polynomial that vanishes on all supplied snapshots.
    pub candidates: Vec<Polynomial>,
    /// Rows that actually sharpened the constraint system.
    pub rows_used: usize,
    pub rows_seen: usize,
}

/// All monomials of total degree at most `max_degree`, ascending under
/// degree-reverse-lexicographic order so output candidates come out in a
/// stable shape.
pub fn monomials_up_to(nvars: usize, max_degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    fill(&mut out, &mut exps, 0, max_degree);
    let order = MonomialOrder::degrevlex(nvars);
    out.sort_by(|a, b| order.compare(a, b));
    out
}

fn fill(out: &mut Vec<Monomial>, exps: &mut Vec<u32>, var: usize, budget: u32) {
    if var == exps.len() {
        out.push(Monomial::from_exps(exps.clone()));
        return;
    }
    for e in 0..=budget {
        exps[var] = e;
        fill(out, exps, var + 1, budget - e);
        exps[var] = 0;
    }
}

pub fn oracle_from_traces(program: &Program, traces: &[Trace], max_degree: u32) -> OracleResult {
    let written = written_scalars(program);
    let init_symbols = choose_init_symbols(program, &written);
    let vars = invariant_ring(program, &init_symbols);
    let monomials = monomials_up_to(vars.len(), max_degree);

    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for t in traces {
        for s in &t.snapshots {
            let point = snapshot_point(&vars, &init_symbols, t, s);
            rows.push(monomials.iter().map(|m| eval_monomial(m, &point)).collect());
        }
    }

    let mut rref = Rref::new(monomials.len());
    let mut used = 0;
    // Seed the system with as many rows as there are unknowns, then only pay
    // for elimination on rows that actually contradict the current null
    // space. With many long traces the vast majority are redundant.
    let seed = rows.len().min(monomials.len());
    for row in &rows[..seed] {
        if rref.insert(row.clone()) {
            used += 1;
        }
    }
    let mut null = rref.null_space();
    for row in &rows[seed..] {
        if null.iter().all(|v| dot(v, row).is_zero()) {
            continue;
        }
        if rref.insert(row.clone()) {
            used += 1;
        }
        null = rref.null_space();
    }

    let order = MonomialOrder::degrevlex(vars.len());
    let candidates = null
        .into_iter()
        .map(|coeffs| {
            let terms: Vec<_> = monomials
                .iter()
                .cloned()
                .zip(coeffs)
                .filter(|(_, c)| !c.is_zero())
                .collect();
            Polynomial::from_terms(&vars, terms)
                .primitive_integer_scaled()
                .sign_normalized(&order)
        })
        .collect();

    OracleResult {
        vars,
        init_symbols,
        candidates,
        rows_used: used,
        rows_seen: rows.len(),
    }
}

fn eval_monomial(m: &Monomial, point: &[Rational]) -> Rational {
    use num_traits::One;
    let mut acc = Rational::one();
    for (e, v) in m.exps().iter().zip(point) {
        for _ in 0..*e {
            acc = acc * v;
        }
    }
    acc
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Reduced row echelon form over the rationals, grown one row at a time.
struct Rref {
    cols: usize,
    rows: Vec<Vec<Rational>>,
    /// `pivots[r]` is the pivot column of `rows[r]`; strictly increasing.
    pivots: Vec<usize>,
}

impl Rref {
    fn new(cols: usize) -> Self {
        Rref { cols, rows: Vec::new(), pivots: Vec::new() }
    }

    /// Reduce `row` against the basis; if it is independent, normalize it,
    /// back-substitute into the existing rows, and keep it. Returns whether
    /// the row added information.
    fn insert(&mut self, mut row: Vec<Rational>) -> bool {
        debug_assert_eq!(row.len(), self.cols);
        for (r, &pc) in self.pivots.iter().enumerate() {
            if !row[pc].is_zero() {
                let factor = row[pc].clone();
                for c in 0..self.cols {
                    let delta = &factor * &self.rows[r][c];
                    row[c] = &row[c] - &delta;
                }
            }
        }
        let Some(pivot) = row.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let lead = row[pivot].clone();
        for c in row.iter_mut() {
            *c = &*c / &lead;
        }
        for r in 0..self.rows.len() {
            if !self.rows[r][pivot].is_zero() {
                let factor = self.rows[r][pivot].clone();
                for c in 0..self.cols {
                    let delta = &factor * &row[c];
                    self.rows[r][c] = &self.rows[r][c] - &delta;
                }
            }
        }
        let at = self.pivots.partition_point(|&pc| pc < pivot);
        self.rows.insert(at, row);
        self.pivots.insert(at, pivot);
        true
    }

    /// One basis vector per free column: set that column to 1 and read the
    /// pivot entries off the reduced rows.
    fn null_space(&self) -> Vec<Vec<Rational>> {
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if self.pivots.binary_search(&free).is_ok() {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = num_traits::One::one();
            for (r, &pc) in self.pivots.iter().enumerate() {
                v[pc] = -self.rows[r][free].clone();
            }
            basis.push(v);
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use crate::exactalg::{parse_polynomial, rat};
    use crate::groebner::{ideal_member, Ideal, Limits};
    use crate::loopspec::parse_program;
    use crate::polyinv::harness::{run_traces, HarnessConfig};
    use crate::polyinv::pipeline::{invariant_ideal, PipelineOptions};

    use super::*;

    #[test]
    fn monomial_enumeration_counts_match_stars_and_bars() {
        // C(n + d, d) monomials of degree <= d in n variables.
        assert_eq!(monomials_up_to(2, 3).len(), 10);
        assert_eq!(monomials_up_to(3, 2).len(), 10);
        assert_eq!(monomials_up_to(4, 3).len(), 35);
        let ms = monomials_up_to(2, 2);
        assert!(ms[0].is_one());
        assert!(ms.windows(2).all(|w| w[0].degree() <= w[1].degree()));
    }

    #[test]
    fn null_space_of_known_matrix() {
        // Rows (1, 1, -1) and (1, 2, 0): null space spanned by (2, -1, 1)
        // up to scale, i.e. x = 2z, y = -z.
        let mut rref = Rref::new(3);
        assert!(rref.insert(vec![rat(1), rat(1), rat(-1)]));
        assert!(rref.insert(vec![rat(1), rat(2), rat(0)]));
        assert!(!rref.insert(vec![rat(2), rat(3), rat(-1)]), "dependent row");
        let null = rref.null_space();
        assert_eq!(null.len(), 1);
        let v = &null[0];
        assert_eq!(&v[0] / &v[2], rat(2));
        assert_eq!(&v[1] / &v[2], rat(-1));
    }

    #[test]
    fn oracle_recovers_sum_of_squares_relations() {
        let src = "\
            vars a, s, n;\n\
            a := 0;\ns := 0;\n\
            while (a < n) { s := s + (a + 1) * (a + 1); a := a + 1; }\n";
        let program = parse_program(src).unwrap();
        let traces = run_traces(&program, &HarnessConfig::default()).unwrap();
        let result = oracle_from_traces(&program, &traces, 3);

        // Every candidate must vanish on the very traces it was fit to —
        // that is what a null-space vector means.
        for p in &result.candidates {
            assert!(super::super::harness::vanishes_on_traces(
                p,
                &result.init_symbols,
                &traces
            ));
        }

        // 6s = 2a^3 + 3a^2 + a is in the span.
        let target = parse_polynomial("6*s - 2*a^3 - 3*a^2 - a", &result.vars).unwrap();
        let limits = Limits::default();
        let ideal = Ideal::new(&result.vars, result.candidates.clone()).unwrap();
        assert!(ideal_member(&target, &ideal, &limits).unwrap());
        assert!(result.rows_used < result.rows_seen, "most rows are redundant");
    }

    #[test]
    fn oracle_and_pipeline_agree_on_branching_loop() {
        let src = "\
            vars a, b, c, n;\n\
            arrays A;\n\
            a := 0;\nb := 0;\nc := 0;\n\
            while (a < n) {\n\
              if (A[a] > 0) { b := b + 1; } else { c := c + 1; }\n\
              a := a + 1;\n\
            }\n";
        let program = parse_program(src).unwrap();
        let traces = run_traces(&program, &HarnessConfig::default()).unwrap();
        let oracle = oracle_from_traces(&program, &traces, 2);
        let analysis = invariant_ideal(&program, &PipelineOptions::default()).unwrap();
        let limits = Limits::default();

        // The proven basis is contained in the oracle's span (the traces
        // cannot refute a true invariant) ...
        let span = Ideal::new(&oracle.vars, oracle.candidates.clone()).unwrap();
        for p in &analysis.basis {
            let aligned = p.align_to(&oracle.vars).unwrap();
            assert!(ideal_member(&aligned, &span, &limits).unwrap());
        }
        // ... and a - b - c is a candidate the pipeline in turn proves.
        let target = parse_polynomial("a - b - c", &oracle.vars).unwrap();
        assert!(ideal_member(&target, &span, &limits).unwrap());
        assert!(analysis.implies(&target, &limits).unwrap());
    }
}
