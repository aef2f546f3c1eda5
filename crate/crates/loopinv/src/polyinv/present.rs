//! Turning a Gröbner basis into something a person wants to read.
//!
//! A reduced basis is canonical but not kind: the partition loop's ideal
//! comes back with the cubic sum identity folded into mixed generators.
//! The trick here is to re-eliminate onto every small subset of the written
//! scalars (size 1, then 2, then 3) and prefer whatever shows up there —
//! those are the facts that mention as few variables as possible, which is
//! invariably the form people quote. Generators the subset pass cannot
//! express are appended from the basis so the presented set still generates
//! the full ideal.

use crate::exactalg::{MonomialOrder, Polynomial};
use crate::groebner::{eliminate, ideal_member, GroebnerError, Ideal, Limits};

use super::pipeline::InvariantAnalysis;

const MAX_SUBSET: usize = 3;

pub fn presented_invariants(
    analysis: &InvariantAnalysis,
    limits: &Limits,
) -> Result<Vec<Polynomial>, GroebnerError> {
    let full = Ideal::new(&analysis.vars, analysis.basis.clone())?;
    let names = analysis.vars.names();

    let mut kept: Vec<Polynomial> = Vec::new();
    for size in 1..=MAX_SUBSET.min(analysis.written.len()) {
        for subset in combinations(&analysis.written, size) {
            let drop: Vec<&str> = names
                .iter()
                .map(String::as_str)
                .filter(|v| !subset.contains(v))
                .collect();
            let projected = eliminate(&full, &drop, limits)?;
            for g in &projected.generators {
                let lifted = g.align_to(&analysis.vars)?;
                if !in_span(&lifted, &kept, analysis, limits)? {
                    kept.push(lifted);
                }
            }
        }
    }
    for g in &analysis.basis {
        if !in_span(g, &kept, analysis, limits)? {
            kept.push(g.clone());
        }
    }

    let order = MonomialOrder::degrevlex(analysis.vars.len());
    let mut out: Vec<Polynomial> = kept
        .into_iter()
        .map(|p| p.primitive_integer_scaled().sign_normalized(&order))
        .collect();
    out.sort_by_key(|p| (p.total_degree(), p.num_terms(), p.to_text()));
    Ok(out)
}

fn in_span(
    p: &Polynomial,
    kept: &[Polynomial],
    analysis: &InvariantAnalysis,
    limits: &Limits,
) -> Result<bool, GroebnerError> {
    if kept.is_empty() {
        return Ok(p.is_zero());
    }
    let span = Ideal::new(&analysis.vars, kept.to_vec())?;
    ideal_member(p, &span, limits)
}

fn combinations<'a>(items: &'a [String], size: usize) -> Vec<Vec<&'a str>> {
    let mut out = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    fn rec<'a>(
        items: &'a [String],
        size: usize,
        from: usize,
        current: &mut Vec<&'a str>,
        out: &mut Vec<Vec<&'a str>>,
    ) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for i in from..items.len() {
            current.push(&items[i]);
            rec(items, size, i + 1, current, out);
            current.pop();
        }
    }
    rec(items, size, 0, &mut current, &mut out);
    out
}

/// Print order tailored to the polynomial: variables with small maximal
/// exponent are more significant, ties broken by declaration order. That
/// puts the "solved-for" variable first (`6*s - 2*a^3 - ...`) and keeps
/// linear facts in declaration order (`a - b - c`).
pub fn presentation_order(p: &Polynomial) -> MonomialOrder {
    let mut idx: Vec<usize> = (0..p.vars().len()).collect();
    idx.sort_by_key(|&i| (p.degree_in(i), i));
    MonomialOrder::lex_with(idx)
}

pub fn render(p: &Polynomial) -> String {
    let order = presentation_order(p);
    p.primitive_integer_scaled()
        .sign_normalized(&order)
        .to_text_with(&order)
}

#[cfg(test)]
mod tests {
    use crate::exactalg::parse_polynomial;
    use crate::loopspec::parse_program;
    use crate::polyinv::pipeline::{invariant_ideal, PipelineOptions};

    use super::*;

    fn fig1_analysis() -> InvariantAnalysis {
        let src = std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../corpus/fig1.loop"
        ))
        .unwrap();
        let program = parse_program(&src).unwrap();
        invariant_ideal(&program, &PipelineOptions::default()).unwrap()
    }

    #[test]
    fn partition_loop_presents_the_quoted_identities() {
        let analysis = fig1_analysis();
        let limits = Limits::default();
        let shown = presented_invariants(&analysis, &limits).unwrap();
        let texts: Vec<String> = shown.iter().map(render).collect();
        assert!(
            texts.contains(&"a - b - c".to_string()),
            "partition count fact missing from {texts:?}"
        );
        assert!(
            texts.contains(&"6*s - 2*a^3 - 3*a^2 - a".to_string()),
            "square-sum fact missing from {texts:?}"
        );
    }

    #[test]
    fn presented_set_generates_the_same_ideal() {
        let analysis = fig1_analysis();
        let limits = Limits::default();
        let shown = presented_invariants(&analysis, &limits).unwrap();
        let span = Ideal::new(&analysis.vars, shown.clone()).unwrap();
        for g in &analysis.basis {
            assert!(ideal_member(g, &span, &limits).unwrap());
        }
        for p in &shown {
            assert!(analysis.implies(p, &limits).unwrap());
        }
    }

    #[test]
    fn render_orders_terms_by_sparsest_variable_first() {
        let vars = crate::exactalg::Vars::new(["a", "b", "c", "s"]);
        let p = parse_polynomial("2*a^3 + 3*a^2 + a - 6*s", &vars).unwrap();
        assert_eq!(render(&p), "6*s - 2*a^3 - 3*a^2 - a");
        let q = parse_polynomial("-a + b + c", &vars).unwrap();
        assert_eq!(render(&q), "a - b - c");
        let r = parse_polynomial("b*b - a", &vars).unwrap();
        assert_eq!(render(&r), "a - b^2");
    }

    #[test]
    fn combinations_enumerate_in_declaration_order() {
        let items: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
        assert_eq!(
            combinations(&items, 2),
            vec![vec!["a", "b"], vec!["a", "c"], vec!["b", "c"]]
        );
        assert_eq!(combinations(&items, 3).len(), 1);
    }
}
