use crate::exactalg::{MonomialOrder, Polynomial, Vars};

use super::{buchberger, GroebnerError, Ideal, Limits};

/// Elimination ideal: generators of `ideal ∩ Q[remaining variables]`,
/// computed from a Groebner basis under a block order with the dropped
/// variables in front. The returned ideal lives over the remaining
/// variables; its generators are the block-basis elements free of every
/// dropped variable, which form a reduced basis of the elimination ideal.
pub fn eliminate(
    ideal: &Ideal,
    drop: &[&str],
    limits: &Limits,
) -> Result<Ideal, GroebnerError> {
    let mut drop_idx = Vec::new();
    for name in drop {
        match ideal.vars.index(name) {
            Some(i) => drop_idx.push(i),
            None => return Err(GroebnerError::Alignment((*name).to_string())),
        }
    }
    let order = MonomialOrder::block(&drop_idx, ideal.vars.len());
    let gb = buchberger(&ideal.generators, &order, limits)?;
    let kept: Vec<String> = (0..ideal.vars.len())
        .filter(|i| !drop_idx.contains(i))
        .map(|i| ideal.vars.name(i).to_string())
        .collect();
    let target = Vars::new(kept);
    let mut gens = Vec::new();
    for g in &gb.basis {
        if drop_idx.iter().all(|&i| !g.uses_var(i)) {
            gens.push(g.align_to(&target).expect("dropped vars unused"));
        }
    }
    Ok(Ideal {
        vars: target,
        generators: gens,
    })
}

/// Ideal intersection via the tag-variable trick:
/// `I ∩ J = (t·I + (1−t)·J) ∩ Q[vars]` for a fresh `t`.
pub fn intersect(a: &Ideal, b: &Ideal, limits: &Limits) -> Result<Ideal, GroebnerError> {
    assert!(a.vars == b.vars, "intersect requires one ambient variable list");
    let tagged = Vars::new(["$t"]).extended(a.vars.names().iter().cloned());
    let t = Polynomial::var(&tagged, "$t").unwrap();
    let one_minus_t = &Polynomial::one(&tagged) - &t;
    let mut gens = Vec::new();
    for f in &a.generators {
        gens.push(&t * &f.align_to(&tagged).expect("superset ambient"));
    }
    for g in &b.generators {
        gens.push(&one_minus_t * &g.align_to(&tagged).expect("superset ambient"));
    }
    let tagged_ideal = Ideal {
        vars: tagged,
        generators: gens,
    };
    eliminate(&tagged_ideal, &["$t"], limits)
}

/// Exact membership: `f ∈ ideal` iff its normal form modulo a degrevlex
/// basis vanishes.
pub fn ideal_member(
    f: &Polynomial,
    ideal: &Ideal,
    limits: &Limits,
) -> Result<bool, GroebnerError> {
    let aligned = f.align_to(&ideal.vars).map_err(|e| match e {
        crate::exactalg::AlignError::MissingVariable(v) => GroebnerError::Alignment(v),
    })?;
    let order = MonomialOrder::degrevlex(ideal.vars.len());
    let gb = buchberger(&ideal.generators, &order, limits)?;
    Ok(gb.reduce(&aligned).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_polynomial;

    fn p(text: &str, vars: &Vars) -> Polynomial {
        parse_polynomial(text, vars).unwrap()
    }

    fn canonical(i: &Ideal) -> Vec<Polynomial> {
        let order = MonomialOrder::degrevlex(i.vars.len());
        buchberger(&i.generators, &order, &Limits::default())
            .unwrap()
            .basis
    }

    #[test]
    fn eliminating_the_counter_recovers_the_sum_identity() {
        // <a - k, 6s - 2k^3 - 3k^2 - k> with k dropped leaves the ideal
        // generated by 6s - 2a^3 - 3a^2 - a.
        let v = Vars::new(["k", "a", "s"]);
        let ideal = Ideal::new(
            &v,
            [
                p("a - k", &v),
                p("6*s - 2*k^3 - 3*k^2 - k", &v),
            ],
        )
        .unwrap();
        let out = eliminate(&ideal, &["k"], &Limits::default()).unwrap();
        assert_eq!(out.vars, Vars::new(["a", "s"]));
        let expect = Ideal::new(&out.vars, [p("6*s - 2*a^3 - 3*a^2 - a", &out.vars)]).unwrap();
        assert_eq!(canonical(&out), canonical(&expect));
    }

    #[test]
    fn elimination_output_never_mentions_dropped_vars() {
        let v = Vars::new(["t", "x", "y"]);
        let ideal = Ideal::new(
            &v,
            [p("t^2 - x", &v), p("t^3 - y", &v)],
        )
        .unwrap();
        let out = eliminate(&ideal, &["t"], &Limits::default()).unwrap();
        assert!(out.vars.index("t").is_none());
        // x^3 = t^6 = y^2 on the curve.
        assert!(ideal_member(
            &p("x^3 - y^2", &out.vars),
            &out,
            &Limits::default()
        )
        .unwrap());
    }

    #[test]
    fn intersection_of_coordinate_ideals() {
        let v = Vars::new(["x", "y"]);
        let ix = Ideal::new(&v, [p("x", &v)]).unwrap();
        let iy = Ideal::new(&v, [p("y", &v)]).unwrap();
        let both = intersect(&ix, &iy, &Limits::default()).unwrap();
        let expect = Ideal::new(&v, [p("x*y", &v)]).unwrap();
        assert_eq!(canonical(&both), canonical(&expect));
    }

    #[test]
    fn intersection_multiplies_coprime_linear_ideals() {
        let v = Vars::new(["x"]);
        let a = Ideal::new(&v, [p("x - 1", &v)]).unwrap();
        let b = Ideal::new(&v, [p("x + 1", &v)]).unwrap();
        let both = intersect(&a, &b, &Limits::default()).unwrap();
        let expect = Ideal::new(&v, [p("x^2 - 1", &v)]).unwrap();
        assert_eq!(canonical(&both), canonical(&expect));
    }

    #[test]
    fn membership_in_the_empty_ideal_is_zero_only() {
        let v = Vars::new(["x"]);
        let zero = Ideal::new(&v, []).unwrap();
        assert!(ideal_member(&Polynomial::zero(&v), &zero, &Limits::default()).unwrap());
        assert!(!ideal_member(&p("x", &v), &zero, &Limits::default()).unwrap());
    }
}
