use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{Int, Monomial, MonomialOrder, Rational};

/// Ordered ambient variable list. Cheap to clone; equality is by content,
/// so two independently built lists with the same names are interchangeable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vars(Arc<Vec<String>>);

impl Vars {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Vars(Arc::new(names.into_iter().map(Into::into).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.0[idx]
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    /// New list with `more` appended (duplicates are rejected by debug
    /// assertion; ambient lists must never contain repeated names).
    pub fn extended<S: Into<String>>(&self, more: impl IntoIterator<Item = S>) -> Vars {
        let mut names: Vec<String> = self.0.as_ref().clone();
        for n in more {
            let n = n.into();
            debug_assert!(!names.contains(&n), "duplicate variable {n}");
            names.push(n);
        }
        Vars(Arc::new(names))
    }
}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vars{:?}", self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlignError {
    #[error("variable `{0}` does not exist in the target ambient list")]
    MissingVariable(String),
}

/// Multivariate polynomial with exact rational coefficients.
///
/// The term map is canonical: no zero coefficients, keys compared by plain
/// exponent-vector order. Two polynomials over equal ambient lists are equal
/// iff their term maps are equal. Arithmetic panics on ambient mismatch;
/// callers combining polynomials from different rings go through
/// [`Polynomial::align_to`] first, which is where mismatches surface as
/// proper errors.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    vars: Vars,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(vars: &Vars) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &Vars) -> Self {
        Polynomial::constant(vars, Rational::one())
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(vars.len()), c);
        }
        Polynomial {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn var(vars: &Vars, name: &str) -> Option<Self> {
        let idx = vars.index(name)?;
        Some(Polynomial::var_idx(vars, idx))
    }

    pub fn var_idx(vars: &Vars, idx: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(vars.len(), idx), Rational::one());
        Polynomial {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn from_terms(
        vars: &Vars,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), vars.len());
            if c.is_zero() {
                continue;
            }
            match map.entry(m) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = e.get() + &c;
                    if sum.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = sum;
                    }
                }
            }
        }
        Polynomial { vars: vars.clone(), terms: map }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exps()[idx])
            .max()
            .unwrap_or(0)
    }

    pub fn uses_var(&self, idx: usize) -> bool {
        self.terms.keys().any(|m| m.exps()[idx] > 0)
    }

    /// Leading term under `order`; `None` for zero.
    pub fn leading(&self, order: &MonomialOrder) -> Option<(&Monomial, &Rational)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| order.compare(a, b))
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.vars);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact evaluation at a rational point (`point.len() == nvars`).
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len(), "evaluation point arity");
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t *= point[i].pow(e as i32);
                }
            }
            total += t;
        }
        total
    }

    /// Full composition: replace variable `i` by `images[i]`. All images
    /// must share one ambient list, which becomes the result's.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.vars.len(), "substitution arity");
        let target = images
            .first()
            .map(|p| p.vars.clone())
            .unwrap_or_else(|| self.vars.clone());
        for img in images {
            assert!(img.vars == target, "substitution images must share an ambient list");
        }
        // Cache powers of each image as needed.
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![Polynomial::one(&target), p.clone()])
            .collect();
        let mut acc = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Re-embed into `target`, matching variables by name. Fails if a
    /// variable actually used by a term is missing from `target`.
    pub fn align_to(&self, target: &Vars) -> Result<Polynomial, AlignError> {
        if self.vars == *target {
            return Ok(self.clone());
        }
        let mut map = vec![0usize; self.vars.len()];
        for i in 0..self.vars.len() {
            match target.index(self.vars.name(i)) {
                Some(j) => map[i] = j,
                None => {
                    if self.uses_var(i) {
                        return Err(AlignError::MissingVariable(self.vars.name(i).to_string()));
                    }
                    map[i] = 0; // unused, any slot works
                }
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.remap(&map, target.len()), c.clone()))
            .collect::<Vec<_>>();
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Positive rational multiple of `self` with coprime integer
    /// coefficients (content removed). Zero stays zero.
    pub fn primitive_integer_scaled(&self) -> Polynomial {
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut denom_lcm = Int::one();
        for c in self.terms.values() {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let mut numer_gcd = Int::zero();
        for c in self.terms.values() {
            let scaled = c.numer() * (&denom_lcm / c.denom());
            numer_gcd = numer_gcd.gcd(&scaled);
        }
        let factor = Rational::new(denom_lcm, numer_gcd);
        self.scale(&factor.abs())
    }

    /// Flip sign so the leading coefficient under `order` is positive.
    pub fn sign_normalized(&self, order: &MonomialOrder) -> Polynomial {
        match self.leading(order) {
            Some((_, c)) if c.is_negative() => -self,
            _ => self.clone(),
        }
    }

    /// Canonical text rendering: terms descending under degrevlex in
    /// declaration priority, explicit `*` and `^`. Parses back via
    /// [`super::parse_polynomial`].
    pub fn to_text(&self) -> String {
        self.to_text_with(&MonomialOrder::degrevlex(self.vars.len()))
    }

    pub fn to_text_with(&self, order: &MonomialOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| order.compare(b, a));
        let mut out = String::new();
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.monomial_text(m);
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&mag.to_string());
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }

    fn monomial_text(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exps().iter().enumerate() {
            if e == 1 {
                parts.push(self.vars.name(i).to_string());
            } else if e > 1 {
                parts.push(format!("{}^{}", self.vars.name(i), e));
            }
        }
        parts.join("*")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "poly({})", self.to_text())
    }
}

fn check_same_vars(a: &Polynomial, b: &Polynomial) {
    assert!(
        a.vars == b.vars,
        "ambient variable lists differ ({:?} vs {:?}); align_to first",
        a.vars,
        b.vars
    );
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        check_same_vars(self, rhs);
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            match terms.entry(m.clone()) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = e.get() + c;
                    if sum.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = sum;
                    }
                }
            }
        }
        Polynomial {
            vars: self.vars.clone(),
            terms,
        }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        check_same_vars(self, rhs);
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.entry(m) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let sum = e.get() + &c;
                        if sum.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = sum;
                        }
                    }
                }
            }
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: acc,
        }
    }
}

/// Multivariate division with remainder: `f = sum(q_i * d_i) + r` where no
/// monomial of `r` is divisible by any divisor's leading monomial.
///
/// Deterministic: at each step the first divisor (in list order) whose
/// leading monomial divides the working leading term is used; zero divisors
/// are skipped. Full reduction — when no divisor applies, the leading term
/// moves to the remainder and reduction continues on the rest.
pub fn poly_reduce(
    f: &Polynomial,
    divisors: &[Polynomial],
    order: &MonomialOrder,
) -> (Vec<Polynomial>, Polynomial) {
    for d in divisors {
        check_same_vars(f, d);
    }
    let leads: Vec<Option<(Monomial, Rational)>> = divisors
        .iter()
        .map(|d| d.leading(order).map(|(m, c)| (m.clone(), c.clone())))
        .collect();
    let mut quotients = vec![Polynomial::zero(f.vars()); divisors.len()];
    let mut remainder = Polynomial::zero(f.vars());
    let mut work = f.clone();
    while let Some((wm, wc)) = work.leading(order).map(|(m, c)| (m.clone(), c.clone())) {
        let mut reduced = false;
        for (i, lead) in leads.iter().enumerate() {
            let Some((dm, dc)) = lead else { continue };
            if let Some(q) = dm.quotient_of(&wm) {
                let factor = &wc / dc;
                quotients[i] = &quotients[i]
                    + &Polynomial::from_terms(f.vars(), [(q.clone(), factor.clone())]);
                work = &work - &divisors[i].mul_term(&q, &factor);
                reduced = true;
                break;
            }
        }
        if !reduced {
            let term = Polynomial::from_terms(f.vars(), [(wm, wc)]);
            remainder = &remainder + &term;
            work = &work - &term;
        }
    }
    (quotients, remainder)
}

#[cfg(test)]
mod tests {
    use super::super::{parse_polynomial, rat, ratio};
    use super::*;

    fn vars_xy() -> Vars {
        Vars::new(["x", "y"])
    }

    fn p(text: &str, vars: &Vars) -> Polynomial {
        parse_polynomial(text, vars).unwrap()
    }

    #[test]
    fn binomial_row_of_fifth_power() {
        let v = vars_xy();
        let f = p("x + y", &v).pow(5);
        let expect = p(
            "x^5 + 5*x^4*y + 10*x^3*y^2 + 10*x^2*y^3 + 5*x*y^4 + y^5",
            &v,
        );
        assert_eq!(f, expect);
    }

    #[test]
    fn textbook_division_example() {
        // Divide x^2*y + x*y^2 + y^2 by [x*y - 1, y^2 - 1] under lex x > y.
        let v = vars_xy();
        let f = p("x^2*y + x*y^2 + y^2", &v);
        let d = [p("x*y - 1", &v), p("y^2 - 1", &v)];
        let order = MonomialOrder::lex(2);
        let (q, r) = poly_reduce(&f, &d, &order);
        assert_eq!(q[0], p("x + y", &v));
        assert_eq!(q[1], p("1", &v));
        assert_eq!(r, p("x + y + 1", &v));
        // Division identity.
        let recomposed = &(&(&q[0] * &d[0]) + &(&q[1] * &d[1])) + &r;
        assert_eq!(recomposed, f);
    }

    #[test]
    fn remainder_monomials_are_irreducible() {
        let v = vars_xy();
        let f = p("x^3*y^2 - 7*x + 2*y - 5", &v);
        let d = [p("x^2 - y", &v), p("x*y + 1", &v)];
        let order = MonomialOrder::degrevlex(2);
        let (_, r) = poly_reduce(&f, &d, &order);
        for (m, _) in r.terms() {
            for di in &d {
                let (lm, _) = di.leading(&order).unwrap();
                assert!(!lm.divides(m));
            }
        }
    }

    #[test]
    fn eval_is_exact() {
        let v = vars_xy();
        let f = p("1/2*x^2 - 1/3*y + 7", &v);
        let got = f.eval(&[ratio(1, 2), ratio(3, 4)]);
        // 1/2 * 1/4 - 1/3 * 3/4 + 7 = 1/8 - 1/4 + 7 = 55/8 + ... compute: 1/8 - 2/8 = -1/8; 7 - 1/8 = 55/8
        assert_eq!(got, ratio(55, 8));
    }

    #[test]
    fn substitute_shifts_variable() {
        let kv = Vars::new(["k"]);
        let f = {
            let x = Polynomial::var(&kv, "k").unwrap();
            &x * &x // k^2
        };
        let image = {
            let k = Polynomial::var(&kv, "k").unwrap();
            &k + &Polynomial::one(&kv)
        };
        let shifted = f.substitute(&[image]);
        assert_eq!(shifted, p("k^2 + 2*k + 1", &kv));
    }

    #[test]
    fn align_reports_missing_variable() {
        let v = vars_xy();
        let w = Vars::new(["x"]);
        let f = p("x + y", &v);
        assert_eq!(
            f.align_to(&w),
            Err(AlignError::MissingVariable("y".into()))
        );
        let g = p("x^2 + 1", &v);
        assert!(g.align_to(&w).is_ok(), "unused variables may be dropped");
    }

    #[test]
    fn primitive_scaling_clears_denominators() {
        let v = vars_xy();
        let f = p("1/3*x^2 + 1/2*x - 1", &v);
        let g = f.primitive_integer_scaled();
        assert_eq!(g, p("2*x^2 + 3*x - 6", &v));
        assert_eq!(rat(0), rat(0)); // keep rat import exercised
    }

    #[test]
    fn text_round_trip_canonical() {
        let v = vars_xy();
        for text in ["x^2*y - 2*x + 1/2", "0", "-x + y", "3"] {
            let f = p(text, &v);
            assert_eq!(p(&f.to_text(), &v), f);
        }
        assert_eq!(p("x^2*y - 2*x + 1/2", &v).to_text(), "x^2*y - 2*x + 1/2");
    }
}
