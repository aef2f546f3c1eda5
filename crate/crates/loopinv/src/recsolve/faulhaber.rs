//! Power-sum polynomials: `S_d(k) = 0^d + 1^d + ... + (k-1)^d` as an exact
//! polynomial in `k`, and summation of arbitrary polynomials below `k`.
//!
//! Built from the telescoping identity `sum_{j<k} ((j+1)^{d+1} - j^{d+1}) =
//! k^{d+1}`: expanding the left side gives `sum_{e<=d} C(d+1,e) S_e = k^{d+1}`
//! and hence `S_d = (k^{d+1} - sum_{e<d} C(d+1,e) S_e) / (d+1)` with
//! `S_0 = k`.

use num_integer::binomial;
use num_traits::One;

use crate::exactalg::{Int, Monomial, Polynomial, Rational, Vars};

/// The power sum `S_d(k)` in the variable at `k_idx` of `vars`.
pub fn power_sum(d: u32, vars: &Vars, k_idx: usize) -> Polynomial {
    power_sums_up_to(d, vars, k_idx)
        .pop()
        .expect("at least S_0")
}

fn power_sums_up_to(d: u32, vars: &Vars, k_idx: usize) -> Vec<Polynomial> {
    let k = Polynomial::var_idx(vars, k_idx);
    let mut sums = vec![k.clone()];
    for step in 1..=d {
        let mut rhs = k.pow(step + 1);
        for e in 0..step {
            let c = Rational::from_integer(binomial(Int::from(step + 1), Int::from(e)));
            rhs = &rhs - &sums[e as usize].scale(&c);
        }
        sums.push(rhs.scale(&Rational::new(Int::one(), Int::from(step + 1))));
    }
    sums
}

/// `sum_{j=0}^{k-1} p(j)`, where occurrences of the variable at `k_idx` in
/// `p` play the role of the summation index `j`. Every other variable is a
/// constant of the summation. The result is again a polynomial in `k` (one
/// degree higher), with zero constant term in `k`, so it vanishes at `k = 0`.
pub fn sum_below(p: &Polynomial, k_idx: usize) -> Polynomial {
    let d = p.degree_in(k_idx);
    let sums = power_sums_up_to(d, p.vars(), k_idx);
    let mut acc = Polynomial::zero(p.vars());
    for (m, c) in p.terms() {
        let e = m.exps()[k_idx] as usize;
        let mut rest = m.exps().to_vec();
        rest[k_idx] = 0;
        let carrier = Polynomial::from_terms(p.vars(), [(Monomial::from_exps(rest), c.clone())]);
        acc = &acc + &(&carrier * &sums[e]);
    }
    acc
}

#[cfg(test)]
mod tests {
    use crate::exactalg::{parse_polynomial, rat};

    use super::*;

    fn k_ring() -> Vars {
        Vars::new(["k"])
    }

    fn expect(text: &str) -> Polynomial {
        parse_polynomial(text, &k_ring()).unwrap()
    }

    #[test]
    fn low_degree_power_sums_match_the_classical_formulas() {
        let vars = k_ring();
        assert_eq!(power_sum(0, &vars, 0), expect("k"));
        assert_eq!(power_sum(1, &vars, 0), expect("1/2*k^2 - 1/2*k"));
        assert_eq!(
            power_sum(2, &vars, 0),
            expect("1/3*k^3 - 1/2*k^2 + 1/6*k")
        );
        assert_eq!(
            power_sum(3, &vars, 0),
            expect("1/4*k^4 - 1/2*k^3 + 1/4*k^2")
        );
    }

    #[test]
    fn power_sums_agree_with_direct_summation() {
        let vars = k_ring();
        for d in 0..8u32 {
            let poly = power_sum(d, &vars, 0);
            for k in 0..12i64 {
                let direct: i64 = (0..k).map(|j| j.pow(d)).sum();
                assert_eq!(poly.eval(&[rat(k)]), rat(direct), "S_{d}({k})");
            }
        }
    }

    #[test]
    fn summing_the_shifted_square_gives_the_pyramid_numbers() {
        // sum_{j<k} (j+1)^2 = k(k+1)(2k+1)/6, the classical closed form for
        // 1^2 + 2^2 + ... + k^2.
        let shifted_square = expect("k^2 + 2*k + 1");
        let total = sum_below(&shifted_square, 0);
        assert_eq!(total, expect("1/3*k^3 + 1/2*k^2 + 1/6*k"));
    }

    #[test]
    fn other_variables_are_summation_constants() {
        let vars = Vars::new(["k", "c"]);
        // sum_{j<k} (c*j + c^2) = c*k(k-1)/2 + c^2*k
        let p = parse_polynomial("c*k + c^2", &vars).unwrap();
        let total = sum_below(&p, 0);
        let want = parse_polynomial("1/2*c*k^2 - 1/2*c*k + c^2*k", &vars).unwrap();
        assert_eq!(total, want);
        // and it vanishes at k = 0 whatever c is
        assert_eq!(total.eval(&[rat(0), rat(7)]), rat(0));
    }
}
