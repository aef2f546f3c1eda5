//! All polynomial relations among exponential sequences `base_i^k`.
//!
//! A vector `v ∈ Z^m` is a multiplicative relation when
//! `prod base_i^{v_i} = 1`, which holds exactly when the prime exponents of
//! the bases cancel and the number of negative bases used oddly is even.
//! Both conditions are linear: primes over `Z`, the sign over `Z/2`. The
//! sign condition is encoded without leaving `Z` by adjoining a virtual
//! generator `-1` of order two (a sign column plus a row `(0,...,0,2)`), so
//! the relation lattice is the integer left kernel of one exponent matrix,
//! computed exactly from a Hermite normal form. Kernel vectors are *not*
//! rescaled after the virtual coordinate is dropped — dividing `(2,0)` by 2
//! would turn the valid `z^2 = 1` into the false `z = 1` for base `-1`.
//!
//! The lattice basis maps to binomials `z^{v+} - z^{v-}`; the ideal of all
//! relations is their saturation by `z_1···z_m`, computed by adjoining
//! `$w·z_1···z_m - 1` and eliminating `$w`.

use num_traits::{One, Signed, Zero};

use crate::exactalg::{Int, Monomial, Polynomial, Rational, Vars};
use crate::groebner::{eliminate, GroebnerError, Ideal, Limits};

use super::solve::ZVar;

/// A basis of the lattice `{ v : prod base_i^{v_i} = 1 }`. Bases must be
/// nonzero.
pub fn relation_lattice(bases: &[Rational]) -> Vec<Vec<Int>> {
    assert!(
        bases.iter().all(|b| !b.is_zero()),
        "exponential bases are nonzero"
    );
    let mut primes: Vec<Int> = Vec::new();
    let mut factored = Vec::new();
    for b in bases {
        let num = factorize(&b.numer().abs());
        let den = factorize(&b.denom().abs());
        for (p, _) in num.iter().chain(den.iter()) {
            if !primes.contains(p) {
                primes.push(p.clone());
            }
        }
        factored.push((num, den, b.is_negative()));
    }
    primes.sort();

    // Rows: one per base, then the virtual -1; columns: primes, then sign.
    let mut matrix: Vec<Vec<Int>> = Vec::new();
    for (num, den, negative) in &factored {
        let mut row: Vec<Int> = primes
            .iter()
            .map(|p| {
                let up = num.iter().find(|(q, _)| q == p).map_or(0, |(_, e)| *e as i64);
                let down = den.iter().find(|(q, _)| q == p).map_or(0, |(_, e)| *e as i64);
                Int::from(up - down)
            })
            .collect();
        row.push(Int::from(i64::from(*negative)));
        matrix.push(row);
    }
    let mut virtual_row = vec![Int::zero(); primes.len()];
    virtual_row.push(Int::from(2));
    matrix.push(virtual_row);

    left_kernel(matrix)
        .into_iter()
        .map(|mut v| {
            v.pop(); // multiplicity of the virtual -1 generator
            v
        })
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect()
}

/// Generators (a reduced Groebner basis over the `z` names) of the ideal of
/// *all* polynomial relations valid for `z_i = base_i^k`, `k = 0, 1, 2, ...`
pub fn relation_ideal(zvars: &[ZVar], limits: &Limits) -> Result<Vec<Polynomial>, GroebnerError> {
    if zvars.is_empty() {
        return Ok(Vec::new());
    }
    let bases: Vec<Rational> = zvars.iter().map(|z| z.base.clone()).collect();
    let lattice = relation_lattice(&bases);
    if lattice.is_empty() {
        return Ok(Vec::new());
    }

    let mut names: Vec<String> = zvars.iter().map(|z| z.name.clone()).collect();
    names.push("$w".to_string());
    let ring = Vars::new(names);
    let m = zvars.len();

    let mut generators: Vec<Polynomial> = lattice
        .iter()
        .map(|v| binomial_of(v, &ring, m))
        .collect();
    // Saturation by the product of the z's: they never vanish, being powers
    // of nonzero bases.
    let mut all = vec![0u32; ring.len()];
    for e in all.iter_mut().take(m) {
        *e = 1;
    }
    all[m] = 1;
    let w_product = Polynomial::from_terms(
        &ring,
        [(Monomial::from_exps(all), Rational::one())],
    );
    generators.push(&w_product - &Polynomial::one(&ring));

    let ideal = Ideal::new(&ring, generators)?;
    Ok(eliminate(&ideal, &["$w"], limits)?.generators)
}

/// `z^{v+} - z^{v-}` over the first `m` variables of `ring`.
fn binomial_of(v: &[Int], ring: &Vars, m: usize) -> Polynomial {
    let mut plus = vec![0u32; ring.len()];
    let mut minus = vec![0u32; ring.len()];
    for i in 0..m {
        if v[i].is_positive() {
            plus[i] = u32::try_from(&v[i]).expect("small exponent");
        } else if v[i].is_negative() {
            minus[i] = u32::try_from(&(-&v[i])).expect("small exponent");
        }
    }
    Polynomial::from_terms(
        ring,
        [
            (Monomial::from_exps(plus), Rational::one()),
            (Monomial::from_exps(minus), -Rational::one()),
        ],
    )
}

/// Basis of `{ u : u·matrix = 0 }` over the integers: bring `matrix` to row
/// Hermite form by unimodular row operations mirrored on an identity matrix
/// `U`; the rows of `U` facing zero rows form the kernel.
fn left_kernel(mut matrix: Vec<Vec<Int>>) -> Vec<Vec<Int>> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let mut u: Vec<Vec<Int>> = (0..rows)
        .map(|i| (0..rows).map(|j| Int::from(u64::from(i == j))).collect())
        .collect();

    let mut pivot_row = 0;
    for col in 0..cols {
        loop {
            // Smallest nonzero entry of this column at or below the pivot.
            let candidate = (pivot_row..rows)
                .filter(|&i| !matrix[i][col].is_zero())
                .min_by_key(|&i| matrix[i][col].abs());
            let Some(best) = candidate else { break };
            matrix.swap(pivot_row, best);
            u.swap(pivot_row, best);

            let mut done = true;
            for i in pivot_row + 1..rows {
                if matrix[i][col].is_zero() {
                    continue;
                }
                let q = &matrix[i][col] / &matrix[pivot_row][col];
                if !q.is_zero() {
                    row_sub(&mut matrix, i, pivot_row, &q);
                    row_sub(&mut u, i, pivot_row, &q);
                }
                if !matrix[i][col].is_zero() {
                    done = false; // remainder left; another Euclid round
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < rows && !matrix[pivot_row][col].is_zero() {
            pivot_row += 1;
        }
        if pivot_row == rows {
            break;
        }
    }

    (0..rows)
        .filter(|&i| matrix[i].iter().all(Zero::is_zero))
        .map(|i| u[i].clone())
        .collect()
}

fn row_sub(m: &mut [Vec<Int>], target: usize, source: usize, q: &Int) {
    for j in 0..m[source].len() {
        let delta = q * &m[source][j];
        m[target][j] -= delta;
    }
}

fn factorize(n: &Int) -> Vec<(Int, u32)> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut p = Int::from(2);
    while &p * &p <= n {
        let mut e = 0u32;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if n > Int::one() {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use crate::exactalg::{parse_polynomial, rat, ratio};

    use super::*;

    fn zvars(bases: &[i64]) -> Vec<ZVar> {
        bases
            .iter()
            .enumerate()
            .map(|(i, &b)| ZVar {
                name: format!("z{}", i + 1),
                base: rat(b),
            })
            .collect()
    }

    fn ideal_text(bases: &[i64]) -> Vec<String> {
        let zv = zvars(bases);
        relation_ideal(&zv, &Limits::default())
            .unwrap()
            .iter()
            .map(Polynomial::to_text)
            .collect()
    }

    #[test]
    fn doubling_and_quadrupling_are_algebraically_linked() {
        assert_eq!(ideal_text(&[2, 4]), ["z1^2 - z2"]);
    }

    #[test]
    fn six_is_the_product_of_two_and_three() {
        assert_eq!(ideal_text(&[2, 3, 6]), ["z1*z2 - z3"]);
    }

    #[test]
    fn multiplicatively_independent_bases_have_no_relations() {
        assert!(ideal_text(&[2, 3]).is_empty());
        assert!(relation_lattice(&[rat(2), rat(3)]).is_empty());
    }

    #[test]
    fn sign_parity_is_kept_exactly() {
        // (-1)^k satisfies z^2 = 1 but not z = 1.
        assert_eq!(ideal_text(&[-1]), ["z1^2 - 1"]);
        // (-2)^k squared is 4^k; no relation of odd degree in z1 exists.
        assert_eq!(ideal_text(&[-2, 4]), ["z1^2 - z2"]);
        // (-2)·(-3) = 6: the signs cancel, so z1*z2 = z3 still holds...
        assert_eq!(ideal_text(&[-2, -3, 6]), ["z1*z2 - z3"]);
        // ...but 2 and -2 are only related at even powers.
        assert_eq!(ideal_text(&[2, -2]), ["z1^2 - z2^2"]);
    }

    #[test]
    fn rational_bases_factor_through_denominators() {
        let zv = vec![
            ZVar { name: "z1".into(), base: ratio(1, 2) },
            ZVar { name: "z2".into(), base: rat(2) },
        ];
        let gens = relation_ideal(&zv, &Limits::default()).unwrap();
        let ring = Vars::new(["z1", "z2"]);
        assert_eq!(
            gens,
            [parse_polynomial("z1*z2 - 1", &ring).unwrap()]
        );
    }

    #[test]
    fn powers_of_a_common_base_need_saturation_aware_generators() {
        // 2, 8 = 2^3: lattice basis {(3, -1)}; the saturated ideal adds
        // nothing new here, and the basis is canonical.
        assert_eq!(ideal_text(&[2, 8]), ["z1^3 - z2"]);
        // 4, 8: 4^3 = 8^2. Elimination returns the reduced basis of the full
        // relation ideal.
        assert_eq!(ideal_text(&[4, 8]), ["z1^3 - z2^2"]);
    }

    #[test]
    fn every_lattice_vector_is_a_true_relation() {
        for bases in [
            vec![rat(2), rat(4), rat(8)],
            vec![rat(-2), rat(4), rat(-8)],
            vec![rat(6), rat(10), rat(15), rat(30)],
            vec![ratio(2, 3), rat(6), rat(4), rat(9)],
        ] {
            let lattice = relation_lattice(&bases);
            assert!(!lattice.is_empty(), "{bases:?} should be dependent");
            for v in lattice {
                let mut value = Rational::one();
                for (b, e) in bases.iter().zip(&v) {
                    value *= b.pow(i32::try_from(e).unwrap());
                }
                assert!(value.is_one(), "{bases:?} ^ {v:?} = {value}");
            }
        }
    }
}
