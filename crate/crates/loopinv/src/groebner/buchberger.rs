use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use num_traits::One;

use crate::exactalg::{poly_reduce, Monomial, MonomialOrder, Polynomial, Rational};

use super::{GroebnerError, Limits};

/// The S-polynomial of `f` and `g`: both are scaled so their leading terms
/// equal lcm(lm f, lm g) and subtracted, cancelling the leads.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial, order: &MonomialOrder) -> Polynomial {
    let (fm, fc) = f.leading(order).expect("s_polynomial of zero");
    let (gm, gc) = g.leading(order).expect("s_polynomial of zero");
    let lcm = fm.lcm(gm);
    let fq = fm.quotient_of(&lcm).unwrap();
    let gq = gm.quotient_of(&lcm).unwrap();
    let a = f.mul_term(&fq, &(Rational::one() / fc));
    let b = g.mul_term(&gq, &(Rational::one() / gc));
    &a - &b
}

/// A reduced Groebner basis: monic, autoreduced, sorted ascending by
/// leading monomial. Canonical for the ideal and order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub basis: Vec<Polynomial>,
    pub order: MonomialOrder,
}

impl GroebnerBasis {
    /// Normal form of `f` modulo the basis: the unique remainder with no
    /// monomial divisible by any basis leading monomial.
    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        let (_, r) = poly_reduce(f, &self.basis, &self.order);
        r
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.reduce(f).is_zero()
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }
}

struct PairQueue {
    heap: BinaryHeap<Reverse<(u64, u64, usize, usize)>>,
    seq: u64,
}

impl PairQueue {
    fn new() -> Self {
        PairQueue {
            heap: BinaryHeap::new(),
            seq: 0,
        }
    }

    fn push(&mut self, lcm_degree: u64, i: usize, j: usize) {
        self.heap.push(Reverse((lcm_degree, self.seq, i, j)));
        self.seq += 1;
    }

    fn pop(&mut self) -> Option<(usize, usize)> {
        self.heap.pop().map(|Reverse((_, _, i, j))| (i, j))
    }
}

/// Buchberger's algorithm with the coprimality criterion and the chain
/// criterion, a deterministic pair queue (lcm degree, then insertion
/// order), and resource caps. Returns the reduced basis.
pub fn buchberger(
    generators: &[Polynomial],
    order: &MonomialOrder,
    limits: &Limits,
) -> Result<GroebnerBasis, GroebnerError> {
    let mut basis: Vec<Polynomial> = Vec::new();
    for g in generators {
        if g.is_zero() {
            continue;
        }
        check_degree(g, limits)?;
        let (_, c) = g.leading(order).unwrap();
        basis.push(g.scale(&(Rational::one() / c)));
    }

    let mut leads: Vec<Monomial> = basis
        .iter()
        .map(|g| g.leading(order).unwrap().0.clone())
        .collect();
    let mut queue = PairQueue::new();
    let mut handled: HashSet<(usize, usize)> = HashSet::new();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            queue.push(leads[i].lcm(&leads[j]).degree(), i, j);
        }
    }

    while let Some((i, j)) = queue.pop() {
        handled.insert((i, j));
        let lcm = leads[i].lcm(&leads[j]);
        // Criterion 1: coprime leading monomials reduce to zero trivially.
        if leads[i].coprime(&leads[j]) {
            continue;
        }
        // Chain criterion: some k whose lead divides the lcm, with both
        // (i,k) and (j,k) already handled.
        let chained = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && leads[k].divides(&lcm)
                && handled.contains(&pair_key(i, k))
                && handled.contains(&pair_key(j, k))
        });
        if chained {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j], order);
        let (_, r) = poly_reduce(&s, &basis, order);
        if r.is_zero() {
            continue;
        }
        check_degree(&r, limits)?;
        if basis.len() + 1 > limits.max_basis {
            return Err(GroebnerError::BasisCap {
                limit: limits.max_basis,
            });
        }
        let (_, c) = r.leading(order).unwrap();
        let monic = r.scale(&(Rational::one() / c));
        let new_lead = monic.leading(order).unwrap().0.clone();
        let new_idx = basis.len();
        for k in 0..new_idx {
            queue.push(leads[k].lcm(&new_lead).degree(), k, new_idx);
        }
        basis.push(monic);
        leads.push(new_lead);
    }

    Ok(GroebnerBasis {
        basis: reduce_basis(basis, order),
        order: order.clone(),
    })
}

fn pair_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn check_degree(p: &Polynomial, limits: &Limits) -> Result<(), GroebnerError> {
    let degree = p.total_degree().unwrap_or(0);
    if degree > limits.max_degree {
        return Err(GroebnerError::DegreeCap {
            degree,
            limit: limits.max_degree,
        });
    }
    Ok(())
}

/// Minimalize (drop generators whose lead is divisible by another lead),
/// then reduce each survivor modulo the others and sort ascending by
/// leading monomial. Yields the unique reduced basis.
fn reduce_basis(mut basis: Vec<Polynomial>, order: &MonomialOrder) -> Vec<Polynomial> {
    basis.retain(|g| !g.is_zero());
    // Minimal generating set by leading monomials.
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let (lm_i, _) = basis[i].leading(order).unwrap();
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (lm_j, _) = basis[j].leading(order).unwrap();
            if lm_j.divides(lm_i) && (lm_i != lm_j || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let minimal: Vec<Polynomial> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect();

    // Tail-reduce every element against the others.
    let mut reduced: Vec<Polynomial> = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter_map(|(j, g)| (j != i).then(|| g.clone()))
            .collect();
        let (_, r) = poly_reduce(&minimal[i], &others, order);
        if r.is_zero() {
            continue;
        }
        let (_, c) = r.leading(order).unwrap();
        reduced.push(r.scale(&(Rational::one() / c)));
    }
    reduced.sort_by(|a, b| {
        let (ma, _) = a.leading(order).unwrap();
        let (mb, _) = b.leading(order).unwrap();
        order.compare(ma, mb)
    });
    reduced
}
