use std::cmp::Ordering;

use super::Monomial;

/// Admissible monomial orders.
///
/// `priority` is a permutation of the variable indices, most significant
/// first; the default is declaration order. `Block` is the elimination
/// order used by [`crate::groebner::eliminate`]: monomials are compared
/// degree-reverse-lexicographically on the front block first, then on the
/// back block, so any monomial touching a front variable dominates every
/// monomial that does not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    Lex { priority: Vec<usize> },
    DegRevLex { priority: Vec<usize> },
    Block { front: Vec<usize>, back: Vec<usize> },
}

impl MonomialOrder {
    pub fn lex(nvars: usize) -> Self {
        MonomialOrder::Lex {
            priority: (0..nvars).collect(),
        }
    }

    pub fn lex_with(priority: Vec<usize>) -> Self {
        MonomialOrder::Lex { priority }
    }

    pub fn degrevlex(nvars: usize) -> Self {
        MonomialOrder::DegRevLex {
            priority: (0..nvars).collect(),
        }
    }

    /// Elimination order dropping `front_vars`; the remaining variables form
    /// the back block in declaration order.
    pub fn block(front_vars: &[usize], nvars: usize) -> Self {
        let mut front: Vec<usize> = front_vars.to_vec();
        front.sort_unstable();
        front.dedup();
        let back: Vec<usize> = (0..nvars).filter(|i| !front.contains(i)).collect();
        MonomialOrder::Block { front, back }
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex { priority } => {
                for &i in priority {
                    match a.exps()[i].cmp(&b.exps()[i]) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::DegRevLex { priority } => degrevlex_on(priority, a, b),
            MonomialOrder::Block { front, back } => {
                degrevlex_on(front, a, b).then_with(|| degrevlex_on(back, a, b))
            }
        }
    }

    /// The variable indices this order ranges over (used for sanity checks).
    pub fn nvars(&self) -> usize {
        match self {
            MonomialOrder::Lex { priority } | MonomialOrder::DegRevLex { priority } => {
                priority.len()
            }
            MonomialOrder::Block { front, back } => front.len() + back.len(),
        }
    }
}

/// Degree-reverse-lex restricted to the given variable slice: higher total
/// degree wins; on ties the *last* differing variable decides, with the
/// smaller exponent there being greater.
fn degrevlex_on(vars: &[usize], a: &Monomial, b: &Monomial) -> Ordering {
    let da: u64 = vars.iter().map(|&i| a.exps()[i] as u64).sum();
    let db: u64 = vars.iter().map(|&i| b.exps()[i] as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        ord => return ord,
    }
    for &i in vars.iter().rev() {
        match a.exps()[i].cmp(&b.exps()[i]) {
            Ordering::Equal => continue,
            // smaller exponent in the last differing position = greater
            ord => return ord.reverse(),
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(exps: &[u32]) -> Monomial {
        Monomial::from_exps(exps.to_vec())
    }

    #[test]
    fn lex_x2_beats_xy() {
        let ord = MonomialOrder::lex(2);
        assert_eq!(ord.compare(&m(&[2, 0]), &m(&[1, 1])), Ordering::Greater);
    }

    #[test]
    fn degrevlex_textbook_comparison() {
        // x*y^2 > x^2*z under degrevlex (equal degree, z-exponent decides).
        let ord = MonomialOrder::degrevlex(3);
        assert_eq!(
            ord.compare(&m(&[1, 2, 0]), &m(&[2, 0, 1])),
            Ordering::Greater
        );
        // Degree dominates first.
        assert_eq!(
            ord.compare(&m(&[0, 0, 3]), &m(&[1, 1, 0])),
            Ordering::Greater
        );
    }

    #[test]
    fn block_order_front_variable_dominates() {
        // vars [k, a], eliminating {k}: k*a > a^3.
        let ord = MonomialOrder::block(&[0], 2);
        assert_eq!(ord.compare(&m(&[1, 1]), &m(&[0, 3])), Ordering::Greater);
    }

    #[test]
    fn block_order_falls_back_to_back_block() {
        let ord = MonomialOrder::block(&[0], 3);
        // Same k-degree, so the back block decides: a^2 > a*b under
        // degrevlex on (a, b).
        assert_eq!(
            ord.compare(&m(&[1, 2, 0]), &m(&[1, 1, 1])),
            Ordering::Greater
        );
    }
}
