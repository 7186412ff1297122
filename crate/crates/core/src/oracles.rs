//! Independent brute-force reference implementations. Each function here
//! recomputes a result of the main modules by a different route and is
//! used to cross-check them; none of them share code with what they check.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::classification::Predecessor;
use crate::error::Result;
use crate::linalg::{Combinations, ProjectiveConfig, Rational, RationalMatrix};
use crate::pair::{dual_reduce, reduce, Genus, Pair, WindowStatus};

/// All predecessors of `target` found by scanning every in-window pair of
/// rank at most `n_max` and applying both steps directly. Returns the
/// reduction hits and the dual-reduction hits, in (n, d) order.
pub fn scan_predecessors(
    g: &Genus,
    target: &Pair,
    n_max: &BigInt,
) -> (Vec<Predecessor>, Vec<Predecessor>) {
    let mut via_reduce = Vec::new();
    let mut via_dual = Vec::new();
    let mut n = BigInt::from(2);
    while &n <= n_max {
        let mut d = &n * (g.value() - 1u32) + 1u32;
        let high = &n * g.value();
        while d < high {
            let p = Pair::new(n.clone(), d.clone()).expect("positive");
            let step = reduce(g, &p).expect("in-window");
            if step.target == *target {
                via_reduce.push(Predecessor {
                    pair: p.clone(),
                    k: step.k,
                });
            }
            let step = dual_reduce(g, &p).expect("in-window");
            if step.target == *target {
                via_dual.push(Predecessor { pair: p, k: step.k });
            }
            d += 1;
        }
        n += 1;
    }
    (via_reduce, via_dual)
}

/// Niceness decided by a plain reachability sweep with no memo and no
/// witness bookkeeping.
pub fn nice_by_reachability(g: &Genus, p: &Pair) -> bool {
    match p.window_status(g) {
        WindowStatus::TerminalLine => return true,
        WindowStatus::InWindow => {}
        _ => return false,
    }
    let mut seen = BTreeSet::from([p.clone()]);
    let mut frontier = vec![p.clone()];
    while let Some(q) = frontier.pop() {
        if q.window_status(g) == WindowStatus::TerminalLine {
            return true;
        }
        for step in crate::pair::children(g, &q) {
            if seen.insert(step.target.clone()) {
                frontier.push(step.target);
            }
        }
    }
    false
}

/// Condition B via ranks: every n-row submatrix must have rank n.
pub fn condition_b_by_rank(phi: &RationalMatrix) -> Result<bool> {
    let d = phi.rows();
    let n = phi.cols();
    for subset in Combinations::new(d, n) {
        if phi.select_rows(&subset).rank() != n {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Stability by raw enumeration: every nonempty subset of points, spans
/// tested with the rank routine, membership tested by rank growth, no
/// deduplication. Returns the members of the first violating span, if any.
pub fn git_stable_naive(config: &ProjectiveConfig) -> Option<BTreeSet<usize>> {
    let m1 = config.len();
    let np1 = config.ambient() + 1;
    for mask in 1u32..(1 << m1) {
        let subset: Vec<usize> = (0..m1).filter(|i| mask & (1 << i) != 0).collect();
        let rows: Vec<Vec<Rational>> = subset.iter().map(|&i| config.points()[i].clone()).collect();
        let span = RationalMatrix::from_rows(rows.clone()).expect("nonempty");
        let rank = span.rank();
        if rank > config.ambient() {
            continue;
        }
        let members: BTreeSet<usize> = (0..m1)
            .filter(|&i| {
                let mut stacked = rows.clone();
                stacked.push(config.points()[i].clone());
                RationalMatrix::from_rows(stacked).expect("nonempty").rank() == rank
            })
            .collect();
        if members.len() * np1 >= rank * m1 {
            return Some(members);
        }
    }
    None
}

/// Determinant by recursive cofactor expansion along the first row.
pub fn cofactor_determinant(m: &RationalMatrix) -> Rational {
    let n = m.rows();
    assert_eq!(n, m.cols(), "cofactor expansion needs a square matrix");
    if n == 0 {
        return Rational::from_integer(BigInt::from(1));
    }
    if n == 1 {
        return m.get(0, 0).clone();
    }
    let mut det = Rational::zero();
    for j in 0..n {
        if m.get(0, j).is_zero() {
            continue;
        }
        let rows: Vec<Vec<Rational>> = (1..n)
            .map(|r| {
                (0..n)
                    .filter(|&c| c != j)
                    .map(|c| m.get(r, c).clone())
                    .collect()
            })
            .collect();
        let minor = cofactor_determinant(&RationalMatrix::from_rows(rows).expect("square"));
        let term = m.get(0, j) * &minor;
        if j % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    #[test]
    fn cofactor_matches_bareiss() {
        let m = RationalMatrix::from_rows(vec![
            vec![q(0), q(1), q(2)],
            vec![q(1), q(0), q(3)],
            vec![q(4), q(5), q(0)],
        ])
        .unwrap();
        assert_eq!(cofactor_determinant(&m), m.determinant().unwrap());
        assert_eq!(
            cofactor_determinant(&RationalMatrix::identity(4)),
            Rational::one()
        );
    }

    #[test]
    fn reachability_agrees_with_worked_examples() {
        let g = Genus::new(6).unwrap();
        assert!(nice_by_reachability(&g, &Pair::new(15, 77).unwrap()));
        assert!(!nice_by_reachability(&g, &Pair::new(7, 38).unwrap()));
    }
}
