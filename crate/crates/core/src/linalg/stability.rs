//! GIT stability of point configurations in projective space.
//!
//! A configuration x = (x^(0), ..., x^(m)) in P_n is stable when every
//! proper linear subspace L satisfies
//!
//!   #{ i : x^(i) in L } / (m+1)  <  (dim L + 1) / (n+1),
//!
//! strictly. It suffices to test the spans of subsets of the points: any L
//! can be shrunk to the span of the points it contains without changing
//! the count or growing the dimension.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::matrix::{is_zero_vector, reduce_against, rref, Rational};
use crate::linalg::Combinations;

/// Points of P_n given by coordinate vectors of length n+1, each nonzero
/// and considered up to scale.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProjectiveConfig {
    ambient: usize,
    points: Vec<Vec<Rational>>,
}

impl ProjectiveConfig {
    pub fn new(ambient: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        if ambient == 0 {
            return Err(Error::DimensionMismatch(
                "ambient projective space needs dimension >= 1".into(),
            ));
        }
        if points.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        for (index, p) in points.iter().enumerate() {
            if p.len() != ambient + 1 {
                return Err(Error::BadPointLength {
                    index,
                    expected: ambient + 1,
                    found: p.len(),
                });
            }
            if p.iter().all(Rational::is_zero) {
                return Err(Error::ZeroPoint { index });
            }
        }
        Ok(ProjectiveConfig { ambient, points })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Verdict of the stability test; on failure, the set of all points lying
/// in one violating subspace.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StabilityVerdict {
    pub stable: bool,
    pub violating_subspace: Option<BTreeSet<usize>>,
}

/// Tests the strict count inequality over the spans of all point subsets
/// of size up to the ambient dimension, deduplicating spans by their
/// canonical echelon basis. Subsets are scanned smallest first, so a
/// returned witness spans a subspace of minimal generator count.
pub fn git_stable(config: &ProjectiveConfig) -> StabilityVerdict {
    let m1 = config.len();
    let np1 = config.ambient() + 1;
    let mut seen: BTreeSet<Vec<Vec<Rational>>> = BTreeSet::new();
    for size in 1..=config.ambient().min(m1) {
        for subset in Combinations::new(m1, size) {
            let rows: Vec<Vec<Rational>> =
                subset.iter().map(|&i| config.points()[i].clone()).collect();
            let basis = rref(rows);
            let rank = basis.len();
            if rank > config.ambient() {
                continue; // spans all of P_n, not a proper subspace
            }
            if !seen.insert(basis.clone()) {
                continue;
            }
            let members: BTreeSet<usize> = (0..m1)
                .filter(|&i| is_zero_vector(&reduce_against(&basis, &config.points()[i])))
                .collect();
            // violation: count/(m+1) >= rank/(n+1)
            if members.len() * np1 >= rank * m1 {
                return StabilityVerdict {
                    stable: false,
                    violating_subspace: Some(members),
                };
            }
        }
    }
    StabilityVerdict {
        stable: true,
        violating_subspace: None,
    }
}
