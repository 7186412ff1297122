//! Exact rational linear algebra for the elementary-transformation
//! machinery: dense matrices over `BigRational`, Conditions A and B, the
//! minor-expansion coefficient identity, GIT stability of projective point
//! configurations, and seeded genericity sampling.

mod conditions;
mod matrix;
mod parse;
mod stability;

pub use conditions::{
    block_indicator_transformation, coefficient_identity, condition_a, condition_a_matrix,
    condition_b, random_omega, sample_generic_transformation, CoefficientIdentity, ConditionB,
    OmegaMatrix, SampleFailure, SampleOutcome, SAMPLE_NUMERATOR_BOUND,
};
pub use matrix::{Rational, RationalMatrix};
pub use parse::{parse_matrices, parse_rational};
pub use stability::{git_stable, ProjectiveConfig, StabilityVerdict};

/// Lexicographic k-subsets of 0..n as index vectors.
pub(crate) struct Combinations {
    n: usize,
    indices: Vec<usize>,
    started: bool,
    done: bool,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            indices: (0..k).collect(),
            started: false,
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.indices.clone());
        }
        let k = self.indices.len();
        if k == 0 {
            self.done = true;
            return None;
        }
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.indices[i] < self.n - (k - i) {
                self.indices[i] += 1;
                for j in i + 1..k {
                    self.indices[j] = self.indices[j - 1] + 1;
                }
                return Some(self.indices.clone());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::Combinations;

    #[test]
    fn combinations_lex_order() {
        let all: Vec<Vec<usize>> = Combinations::new(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
        assert_eq!(Combinations::new(6, 3).count(), 20);
    }
}
