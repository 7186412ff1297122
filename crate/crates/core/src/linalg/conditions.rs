//! Conditions A and B on elementary-transformation matrices, the
//! minor-expansion coefficient identity, and seeded genericity sampling.
//!
//! An elementary transformation is a d x n matrix phi whose row j is the
//! vector acting at the j-th point. Condition B asks that every n rows be
//! linearly independent (full spark). Condition A asks that the d x d
//! block matrix pairing phi with a g x d evaluation matrix omega be
//! nonsingular; row block s (of height g) and column j carry
//! `phi[j][s] * omega[i][j]`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::matrix::{Rational, RationalMatrix};
use crate::linalg::Combinations;

/// A g x d evaluation matrix split into d/g consecutive g x g column
/// blocks. It is *generic* when every block is nonsingular.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OmegaMatrix {
    g: usize,
    matrix: RationalMatrix,
}

impl OmegaMatrix {
    pub fn new(g: usize, matrix: RationalMatrix) -> Result<Self> {
        if g == 0 {
            return Err(Error::DimensionMismatch("omega needs g >= 1 rows".into()));
        }
        if matrix.rows() != g {
            return Err(Error::DimensionMismatch(format!(
                "omega has {} rows, expected g = {g}",
                matrix.rows()
            )));
        }
        if matrix.cols() == 0 || !matrix.cols().is_multiple_of(g) {
            return Err(Error::DimensionMismatch(format!(
                "omega has {} columns, expected a positive multiple of g = {g}",
                matrix.cols()
            )));
        }
        Ok(OmegaMatrix { g, matrix })
    }

    pub fn genus_rows(&self) -> usize {
        self.g
    }

    /// d, the number of evaluation points (columns).
    pub fn points(&self) -> usize {
        self.matrix.cols()
    }

    /// n = d / g, the number of column blocks (the intended rank).
    pub fn blocks(&self) -> usize {
        self.matrix.cols() / self.g
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    /// The g x g block on columns [s*g, (s+1)*g).
    pub fn block(&self, s: usize) -> RationalMatrix {
        self.matrix.column_block(s * self.g, self.g)
    }

    /// Index of the first singular block, if any.
    pub fn generic_violation(&self) -> Option<usize> {
        (0..self.blocks()).find(|&s| {
            self.block(s)
                .determinant()
                .expect("blocks are square")
                .is_zero()
        })
    }

    pub fn is_generic(&self) -> bool {
        self.generic_violation().is_none()
    }
}

/// Verdict of the full-spark check, with one dependent row set on failure.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConditionB {
    pub holds: bool,
    pub violating_rows: Option<BTreeSet<usize>>,
}

/// Condition B: every n-element subset of rows of the d x n matrix is
/// linearly independent, i.e. every maximal minor is nonzero. Subsets are
/// scanned in lexicographic order and the first dependent one is reported.
/// A zero row (a non-surjective transformation) always fails.
pub fn condition_b(phi: &RationalMatrix) -> Result<ConditionB> {
    let d = phi.rows();
    let n = phi.cols();
    if n == 0 || d < n {
        return Err(Error::DimensionMismatch(format!(
            "condition B needs a d x n matrix with d >= n >= 1, got {d}x{n}"
        )));
    }
    for subset in Combinations::new(d, n) {
        let minor = phi.select_rows(&subset).determinant()?;
        if minor.is_zero() {
            return Ok(ConditionB {
                holds: false,
                violating_rows: Some(subset.into_iter().collect()),
            });
        }
    }
    Ok(ConditionB {
        holds: true,
        violating_rows: None,
    })
}

/// The d x d matrix pairing omega with phi: row block s (height g) and
/// column j carry `phi[j][s] * omega[i][j]`.
pub fn condition_a_matrix(omega: &OmegaMatrix, phi: &RationalMatrix) -> Result<RationalMatrix> {
    let g = omega.genus_rows();
    let d = omega.points();
    let n = omega.blocks();
    if phi.rows() != d || phi.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "phi is {}x{}, expected {d}x{n} to pair with omega",
            phi.rows(),
            phi.cols()
        )));
    }
    let mut m = RationalMatrix::zero(d, d);
    for s in 0..n {
        for i in 0..g {
            for j in 0..d {
                m.set(s * g + i, j, phi.get(j, s) * omega.matrix().get(i, j));
            }
        }
    }
    Ok(m)
}

/// Condition A: the block matrix of [`condition_a_matrix`] is nonsingular.
/// Equivalent to the vanishing of the first cohomology of the transformed
/// bundle.
pub fn condition_a(omega: &OmegaMatrix, phi: &RationalMatrix) -> Result<bool> {
    let det = condition_a_matrix(omega, phi)?.determinant()?;
    Ok(!det.is_zero())
}

/// The d x n indicator transformation assigning column j to block j / g:
/// the monomial whose coefficient the minor expansion extracts.
pub fn block_indicator_transformation(omega: &OmegaMatrix) -> RationalMatrix {
    let d = omega.points();
    let n = omega.blocks();
    let g = omega.genus_rows();
    let mut phi = RationalMatrix::zero(d, n);
    for j in 0..d {
        phi.set(j, j / g, Rational::one());
    }
    phi
}

/// Both routes of the minor-expansion identity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoefficientIdentity {
    pub coefficient: Rational,
    pub minor_product: Rational,
    pub equal: bool,
}

/// Extracts the coefficient of the block-diagonal monomial in the full
/// d x d determinant (by evaluating at the indicator transformation, valid
/// because the determinant is multilinear in each column's variables) and
/// compares it with the product of the g x g consecutive-column minors of
/// omega. The two sides must agree for every input.
pub fn coefficient_identity(omega: &OmegaMatrix) -> CoefficientIdentity {
    let phi = block_indicator_transformation(omega);
    let coefficient = condition_a_matrix(omega, &phi)
        .expect("indicator has matching shape")
        .determinant()
        .expect("square");
    let minor_product = (0..omega.blocks())
        .map(|s| omega.block(s).determinant().expect("square"))
        .fold(Rational::one(), |acc, d| acc * d);
    let equal = coefficient == minor_product;
    CoefficientIdentity {
        coefficient,
        minor_product,
        equal,
    }
}

/// Numerators of sampled entries are uniform over
/// [-SAMPLE_NUMERATOR_BOUND, SAMPLE_NUMERATOR_BOUND], denominator 1. The
/// grid is wide so that the degeneracy loci, which have measure zero over
/// the rationals, are also vanishingly rare on the grid.
pub const SAMPLE_NUMERATOR_BOUND: i64 = 1_000_000;

fn grid_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> RationalMatrix {
    let entries = (0..rows * cols)
        .map(|_| {
            Rational::from_integer(BigInt::from(
                rng.random_range(-SAMPLE_NUMERATOR_BOUND..=SAMPLE_NUMERATOR_BOUND),
            ))
        })
        .collect();
    RationalMatrix::new(rows, cols, entries).expect("sized to fit")
}

/// Deterministic generic omega for the given seed: entries are drawn from
/// the sampling grid on stream 0, resampling until every block is
/// nonsingular.
pub fn random_omega(g: usize, n: usize, seed: u64) -> Result<OmegaMatrix> {
    if g == 0 || n == 0 {
        return Err(Error::DimensionMismatch(
            "omega needs g >= 1 and n >= 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);
    loop {
        let omega = OmegaMatrix::new(g, grid_matrix(g, n * g, &mut rng))?;
        if omega.is_generic() {
            return Ok(omega);
        }
    }
}

/// One sampled transformation that failed a condition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SampleFailure {
    pub trial: u32,
    pub phi: RationalMatrix,
    pub condition_a: bool,
    pub condition_b: bool,
}

/// Aggregate of a sampling run. With zero trials both rates are 1 by
/// convention.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SampleOutcome {
    pub trials: u32,
    pub passes_a: u32,
    pub passes_b: u32,
    pub condition_a_rate: Rational,
    pub condition_b_rate: Rational,
    pub first_failure: Option<SampleFailure>,
}

impl SampleOutcome {
    pub fn is_empty(&self) -> bool {
        self.trials == 0
    }
}

/// Draws `trials` transformations from the seeded grid and reports the
/// fraction passing each condition. Trial t uses stream t + 1 of the seed,
/// so trials are independent of evaluation order. Rejects non-generic
/// omega: the Condition A rate is only meaningful against a generic one.
pub fn sample_generic_transformation(
    omega: &OmegaMatrix,
    seed: u64,
    trials: u32,
) -> Result<SampleOutcome> {
    if let Some(block) = omega.generic_violation() {
        return Err(Error::NonGenericOmega { block });
    }
    let d = omega.points();
    let n = omega.blocks();
    let mut passes_a = 0;
    let mut passes_b = 0;
    let mut first_failure = None;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::from(trial) + 1);
        let phi = grid_matrix(d, n, &mut rng);
        let a = condition_a(omega, &phi)?;
        let b = condition_b(&phi)?.holds;
        if a {
            passes_a += 1;
        }
        if b {
            passes_b += 1;
        }
        if (!a || !b) && first_failure.is_none() {
            first_failure = Some(SampleFailure {
                trial,
                phi,
                condition_a: a,
                condition_b: b,
            });
        }
    }
    let rate = |passes: u32| {
        if trials == 0 {
            Rational::one()
        } else {
            Rational::new(BigInt::from(passes), BigInt::from(trials))
        }
    };
    Ok(SampleOutcome {
        trials,
        passes_a,
        passes_b,
        condition_a_rate: rate(passes_a),
        condition_b_rate: rate(passes_b),
        first_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn mat(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn vandermonde(nodes: &[i64], cols: usize) -> RationalMatrix {
        RationalMatrix::from_rows(
            nodes
                .iter()
                .map(|&x| (0..cols).map(|p| q(x.pow(p as u32))).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn omega_shape_checks() {
        assert!(OmegaMatrix::new(2, RationalMatrix::zero(2, 4)).is_ok());
        assert!(OmegaMatrix::new(2, RationalMatrix::zero(3, 4)).is_err());
        assert!(OmegaMatrix::new(2, RationalMatrix::zero(2, 5)).is_err());
        assert!(OmegaMatrix::new(0, RationalMatrix::zero(0, 0)).is_err());
    }

    #[test]
    fn generic_flag() {
        let omega = OmegaMatrix::new(2, mat(&[&[1, 0, 1, 1], &[0, 1, 1, 2]])).unwrap();
        assert!(omega.is_generic());
        let omega = OmegaMatrix::new(2, mat(&[&[1, 2, 1, 1], &[2, 4, 1, 2]])).unwrap();
        assert_eq!(omega.generic_violation(), Some(0));
    }

    #[test]
    fn condition_b_examples() {
        let v = vandermonde(&[1, 2, 3, 4], 2);
        assert!(condition_b(&v).unwrap().holds);

        let phi = mat(&[&[1, 1], &[2, 2], &[1, 0], &[0, 1]]);
        let out = condition_b(&phi).unwrap();
        assert!(!out.holds);
        assert_eq!(out.violating_rows, Some(BTreeSet::from([0, 1])));

        let phi = mat(&[&[1, 0], &[0, 0], &[0, 1], &[1, 1]]);
        assert!(!condition_b(&phi).unwrap().holds);

        assert!(condition_b(&mat(&[&[1, 2]])).is_err());
    }

    #[test]
    fn condition_b_square_case_is_determinant() {
        for m in [mat(&[&[1, 2], &[3, 4]]), mat(&[&[1, 2], &[2, 4]])] {
            let nonsingular = !m.determinant().unwrap().is_zero();
            assert_eq!(condition_b(&m).unwrap().holds, nonsingular);
        }
    }

    #[test]
    fn condition_a_matrix_layout() {
        // g=2, n=2, d=4 with prime-tagged entries so every product is
        // distinguishable; frozen expected matrix written out by hand.
        let omega = OmegaMatrix::new(2, mat(&[&[2, 3, 5, 7], &[11, 13, 17, 19]])).unwrap();
        let phi = mat(&[&[1, 100], &[2, 200], &[3, 300], &[4, 400]]);
        let m = condition_a_matrix(&omega, &phi).unwrap();
        let expected = mat(&[
            &[2, 6, 15, 28],
            &[11, 26, 51, 76],
            &[200, 600, 1500, 2800],
            &[1100, 2600, 5100, 7600],
        ]);
        assert_eq!(m, expected);
    }

    #[test]
    fn condition_a_rank_one_identity_case() {
        // n=1, d=g: with omega the identity and all weights 1 the pairing
        // is the identity matrix.
        let omega = OmegaMatrix::new(3, RationalMatrix::identity(3)).unwrap();
        let phi = mat(&[&[1], &[1], &[1]]);
        assert_eq!(
            condition_a_matrix(&omega, &phi).unwrap(),
            RationalMatrix::identity(3)
        );
        assert!(condition_a(&omega, &phi).unwrap());
    }

    #[test]
    fn condition_a_rank_one_det_is_product() {
        // n=1: det = (prod a_j) * det(omega).
        let omega = OmegaMatrix::new(2, mat(&[&[1, 2], &[3, 4]])).unwrap();
        let phi = mat(&[&[5], &[7]]);
        let det = condition_a_matrix(&omega, &phi)
            .unwrap()
            .determinant()
            .unwrap();
        assert_eq!(det, q(5 * 7) * omega.matrix().determinant().unwrap());
    }

    #[test]
    fn condition_a_fails_on_zero_row() {
        let omega = OmegaMatrix::new(2, mat(&[&[1, 0, 1, 1], &[0, 1, 1, 2]])).unwrap();
        let phi = mat(&[&[1, 2], &[0, 0], &[3, 1], &[1, 1]]);
        assert!(!condition_a(&omega, &phi).unwrap());
    }

    #[test]
    fn indicator_passes_condition_a_on_generic_omega() {
        let omega = OmegaMatrix::new(2, mat(&[&[1, 0, 1, 1], &[0, 1, 1, 2]])).unwrap();
        assert!(omega.is_generic());
        let phi = block_indicator_transformation(&omega);
        assert!(condition_a(&omega, &phi).unwrap());
    }

    #[test]
    fn coefficient_identity_identity_blocks() {
        let mut m = RationalMatrix::zero(2, 4);
        for s in 0..2 {
            for i in 0..2 {
                m.set(i, s * 2 + i, Rational::one());
            }
        }
        let omega = OmegaMatrix::new(2, m).unwrap();
        let out = coefficient_identity(&omega);
        assert!(out.equal);
        assert_eq!(out.coefficient, q(1));
        assert_eq!(out.minor_product, q(1));
    }

    #[test]
    fn coefficient_identity_singular_block() {
        let omega = OmegaMatrix::new(2, mat(&[&[1, 2, 1, 1], &[2, 4, 1, 2]])).unwrap();
        let out = coefficient_identity(&omega);
        assert!(out.equal);
        assert_eq!(out.coefficient, q(0));
    }

    #[test]
    fn sampling_zero_trials_convention() {
        let omega = random_omega(2, 2, 7).unwrap();
        let out = sample_generic_transformation(&omega, 7, 0).unwrap();
        assert!(out.is_empty());
        assert_eq!(out.condition_a_rate, Rational::one());
        assert_eq!(out.condition_b_rate, Rational::one());
    }

    #[test]
    fn sampling_rejects_non_generic_omega() {
        let omega = OmegaMatrix::new(2, mat(&[&[1, 2, 1, 1], &[2, 4, 1, 2]])).unwrap();
        assert!(matches!(
            sample_generic_transformation(&omega, 0, 5),
            Err(Error::NonGenericOmega { block: 0 })
        ));
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let omega = random_omega(2, 2, 3).unwrap();
        let a = sample_generic_transformation(&omega, 5, 20).unwrap();
        let b = sample_generic_transformation(&omega, 5, 20).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn exhaustive_binary_grid_condition_b_rate() {
        // n=1, d=2 over {0,1} entries: only the all-ones matrix passes
        // (any zero row is a dependent singleton), so the rate is 1/4.
        let mut passes = 0;
        for a in 0..2 {
            for b in 0..2 {
                let phi = mat(&[&[a], &[b]]);
                if condition_b(&phi).unwrap().holds {
                    passes += 1;
                }
            }
        }
        assert_eq!(passes, 1);
    }
}
