//! Exact classification of rank/degree pairs attached to moduli of stable
//! vector bundles over a genus-g curve.
//!
//! The crate has three layers:
//!
//! * [`pair`] — the integer calculus: the degree window, canonical
//!   reductions and dual reductions, terminal detection, Euler
//!   characteristics, and the dimension formulas.
//! * [`classification`] — search over the reduction tree: nice pairs with
//!   shortest witness chains, fine pairs with admissible zig-zag diagrams,
//!   lattice-cone enumeration, predecessor generation, and the arithmetic
//!   side conditions (Newstead criteria, gcd corollary).
//! * [`linalg`] — exact rational linear algebra for the elementary
//!   transformation machinery: Conditions A and B, the minor-expansion
//!   coefficient identity, GIT stability of point configurations, and
//!   seeded genericity sampling.
//!
//! [`oracles`] holds independent brute-force reference implementations and
//! [`verify`] packages the cross-checks between the two routes into a
//! runnable suite.
//!
//! Everything is computed over unbounded integers and exact rationals; no
//! floating point appears anywhere.

pub mod classification;
pub mod error;
pub mod linalg;
pub mod oracles;
pub mod pair;
pub mod verify;

pub use error::{Error, Result};
pub use pair::{
    apply_step, children, dual_reduce, euler_characteristic, forced_chain, moduli_dimension,
    quotient_dimension_identity, reduce, DimensionIdentity, Genus, Pair, ReductionChain,
    ReductionStep, StepKind, WindowStatus,
};

pub use classification::{
    newstead_condition, predecessors_via_dual, predecessors_via_reduction, verify_gcd_lemma,
    AdmissibleDiagram, ClassificationReport, Classifier, DiagramLink, FineOutcome, NiceOutcome,
    NiceStatus, Predecessor,
};

pub use linalg::{
    block_indicator_transformation, coefficient_identity, condition_a, condition_a_matrix,
    condition_b, git_stable, parse_matrices, parse_rational, random_omega,
    sample_generic_transformation, CoefficientIdentity, ConditionB, OmegaMatrix, ProjectiveConfig,
    Rational, RationalMatrix, SampleFailure, SampleOutcome, StabilityVerdict,
};
