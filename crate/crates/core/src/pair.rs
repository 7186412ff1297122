//! Integer calculus of rank/degree pairs: the degree window, reductions,
//! dual reductions, terminal detection, and the dimension formulas.
//!
//! A pair (n;d) at genus g is *in-window* when n(g-1) < d < ng. A reduction
//! replaces it by (n'; d') with n' = ng - d, and a dual reduction by
//! (n''; d'') with n'' = d - n(g-1); in both cases the new degree is the
//! unique representative of the inherited residue class inside the half-open
//! interval (n'(g-1), n'g]. Because that interval has length exactly n',
//! the non-negative shift k is canonical and both steps are deterministic.
//!
//! All arithmetic is exact over unbounded integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

/// The genus of the underlying curve; must be at least 2.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Genus(BigInt);

impl Genus {
    pub fn new(g: impl Into<BigInt>) -> Result<Self> {
        let g = g.into();
        if g < BigInt::from(2) {
            return Err(Error::GenusTooSmall(g));
        }
        Ok(Genus(g))
    }

    pub fn value(&self) -> &BigInt {
        &self.0
    }
}

impl fmt::Display for Genus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A rank/degree pair (n;d) with n >= 1 and d >= 1.
///
/// Ordering is lexicographic by (n, d), which is the canonical order used
/// for enumeration and all deterministic tie-breaking.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Pair {
    n: BigInt,
    d: BigInt,
}

impl Pair {
    pub fn new(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Result<Self> {
        let (n, d) = (n.into(), d.into());
        if n < BigInt::one() || d < BigInt::one() {
            return Err(Error::InvalidPair { n, d });
        }
        Ok(Pair { n, d })
    }

    pub fn rank(&self) -> &BigInt {
        &self.n
    }

    pub fn degree(&self) -> &BigInt {
        &self.d
    }

    pub fn gcd(&self) -> BigInt {
        self.n.gcd(&self.d)
    }

    pub fn is_coprime(&self) -> bool {
        self.gcd().is_one()
    }

    /// Where the pair sits relative to the degree window for genus `g`.
    pub fn window_status(&self, g: &Genus) -> WindowStatus {
        let low = &self.n * (g.value() - 1);
        let high = &self.n * g.value();
        if low < self.d && self.d < high {
            WindowStatus::InWindow
        } else if self.n.is_one() && self.d == *g.value() {
            WindowStatus::TerminalLine
        } else if self.d == high {
            // n >= 2 here: n = 1 with d = g was caught above.
            WindowStatus::TerminalDivisible
        } else {
            WindowStatus::Outside
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{})", self.n, self.d)
    }
}

/// Position of a pair relative to the window n(g-1) < d < ng.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum WindowStatus {
    /// Strictly inside the window; both step kinds are defined.
    InWindow,
    /// d = ng with n >= 2; the calculus stops here.
    TerminalDivisible,
    /// The pair (1;g), the target every nice chain must reach.
    TerminalLine,
    /// Anywhere else; no step is defined.
    Outside,
}

impl WindowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            WindowStatus::InWindow => "in-window",
            WindowStatus::TerminalDivisible => "terminal-divisible",
            WindowStatus::TerminalLine => "terminal-line",
            WindowStatus::Outside => "outside",
        }
    }
}

impl fmt::Display for WindowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The two step kinds. `Reduce` sorts before `DualReduce`; witness
/// tie-breaking relies on that order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum StepKind {
    Reduce,
    DualReduce,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepKind::Reduce => "reduce",
            StepKind::DualReduce => "dual",
        })
    }
}

/// One canonical reduction or dual-reduction step.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ReductionStep {
    pub kind: StepKind,
    pub source: Pair,
    pub target: Pair,
    pub k: BigInt,
}

fn not_in_window(g: &Genus, p: &Pair) -> Error {
    Error::NotInWindow {
        pair: p.clone(),
        genus: g.value().clone(),
    }
}

/// Canonical landing degree and shift: the unique d' = total - k * n_new
/// with k >= 0 and n_new * (g-1) < d' <= n_new * g.
fn canonical_degree(total: &BigInt, n_new: &BigInt, g: &Genus) -> (BigInt, BigInt) {
    let low = n_new * (g.value() - 1);
    let offset: BigInt = total - &low - 1u32;
    debug_assert!(!offset.is_negative(), "landing interval below the total");
    let d_new = &low + 1u32 + offset.mod_floor(n_new);
    let k = (total - &d_new) / n_new;
    (d_new, k)
}

fn make_step(
    kind: StepKind,
    source: &Pair,
    n_new: BigInt,
    total: BigInt,
    g: &Genus,
) -> ReductionStep {
    let (d_new, k) = canonical_degree(&total, &n_new, g);
    debug_assert!(n_new < *source.rank(), "rank must strictly decrease");
    let target = Pair { n: n_new, d: d_new };
    ReductionStep {
        kind,
        source: source.clone(),
        target,
        k,
    }
}

/// The reduction (n;d) -> (ng-d; d-kn') with canonical k.
pub fn reduce(g: &Genus, p: &Pair) -> Result<ReductionStep> {
    if p.window_status(g) != WindowStatus::InWindow {
        return Err(not_in_window(g, p));
    }
    let n_new = p.rank() * g.value() - p.degree();
    Ok(make_step(StepKind::Reduce, p, n_new, p.degree().clone(), g))
}

/// The dual reduction (n;d) -> (d-n(g-1); n(2g-1)-d-kn'') with canonical k.
///
/// Equivalent to reducing the reflected pair (n; n(2g-1)-d).
pub fn dual_reduce(g: &Genus, p: &Pair) -> Result<ReductionStep> {
    if p.window_status(g) != WindowStatus::InWindow {
        return Err(not_in_window(g, p));
    }
    let n_new = p.degree() - p.rank() * (g.value() - 1);
    let total = p.rank() * (g.value() * 2 - 1) - p.degree();
    Ok(make_step(StepKind::DualReduce, p, n_new, total, g))
}

/// Apply the step of the given kind.
pub fn apply_step(g: &Genus, p: &Pair, kind: StepKind) -> Result<ReductionStep> {
    match kind {
        StepKind::Reduce => reduce(g, p),
        StepKind::DualReduce => dual_reduce(g, p),
    }
}

/// Both canonical steps out of `p`, reduction first. Empty when `p` is not
/// in-window. When the two steps land on the same target (which forces the
/// same k), only the reduction is kept.
pub fn children(g: &Genus, p: &Pair) -> Vec<ReductionStep> {
    if p.window_status(g) != WindowStatus::InWindow {
        return Vec::new();
    }
    let r = reduce(g, p).expect("in-window");
    let d = dual_reduce(g, p).expect("in-window");
    if d.target == r.target {
        debug_assert_eq!(d.k, r.k);
        vec![r]
    } else {
        vec![r, d]
    }
}

/// Dimension (n^2 - 1)(g - 1) of the moduli space of rank-n bundles with
/// fixed determinant.
pub fn moduli_dimension(g: &Genus, n: &BigInt) -> Result<BigInt> {
    if n < &BigInt::one() {
        return Err(Error::InvalidRank(n.clone()));
    }
    Ok((n * n - 1) * (g.value() - 1))
}

/// Euler characteristic d + n(1 - g) of a rank-n degree-d bundle. For an
/// in-window pair the result r satisfies 0 < r < n.
pub fn euler_characteristic(g: &Genus, p: &Pair) -> BigInt {
    p.degree() - p.rank() * (g.value() - 1)
}

/// Both sides of the dimension bookkeeping identity for d = ng.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DimensionIdentity {
    pub lhs: BigInt,
    pub rhs: BigInt,
    pub equal: bool,
}

/// Checks d(n-1) - n^2 + 1 + (n-1)g = (n^2 - 1)(g - 1) at d = ng: the
/// quotient dimension plus the linear-system dimension recovers the moduli
/// dimension. Degenerates to 0 = 0 at n = 1.
pub fn quotient_dimension_identity(g: &Genus, n: &BigInt) -> Result<DimensionIdentity> {
    if n < &BigInt::one() {
        return Err(Error::InvalidRank(n.clone()));
    }
    let d = n * g.value();
    let lhs = &d * (n - 1) - n * n + 1 + (n - 1) * g.value();
    let rhs = (n * n - 1) * (g.value() - 1);
    let equal = lhs == rhs;
    Ok(DimensionIdentity { lhs, rhs, equal })
}

/// An ordered witness of steps starting at `start`. Consecutive steps must
/// compose and every step must be the canonical one of its kind.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReductionChain {
    pub genus: Genus,
    pub start: Pair,
    pub steps: Vec<ReductionStep>,
}

impl ReductionChain {
    pub fn empty(genus: Genus, start: Pair) -> Self {
        ReductionChain {
            genus,
            start,
            steps: Vec::new(),
        }
    }

    /// The final pair of the chain (`start` when the chain is empty).
    pub fn end(&self) -> &Pair {
        self.steps.last().map_or(&self.start, |s| &s.target)
    }

    /// The pairs visited, starting with `start`.
    pub fn pairs(&self) -> Vec<Pair> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        out.push(self.start.clone());
        out.extend(self.steps.iter().map(|s| s.target.clone()));
        out
    }

    /// Replays every step through the calculus and checks composition,
    /// canonicality, and that only the final pair may leave the window.
    pub fn validate(&self) -> Result<()> {
        let mut cur = self.start.clone();
        for step in &self.steps {
            if step.source != cur {
                return Err(Error::InvalidPair {
                    n: step.source.rank().clone(),
                    d: step.source.degree().clone(),
                });
            }
            let canonical = apply_step(&self.genus, &cur, step.kind)?;
            if canonical != *step {
                return Err(Error::InvalidPair {
                    n: step.target.rank().clone(),
                    d: step.target.degree().clone(),
                });
            }
            cur = step.target.clone();
        }
        match cur.window_status(&self.genus) {
            WindowStatus::Outside => Err(not_in_window(&self.genus, &cur)),
            _ => Ok(()),
        }
    }
}

/// Repeatedly applies one step kind until the pair leaves the window.
/// Starting from a terminal pair yields the empty chain; outside pairs are
/// rejected.
pub fn forced_chain(g: &Genus, start: &Pair, kind: StepKind) -> Result<ReductionChain> {
    if start.window_status(g) == WindowStatus::Outside {
        return Err(not_in_window(g, start));
    }
    let mut chain = ReductionChain::empty(g.clone(), start.clone());
    let mut cur = start.clone();
    while cur.window_status(g) == WindowStatus::InWindow {
        let step = apply_step(g, &cur, kind)?;
        cur = step.target.clone();
        chain.steps.push(step);
    }
    Ok(chain)
}
