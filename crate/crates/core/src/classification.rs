//! Search over the reduction tree: nice pairs, fine pairs, enumeration,
//! predecessors, and the arithmetic side conditions.
//!
//! A pair is *nice* when some chain of reductions and dual reductions ends
//! at the terminal line pair (1;g); its moduli space is then rational. A
//! coprime pair is *fine* when it links to a nice pair through a zig-zag of
//! top pairs whose ranks never exceed the starting rank, adjacent tops
//! sharing a coprime common descendant (the meet). Both searches produce
//! replayable witnesses.
//!
//! The [`Classifier`] memoizes niceness and descendant sets per pair. The
//! memo tables are insert-only: entries, once written, are never changed,
//! so classification of distinct pairs may run concurrently and results do
//! not depend on interleaving. Witness tie-breaking is deterministic:
//! shortest first, then `Reduce` preferred over `DualReduce`, then smallest
//! (n, d).

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::pair::{
    children, dual_reduce, reduce, Genus, Pair, ReductionChain, ReductionStep, WindowStatus,
};

/// Verdict of the nice-pair search.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NiceOutcome {
    pub verdict: bool,
    pub status: NiceStatus,
    /// Shortest witness chain to (1;g); present exactly when `verdict` holds.
    pub witness: Option<ReductionChain>,
}

/// Why the nice verdict came out the way it did.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NiceStatus {
    /// The pair is (1;g) itself.
    TerminalLine,
    /// An in-window pair with a chain to (1;g).
    ChainFound,
    /// In-window, but every chain ends in a divisible terminal.
    NoChain,
    /// d = ng with n >= 2; the calculus stops without reaching (1;g).
    TerminalDivisible,
    /// Not in the domain of the calculus at all.
    Outside,
}

impl NiceStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            NiceStatus::TerminalLine => "terminal-line",
            NiceStatus::ChainFound => "chain-found",
            NiceStatus::NoChain => "no-chain",
            NiceStatus::TerminalDivisible => "terminal-divisible",
            NiceStatus::Outside => "outside-window",
        }
    }
}

/// One link of an admissible diagram: chains from the two adjacent top
/// pairs down to a common coprime meet. Either chain may be empty (a top
/// pair may itself be the meet).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiagramLink {
    pub left_chain: ReductionChain,
    pub right_chain: ReductionChain,
    pub meet: Pair,
}

/// A zig-zag witness of fineness: top pairs of bounded rank, coprime meets
/// between neighbours, and a nice witness for the last top pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AdmissibleDiagram {
    pub genus: Genus,
    pub top: Vec<Pair>,
    pub links: Vec<DiagramLink>,
    pub terminal_nice_witness: ReductionChain,
}

impl AdmissibleDiagram {
    /// Replays every chain and checks the diagram shape: ranks bounded by
    /// the first top, coprime meets, composing chains, nice terminal.
    pub fn validate(&self) -> Result<()> {
        let first = self.top.first().ok_or(Error::EmptyConfiguration)?;
        for t in &self.top {
            match t.window_status(&self.genus) {
                WindowStatus::InWindow | WindowStatus::TerminalLine => {}
                _ => {
                    return Err(Error::OutsideDomain {
                        pair: t.clone(),
                        genus: self.genus.value().clone(),
                    })
                }
            }
            if t.rank() > first.rank() {
                return Err(Error::InvalidPair {
                    n: t.rank().clone(),
                    d: t.degree().clone(),
                });
            }
        }
        if self.links.len() + 1 != self.top.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} links for {} top pairs",
                self.links.len(),
                self.top.len()
            )));
        }
        for (i, link) in self.links.iter().enumerate() {
            if !link.meet.is_coprime() {
                return Err(Error::InvalidPair {
                    n: link.meet.rank().clone(),
                    d: link.meet.degree().clone(),
                });
            }
            if link.left_chain.start != self.top[i] || link.right_chain.start != self.top[i + 1] {
                return Err(Error::DimensionMismatch(format!(
                    "link {i} chains do not start at the adjacent top pairs"
                )));
            }
            if *link.left_chain.end() != link.meet || *link.right_chain.end() != link.meet {
                return Err(Error::DimensionMismatch(format!(
                    "link {i} chains do not end at the meet {}",
                    link.meet
                )));
            }
            link.left_chain.validate()?;
            link.right_chain.validate()?;
        }
        let witness = &self.terminal_nice_witness;
        if witness.start != *self.top.last().expect("nonempty") {
            return Err(Error::DimensionMismatch(
                "terminal witness does not start at the last top pair".into(),
            ));
        }
        witness.validate()?;
        if witness.end().window_status(&self.genus) != WindowStatus::TerminalLine {
            return Err(Error::InvalidReductionTarget(witness.end().clone()));
        }
        Ok(())
    }
}

/// Verdict of the fine-pair search.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FineOutcome {
    pub verdict: bool,
    pub witness: Option<AdmissibleDiagram>,
}

/// The full verdict for one pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassificationReport {
    pub genus: Genus,
    pub pair: Pair,
    pub window: WindowStatus,
    pub gcd_nd: BigInt,
    pub is_nice: bool,
    pub nice_witness: Option<ReductionChain>,
    pub is_fine: bool,
    pub fine_witness: Option<AdmissibleDiagram>,
    pub newstead_condition: bool,
    pub gcd_corollary_holds: bool,
}

#[derive(Clone)]
struct NiceMemo {
    nice: bool,
    len: u64,
    head: Option<ReductionStep>,
}

struct FineIndex {
    bound: BigInt,
    /// Coprime descendants per in-window vertex, ascending.
    coprime_descendants: BTreeMap<Pair, Vec<Pair>>,
    /// For each coprime meet, the vertices that can reach it, ascending.
    by_meet: BTreeMap<Pair, Vec<Pair>>,
}

/// Memoizing search engine for one genus.
pub struct Classifier {
    genus: Genus,
    nice: Mutex<HashMap<Pair, NiceMemo>>,
    descendants: Mutex<HashMap<Pair, Arc<BTreeSet<Pair>>>>,
    fine: Mutex<Option<Arc<FineIndex>>>,
}

enum Task {
    Visit(Pair),
    Finish(Pair),
}

impl Classifier {
    pub fn new(genus: Genus) -> Self {
        Classifier {
            genus,
            nice: Mutex::new(HashMap::new()),
            descendants: Mutex::new(HashMap::new()),
            fine: Mutex::new(None),
        }
    }

    pub fn genus(&self) -> &Genus {
        &self.genus
    }

    /// All pairs reachable by zero or more steps, including `p` itself.
    /// Finite because rank strictly decreases. Outside pairs are rejected.
    pub fn descendants(&self, p: &Pair) -> Result<Arc<BTreeSet<Pair>>> {
        if p.window_status(&self.genus) == WindowStatus::Outside {
            return Err(Error::OutsideDomain {
                pair: p.clone(),
                genus: self.genus.value().clone(),
            });
        }
        let mut memo = self.descendants.lock().unwrap();
        let mut stack = vec![Task::Visit(p.clone())];
        while let Some(task) = stack.pop() {
            match task {
                Task::Visit(q) => {
                    if memo.contains_key(&q) {
                        continue;
                    }
                    let steps = children(&self.genus, &q);
                    if steps.is_empty() {
                        memo.insert(q.clone(), Arc::new(BTreeSet::from([q])));
                    } else {
                        stack.push(Task::Finish(q));
                        for s in steps {
                            if !memo.contains_key(&s.target) {
                                stack.push(Task::Visit(s.target));
                            }
                        }
                    }
                }
                Task::Finish(q) => {
                    if memo.contains_key(&q) {
                        continue;
                    }
                    let mut set = BTreeSet::from([q.clone()]);
                    for s in children(&self.genus, &q) {
                        set.extend(memo[&s.target].iter().cloned());
                    }
                    memo.insert(q, Arc::new(set));
                }
            }
        }
        Ok(memo[p].clone())
    }

    fn ensure_nice(&self, p: &Pair) {
        let mut memo = self.nice.lock().unwrap();
        let mut stack = vec![Task::Visit(p.clone())];
        while let Some(task) = stack.pop() {
            match task {
                Task::Visit(q) => {
                    if memo.contains_key(&q) {
                        continue;
                    }
                    match q.window_status(&self.genus) {
                        WindowStatus::TerminalLine => {
                            memo.insert(
                                q,
                                NiceMemo {
                                    nice: true,
                                    len: 0,
                                    head: None,
                                },
                            );
                        }
                        WindowStatus::TerminalDivisible | WindowStatus::Outside => {
                            memo.insert(
                                q,
                                NiceMemo {
                                    nice: false,
                                    len: 0,
                                    head: None,
                                },
                            );
                        }
                        WindowStatus::InWindow => {
                            let steps = children(&self.genus, &q);
                            stack.push(Task::Finish(q));
                            for s in steps {
                                if !memo.contains_key(&s.target) {
                                    stack.push(Task::Visit(s.target));
                                }
                            }
                        }
                    }
                }
                Task::Finish(q) => {
                    if memo.contains_key(&q) {
                        continue;
                    }
                    let mut best: Option<(u64, ReductionStep)> = None;
                    // Children come reduction-first; strict `<` keeps the
                    // earlier kind on length ties.
                    for s in children(&self.genus, &q) {
                        let child = &memo[&s.target];
                        if child.nice {
                            let len = child.len + 1;
                            if best.as_ref().is_none_or(|(bl, _)| len < *bl) {
                                best = Some((len, s));
                            }
                        }
                    }
                    let entry = match best {
                        Some((len, step)) => NiceMemo {
                            nice: true,
                            len,
                            head: Some(step),
                        },
                        None => NiceMemo {
                            nice: false,
                            len: 0,
                            head: None,
                        },
                    };
                    memo.insert(q, entry);
                }
            }
        }
    }

    fn nice_memo(&self, p: &Pair) -> NiceMemo {
        self.ensure_nice(p);
        self.nice.lock().unwrap()[p].clone()
    }

    /// Whether `p` reduces to (1;g), with the shortest witness chain
    /// (ties broken by preferring `Reduce`). Never fails: non-domain pairs
    /// yield `verdict: false` with an explanatory status.
    pub fn is_nice(&self, p: &Pair) -> NiceOutcome {
        match p.window_status(&self.genus) {
            WindowStatus::Outside => NiceOutcome {
                verdict: false,
                status: NiceStatus::Outside,
                witness: None,
            },
            WindowStatus::TerminalDivisible => NiceOutcome {
                verdict: false,
                status: NiceStatus::TerminalDivisible,
                witness: None,
            },
            WindowStatus::TerminalLine => NiceOutcome {
                verdict: true,
                status: NiceStatus::TerminalLine,
                witness: Some(ReductionChain::empty(self.genus.clone(), p.clone())),
            },
            WindowStatus::InWindow => {
                let memo = self.nice_memo(p);
                if memo.nice {
                    NiceOutcome {
                        verdict: true,
                        status: NiceStatus::ChainFound,
                        witness: Some(self.nice_chain(p)),
                    }
                } else {
                    NiceOutcome {
                        verdict: false,
                        status: NiceStatus::NoChain,
                        witness: None,
                    }
                }
            }
        }
    }

    fn nice_verdict(&self, p: &Pair) -> bool {
        match p.window_status(&self.genus) {
            WindowStatus::TerminalLine => true,
            WindowStatus::InWindow => self.nice_memo(p).nice,
            _ => false,
        }
    }

    fn nice_chain(&self, p: &Pair) -> ReductionChain {
        let memo = self.nice.lock().unwrap();
        let mut chain = ReductionChain::empty(self.genus.clone(), p.clone());
        let mut cur = p.clone();
        loop {
            let entry = memo.get(&cur).expect("niceness memoized");
            match &entry.head {
                None => break,
                Some(step) => {
                    chain.steps.push(step.clone());
                    cur = step.target.clone();
                }
            }
        }
        chain
    }

    fn build_fine_index(&self, bound: &BigInt) -> Result<FineIndex> {
        let g = self.genus.value();
        let mut coprime_descendants = BTreeMap::new();
        let mut by_meet: BTreeMap<Pair, Vec<Pair>> = BTreeMap::new();
        let mut n = BigInt::from(2);
        while &n <= bound {
            let mut d = &n * (g - 1u32) + 1u32;
            let high = &n * g;
            while d < high {
                let v = Pair::new(n.clone(), d.clone()).expect("positive");
                let desc = self.descendants(&v)?;
                let meets: Vec<Pair> = desc.iter().filter(|q| q.is_coprime()).cloned().collect();
                for m in &meets {
                    by_meet.entry(m.clone()).or_default().push(v.clone());
                }
                coprime_descendants.insert(v, meets);
                d += 1;
            }
            n += 1;
        }
        Ok(FineIndex {
            bound: bound.clone(),
            coprime_descendants,
            by_meet,
        })
    }

    fn ensure_fine_index(&self, bound: &BigInt) -> Result<Arc<FineIndex>> {
        {
            let guard = self.fine.lock().unwrap();
            if let Some(idx) = guard.as_ref() {
                if idx.bound >= *bound {
                    return Ok(idx.clone());
                }
            }
        }
        let built = Arc::new(self.build_fine_index(bound)?);
        let mut guard = self.fine.lock().unwrap();
        match guard.as_ref() {
            Some(existing) if existing.bound >= built.bound => Ok(existing.clone()),
            _ => {
                *guard = Some(built.clone());
                Ok(built)
            }
        }
    }

    /// Shortest chain from `from` to a known descendant `to`.
    fn chain_between(&self, from: &Pair, to: &Pair) -> ReductionChain {
        let mut chain = ReductionChain::empty(self.genus.clone(), from.clone());
        if from == to {
            return chain;
        }
        let mut prev: BTreeMap<Pair, ReductionStep> = BTreeMap::new();
        let mut visited = BTreeSet::from([from.clone()]);
        let mut queue = VecDeque::from([from.clone()]);
        let mut found = false;
        'search: while let Some(q) = queue.pop_front() {
            for step in children(&self.genus, &q) {
                if visited.contains(&step.target) {
                    continue;
                }
                visited.insert(step.target.clone());
                let target = step.target.clone();
                prev.insert(target.clone(), step);
                if target == *to {
                    found = true;
                    break 'search;
                }
                queue.push_back(target);
            }
        }
        assert!(found, "meet {to} must be reachable from {from}");
        let mut steps = Vec::new();
        let mut cur = to.clone();
        while cur != *from {
            let step = prev[&cur].clone();
            cur = step.source.clone();
            steps.push(step);
        }
        steps.reverse();
        chain.steps = steps;
        chain
    }

    fn trivial_diagram(&self, p: &Pair, witness: ReductionChain) -> AdmissibleDiagram {
        AdmissibleDiagram {
            genus: self.genus.clone(),
            top: vec![p.clone()],
            links: Vec::new(),
            terminal_nice_witness: witness,
        }
    }

    /// Whether `p` admits an admissible zig-zag diagram ending in a nice
    /// pair. Nice pairs get the trivial one-column diagram. Breadth-first
    /// search over in-window pairs of rank at most `p.rank()`, where two
    /// pairs are linked when they share a coprime descendant; the witness
    /// has the fewest possible top pairs.
    pub fn is_fine(&self, p: &Pair) -> Result<FineOutcome> {
        match p.window_status(&self.genus) {
            WindowStatus::Outside => Err(Error::OutsideDomain {
                pair: p.clone(),
                genus: self.genus.value().clone(),
            }),
            WindowStatus::TerminalDivisible => Ok(FineOutcome {
                verdict: false,
                witness: None,
            }),
            WindowStatus::TerminalLine | WindowStatus::InWindow => {
                let nice = self.is_nice(p);
                if nice.verdict {
                    return Ok(FineOutcome {
                        verdict: true,
                        witness: Some(self.trivial_diagram(p, nice.witness.expect("nice"))),
                    });
                }
                let idx = self.ensure_fine_index(p.rank())?;
                let mut visited = BTreeSet::from([p.clone()]);
                let mut prev: BTreeMap<Pair, (Pair, Pair)> = BTreeMap::new();
                let mut queue = VecDeque::from([p.clone()]);
                while let Some(q) = queue.pop_front() {
                    let Some(meets) = idx.coprime_descendants.get(&q) else {
                        continue;
                    };
                    for meet in meets {
                        let Some(neighbours) = idx.by_meet.get(meet) else {
                            continue;
                        };
                        for v in neighbours {
                            if v.rank() > p.rank() || visited.contains(v) {
                                continue;
                            }
                            visited.insert(v.clone());
                            prev.insert(v.clone(), (q.clone(), meet.clone()));
                            if self.nice_verdict(v) {
                                let diagram = self.build_diagram(p, v, &prev);
                                return Ok(FineOutcome {
                                    verdict: true,
                                    witness: Some(diagram),
                                });
                            }
                            queue.push_back(v.clone());
                        }
                    }
                }
                Ok(FineOutcome {
                    verdict: false,
                    witness: None,
                })
            }
        }
    }

    fn build_diagram(
        &self,
        start: &Pair,
        terminal: &Pair,
        prev: &BTreeMap<Pair, (Pair, Pair)>,
    ) -> AdmissibleDiagram {
        let mut top = vec![terminal.clone()];
        let mut meets = Vec::new();
        let mut cur = terminal.clone();
        while cur != *start {
            let (parent, meet) = prev[&cur].clone();
            meets.push(meet);
            top.push(parent.clone());
            cur = parent;
        }
        top.reverse();
        meets.reverse();
        let links = top
            .windows(2)
            .zip(meets)
            .map(|(pair, meet)| DiagramLink {
                left_chain: self.chain_between(&pair[0], &meet),
                right_chain: self.chain_between(&pair[1], &meet),
                meet,
            })
            .collect();
        let witness = self
            .is_nice(terminal)
            .witness
            .expect("terminal top pair is nice");
        AdmissibleDiagram {
            genus: self.genus.clone(),
            top,
            links,
            terminal_nice_witness: witness,
        }
    }

    /// The full verdict for one pair. Total: any positive pair is accepted
    /// and the window field explains what the rest of the report means.
    pub fn classify(&self, p: &Pair) -> ClassificationReport {
        let window = p.window_status(&self.genus);
        let nice = self.is_nice(p);
        let (is_fine, fine_witness) = match window {
            WindowStatus::Outside => (false, None),
            _ => {
                let outcome = self.is_fine(p).expect("domain checked");
                (outcome.verdict, outcome.witness)
            }
        };
        ClassificationReport {
            genus: self.genus.clone(),
            pair: p.clone(),
            window,
            gcd_nd: p.gcd(),
            is_nice: nice.verdict,
            nice_witness: nice.witness,
            is_fine,
            fine_witness,
            newstead_condition: newstead_condition(&self.genus, p),
            gcd_corollary_holds: gcd_corollary_holds(&self.genus, p),
        }
    }

    /// Reports for every lattice point (n;d) with 1 <= n <= n_max and
    /// n(g-1) < d < ng, plus the terminal line point (1;g), in (n, d)
    /// order. The iterator is lazy so large cones stream row by row.
    pub fn enumerate<'a>(
        &'a self,
        n_max: &BigInt,
    ) -> impl Iterator<Item = ClassificationReport> + 'a {
        let g = self.genus.value().clone();
        let n_max = n_max.clone();
        let mut n = BigInt::one();
        let mut d = g.clone();
        std::iter::from_fn(move || loop {
            if n > n_max {
                return None;
            }
            if n.is_one() {
                let p = Pair::new(BigInt::one(), g.clone()).expect("positive");
                n = BigInt::from(2);
                d = &n * (&g - 1u32) + 1u32;
                return Some(self.classify(&p));
            }
            if d < &n * &g {
                let p = Pair::new(n.clone(), d.clone()).expect("positive");
                d += 1;
                return Some(self.classify(&p));
            }
            n += 1;
            d = &n * (&g - 1u32) + 1u32;
        })
    }
}

/// gcd(d, g) = 1 or gcd(d + n, g) = 1; a necessary condition for niceness.
pub fn gcd_corollary_holds(g: &Genus, p: &Pair) -> bool {
    p.degree().gcd(g.value()).is_one() || (p.degree() + p.rank()).gcd(g.value()).is_one()
}

fn distinct_prime_factors(m: &BigInt) -> Vec<BigInt> {
    let mut rest = m.clone();
    let mut out = Vec::new();
    let mut f = BigInt::from(2);
    while &f * &f <= rest {
        if rest.is_multiple_of(&f) {
            out.push(f.clone());
            while rest.is_multiple_of(&f) {
                rest /= &f;
            }
        }
        f += 1;
    }
    if rest > BigInt::one() {
        out.push(rest);
    }
    out
}

/// The classical rationality test: d = +/-1 mod n, or gcd(n,d) = 1 and g a
/// prime power, or gcd(n,d) = 1 and the two smallest distinct prime factors
/// of g sum to more than n.
pub fn newstead_condition(g: &Genus, p: &Pair) -> bool {
    let n = p.rank();
    let d = p.degree();
    if (d - 1u32).mod_floor(n).is_zero() || (d + 1u32).mod_floor(n).is_zero() {
        return true;
    }
    if !p.is_coprime() {
        return false;
    }
    let factors = distinct_prime_factors(g.value());
    match factors.as_slice() {
        [_] => true,
        [a, b, ..] => a + b > *n,
        [] => false,
    }
}

/// A predecessor together with the k of its canonical step.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Predecessor {
    pub pair: Pair,
    pub k: BigInt,
}

fn check_target(g: &Genus, target: &Pair) -> Result<()> {
    match target.window_status(g) {
        WindowStatus::InWindow | WindowStatus::TerminalLine => Ok(()),
        _ => Err(Error::InvalidReductionTarget(target.clone())),
    }
}

/// All in-window pairs of rank at most `n_max` whose canonical reduction
/// lands on `target`, ascending by rank. Generated from ng = d' + (k+1)n'
/// and confirmed by replaying the reduction.
pub fn predecessors_via_reduction(
    g: &Genus,
    target: &Pair,
    n_max: &BigInt,
) -> Result<Vec<Predecessor>> {
    check_target(g, target)?;
    let np = target.rank();
    let dp = target.degree();
    let cap = n_max * g.value();
    let mut out = Vec::new();
    let mut k = BigInt::zero();
    loop {
        let total = dp + (&k + 1u32) * np;
        if total > cap {
            break;
        }
        let (n, rem) = total.div_rem(g.value());
        if rem.is_zero() {
            let d = &n * g.value() - np;
            if let Ok(cand) = Pair::new(n, d) {
                if cand.window_status(g) == WindowStatus::InWindow {
                    let step = reduce(g, &cand).expect("in-window");
                    if step.target == *target && step.k == k {
                        out.push(Predecessor {
                            pair: cand,
                            k: k.clone(),
                        });
                    }
                }
            }
        }
        k += 1;
    }
    Ok(out)
}

/// All in-window pairs of rank at most `n_max` whose canonical dual
/// reduction lands on `target`, ascending by rank. Here d = n(g-1) + n''.
pub fn predecessors_via_dual(g: &Genus, target: &Pair, n_max: &BigInt) -> Result<Vec<Predecessor>> {
    check_target(g, target)?;
    let np = target.rank();
    let dp = target.degree();
    let cap = n_max * g.value();
    let mut out = Vec::new();
    let mut k = BigInt::zero();
    loop {
        let total = dp + (&k + 1u32) * np;
        if total > cap {
            break;
        }
        let (n, rem) = total.div_rem(g.value());
        if rem.is_zero() {
            let d = &n * (g.value() - 1) + np;
            if let Ok(cand) = Pair::new(n, d) {
                if cand.window_status(g) == WindowStatus::InWindow {
                    let step = dual_reduce(g, &cand).expect("in-window");
                    if step.target == *target && step.k == k {
                        out.push(Predecessor {
                            pair: cand,
                            k: k.clone(),
                        });
                    }
                }
            }
        }
        k += 1;
    }
    Ok(out)
}

/// Checks, for both children of `p`, that a coprime child forces `p` to be
/// coprime. Used as an oracle: a `false` would contradict the calculus.
pub fn verify_gcd_lemma(g: &Genus, p: &Pair) -> Result<bool> {
    if p.window_status(g) != WindowStatus::InWindow {
        return Err(Error::OutsideDomain {
            pair: p.clone(),
            genus: g.value().clone(),
        });
    }
    for step in children(g, p) {
        if step.target.is_coprime() && !p.is_coprime() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles;
    use crate::pair::StepKind;

    fn genus(g: i64) -> Genus {
        Genus::new(g).unwrap()
    }

    fn pair(n: i64, d: i64) -> Pair {
        Pair::new(n, d).unwrap()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn descendants_examples() {
        let cls = Classifier::new(genus(2));
        let set = cls.descendants(&pair(2, 3)).unwrap();
        assert_eq!(*set, BTreeSet::from([pair(2, 3), pair(1, 2)]));

        let set = cls.descendants(&pair(4, 8)).unwrap();
        assert_eq!(*set, BTreeSet::from([pair(4, 8)]));

        let set = cls.descendants(&pair(7, 8)).unwrap();
        for q in [pair(6, 8), pair(4, 8), pair(1, 2)] {
            assert!(set.contains(&q), "missing {q}");
        }

        assert!(cls.descendants(&pair(4, 9)).is_err());
    }

    #[test]
    fn nice_examples() {
        let g6 = Classifier::new(genus(6));
        let out = g6.is_nice(&pair(15, 77));
        assert!(out.verdict);
        let chain = out.witness.unwrap();
        chain.validate().unwrap();
        assert_eq!(chain.pairs(), vec![pair(15, 77), pair(13, 77), pair(1, 6)]);
        assert_eq!(
            chain.steps.iter().map(|s| s.kind).collect::<Vec<_>>(),
            vec![StepKind::Reduce, StepKind::Reduce]
        );
        assert_eq!(
            chain.steps.iter().map(|s| s.k.clone()).collect::<Vec<_>>(),
            vec![big(0), big(71)]
        );

        let out = g6.is_nice(&pair(7, 38));
        assert!(!out.verdict);
        assert_eq!(out.status, NiceStatus::NoChain);
        assert!(out.witness.is_none());

        let g2 = Classifier::new(genus(2));
        let out = g2.is_nice(&pair(7, 8));
        assert!(out.verdict);
        let chain = out.witness.unwrap();
        assert_eq!(chain.pairs(), vec![pair(7, 8), pair(1, 2)]);
        assert_eq!(chain.steps[0].kind, StepKind::DualReduce);
        assert_eq!(chain.steps[0].k, big(11));
    }

    #[test]
    fn nice_statuses_for_non_window_inputs() {
        let g2 = Classifier::new(genus(2));
        let out = g2.is_nice(&pair(4, 8));
        assert!(!out.verdict);
        assert_eq!(out.status, NiceStatus::TerminalDivisible);

        let out = g2.is_nice(&pair(4, 3));
        assert!(!out.verdict);
        assert_eq!(out.status, NiceStatus::Outside);

        let out = g2.is_nice(&pair(1, 2));
        assert!(out.verdict);
        assert_eq!(out.status, NiceStatus::TerminalLine);
        assert!(out.witness.unwrap().steps.is_empty());
    }

    #[test]
    fn nice_agrees_with_reachability_oracle() {
        for g in 2i64..=5 {
            let gn = genus(g);
            let cls = Classifier::new(gn.clone());
            for n in 2i64..=10 {
                for d in (n * (g - 1) + 1)..(n * g) {
                    let p = pair(n, d);
                    assert_eq!(
                        cls.is_nice(&p).verdict,
                        oracles::nice_by_reachability(&gn, &p),
                        "disagreement at genus {g} on {p}"
                    );
                }
            }
        }
    }

    #[test]
    fn fine_examples() {
        let g6 = Classifier::new(genus(6));

        // m = 8 member of the family links through the shared
        // dual-reduction target (7;38). The search picks the smallest nice
        // pair that can reach the meet, which is (24;125), one top pair
        // away just like the alternative through (60;307).
        let out = g6.is_fine(&pair(67, 342)).unwrap();
        assert!(out.verdict);
        let diagram = out.witness.unwrap();
        diagram.validate().unwrap();
        assert_eq!(diagram.top, vec![pair(67, 342), pair(24, 125)]);
        assert_eq!(diagram.links.len(), 1);
        let link = &diagram.links[0];
        assert_eq!(link.meet, pair(7, 38));
        assert_eq!(link.left_chain.pairs(), vec![pair(67, 342), pair(7, 38)]);
        assert_eq!(link.left_chain.steps[0].k, big(51));
        assert_eq!(
            link.right_chain.pairs(),
            vec![pair(24, 125), pair(19, 106), pair(11, 59), pair(7, 38)]
        );

        // The diagram through (60;307) is also admissible; build
        // it by hand and replay it.
        let manual = AdmissibleDiagram {
            genus: genus(6),
            top: vec![pair(67, 342), pair(60, 307)],
            links: vec![DiagramLink {
                left_chain: ReductionChain {
                    genus: genus(6),
                    start: pair(67, 342),
                    steps: vec![dual_reduce(&genus(6), &pair(67, 342)).unwrap()],
                },
                right_chain: ReductionChain {
                    genus: genus(6),
                    start: pair(60, 307),
                    steps: vec![dual_reduce(&genus(6), &pair(60, 307)).unwrap()],
                },
                meet: pair(7, 38),
            }],
            terminal_nice_witness: g6.is_nice(&pair(60, 307)).witness.unwrap(),
        };
        manual.validate().unwrap();
        assert_eq!(manual.links[0].left_chain.steps[0].k, big(51));
        assert_eq!(manual.links[0].right_chain.steps[0].k, big(45));

        // Nice pairs get the trivial diagram; canonical shifts frozen from
        // the interval solve.
        let out = g6.is_fine(&pair(60, 307)).unwrap();
        assert!(out.verdict);
        let diagram = out.witness.unwrap();
        diagram.validate().unwrap();
        assert_eq!(diagram.top, vec![pair(60, 307)]);
        assert!(diagram.links.is_empty());
        assert_eq!(
            diagram
                .terminal_nice_witness
                .steps
                .iter()
                .map(|s| s.k.clone())
                .collect::<Vec<_>>(),
            vec![big(0), big(22), big(59)]
        );

        let g2 = Classifier::new(genus(2));
        let out = g2.is_fine(&pair(4, 6)).unwrap();
        assert!(!out.verdict);
        assert!(out.witness.is_none());

        assert!(g2.is_fine(&pair(4, 9)).is_err());
    }

    #[test]
    fn enumerate_genus_two_small_cone() {
        let cls = Classifier::new(genus(2));
        let reports: Vec<ClassificationReport> = cls.enumerate(&big(4)).collect();
        let points: Vec<Pair> = reports.iter().map(|r| r.pair.clone()).collect();
        assert_eq!(
            points,
            vec![
                pair(1, 2),
                pair(2, 3),
                pair(3, 4),
                pair(3, 5),
                pair(4, 5),
                pair(4, 6),
                pair(4, 7)
            ]
        );
        let nice: Vec<Pair> = reports
            .iter()
            .filter(|r| r.is_nice)
            .map(|r| r.pair.clone())
            .collect();
        assert_eq!(
            nice,
            vec![
                pair(1, 2),
                pair(2, 3),
                pair(3, 4),
                pair(3, 5),
                pair(4, 5),
                pair(4, 7)
            ]
        );
        let odd = reports.iter().find(|r| r.pair == pair(4, 6)).unwrap();
        assert!(!odd.is_nice && !odd.is_fine);
        assert_eq!(odd.gcd_nd, big(2));

        let reports: Vec<ClassificationReport> = cls.enumerate(&big(1)).collect();
        assert_eq!(reports.len(), 1);
        assert!(reports[0].is_nice);
        assert_eq!(reports[0].pair, pair(1, 2));
    }

    #[test]
    fn enumerate_flags_the_worked_example() {
        let cls = Classifier::new(genus(6));
        let report = cls
            .enumerate(&big(15))
            .find(|r| r.pair == pair(15, 77))
            .unwrap();
        assert!(report.is_nice);
        assert!(report.is_fine);
        assert!(!report.newstead_condition);
        assert!(report.gcd_corollary_holds);
    }

    #[test]
    fn report_invariants_on_enumeration() {
        for g in 2i64..=3 {
            let cls = Classifier::new(genus(g));
            for report in cls.enumerate(&big(8)) {
                if report.is_nice {
                    assert!(report.is_fine, "nice implies fine at {}", report.pair);
                    assert!(report.gcd_corollary_holds);
                    let chain = report.nice_witness.as_ref().unwrap();
                    chain.validate().unwrap();
                    assert_eq!(chain.start, report.pair);
                }
                if report.is_fine {
                    assert!(
                        report.gcd_nd.is_one(),
                        "fine implies coprime at {}",
                        report.pair
                    );
                    report.fine_witness.as_ref().unwrap().validate().unwrap();
                }
            }
        }
    }

    #[test]
    fn newstead_examples() {
        assert!(!newstead_condition(&genus(6), &pair(15, 77)));
        assert!(newstead_condition(&genus(2), &pair(2, 3)));
        assert!(newstead_condition(&genus(3), &pair(4, 11)));
        // gcd > 1 and d not +/-1 mod n
        assert!(!newstead_condition(&genus(2), &pair(4, 6)));
        // coprime, g = 6 = 2*3 with 2 + 3 = 5 > 4
        assert!(newstead_condition(&genus(6), &pair(4, 21)));
    }

    #[test]
    fn predecessor_examples_terminal_line() {
        let g6 = genus(6);
        let target = pair(1, 6);
        let via_r = predecessors_via_reduction(&g6, &target, &big(5)).unwrap();
        let pairs: Vec<Pair> = via_r.iter().map(|p| p.pair.clone()).collect();
        assert_eq!(
            pairs,
            vec![pair(2, 11), pair(3, 17), pair(4, 23), pair(5, 29)]
        );

        let via_d = predecessors_via_dual(&g6, &target, &big(5)).unwrap();
        let pairs: Vec<Pair> = via_d.iter().map(|p| p.pair.clone()).collect();
        assert_eq!(
            pairs,
            vec![pair(2, 11), pair(3, 16), pair(4, 21), pair(5, 26)]
        );

        let g2 = genus(2);
        let via_r = predecessors_via_reduction(&g2, &pair(1, 2), &big(3)).unwrap();
        let pairs: Vec<Pair> = via_r.iter().map(|p| p.pair.clone()).collect();
        assert_eq!(pairs, vec![pair(2, 3), pair(3, 5)]);

        let via_d = predecessors_via_dual(&g2, &pair(1, 2), &big(2)).unwrap();
        assert_eq!(via_d.len(), 1);
        assert_eq!(via_d[0].pair, pair(2, 3));
        assert_eq!(via_d[0].k, big(1));
    }

    #[test]
    fn predecessor_lists_for_the_family_meet() {
        // Derived with the scan oracle and frozen: ancestors of (7;38) at
        // genus 6 with rank <= 25, split by step kind.
        let g6 = genus(6);
        let target = pair(7, 38);
        let n_max = big(25);

        let via_r = predecessors_via_reduction(&g6, &target, &n_max).unwrap();
        let expect_r = vec![
            Predecessor {
                pair: pair(11, 59),
                k: big(3),
            },
            Predecessor {
                pair: pair(18, 101),
                k: big(9),
            },
            Predecessor {
                pair: pair(25, 143),
                k: big(15),
            },
        ];
        assert_eq!(via_r, expect_r);

        let via_d = predecessors_via_dual(&g6, &target, &n_max).unwrap();
        let expect_d = vec![
            Predecessor {
                pair: pair(11, 62),
                k: big(3),
            },
            Predecessor {
                pair: pair(18, 97),
                k: big(9),
            },
            Predecessor {
                pair: pair(25, 132),
                k: big(15),
            },
        ];
        assert_eq!(via_d, expect_d);

        let (scan_r, scan_d) = oracles::scan_predecessors(&g6, &target, &n_max);
        assert_eq!(scan_r, expect_r);
        assert_eq!(scan_d, expect_d);
    }

    #[test]
    fn predecessors_reject_bad_targets() {
        let g2 = genus(2);
        assert!(predecessors_via_reduction(&g2, &pair(4, 8), &big(10)).is_err());
        assert!(predecessors_via_dual(&g2, &pair(4, 9), &big(10)).is_err());
    }

    #[test]
    fn gcd_lemma_examples() {
        let g2 = genus(2);
        assert!(verify_gcd_lemma(&g2, &pair(7, 8)).unwrap());
        assert!(verify_gcd_lemma(&g2, &pair(4, 6)).unwrap());
        assert!(verify_gcd_lemma(&genus(6), &pair(15, 77)).unwrap());
        assert!(verify_gcd_lemma(&g2, &pair(4, 8)).is_err());
    }

    #[test]
    fn classification_is_deterministic() {
        let cls = Classifier::new(genus(6));
        let p = pair(67, 342);
        let a = cls.classify(&p);
        let b = cls.classify(&p);
        assert_eq!(a, b);
        // a fresh classifier agrees with a memo-warmed one
        let fresh = Classifier::new(genus(6)).classify(&p);
        assert_eq!(a, fresh);
    }

    #[test]
    fn classify_outside_pair_is_total() {
        let cls = Classifier::new(genus(2));
        let report = cls.classify(&pair(5, 3));
        assert_eq!(report.window, WindowStatus::Outside);
        assert!(!report.is_nice && !report.is_fine);
        assert!(report.nice_witness.is_none() && report.fine_witness.is_none());
    }
}

#[cfg(test)]
mod concurrency_tests {
    use super::*;

    #[test]
    fn classifier_is_send_and_sync() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Classifier>();
    }

    #[test]
    fn concurrent_classification_matches_sequential() {
        let genus = Genus::new(6).unwrap();
        let pairs: Vec<Pair> = (2i64..=30)
            .flat_map(|n| (n * 5 + 1..n * 6).map(move |d| Pair::new(n, d).unwrap()))
            .collect();
        let sequential: Vec<ClassificationReport> = {
            let cls = Classifier::new(genus.clone());
            pairs.iter().map(|p| cls.classify(p)).collect()
        };
        let shared = Classifier::new(genus);
        let concurrent: Vec<ClassificationReport> = std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for chunk in pairs.chunks(pairs.len().div_ceil(4)) {
                let cls = &shared;
                handles.push(
                    scope.spawn(move || chunk.iter().map(|p| cls.classify(p)).collect::<Vec<_>>()),
                );
            }
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("worker"))
                .collect()
        });
        assert_eq!(concurrent, sequential);
    }
}
