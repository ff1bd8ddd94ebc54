//! Breadth-first exploration of finite instances.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::hash::BuildHasher;

use hashbrown::hash_table::{Entry, HashTable};
use hashbrown::DefaultHashBuilder;

use crate::model::{canonical, initial_state, sys_blok, Key, KeySet, SystemState, TaskSystem};
use crate::report::{CheckReport, Completeness, Counterexample, Suite, Tally, Theorem, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExploreOptions {
    pub depth: Option<usize>,
    pub state_cap: usize,
    pub use_canon: bool,
}

pub const DEFAULT_STATE_CAP: usize = 1_000_000;

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions {
            depth: None,
            state_cap: DEFAULT_STATE_CAP,
            use_canon: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExploreError {
    #[error("system cannot enumerate successors")]
    MissingEnumerator,
    #[error("system has no canonicalizer")]
    MissingCanonicalizer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub src: usize,
    pub key: Key,
    pub dst: usize,
}

/// Reachable states of an instance and the legal transitions between them.
///
/// Only unblocked keys contribute edges: a blocked selection leaves the state
/// unchanged. A complete graph is closed under the successors of every
/// unblocked key. State ids follow discovery order.
#[derive(Clone, Debug)]
pub struct StateGraph<T> {
    keys: KeySet,
    states: Vec<SystemState<T>>,
    edges: Vec<Edge>,
    raw_initial: SystemState<T>,
    canonical: bool,
    completeness: Completeness,
    hasher: DefaultHashBuilder,
    table: HashTable<usize>,
}

impl<T: Clone + Eq + core::hash::Hash> StateGraph<T> {
    fn new(keys: KeySet, raw_initial: SystemState<T>, canonical: bool) -> Self {
        StateGraph {
            keys,
            states: Vec::new(),
            edges: Vec::new(),
            raw_initial,
            canonical,
            completeness: Completeness::Complete,
            hasher: DefaultHashBuilder::default(),
            table: HashTable::new(),
        }
    }

    /// Assembles a graph from parts, e.g. when reading a dump.
    pub fn from_parts(
        keys: KeySet,
        states: Vec<SystemState<T>>,
        edges: Vec<Edge>,
        raw_initial: SystemState<T>,
        canonical: bool,
        completeness: Completeness,
    ) -> Self {
        let mut g = StateGraph::new(keys, raw_initial, canonical);
        g.completeness = completeness;
        for s in states {
            g.insert(s);
        }
        g.edges = edges;
        g
    }

    /// Inserts `x` unless present; returns its id and whether it was new.
    fn insert(&mut self, x: SystemState<T>) -> (usize, bool) {
        let h = self.hasher.hash_one(&x);
        let states = &self.states;
        let hasher = &self.hasher;
        match self
            .table
            .entry(h, |&i| states[i] == x, |&i| hasher.hash_one(&states[i]))
        {
            Entry::Occupied(e) => (*e.get(), false),
            Entry::Vacant(e) => {
                let id = self.states.len();
                e.insert(id);
                self.states.push(x);
                (id, true)
            }
        }
    }

    /// Id of `x`, which must already be in the graph's normal form.
    pub fn id_of(&self, x: &SystemState<T>) -> Option<usize> {
        let h = self.hasher.hash_one(x);
        self.table.find(h, |&i| self.states[i] == *x).copied()
    }

    pub fn contains(&self, x: &SystemState<T>) -> bool {
        self.id_of(x).is_some()
    }
}

impl<T> StateGraph<T> {
    pub fn keys(&self) -> KeySet {
        self.keys
    }

    pub fn states(&self) -> &[SystemState<T>] {
        &self.states
    }

    pub fn state(&self, id: usize) -> &SystemState<T> {
        &self.states[id]
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Id of the initial state; always 0.
    pub fn initial(&self) -> usize {
        0
    }

    /// The initial state before canonicalization.
    pub fn raw_initial(&self) -> &SystemState<T> {
        &self.raw_initial
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn completeness(&self) -> Completeness {
        self.completeness
    }
}

/// Breadth-first closure from the initial state.
pub fn explore<S: TaskSystem + ?Sized>(
    sys: &S,
    keys: KeySet,
    opts: ExploreOptions,
) -> Result<StateGraph<S::TState>, ExploreError> {
    let raw = initial_state(sys, keys);
    let norm = |x: SystemState<S::TState>| -> Result<SystemState<S::TState>, ExploreError> {
        if opts.use_canon {
            sys.canon(&x)
                .ok_or(ExploreError::MissingCanonicalizer)
        } else {
            Ok(x)
        }
    };
    let mut g = StateGraph::new(keys, raw.clone(), opts.use_canon);
    let (init, _) = g.insert(norm(raw)?);
    let mut depth = vec![0usize];
    let mut queue = VecDeque::from([init]);
    let mut hit_cap = false;
    let mut hit_depth = false;

    while let Some(id) = queue.pop_front() {
        let x = g.states[id].clone();
        let at_limit = opts.depth.is_some_and(|d| depth[id] >= d);
        for k in keys.iter() {
            if sys_blok(&x, k, sys) {
                continue;
            }
            let succ = sys
                .successors(x.get(k), &x)
                .ok_or(ExploreError::MissingEnumerator)?;
            for b in succ {
                let y = norm(x.with(k, b))?;
                if at_limit {
                    if !g.contains(&y) {
                        hit_depth = true;
                    }
                    continue;
                }
                if let Some(dst) = g.id_of(&y) {
                    g.edges.push(Edge { src: id, key: k, dst });
                } else if g.states.len() >= opts.state_cap {
                    hit_cap = true;
                } else {
                    let (dst, _) = g.insert(y);
                    depth.push(depth[id] + 1);
                    queue.push_back(dst);
                    g.edges.push(Edge { src: id, key: k, dst });
                }
            }
        }
    }
    g.completeness = if hit_cap {
        Completeness::TruncatedByCap
    } else if hit_depth {
        Completeness::TruncatedByDepth
    } else {
        Completeness::Complete
    };
    Ok(g)
}

/// `x` without the entry of `dropped`, keys renumbered in order.
pub fn project<T: Clone>(x: &SystemState<T>, dropped: Key) -> SystemState<T> {
    SystemState::from_tasks(
        x.iter()
            .filter(|(k, _)| *k != dropped)
            .map(|(_, a)| a.clone())
            .collect(),
    )
}

/// Every reachable `n`-key state, restricted to any `n - 1` keys, is a
/// reachable `(n - 1)`-key state.
///
/// Only meaningful for state-independent systems; others are reported
/// inapplicable. The projection drops one key and renumbers the rest, which
/// is the identity renaming for systems whose t-states do not mention keys.
pub fn substate_closure_check<S: TaskSystem + ?Sized>(
    sys: &S,
    n: usize,
    opts: ExploreOptions,
) -> Result<CheckReport<S::TState>, ExploreError> {
    let mut report = CheckReport::new(Suite::SubstateClosure, Completeness::Complete, 0);
    if !sys.state_independent() {
        report.verdicts.push(Verdict::inapplicable(
            Theorem::SubstateClosure,
            format!("{} steps read the surrounding state", sys.name()),
        ));
        return Ok(report);
    }
    if n < 2 {
        report.verdicts.push(Verdict::inapplicable(
            Theorem::SubstateClosure,
            "needs at least 2 keys",
        ));
        return Ok(report);
    }
    let opts = ExploreOptions {
        use_canon: opts.use_canon && sys.canon(&initial_state(sys, KeySet::new(1))).is_some(),
        ..opts
    };
    let big = explore(sys, KeySet::new(n as u32), opts)?;
    let small = explore(sys, KeySet::new(n as u32 - 1), opts)?;
    report.completeness = big.completeness().meet(small.completeness());
    report.states = big.len() + small.len();
    let mut tally = Tally::new(Theorem::SubstateClosure);
    for x in big.states() {
        for d in big.keys().iter() {
            let p = project(x, d);
            let p = if opts.use_canon { canonical(&p, sys) } else { p };
            tally.record(small.contains(&p), || {
                Counterexample::at(x.clone())
                    .key(d)
                    .next_state(p.clone())
                    .detail("projection dropping k is not reachable with one key fewer")
            });
        }
    }
    report.pairs = (big.len() * n) as u64;
    report.verdicts.push(tally.finish());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{BakeryImpl, Relay};

    #[test]
    fn relay_one_key() {
        let g = explore(&Relay::new(), KeySet::new(1), ExploreOptions::default()).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.edges().len(), 3);
        assert!(g.completeness().is_complete());
    }

    #[test]
    fn bakery_without_canon_truncates_by_depth() {
        let opts = ExploreOptions {
            depth: Some(3),
            ..ExploreOptions::default()
        };
        let g = explore(&BakeryImpl::new(), KeySet::new(2), opts).unwrap();
        assert_eq!(g.completeness(), Completeness::TruncatedByDepth);
    }

    #[test]
    fn cap_is_a_flag() {
        let opts = ExploreOptions {
            state_cap: 10,
            use_canon: true,
            ..ExploreOptions::default()
        };
        let g = explore(&BakeryImpl::new(), KeySet::new(2), opts).unwrap();
        assert_eq!(g.completeness(), Completeness::TruncatedByCap);
        assert_eq!(g.len(), 10);
    }

    #[test]
    fn missing_canon_is_an_error() {
        let opts = ExploreOptions {
            use_canon: true,
            ..ExploreOptions::default()
        };
        assert!(matches!(
            explore(&Relay::new(), KeySet::new(1), opts),
            Err(ExploreError::MissingCanonicalizer)
        ));
    }

    #[test]
    fn closure_relay_and_bakery() {
        for n in [2, 3] {
            let r = substate_closure_check(&Relay::new(), n, ExploreOptions::default()).unwrap();
            assert!(r.passed(), "relay n={n}");
        }
        let r = substate_closure_check(&BakeryImpl::new(), 2, ExploreOptions::default()).unwrap();
        assert_eq!(r.verdicts[0].status, crate::report::Status::Inapplicable);
    }
}
