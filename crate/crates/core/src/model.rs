//! Task-level system interface and the system-level semantics derived from it.
//!
//! A system state maps every key of a fixed [`KeySet`] to a per-task state
//! ("t-state"). A step for key `k` rewrites only the entry of `k`; the
//! system-level blocking relation holds when any key's t-state blocks `k`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::hash::Hash;
use core::str::FromStr;

use crate::ordinal::Ordinal;

/// Task identifier. Keys of an instance with `n` tasks are `k0 .. k(n-1)`,
/// ordered by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Key(u32);

impl Key {
    pub const fn new(index: u32) -> Self {
        Key(index)
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    /// Position of the key in the sorted key order.
    pub const fn ndx(self) -> u64 {
        self.0 as u64
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid key name")]
pub struct KeyParseError;

impl FromStr for Key {
    type Err = KeyParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.strip_prefix('k')
            .and_then(|n| n.parse().ok())
            .map(Key)
            .ok_or(KeyParseError)
    }
}

/// The fixed, finite, totally ordered key set of an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KeySet {
    len: u32,
}

impl KeySet {
    pub const fn new(len: u32) -> Self {
        KeySet { len }
    }

    pub const fn len(self) -> usize {
        self.len as usize
    }

    pub const fn is_empty(self) -> bool {
        self.len == 0
    }

    pub fn contains(self, k: Key) -> bool {
        k.0 < self.len
    }

    pub fn iter(self) -> impl Iterator<Item = Key> + Clone {
        (0..self.len).map(Key)
    }
}

/// A step selector: a key, or the stutter marker.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Selector {
    Stutter,
    Key(Key),
}

impl Selector {
    pub fn key(self) -> Option<Key> {
        match self {
            Selector::Key(k) => Some(k),
            Selector::Stutter => None,
        }
    }
}

impl From<Key> for Selector {
    fn from(k: Key) -> Self {
        Selector::Key(k)
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::Stutter => f.write_str("-"),
            Selector::Key(k) => k.fmt(f),
        }
    }
}

impl FromStr for Selector {
    type Err = KeyParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "-" {
            Ok(Selector::Stutter)
        } else {
            s.parse().map(Selector::Key)
        }
    }
}

/// System state: one t-state per key of the instance.
///
/// Every key is always present. States built from a partial assignment use
/// the system's initial t-state for the missing keys.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SystemState<T> {
    tasks: Vec<T>,
}

impl<T> SystemState<T> {
    pub fn from_tasks(tasks: Vec<T>) -> Self {
        SystemState { tasks }
    }

    /// Fills every key absent from `set` with the system's default t-state.
    pub fn from_partial<S>(sys: &S, keys: KeySet, mut set: BTreeMap<Key, T>) -> Self
    where
        S: TaskSystem<TState = T> + ?Sized,
    {
        let tasks = keys
            .iter()
            .map(|k| set.remove(&k).unwrap_or_else(|| sys.initial(k)))
            .collect();
        SystemState { tasks }
    }

    pub fn keys(&self) -> KeySet {
        KeySet::new(self.tasks.len() as u32)
    }

    /// The t-state of `k`. Panics if `k` is outside the key set.
    pub fn get(&self, k: Key) -> &T {
        &self.tasks[k.index()]
    }

    pub fn tasks(&self) -> &[T] {
        &self.tasks
    }

    pub fn into_tasks(self) -> Vec<T> {
        self.tasks
    }

    pub fn iter(&self) -> impl Iterator<Item = (Key, &T)> {
        self.tasks
            .iter()
            .enumerate()
            .map(|(i, t)| (Key::new(i as u32), t))
    }
}

impl<T: Clone> SystemState<T> {
    /// Copy of `self` with the entry of `k` replaced.
    pub fn with(&self, k: Key, value: T) -> Self {
        let mut tasks = self.tasks.clone();
        tasks[k.index()] = value;
        SystemState { tasks }
    }
}

/// Liveness bundle: per-pair progress obligations of a task system.
pub trait Validity<T> {
    /// `a` can no longer be blocked by `b` until `a` itself moves.
    fn t_noblk(&self, a: &T, b: &T) -> bool;
    /// Positive natural that decreases on `b`'s steps until `t_noblk(a, b)`.
    fn t_nstrv(&self, a: &T, b: &T) -> u64;
    /// Decreases strictly from a blocked key to each of its blockers.
    fn t_nlock(&self, k: Key, x: &SystemState<T>) -> Ordinal;
}

/// A named state predicate checked on every explored state.
pub struct NamedInvariant<T> {
    pub name: &'static str,
    pub holds: fn(&SystemState<T>) -> bool,
}

/// Task-based transition system.
///
/// `t_next` is the mandatory relational form; `successors` is optional and
/// must agree with it when present.
pub trait TaskSystem {
    type TState: Clone + Ord + Hash + fmt::Debug;

    fn name(&self) -> &str;

    /// Initial t-state of `k`, also the default for unset keys.
    fn initial(&self, k: Key) -> Self::TState;

    fn t_init(&self, a: &Self::TState, k: Key) -> bool;

    fn t_next(
        &self,
        a: &Self::TState,
        b: &Self::TState,
        x: &SystemState<Self::TState>,
    ) -> bool;

    /// `a` is blocked from stepping by `b`.
    fn t_blok(&self, a: &Self::TState, b: &Self::TState) -> bool;

    fn successors(
        &self,
        _a: &Self::TState,
        _x: &SystemState<Self::TState>,
    ) -> Option<Vec<Self::TState>> {
        None
    }

    fn validity(&self) -> Option<&dyn Validity<Self::TState>> {
        None
    }

    /// State normalization preserving every predicate of the system.
    fn canon(&self, _x: &SystemState<Self::TState>) -> Option<SystemState<Self::TState>> {
        None
    }

    /// `t_next` ignores the surrounding state and `t_init` ignores the key.
    fn state_independent(&self) -> bool {
        false
    }

    /// A finite t-state domain for blocking-cycle enumeration over `keys`.
    fn tstate_domain(&self, _keys: KeySet) -> Option<Vec<Self::TState>> {
        None
    }

    /// State invariants the system claims for its reachable states.
    fn invariants(&self) -> Vec<NamedInvariant<Self::TState>> {
        Vec::new()
    }
}

/// Refinement bundle from `Self` to `S`.
pub trait Refines<S: TaskSystem>: TaskSystem {
    fn t_map(&self, a: &Self::TState) -> S::TState;
    fn t_rank(&self, a: &Self::TState) -> Ordinal;
}

pub fn initial_state<S: TaskSystem + ?Sized>(sys: &S, keys: KeySet) -> SystemState<S::TState> {
    SystemState::from_tasks(keys.iter().map(|k| sys.initial(k)).collect())
}

pub fn sys_init<S: TaskSystem + ?Sized>(x: &SystemState<S::TState>, sys: &S) -> bool {
    x.iter().all(|(k, a)| sys.t_init(a, k))
}

pub fn sys_next_check<S: TaskSystem + ?Sized>(
    x: &SystemState<S::TState>,
    y: &SystemState<S::TState>,
    k: Key,
    sys: &S,
) -> bool {
    if x.keys() != y.keys() || !x.keys().contains(k) {
        return false;
    }
    let frame = x
        .iter()
        .zip(y.iter())
        .all(|((l, a), (_, b))| l == k || a == b);
    frame && sys.t_next(x.get(k), y.get(k), x)
}

pub fn sys_blok<S: TaskSystem + ?Sized>(x: &SystemState<S::TState>, k: Key, sys: &S) -> bool {
    let a = x.get(k);
    x.tasks().iter().any(|b| sys.t_blok(a, b))
}

/// One step of a run: stutter and blocked selections leave the state unchanged.
pub fn legal_step<S: TaskSystem + ?Sized>(
    x: &SystemState<S::TState>,
    y: &SystemState<S::TState>,
    sel: Selector,
    sys: &S,
) -> bool {
    match sel {
        Selector::Stutter => x == y,
        Selector::Key(k) if !x.keys().contains(k) => false,
        Selector::Key(k) if sys_blok(x, k, sys) => x == y,
        Selector::Key(k) => sys_next_check(x, y, k, sys),
    }
}

/// System successors for `k` (ignoring blocking), when the system can enumerate.
pub fn sys_successors<S: TaskSystem + ?Sized>(
    x: &SystemState<S::TState>,
    k: Key,
    sys: &S,
) -> Option<Vec<SystemState<S::TState>>> {
    let succ = sys.successors(x.get(k), x)?;
    Some(succ.into_iter().map(|b| x.with(k, b)).collect())
}

pub fn map_state<I, S>(x: &SystemState<I::TState>, imp: &I) -> SystemState<S::TState>
where
    I: Refines<S> + ?Sized,
    S: TaskSystem,
{
    SystemState::from_tasks(x.tasks().iter().map(|a| imp.t_map(a)).collect())
}

pub fn sys_rank<I, S>(k: Key, x: &SystemState<I::TState>, imp: &I) -> Ordinal
where
    I: Refines<S> + ?Sized,
    S: TaskSystem,
{
    imp.t_rank(x.get(k))
}

/// `x` with canonicalization applied when the system provides one.
pub fn canonical<S: TaskSystem + ?Sized>(
    x: &SystemState<S::TState>,
    sys: &S,
) -> SystemState<S::TState> {
    sys.canon(x).unwrap_or_else(|| x.clone())
}
