//! Derived progress measures: system-level noblk, the starver chain and its
//! ordinal, and forward-scan progress distances on finite run prefixes.

use alloc::vec::Vec;

use crate::model::{Key, Selector, SystemState, TaskSystem, Validity};
use crate::ordinal::{nats_to_ord, Ordinal, OrdinalError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MeasureError {
    #[error("{0} is not blocked")]
    NotBlocked(Key),
    /// The blocking chain revisits a key; the lock measure cannot be valid.
    #[error("blocking chain from {} revisits a key", chain[0])]
    PikblkCycle { chain: Vec<Key> },
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

/// `k` cannot be blocked by any key until `k` moves.
pub fn sys_noblk<T>(k: Key, x: &SystemState<T>, val: &dyn Validity<T>) -> bool {
    let a = x.get(k);
    x.tasks().iter().all(|b| val.t_noblk(a, b))
}

/// The least key blocking `k`.
pub fn pikblk<S: TaskSystem + ?Sized>(
    k: Key,
    x: &SystemState<S::TState>,
    sys: &S,
) -> Result<Key, MeasureError> {
    let a = x.get(k);
    x.iter()
        .find(|(_, b)| sys.t_blok(a, b))
        .map(|(l, _)| l)
        .ok_or(MeasureError::NotBlocked(k))
}

/// Keys visited by following `pikblk` from `k`; the last one is unblocked.
pub fn starver_chain<S: TaskSystem + ?Sized>(
    k: Key,
    x: &SystemState<S::TState>,
    sys: &S,
) -> Result<Vec<Key>, MeasureError> {
    let mut chain = alloc::vec![k];
    let mut cur = k;
    loop {
        match pikblk(cur, x, sys) {
            Err(_) => return Ok(chain),
            Ok(next) => {
                let revisit = chain.contains(&next);
                chain.push(next);
                if revisit {
                    return Err(MeasureError::PikblkCycle { chain });
                }
                cur = next;
            }
        }
    }
}

pub fn starver<S: TaskSystem + ?Sized>(
    k: Key,
    x: &SystemState<S::TState>,
    sys: &S,
) -> Result<Key, MeasureError> {
    starver_chain(k, x, sys).map(|c| *c.last().expect("chain starts at k"))
}

/// `1 + sum of t_nstrv(gk, gl)` over the keys `l` that may still block `k`.
pub fn sum_nsts<T>(k: Key, x: &SystemState<T>, val: &dyn Validity<T>) -> u64 {
    let a = x.get(k);
    1 + x
        .tasks()
        .iter()
        .filter(|b| !val.t_noblk(a, b))
        .map(|b| val.t_nstrv(a, b))
        .sum::<u64>()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarverTraceEntry {
    pub key: Key,
    pub sum_nsts: u64,
    pub blocked: bool,
}

pub fn starver_trace<S: TaskSystem + ?Sized>(
    k: Key,
    x: &SystemState<S::TState>,
    sys: &S,
    val: &dyn Validity<S::TState>,
) -> Result<Vec<StarverTraceEntry>, MeasureError> {
    let chain = starver_chain(k, x, sys)?;
    let last = chain.len() - 1;
    Ok(chain
        .into_iter()
        .enumerate()
        .map(|(i, key)| StarverTraceEntry {
            key,
            sum_nsts: sum_nsts(key, x, val),
            blocked: i < last,
        })
        .collect())
}

/// `sum_nsts` along the chain from `k` to its starver.
pub fn nstrvs_list<S: TaskSystem + ?Sized>(
    k: Key,
    x: &SystemState<S::TState>,
    sys: &S,
    val: &dyn Validity<S::TState>,
) -> Result<Vec<u64>, MeasureError> {
    Ok(starver_chain(k, x, sys)?
        .into_iter()
        .map(|l| sum_nsts(l, x, val))
        .collect())
}

pub fn sys_nstrv<S: TaskSystem + ?Sized>(
    k: Key,
    x: &SystemState<S::TState>,
    sys: &S,
    val: &dyn Validity<S::TState>,
) -> Result<Ordinal, MeasureError> {
    let list = nstrvs_list(k, x, sys, val)?;
    Ok(nats_to_ord(x.keys().len() as u64, &list)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProgError {
    /// No progress step of the key within the horizon.
    #[error("no progress for {key} within {horizon} steps of index {index}")]
    HorizonExceeded { key: Key, index: usize, horizon: u64 },
    /// The prefix ends before any progress step of the key.
    #[error("no progress for {key} after index {index} before the trace ends")]
    Unresolved { key: Key, index: usize },
}

/// Distance from index `i` to the next step at which `k` is picked and the
/// state changes, scanning forward over `states`/`picks`.
///
/// Keys outside the key set yield 0.
pub fn prog<T: PartialEq>(
    k: Key,
    i: usize,
    states: &[SystemState<T>],
    picks: &[Selector],
    horizon: u64,
) -> Result<u64, ProgError> {
    if states.first().is_some_and(|x| !x.keys().contains(k)) {
        return Ok(0);
    }
    let mut d = 0u64;
    loop {
        let j = i + d as usize + 1;
        if j >= states.len() || j > picks.len() {
            return Err(ProgError::Unresolved { key: k, index: i });
        }
        if d >= horizon {
            return Err(ProgError::HorizonExceeded {
                key: k,
                index: i,
                horizon,
            });
        }
        if picks[j - 1] == Selector::Key(k) && states[j] != states[j - 1] {
            return Ok(d);
        }
        d += 1;
    }
}

pub fn impl_prog<T: PartialEq>(
    k: Key,
    i: usize,
    trace: &crate::run::Trace<T>,
    horizon: u64,
) -> Result<u64, ProgError> {
    prog(k, i, &trace.states, &trace.picks, horizon)
}

/// Progress distance on the mapped trace (`map_trace` output).
pub fn spec_prog<T: PartialEq>(
    k: Key,
    i: usize,
    spec_trace: &crate::run::Trace<T>,
    horizon: u64,
) -> Result<u64, ProgError> {
    prog(k, i, &spec_trace.states, &spec_trace.picks, horizon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::bakery::BakeImplTState;
    use crate::systems::BakeryImpl;
    use alloc::vec;

    fn at(k: u32, loc: u8, pos: u64) -> BakeImplTState {
        let mut a = BakeImplTState::initial(Key::new(k));
        a.loc = loc;
        a.pos = pos;
        a.choosing = (1..=4).contains(&loc);
        a.pos_valid = (3..=7).contains(&loc);
        a
    }

    #[test]
    fn noblk_and_sum() {
        let b = BakeryImpl::new();
        let x = SystemState::from_tasks(vec![at(0, 3, 1), at(1, 1, 1)]);
        assert!(sys_noblk(Key::new(0), &x, &b));
        assert_eq!(sum_nsts(Key::new(0), &x, &b), 1);
        let x = SystemState::from_tasks(vec![at(0, 5, 1), at(1, 1, 1)]);
        assert!(!sys_noblk(Key::new(0), &x, &b));
        // The choosing peer at loc 1 contributes 5 - 1; self is quiet only
        // when its own pos exceeds itself, so it contributes too.
        let own = b.t_nstrv(x.get(Key::new(0)), x.get(Key::new(0)));
        assert_eq!(sum_nsts(Key::new(0), &x, &b), 1 + 4 + own);
    }

    #[test]
    fn chain_to_starver() {
        let b = BakeryImpl::new();
        // k0 at loc 5 waits on choosing k1; k1 at loc 6 waits on k2 with a
        // lower ticket; k2 at loc 7 is free.
        let x = SystemState::from_tasks(vec![at(0, 5, 9), at(1, 4, 5), at(2, 7, 2)]);
        assert_eq!(pikblk(Key::new(0), &x, &b), Ok(Key::new(1)));
        assert_eq!(starver(Key::new(0), &x, &b), Ok(Key::new(1)));
        let x = SystemState::from_tasks(vec![at(0, 5, 9), at(1, 6, 5), at(2, 7, 2)]);
        assert_eq!(pikblk(Key::new(0), &x, &b), Err(MeasureError::NotBlocked(Key::new(0))));
        let x = SystemState::from_tasks(vec![at(0, 6, 9), at(1, 6, 5), at(2, 7, 2)]);
        assert_eq!(
            starver_chain(Key::new(0), &x, &b),
            Ok(vec![Key::new(0), Key::new(1), Key::new(2)])
        );
        assert_eq!(nstrvs_list(Key::new(0), &x, &b, &b).unwrap().len(), 3);
        let t = starver_trace(Key::new(0), &x, &b, &b).unwrap();
        assert!(t[0].blocked && t[1].blocked && !t[2].blocked);
    }

    #[test]
    fn pikblk_prefers_least_key() {
        let b = BakeryImpl::new();
        let x = SystemState::from_tasks(vec![at(0, 3, 1), at(1, 2, 1), at(2, 5, 4)]);
        assert_eq!(pikblk(Key::new(2), &x, &b), Ok(Key::new(0)));
    }

    #[test]
    fn prog_scan() {
        let s = |v: u8| SystemState::from_tasks(vec![v]);
        let states = [s(0), s(1), s(1), s(2)];
        let k = Key::new(0);
        let picks = [Selector::Key(k), Selector::Stutter, Selector::Key(k)];
        assert_eq!(prog(k, 0, &states, &picks, 10), Ok(0));
        assert_eq!(prog(k, 1, &states, &picks, 10), Ok(1));
        assert_eq!(prog(Key::new(5), 1, &states, &picks, 10), Ok(0));
        assert!(matches!(prog(k, 1, &states, &picks, 1), Err(ProgError::HorizonExceeded { .. })));
        assert!(matches!(prog(k, 3, &states, &picks, 10), Err(ProgError::Unresolved { .. })));
    }
}
