//! Bakery mutual exclusion: an eight-location implementation with a
//! compare-and-swap on a shared maximum, and a four-phase specification.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{Key, KeySet, NamedInvariant, Refines, SystemState, TaskSystem, Validity};
use crate::ordinal::{make_ord, Ordinal};

/// Per-task state of the implementation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BakeImplTState {
    /// Program location, 0..=7.
    pub loc: u8,
    /// Owning key; its order position breaks ties between equal positions.
    pub key: Key,
    pub pos: u64,
    pub old_pos: u64,
    pub temp: u64,
    /// This task's copy of the shared maximum.
    pub sh_max: u64,
    pub choosing: bool,
    pub pos_valid: bool,
}

impl BakeImplTState {
    pub fn initial(key: Key) -> Self {
        BakeImplTState {
            loc: 0,
            key,
            pos: 1,
            old_pos: 0,
            temp: 0,
            sh_max: 1,
            choosing: false,
            pos_valid: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpecLoc {
    Idle,
    Loaded,
    Interested,
    Go,
}

impl SpecLoc {
    pub fn name(self) -> &'static str {
        match self {
            SpecLoc::Idle => "idle",
            SpecLoc::Loaded => "loaded",
            SpecLoc::Interested => "interested",
            SpecLoc::Go => "go",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "idle" => SpecLoc::Idle,
            "loaded" => SpecLoc::Loaded,
            "interested" => SpecLoc::Interested,
            "go" => SpecLoc::Go,
            _ => return None,
        })
    }
}

/// Per-task state of the specification.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BakeSpecTState {
    pub loc: SpecLoc,
    pub pos: u64,
    pub load: u64,
}

/// Deliberate defects used to exercise the checkers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BakeryVariant {
    Faithful,
    /// `t_noblk` drops the "peer is not choosing" conjunct.
    WeakNoblk,
    /// `t_rank` is constantly 0.
    ZeroRank,
}

#[derive(Clone, Copy, Debug)]
pub struct BakeryImpl {
    pub variant: BakeryVariant,
}

/// Largest gap kept between consecutive live counter values by
/// [`BakeryImpl`]'s canonicalizer.
pub const CANON_GAP_CAP: u64 = 3;

/// Position bound of the default blocking-cycle domain.
pub const DOMAIN_POS_BOUND: u64 = 4;

impl BakeryImpl {
    pub const fn new() -> Self {
        BakeryImpl {
            variant: BakeryVariant::Faithful,
        }
    }

    pub const fn with_variant(variant: BakeryVariant) -> Self {
        BakeryImpl { variant }
    }

    /// The single successor of `a` in `x`.
    pub fn step(&self, a: &BakeImplTState, x: &SystemState<BakeImplTState>) -> BakeImplTState {
        let mut b = a.clone();
        match a.loc {
            0 => {
                b.loc = 1;
                b.choosing = true;
            }
            1 => {
                b.loc = 2;
                b.temp = curr_sh_max(x);
            }
            2 => {
                b.loc = 3;
                b.pos = a.temp + 1;
                b.old_pos = a.pos;
                b.pos_valid = true;
            }
            3 => {
                let curr = curr_sh_max(x);
                b.loc = 4;
                b.sh_max = if curr > a.temp { curr } else { a.pos };
            }
            4 => {
                b.loc = 5;
                b.choosing = false;
            }
            5 => b.loc = 6,
            6 => b.loc = 7,
            _ => {
                b.loc = 0;
                b.pos_valid = false;
            }
        }
        b
    }

    /// Consistent t-states over `keys` with positions up to `pos_bound`.
    ///
    /// `choosing` holds exactly at locations 1..=4 and `pos_valid` exactly at
    /// 3..=7; the `invariants` of this system check both on reachable states.
    /// Fields that the blocking relation never reads are zero.
    pub fn domain(keys: KeySet, pos_bound: u64) -> Vec<BakeImplTState> {
        let mut out = Vec::new();
        for key in keys.iter() {
            for loc in 0..8u8 {
                for pos in 0..=pos_bound {
                    out.push(BakeImplTState {
                        loc,
                        key,
                        pos,
                        old_pos: 0,
                        temp: 0,
                        sh_max: 0,
                        choosing: (1..=4).contains(&loc),
                        pos_valid: (3..=7).contains(&loc),
                    });
                }
            }
        }
        out
    }
}

impl Default for BakeryImpl {
    fn default() -> Self {
        Self::new()
    }
}

/// Current shared maximum: the join of every task's copy (1 for no tasks).
pub fn curr_sh_max(x: &SystemState<BakeImplTState>) -> u64 {
    x.tasks().iter().map(|a| a.sh_max).max().unwrap_or(1)
}

fn lex_lt(p1: u64, n1: u64, p2: u64, n2: u64) -> bool {
    p1 < p2 || (p1 == p2 && n1 < n2)
}

fn pos_fix(v: i64) -> u64 {
    if v >= 1 {
        v as u64
    } else {
        1
    }
}

impl TaskSystem for BakeryImpl {
    type TState = BakeImplTState;

    fn name(&self) -> &str {
        match self.variant {
            BakeryVariant::Faithful => "bakery-impl",
            BakeryVariant::WeakNoblk => "bakery-impl-m1",
            BakeryVariant::ZeroRank => "bakery-impl-m2",
        }
    }

    fn initial(&self, k: Key) -> BakeImplTState {
        BakeImplTState::initial(k)
    }

    fn t_init(&self, a: &BakeImplTState, k: Key) -> bool {
        *a == BakeImplTState::initial(k)
    }

    fn t_next(
        &self,
        a: &BakeImplTState,
        b: &BakeImplTState,
        x: &SystemState<BakeImplTState>,
    ) -> bool {
        *b == self.step(a, x)
    }

    fn t_blok(&self, a: &BakeImplTState, b: &BakeImplTState) -> bool {
        (a.loc == 5 && b.choosing)
            || (a.loc == 6 && b.pos_valid && lex_lt(b.pos, b.key.ndx(), a.pos, a.key.ndx()))
    }

    fn successors(
        &self,
        a: &BakeImplTState,
        x: &SystemState<BakeImplTState>,
    ) -> Option<Vec<BakeImplTState>> {
        Some(vec![self.step(a, x)])
    }

    fn validity(&self) -> Option<&dyn Validity<BakeImplTState>> {
        Some(self)
    }

    /// Rebases the counters so that only their relative order and small gaps
    /// remain.
    ///
    /// Every copy of the shared maximum is replaced by the maximum itself
    /// (only the join is ever read). `temp` is dead outside locations 2 and
    /// 3 and `old_pos` outside location 3; both are zeroed there. The
    /// remaining live values are renumbered from 0 keeping their order, with
    /// consecutive gaps larger than [`CANON_GAP_CAP`] shrunk to the cap.
    fn canon(&self, x: &SystemState<BakeImplTState>) -> Option<SystemState<BakeImplTState>> {
        if x.tasks().is_empty() {
            return Some(x.clone());
        }
        let max = curr_sh_max(x);
        let mut live = vec![max];
        for a in x.tasks() {
            live.push(a.pos);
            if matches!(a.loc, 2 | 3) {
                live.push(a.temp);
            }
            if a.loc == 3 {
                live.push(a.old_pos);
            }
        }
        live.sort_unstable();
        live.dedup();
        let mut renumbered = Vec::with_capacity(live.len());
        let mut next = 0u64;
        for (i, v) in live.iter().enumerate() {
            if i > 0 {
                next += (v - live[i - 1]).min(CANON_GAP_CAP);
            }
            renumbered.push(next);
        }
        let f = |v: u64| renumbered[live.binary_search(&v).expect("live value")];
        let tasks = x
            .tasks()
            .iter()
            .map(|a| BakeImplTState {
                pos: f(a.pos),
                temp: if matches!(a.loc, 2 | 3) { f(a.temp) } else { 0 },
                old_pos: if a.loc == 3 { f(a.old_pos) } else { 0 },
                sh_max: f(max),
                ..a.clone()
            })
            .collect();
        Some(SystemState::from_tasks(tasks))
    }

    fn tstate_domain(&self, keys: KeySet) -> Option<Vec<BakeImplTState>> {
        Some(Self::domain(keys, DOMAIN_POS_BOUND))
    }

    fn invariants(&self) -> Vec<NamedInvariant<BakeImplTState>> {
        vec![
            NamedInvariant {
                name: "mutual-exclusion",
                holds: mutual_exclusion,
            },
            NamedInvariant {
                name: "spec-mutual-exclusion",
                holds: spec_mutual_exclusion,
            },
            NamedInvariant {
                name: "choosing-locations",
                holds: |x| {
                    x.tasks()
                        .iter()
                        .all(|a| a.choosing == (1..=4).contains(&a.loc))
                },
            },
            NamedInvariant {
                name: "pos-valid-locations",
                holds: |x| {
                    x.tasks()
                        .iter()
                        .all(|a| a.pos_valid == (3..=7).contains(&a.loc))
                },
            },
        ]
    }
}

/// At most one task is in the critical section (location 7).
pub fn mutual_exclusion(x: &SystemState<BakeImplTState>) -> bool {
    x.tasks().iter().filter(|a| a.loc == 7).count() <= 1
}

/// At most one task maps to the specification's `go` phase.
pub fn spec_mutual_exclusion(x: &SystemState<BakeImplTState>) -> bool {
    x.tasks()
        .iter()
        .filter(|a| impl_map(a).loc == SpecLoc::Go)
        .count()
        <= 1
}

impl Validity<BakeImplTState> for BakeryImpl {
    fn t_noblk(&self, a: &BakeImplTState, b: &BakeImplTState) -> bool {
        let quiet = match self.variant {
            BakeryVariant::WeakNoblk => true,
            _ => !b.choosing,
        };
        (a.loc != 5 && a.loc != 6) || (quiet && b.pos > a.pos)
    }

    fn t_nstrv(&self, a: &BakeImplTState, b: &BakeImplTState) -> u64 {
        let loc = i64::from(b.loc);
        let v = if (b.loc == 2 && b.temp < a.pos) || (b.loc > 2 && b.pos <= a.pos) {
            8 + (8 - loc)
        } else if b.loc >= 5 {
            5 + (8 - loc)
        } else {
            5 - loc
        };
        pos_fix(v)
    }

    fn t_nlock(&self, k: Key, x: &SystemState<BakeImplTState>) -> Ordinal {
        let a = x.get(k);
        let low = make_ord(Ordinal::Nat(1), 1 + a.pos, Ordinal::Nat(a.key.ndx()))
            .expect("w^1 term over a natural");
        make_ord(Ordinal::Nat(2), if a.choosing { 1 } else { 2 }, low)
            .expect("w^2 term over a w^1 term")
    }
}

/// Abstraction of an implementation t-state.
pub fn impl_map(a: &BakeImplTState) -> BakeSpecTState {
    let loc = match a.loc {
        0 | 1 => SpecLoc::Idle,
        2 | 3 => SpecLoc::Loaded,
        4..=6 => SpecLoc::Interested,
        _ => SpecLoc::Go,
    };
    BakeSpecTState {
        loc,
        pos: if a.loc == 3 { a.old_pos } else { a.pos },
        load: if a.loc == 2 { 1 + a.temp } else { a.pos },
    }
}

pub fn impl_rank(a: &BakeImplTState) -> u64 {
    match a.loc {
        0 => 1,
        1 => 0,
        2 => 1,
        3 => 0,
        4 => 2,
        5 => 1,
        6 => 0,
        _ => 0,
    }
}

impl Refines<BakerySpec> for BakeryImpl {
    fn t_map(&self, a: &BakeImplTState) -> BakeSpecTState {
        impl_map(a)
    }

    fn t_rank(&self, a: &BakeImplTState) -> Ordinal {
        match self.variant {
            BakeryVariant::ZeroRank => Ordinal::Nat(0),
            _ => Ordinal::Nat(impl_rank(a)),
        }
    }
}

/// The specification: load a ticket above every position in use, publish it,
/// then wait for every lower ticket.
#[derive(Clone, Copy, Debug, Default)]
pub struct BakerySpec;

pub fn max_pos(x: &SystemState<BakeSpecTState>) -> u64 {
    x.tasks().iter().map(|a| a.pos).max().unwrap_or(0)
}

pub fn max_load(x: &SystemState<BakeSpecTState>) -> u64 {
    x.tasks().iter().map(|a| a.load).max().unwrap_or(0)
}

impl TaskSystem for BakerySpec {
    type TState = BakeSpecTState;

    fn name(&self) -> &str {
        "bakery-spec"
    }

    fn initial(&self, _k: Key) -> BakeSpecTState {
        BakeSpecTState {
            loc: SpecLoc::Idle,
            pos: 0,
            load: 0,
        }
    }

    fn t_init(&self, a: &BakeSpecTState, _k: Key) -> bool {
        a.loc == SpecLoc::Idle && a.pos == 0 && a.load == 0
    }

    fn t_next(
        &self,
        a: &BakeSpecTState,
        b: &BakeSpecTState,
        x: &SystemState<BakeSpecTState>,
    ) -> bool {
        match a.loc {
            SpecLoc::Idle => {
                b.loc == SpecLoc::Loaded
                    && b.pos == a.pos
                    && b.load > max_pos(x)
                    && b.load >= max_load(x)
            }
            SpecLoc::Loaded => {
                *b == BakeSpecTState {
                    loc: SpecLoc::Interested,
                    pos: a.load,
                    ..a.clone()
                }
            }
            SpecLoc::Interested => {
                *b == BakeSpecTState {
                    loc: SpecLoc::Go,
                    ..a.clone()
                }
            }
            SpecLoc::Go => {
                *b == BakeSpecTState {
                    loc: SpecLoc::Idle,
                    ..a.clone()
                }
            }
        }
    }

    fn t_blok(&self, a: &BakeSpecTState, b: &BakeSpecTState) -> bool {
        a.loc == SpecLoc::Interested
            && (b.loc == SpecLoc::Go || (b.loc == SpecLoc::Interested && b.pos < a.pos))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{initial_state, sys_blok, sys_init, sys_next_check, Selector};
    use crate::model::legal_step;
    use alloc::string::ToString;

    fn k(i: u32) -> Key {
        Key::new(i)
    }

    fn at(loc: u8, key: u32) -> BakeImplTState {
        let mut a = BakeImplTState::initial(k(key));
        a.loc = loc;
        a.choosing = (1..=4).contains(&loc);
        a.pos_valid = (3..=7).contains(&loc);
        a
    }

    #[test]
    fn init_examples() {
        let sys = BakeryImpl::new();
        let x = initial_state(&sys, KeySet::new(3));
        assert!(sys_init(&x, &sys));
        assert!(!sys_init(&x.with(k(1), at(1, 1)), &sys));
        assert!(sys_init(&initial_state(&sys, KeySet::new(0)), &sys));
    }

    #[test]
    fn next_check_examples() {
        let sys = BakeryImpl::new();
        let x = initial_state(&sys, KeySet::new(2));
        let mut a1 = x.get(k(0)).clone();
        a1.loc = 1;
        a1.choosing = true;
        let y = x.with(k(0), a1.clone());
        assert!(sys_next_check(&x, &y, k(0), &sys));
        let z = y.with(k(1), at(1, 1));
        assert!(!sys_next_check(&x, &z, k(0), &sys));
        assert!(!sys_next_check(&x, &x, k(0), &sys));
    }

    #[test]
    fn every_location_changes_the_tstate() {
        let sys = BakeryImpl::new();
        for loc in 0..8 {
            let a = at(loc, 0);
            let x = SystemState::from_tasks(vec![a.clone()]);
            assert_ne!(sys.step(&a, &x), a, "loc {loc}");
        }
    }

    #[test]
    fn blok_examples() {
        let sys = BakeryImpl::new();
        let x = SystemState::from_tasks(vec![at(5, 0), at(1, 1)]);
        assert!(sys_blok(&x, k(0), &sys));
        let single = SystemState::from_tasks(vec![at(0, 0)]);
        assert!(!sys_blok(&single, k(0), &sys));

        let mut a = at(6, 1);
        a.pos = 2;
        let mut b = at(6, 0);
        b.pos = 2;
        let x = SystemState::from_tasks(vec![b.clone(), a.clone()]);
        assert!(sys_blok(&x, k(1), &sys));

        let mut a = at(6, 0);
        a.pos = 3;
        let mut b = at(4, 1);
        b.choosing = false;
        b.pos = 3;
        assert!(!sys.t_blok(&a, &b));
        assert!(!sys.t_blok(&at(2, 0), &at(5, 1)));
    }

    #[test]
    fn legal_step_examples() {
        let sys = BakeryImpl::new();
        let x = SystemState::from_tasks(vec![at(5, 0), at(1, 1)]);
        assert!(legal_step(&x, &x, Selector::Stutter, &sys));
        assert!(!legal_step(&x, &x.with(k(1), at(2, 1)), Selector::Stutter, &sys));
        assert!(legal_step(&x, &x, Selector::Key(k(0)), &sys));
    }

    #[test]
    fn curr_sh_max_examples() {
        let sys = BakeryImpl::new();
        assert_eq!(curr_sh_max(&initial_state(&sys, KeySet::new(2))), 1);
        let mut a = at(0, 0);
        a.sh_max = 3;
        assert_eq!(
            curr_sh_max(&SystemState::from_tasks(vec![at(0, 1), a])),
            3
        );
    }

    #[test]
    fn step_examples() {
        let sys = BakeryImpl::new();
        let a = BakeImplTState::initial(k(0));
        let x = SystemState::from_tasks(vec![a.clone()]);
        let b = sys.step(&a, &x);
        assert_eq!((b.loc, b.choosing), (1, true));
        assert_eq!(BakeImplTState { loc: 0, choosing: false, ..b }, a);

        let mut a = at(2, 0);
        a.temp = 4;
        a.pos = 1;
        let b = sys.step(&a, &SystemState::from_tasks(vec![a.clone()]));
        assert_eq!((b.loc, b.pos, b.old_pos, b.pos_valid), (3, 5, 1, true));

        let mut a = at(3, 0);
        a.temp = 4;
        a.pos = 5;
        let mut other = at(0, 1);
        other.sh_max = 4;
        a.sh_max = 1;
        let x = SystemState::from_tasks(vec![a.clone(), other]);
        let b = sys.step(&a, &x);
        assert_eq!((b.loc, b.sh_max), (4, 5));

        let b = sys.step(&at(7, 0), &x);
        assert_eq!((b.loc, b.pos_valid), (0, false));
    }

    #[test]
    fn single_task_first_cas() {
        let sys = BakeryImpl::new();
        let mut x = initial_state(&sys, KeySet::new(1));
        for _ in 0..4 {
            let b = sys.step(x.get(k(0)), &x);
            x = x.with(k(0), b);
        }
        let a = x.get(k(0));
        assert_eq!((a.loc, a.pos, a.temp, a.sh_max), (4, 2, 1, 2));
    }

    #[test]
    fn nlock_examples() {
        let sys = BakeryImpl::new();
        let mut a = at(1, 0);
        a.pos = 1;
        let x = SystemState::from_tasks(vec![a.clone()]);
        let chosen = sys.t_nlock(k(0), &x);
        assert_eq!(chosen.to_string(), "w^2*1 + w^1*2 + 0");
        let mut b = a.clone();
        b.choosing = false;
        let y = SystemState::from_tasks(vec![b]);
        let settled = sys.t_nlock(k(0), &y);
        assert_eq!(settled.to_string(), "w^2*2 + w^1*2 + 0");
        assert_eq!(chosen.try_lt(&settled), Ok(true));
    }

    #[test]
    fn noblk_examples() {
        let sys = BakeryImpl::new();
        assert!(sys.t_noblk(&at(3, 0), &at(5, 1)));
        let mut a = at(6, 0);
        a.pos = 2;
        let mut b = at(5, 1);
        b.pos = 5;
        assert!(sys.t_noblk(&a, &b));
        assert!(!sys.t_noblk(&at(5, 0), &at(1, 1)));

        let m1 = BakeryImpl::with_variant(BakeryVariant::WeakNoblk);
        let mut chooser = at(3, 1);
        chooser.pos = 9;
        assert!(m1.t_noblk(&at(5, 0), &chooser));
        assert!(!sys.t_noblk(&at(5, 0), &chooser));
    }

    #[test]
    fn nstrv_examples() {
        let sys = BakeryImpl::new();
        let mut a = at(5, 0);
        a.pos = 5;
        let mut b = at(2, 1);
        b.temp = 1;
        assert_eq!(sys.t_nstrv(&a, &b), 14);
        let mut b = at(5, 1);
        b.pos = 9;
        assert_eq!(sys.t_nstrv(&a, &b), 8);
        assert_eq!(sys.t_nstrv(&a, &at(1, 1)), 4);
        for loc in 0..8 {
            for pos in 0..4 {
                let mut b = at(loc, 1);
                b.pos = pos;
                b.temp = pos;
                assert!(sys.t_nstrv(&a, &b) >= 1);
            }
        }
    }

    #[test]
    fn map_and_rank_examples() {
        let sys = BakeryImpl::new();
        let mut a = at(4, 0);
        a.pos = 5;
        let m = sys.t_map(&a);
        assert_eq!((m.loc, m.pos, m.load), (SpecLoc::Interested, 5, 5));
        assert_eq!(sys.t_rank(&a), Ordinal::Nat(2));

        let mut a = at(3, 0);
        a.pos = 5;
        a.old_pos = 1;
        assert_eq!(
            impl_map(&a),
            BakeSpecTState { loc: SpecLoc::Loaded, pos: 1, load: 5 }
        );

        let mut a = at(2, 0);
        a.temp = 4;
        a.pos = 1;
        assert_eq!(
            impl_map(&a),
            BakeSpecTState { loc: SpecLoc::Loaded, pos: 1, load: 5 }
        );

        let ranks: Vec<u64> = (0..8).map(|l| impl_rank(&at(l, 0))).collect();
        assert_eq!(ranks, [1, 0, 1, 0, 2, 1, 0, 0]);
        let m2 = BakeryImpl::with_variant(BakeryVariant::ZeroRank);
        assert_eq!(m2.t_rank(&at(4, 0)), Ordinal::Nat(0));
    }

    #[test]
    fn spec_examples() {
        let spec = BakerySpec;
        let a = BakeSpecTState { loc: SpecLoc::Interested, pos: 3, load: 3 };
        let go = BakeSpecTState { loc: SpecLoc::Go, ..a.clone() };
        let x = SystemState::from_tasks(vec![a.clone()]);
        assert!(spec.t_next(&a, &go, &x));

        let idle = BakeSpecTState { loc: SpecLoc::Idle, pos: 2, load: 2 };
        let x = SystemState::from_tasks(vec![idle.clone(), a.clone()]);
        assert_eq!(max_pos(&x), 3);
        let at_max = BakeSpecTState { loc: SpecLoc::Loaded, pos: 2, load: 3 };
        assert!(!spec.t_next(&idle, &at_max, &x));
        let above = BakeSpecTState { loc: SpecLoc::Loaded, pos: 2, load: 4 };
        assert!(spec.t_next(&idle, &above, &x));

        let lower = BakeSpecTState { loc: SpecLoc::Interested, pos: 2, load: 2 };
        assert!(spec.t_blok(&a, &lower));
        assert!(!spec.t_blok(&lower, &a));
    }

    #[test]
    fn canon_examples() {
        let sys = BakeryImpl::new();
        let mut a = at(3, 0);
        let mut b = at(3, 1);
        (a.pos, a.temp, a.sh_max, a.old_pos) = (11, 10, 13, 10);
        (b.pos, b.temp, b.sh_max, b.old_pos) = (13, 12, 13, 11);
        let x = SystemState::from_tasks(vec![a.clone(), b.clone()]);
        let shift = |t: &BakeImplTState| BakeImplTState {
            pos: t.pos - 10,
            temp: t.temp - 10,
            sh_max: t.sh_max - 10,
            old_pos: t.old_pos - 10,
            ..t.clone()
        };
        let expected = SystemState::from_tasks(vec![shift(&a), shift(&b)]);
        assert_eq!(sys.canon(&x), Some(expected.clone()));
        assert_eq!(sys.canon(&expected), Some(expected));

        let mut a = at(5, 0);
        let mut b = at(0, 1);
        (a.pos, a.sh_max) = (2, 3);
        (b.pos, b.sh_max) = (0, 3);
        let x = SystemState::from_tasks(vec![a, b]);
        assert_eq!(sys.canon(&x), Some(x.clone()));
    }

    #[test]
    fn canon_compresses_stale_gaps() {
        let sys = BakeryImpl::new();
        let mut a = at(0, 0);
        let mut b = at(6, 1);
        (a.pos, a.sh_max, a.temp, a.old_pos) = (1, 1, 0, 0);
        (b.pos, b.sh_max, b.temp, b.old_pos) = (40, 40, 39, 38);
        let y = sys.canon(&SystemState::from_tasks(vec![a, b])).unwrap();
        let (a, b) = (y.get(k(0)), y.get(k(1)));
        assert_eq!((a.pos, b.pos, a.sh_max, b.sh_max), (0, 3, 3, 3));
        assert_eq!((b.temp, b.old_pos), (0, 0));
    }
}
