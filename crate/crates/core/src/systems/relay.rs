//! A three-location cycle whose steps ignore the rest of the system.
//!
//! Location 1 waits while any task sits at location 2. The symmetric variant
//! also makes location 2 wait on location 1, which produces a reachable
//! two-task deadlock.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{Key, SystemState, TaskSystem, Validity};
use crate::ordinal::Ordinal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelayLoc(pub u8);

#[derive(Clone, Copy, Debug, Default)]
pub struct Relay {
    pub symmetric: bool,
}

impl Relay {
    pub const fn new() -> Self {
        Relay { symmetric: false }
    }

    pub const fn symmetric() -> Self {
        Relay { symmetric: true }
    }

    fn step(a: RelayLoc) -> RelayLoc {
        RelayLoc((a.0 + 1) % 3)
    }
}

impl TaskSystem for Relay {
    type TState = RelayLoc;

    fn name(&self) -> &str {
        if self.symmetric {
            "relay-m3"
        } else {
            "relay"
        }
    }

    fn initial(&self, _k: Key) -> RelayLoc {
        RelayLoc(0)
    }

    fn t_init(&self, a: &RelayLoc, _k: Key) -> bool {
        a.0 == 0
    }

    fn t_next(&self, a: &RelayLoc, b: &RelayLoc, _x: &SystemState<RelayLoc>) -> bool {
        *b == Self::step(*a)
    }

    fn t_blok(&self, a: &RelayLoc, b: &RelayLoc) -> bool {
        (a.0 == 1 && b.0 == 2) || (self.symmetric && a.0 == 2 && b.0 == 1)
    }

    fn successors(&self, a: &RelayLoc, _x: &SystemState<RelayLoc>) -> Option<Vec<RelayLoc>> {
        Some(vec![Self::step(*a)])
    }

    fn validity(&self) -> Option<&dyn Validity<RelayLoc>> {
        if self.symmetric {
            Some(self)
        } else {
            None
        }
    }

    fn state_independent(&self) -> bool {
        true
    }
}

/// Placeholder liveness bundle of the symmetric variant: the lock measure is
/// constant, so it cannot decrease along a blocking edge.
impl Validity<RelayLoc> for Relay {
    fn t_noblk(&self, a: &RelayLoc, _b: &RelayLoc) -> bool {
        a.0 == 0
    }

    fn t_nstrv(&self, _a: &RelayLoc, _b: &RelayLoc) -> u64 {
        1
    }

    fn t_nlock(&self, _k: Key, _x: &SystemState<RelayLoc>) -> Ordinal {
        Ordinal::Nat(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_and_blocking() {
        let r = Relay::new();
        let x = SystemState::from_tasks(vec![RelayLoc(0)]);
        assert!(r.t_next(&RelayLoc(2), &RelayLoc(0), &x));
        assert!(!r.t_next(&RelayLoc(2), &RelayLoc(2), &x));
        assert!(r.t_blok(&RelayLoc(1), &RelayLoc(2)));
        assert!(!r.t_blok(&RelayLoc(2), &RelayLoc(1)));
        assert!(Relay::symmetric().t_blok(&RelayLoc(2), &RelayLoc(1)));
        assert!(r.validity().is_none());
    }
}
