//! Verdicts and counterexamples produced by the checkers.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::model::{Key, SystemState};

/// Whether an explored graph reached closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completeness {
    Complete,
    TruncatedByDepth,
    TruncatedByCap,
}

impl Completeness {
    pub fn is_complete(self) -> bool {
        self == Completeness::Complete
    }

    pub fn name(self) -> &'static str {
        match self {
            Completeness::Complete => "complete",
            Completeness::TruncatedByDepth => "truncated-by-depth",
            Completeness::TruncatedByCap => "truncated-by-cap",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "complete" => Completeness::Complete,
            "truncated-by-depth" => Completeness::TruncatedByDepth,
            "truncated-by-cap" => Completeness::TruncatedByCap,
            _ => return None,
        })
    }

    /// The weaker of two flags.
    pub fn meet(self, other: Completeness) -> Completeness {
        if self.is_complete() {
            other
        } else {
            self
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    SystemProps,
    ValidTask,
    Match,
    DerivedSystem,
    Invariants,
    Cycles,
    SubstateClosure,
    RunLegal,
    Refinement,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::SystemProps,
        Suite::ValidTask,
        Suite::Match,
        Suite::DerivedSystem,
        Suite::Invariants,
        Suite::Cycles,
        Suite::SubstateClosure,
        Suite::RunLegal,
        Suite::Refinement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::SystemProps => "system-props",
            Suite::ValidTask => "valid-task",
            Suite::Match => "match",
            Suite::DerivedSystem => "derived-system",
            Suite::Invariants => "invariants",
            Suite::Cycles => "cycles",
            Suite::SubstateClosure => "substate-closure",
            Suite::RunLegal => "run-legal",
            Suite::Refinement => "refinement",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Every checked obligation, by stable name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Theorem {
    Init,
    NoSelfNext,
    NextEnumAgrees,
    TNoblkBlk,
    TNoblkInv,
    TNlockDecreases,
    TNstrvDecreases,
    MapMatchesNext,
    MapFiniteStutter,
    MapRankStable,
    NoblkBlk,
    NoblkInv,
    StarverTerminates,
    StarverUnblocked,
    NstrvDecreases,
    NstrvHolds,
    StarverPersists,
    NstrvsBounded,
    Invariant(&'static str),
    NoReachableCycle,
    SubstateClosure,
    RunInit,
    RunStep,
    SpecStepLegal,
    StutterRankDecreases,
    StutterRankStable,
}

impl Theorem {
    const NAMED: [Theorem; 25] = [
        Theorem::Init,
        Theorem::NoSelfNext,
        Theorem::NextEnumAgrees,
        Theorem::TNoblkBlk,
        Theorem::TNoblkInv,
        Theorem::TNlockDecreases,
        Theorem::TNstrvDecreases,
        Theorem::MapMatchesNext,
        Theorem::MapFiniteStutter,
        Theorem::MapRankStable,
        Theorem::NoblkBlk,
        Theorem::NoblkInv,
        Theorem::StarverTerminates,
        Theorem::StarverUnblocked,
        Theorem::NstrvDecreases,
        Theorem::NstrvHolds,
        Theorem::StarverPersists,
        Theorem::NstrvsBounded,
        Theorem::NoReachableCycle,
        Theorem::SubstateClosure,
        Theorem::RunInit,
        Theorem::RunStep,
        Theorem::SpecStepLegal,
        Theorem::StutterRankDecreases,
        Theorem::StutterRankStable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Init => "init",
            Theorem::NoSelfNext => "no-self-next",
            Theorem::NextEnumAgrees => "next-enum-agrees",
            Theorem::TNoblkBlk => "t-noblk-blk",
            Theorem::TNoblkInv => "t-noblk-inv",
            Theorem::TNlockDecreases => "t-nlock-decreases",
            Theorem::TNstrvDecreases => "t-nstrv-decreases",
            Theorem::MapMatchesNext => "map-matches-next",
            Theorem::MapFiniteStutter => "map-finite-stutter",
            Theorem::MapRankStable => "map-rank-stable",
            Theorem::NoblkBlk => "noblk-blk",
            Theorem::NoblkInv => "noblk-inv",
            Theorem::StarverTerminates => "starver-terminates",
            Theorem::StarverUnblocked => "starver-unblocked",
            Theorem::NstrvDecreases => "nstrv-decreases",
            Theorem::NstrvHolds => "nstrv-holds",
            Theorem::StarverPersists => "starver-persists",
            Theorem::NstrvsBounded => "nstrvs-bounded",
            Theorem::Invariant(name) => name,
            Theorem::NoReachableCycle => "no-reachable-cycle",
            Theorem::SubstateClosure => "substate-closure",
            Theorem::RunInit => "run-init",
            Theorem::RunStep => "run-step",
            Theorem::SpecStepLegal => "spec-step-legal",
            Theorem::StutterRankDecreases => "stutter-rank-decreases",
            Theorem::StutterRankStable => "stutter-rank-stable",
        }
    }

    /// Looks up a fixed theorem name; invariant names are not covered.
    pub fn from_name(s: &str) -> Option<Self> {
        Theorem::NAMED.into_iter().find(|t| t.name() == s)
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inapplicable,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inapplicable => "inapplicable",
        }
    }
}

/// Concrete witness of a failed obligation.
///
/// `x` is the state the obligation was evaluated in; `k` and `l` are the keys
/// it quantifies over; `c` is a successor t-state (task-level obligations)
/// and `y` a successor system state (system-level obligations).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample<T> {
    pub x: SystemState<T>,
    pub k: Option<Key>,
    pub l: Option<Key>,
    pub c: Option<T>,
    pub y: Option<SystemState<T>>,
    /// Step index for trace-level obligations.
    pub index: Option<usize>,
    pub detail: String,
}

impl<T> Counterexample<T> {
    pub fn at(x: SystemState<T>) -> Self {
        Counterexample {
            x,
            k: None,
            l: None,
            c: None,
            y: None,
            index: None,
            detail: String::new(),
        }
    }

    pub fn key(mut self, k: Key) -> Self {
        self.k = Some(k);
        self
    }

    pub fn other(mut self, l: Key) -> Self {
        self.l = Some(l);
        self
    }

    pub fn successor(mut self, c: T) -> Self {
        self.c = Some(c);
        self
    }

    pub fn next_state(mut self, y: SystemState<T>) -> Self {
        self.y = Some(y);
        self
    }

    pub fn index(mut self, i: usize) -> Self {
        self.index = Some(i);
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }
}

#[derive(Clone, Debug)]
pub struct Verdict<T> {
    pub theorem: Theorem,
    pub status: Status,
    /// Number of instances on which the obligation was evaluated.
    pub checked: u64,
    pub counterexample: Option<Counterexample<T>>,
    pub note: Option<String>,
}

impl<T> Verdict<T> {
    pub fn inapplicable(theorem: Theorem, note: impl Into<String>) -> Self {
        Verdict {
            theorem,
            status: Status::Inapplicable,
            checked: 0,
            counterexample: None,
            note: Some(note.into()),
        }
    }
}

/// Result of one obligation suite.
#[derive(Clone, Debug)]
pub struct CheckReport<T> {
    pub suite: Suite,
    pub verdicts: Vec<Verdict<T>>,
    pub completeness: Completeness,
    pub states: usize,
    pub pairs: u64,
}

impl<T> CheckReport<T> {
    pub fn new(suite: Suite, completeness: Completeness, states: usize) -> Self {
        CheckReport {
            suite,
            verdicts: Vec::new(),
            completeness,
            states,
            pairs: 0,
        }
    }

    pub fn failed(&self) -> bool {
        self.verdicts.iter().any(|v| v.status == Status::Fail)
    }

    /// No failures, but the underlying graph was truncated.
    pub fn qualified(&self) -> bool {
        !self.failed() && !self.completeness.is_complete()
    }

    pub fn passed(&self) -> bool {
        !self.failed() && self.completeness.is_complete()
    }

    pub fn verdict(&self, theorem: Theorem) -> Option<&Verdict<T>> {
        self.verdicts.iter().find(|v| v.theorem == theorem)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict<T>> {
        self.verdicts.iter().filter(|v| v.status == Status::Fail)
    }
}

/// Accumulates evaluations of one obligation, keeping the first failure.
pub(crate) struct Tally<T> {
    theorem: Theorem,
    checked: u64,
    cex: Option<Counterexample<T>>,
}

impl<T> Tally<T> {
    pub(crate) fn new(theorem: Theorem) -> Self {
        Tally {
            theorem,
            checked: 0,
            cex: None,
        }
    }

    pub(crate) fn record(&mut self, holds: bool, cex: impl FnOnce() -> Counterexample<T>) {
        self.checked += 1;
        if !holds && self.cex.is_none() {
            self.cex = Some(cex());
        }
    }

    pub(crate) fn theorem(&self) -> Theorem {
        self.theorem
    }

    pub(crate) fn finish(self) -> Verdict<T> {
        Verdict {
            theorem: self.theorem,
            status: if self.cex.is_some() {
                Status::Fail
            } else {
                Status::Pass
            },
            checked: self.checked,
            counterexample: self.cex,
            note: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::from_name(s.name()), Some(s));
        }
        for t in Theorem::NAMED {
            assert_eq!(Theorem::from_name(t.name()), Some(t));
        }
        assert_eq!(Theorem::Invariant("mutual-exclusion").name(), "mutual-exclusion");
    }

    #[test]
    fn completeness_meet() {
        use Completeness::*;
        assert_eq!(Complete.meet(TruncatedByCap), TruncatedByCap);
        assert_eq!(TruncatedByDepth.meet(Complete), TruncatedByDepth);
    }
}
