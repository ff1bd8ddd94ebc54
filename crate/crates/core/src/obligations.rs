//! Single-step obligations over explored state graphs, with membership in
//! the reachable set standing in for an inductive invariant, and the search
//! for reachable blocking cycles.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::explore::{explore, ExploreError, ExploreOptions, StateGraph};
use crate::measures::{nstrvs_list, starver, sys_noblk, sys_nstrv, MeasureError};
use crate::model::{
    canonical, map_state, sys_blok, sys_init, sys_next_check, sys_successors, Key, KeySet,
    Refines, SystemState, TaskSystem, Validity,
};
use crate::report::{
    CheckReport, Completeness, Counterexample, Status, Suite, Tally, Theorem, Verdict,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ObligationError {
    #[error("system has no validity bundle")]
    MissingValidity,
    #[error("system cannot enumerate successors")]
    MissingEnumerator,
    #[error("no finite t-state domain: {0}")]
    DomainUnavailable(String),
    #[error("counterexample lacks `{0}`")]
    IncompleteCounterexample(&'static str),
    #[error("theorem `{0}` cannot be replayed here")]
    NotReplayable(&'static str),
    #[error(transparent)]
    Explore(#[from] ExploreError),
}

fn validity<S: TaskSystem + ?Sized>(
    sys: &S,
) -> Result<&dyn Validity<S::TState>, ObligationError> {
    sys.validity().ok_or(ObligationError::MissingValidity)
}

fn succ<S: TaskSystem + ?Sized>(
    sys: &S,
    a: &S::TState,
    x: &SystemState<S::TState>,
) -> Result<Vec<S::TState>, ObligationError> {
    sys.successors(a, x).ok_or(ObligationError::MissingEnumerator)
}

fn report_for<T, U>(suite: Suite, graph: &StateGraph<U>) -> CheckReport<T> {
    CheckReport::new(suite, graph.completeness(), graph.len())
}

/// No successor repeats its t-state, the initial state is initial, and the
/// enumerator agrees with the relational step.
pub fn check_system_props<S: TaskSystem + ?Sized>(
    graph: &StateGraph<S::TState>,
    sys: &S,
) -> Result<CheckReport<S::TState>, ObligationError> {
    let mut report = report_for(Suite::SystemProps, graph);
    let mut init = Tally::new(Theorem::Init);
    let raw = graph.raw_initial();
    let norm = if graph.is_canonical() {
        canonical(raw, sys)
    } else {
        raw.clone()
    };
    init.record(
        sys_init(raw, sys) && graph.states().first() == Some(&norm),
        || Counterexample::at(raw.clone()).detail("initial state fails t_init"),
    );
    let mut no_self = Tally::new(Theorem::NoSelfNext);
    let mut agrees = Tally::new(Theorem::NextEnumAgrees);
    for x in graph.states() {
        for k in x.keys().iter() {
            let a = x.get(k);
            for b in succ(sys, a, x)? {
                report.pairs += 1;
                no_self.record(b != *a, || {
                    Counterexample::at(x.clone())
                        .key(k)
                        .successor(b.clone())
                        .detail("successor equals the current t-state")
                });
                agrees.record(sys.t_next(a, &b, x), || {
                    Counterexample::at(x.clone())
                        .key(k)
                        .successor(b.clone())
                        .detail("enumerated successor rejected by t_next")
                });
            }
        }
    }
    report.verdicts = vec![init.finish(), no_self.finish(), agrees.finish()];
    Ok(report)
}

/// Evaluates one task-level obligation on `(x, k, l, c)`; `c` is a successor
/// of `l`'s t-state and is ignored by the obligations that do not mention it.
pub fn task_obligation_holds<S: TaskSystem + ?Sized>(
    theorem: Theorem,
    sys: &S,
    x: &SystemState<S::TState>,
    k: Key,
    l: Key,
    c: Option<&S::TState>,
) -> Result<bool, ObligationError> {
    let val = validity(sys)?;
    let (gk, gl) = (x.get(k), x.get(l));
    let need_c = || c.ok_or(ObligationError::IncompleteCounterexample("c"));
    Ok(match theorem {
        Theorem::TNoblkBlk => !val.t_noblk(gk, gl) || !sys.t_blok(gk, gl),
        Theorem::TNoblkInv => {
            let c = need_c()?;
            !(val.t_noblk(gk, gl) && sys.t_next(gl, c, x)) || val.t_noblk(gk, c)
        }
        Theorem::TNlockDecreases => !sys.t_blok(gk, gl) || val.t_nlock(l, x) < val.t_nlock(k, x),
        Theorem::TNstrvDecreases => {
            let c = need_c()?;
            !(!val.t_noblk(gk, gl) && !val.t_noblk(gk, c) && sys.t_next(gl, c, x))
                || val.t_nstrv(gk, c) < val.t_nstrv(gk, gl)
        }
        t => return Err(ObligationError::NotReplayable(t.name())),
    })
}

pub fn check_valid_task_obligations<S: TaskSystem + ?Sized>(
    graph: &StateGraph<S::TState>,
    sys: &S,
) -> Result<CheckReport<S::TState>, ObligationError> {
    validity(sys)?;
    let mut report = report_for(Suite::ValidTask, graph);
    let mut tallies = [
        Tally::new(Theorem::TNoblkBlk),
        Tally::new(Theorem::TNoblkInv),
        Tally::new(Theorem::TNlockDecreases),
        Tally::new(Theorem::TNstrvDecreases),
    ];
    for x in graph.states() {
        for l in x.keys().iter() {
            let cs = succ(sys, x.get(l), x)?;
            for k in x.keys().iter() {
                report.pairs += 1;
                let cex = || Counterexample::at(x.clone()).key(k).other(l);
                for tally in tallies.iter_mut() {
                    let th = tally.theorem();
                    if matches!(th, Theorem::TNoblkBlk | Theorem::TNlockDecreases) {
                        tally.record(task_obligation_holds(th, sys, x, k, l, None)?, cex);
                        continue;
                    }
                    for c in &cs {
                        tally.record(task_obligation_holds(th, sys, x, k, l, Some(c))?, || {
                            cex().successor(c.clone())
                        });
                    }
                }
            }
        }
    }
    report.verdicts = tallies.into_iter().map(Tally::finish).collect();
    Ok(report)
}

/// Evaluates a match obligation on the step of `k` from `x` to `y`; for
/// [`Theorem::MapRankStable`], `l` is the key whose rank must not grow.
pub fn match_obligation_holds<I, S>(
    theorem: Theorem,
    imp: &I,
    spec: &S,
    x: &SystemState<I::TState>,
    k: Key,
    l: Option<Key>,
    y: &SystemState<I::TState>,
) -> Result<bool, ObligationError>
where
    I: Refines<S> + ?Sized,
    S: TaskSystem,
{
    let (mx, my) = (map_state::<I, S>(x, imp), map_state::<I, S>(y, imp));
    Ok(match theorem {
        Theorem::MapMatchesNext => {
            sys_blok(x, k, imp)
                || mx == my
                || (sys_next_check(&mx, &my, k, spec) && !sys_blok(&mx, k, spec))
        }
        Theorem::MapFiniteStutter => {
            sys_blok(x, k, imp) || mx != my || imp.t_rank(y.get(k)) < imp.t_rank(x.get(k))
        }
        Theorem::MapRankStable => {
            let l = l.ok_or(ObligationError::IncompleteCounterexample("l"))?;
            l == k || imp.t_rank(y.get(l)) <= imp.t_rank(x.get(l))
        }
        t => return Err(ObligationError::NotReplayable(t.name())),
    })
}

pub fn check_match_obligations<I, S>(
    graph: &StateGraph<I::TState>,
    imp: &I,
    spec: &S,
) -> Result<CheckReport<I::TState>, ObligationError>
where
    I: Refines<S> + ?Sized,
    S: TaskSystem,
{
    let mut report = report_for(Suite::Match, graph);
    let mut matches = Tally::new(Theorem::MapMatchesNext);
    let mut stutter = Tally::new(Theorem::MapFiniteStutter);
    let mut stable = Tally::new(Theorem::MapRankStable);
    for x in graph.states() {
        for k in x.keys().iter() {
            let ys = sys_successors(x, k, imp).ok_or(ObligationError::MissingEnumerator)?;
            for y in &ys {
                report.pairs += 1;
                let cex = || Counterexample::at(x.clone()).key(k).next_state(y.clone());
                for tally in [&mut matches, &mut stutter] {
                    let th = tally.theorem();
                    tally.record(match_obligation_holds(th, imp, spec, x, k, None, y)?, cex);
                }
                for l in x.keys().iter().filter(|l| *l != k) {
                    let ok = match_obligation_holds(Theorem::MapRankStable, imp, spec, x, k, Some(l), y)?;
                    stable.record(ok, || cex().other(l));
                }
            }
        }
    }
    report.verdicts = vec![matches.finish(), stutter.finish(), stable.finish()];
    Ok(report)
}

/// Evaluates a system-level obligation built from the derived measures.
///
/// `y` is a successor of `x` by `l` where the theorem talks about a step;
/// for [`Theorem::NstrvDecreases`] the step is by the starver of `k`.
pub fn system_obligation_holds<S: TaskSystem + ?Sized>(
    theorem: Theorem,
    sys: &S,
    x: &SystemState<S::TState>,
    k: Key,
    l: Option<Key>,
    y: Option<&SystemState<S::TState>>,
) -> Result<bool, ObligationError> {
    let val = validity(sys)?;
    let need_l = || l.ok_or(ObligationError::IncompleteCounterexample("l"));
    let need_y = || y.ok_or(ObligationError::IncompleteCounterexample("y"));
    fn measure<V>(r: Result<V, MeasureError>) -> Result<V, ()> {
        r.map_err(|_| ())
    }
    let noblk = sys_noblk(k, x, val);
    let res = match theorem {
        Theorem::NoblkBlk => Ok(!noblk || !sys_blok(x, k, sys)),
        Theorem::NoblkInv => {
            let (l, y) = (need_l()?, need_y()?);
            Ok(l == k || !noblk || sys_noblk(k, y, val))
        }
        Theorem::StarverTerminates => Ok(starver(k, x, sys).is_ok()),
        Theorem::StarverUnblocked => {
            measure(starver(k, x, sys)).map(|s| noblk || !sys_blok(x, s, sys))
        }
        Theorem::NstrvsBounded => {
            measure(nstrvs_list(k, x, sys, val)).map(|v| v.len() <= x.keys().len())
        }
        Theorem::NstrvDecreases => {
            let y = need_y()?;
            (|| {
                let s = measure(starver(k, x, sys))?;
                if noblk || s == k {
                    return Ok(true);
                }
                Ok(measure(sys_nstrv(k, y, sys, val))? < measure(sys_nstrv(k, x, sys, val))?)
            })()
        }
        Theorem::NstrvHolds => {
            let (l, y) = (need_l()?, need_y()?);
            (|| {
                if noblk || l == k {
                    return Ok(true);
                }
                Ok(measure(sys_nstrv(k, y, sys, val))? <= measure(sys_nstrv(k, x, sys, val))?)
            })()
        }
        Theorem::StarverPersists => {
            let (l, y) = (need_l()?, need_y()?);
            (|| {
                let s = measure(starver(k, x, sys))?;
                if noblk || l == k || l == s {
                    return Ok(true);
                }
                let same = measure(sys_nstrv(k, y, sys, val))? == measure(sys_nstrv(k, x, sys, val))?;
                Ok(!same || measure(starver(k, y, sys))? == s)
            })()
        }
        t => return Err(ObligationError::NotReplayable(t.name())),
    };
    // A chain that cycles makes the measure undefined, which the theorems
    // cannot survive: report it as a failure of the theorem at hand.
    Ok(res.unwrap_or(false))
}

/// The six system-level theorems, evaluated with the derived measures, plus
/// termination of the starver chain and the length bound on its list.
pub fn check_derived_system_obligations<S: TaskSystem + ?Sized>(
    graph: &StateGraph<S::TState>,
    sys: &S,
) -> Result<CheckReport<S::TState>, ObligationError> {
    let val = validity(sys)?;
    let mut report = report_for(Suite::DerivedSystem, graph);
    let mut terminates = Tally::new(Theorem::StarverTerminates);
    let mut noblk_blk = Tally::new(Theorem::NoblkBlk);
    let mut noblk_inv = Tally::new(Theorem::NoblkInv);
    let mut unblocked = Tally::new(Theorem::StarverUnblocked);
    let mut bounded = Tally::new(Theorem::NstrvsBounded);
    let mut decreases = Tally::new(Theorem::NstrvDecreases);
    let mut holds = Tally::new(Theorem::NstrvHolds);
    let mut persists = Tally::new(Theorem::StarverPersists);

    for x in graph.states() {
        let keys = x.keys();
        let succs: Vec<Vec<SystemState<S::TState>>> = keys
            .iter()
            .map(|l| sys_successors(x, l, sys).ok_or(ObligationError::MissingEnumerator))
            .collect::<Result<_, _>>()?;
        // A cycle reached from any successor is a termination failure too.
        for (l, ys) in keys.iter().zip(&succs) {
            for y in ys {
                for k in keys.iter() {
                    if let Err(MeasureError::PikblkCycle { .. }) = starver(k, y, sys) {
                        terminates.record(false, || {
                            Counterexample::at(y.clone())
                                .key(k)
                                .detail(format!("blocking chain cycles after a step of {l}"))
                        });
                    }
                }
            }
        }
        for k in keys.iter() {
            report.pairs += 1;
            let cex = || Counterexample::at(x.clone()).key(k);
            let chain = starver(k, x, sys);
            terminates.record(chain.is_ok(), || {
                let d = match &chain {
                    Err(MeasureError::PikblkCycle { chain }) => {
                        let names: Vec<String> = chain.iter().map(|k| format!("{k}")).collect();
                        format!("blocking chain cycles: {}", names.join(" -> "))
                    }
                    _ => String::new(),
                };
                cex().detail(d)
            });
            noblk_blk.record(
                system_obligation_holds(Theorem::NoblkBlk, sys, x, k, None, None)?,
                cex,
            );
            let Ok(s) = chain else { continue };
            unblocked.record(
                system_obligation_holds(Theorem::StarverUnblocked, sys, x, k, None, None)?,
                || cex().other(s),
            );
            bounded.record(
                system_obligation_holds(Theorem::NstrvsBounded, sys, x, k, None, None)?,
                cex,
            );
            let noblk = sys_noblk(k, x, val);
            for (l, ys) in keys.iter().zip(&succs) {
                if l == k {
                    continue;
                }
                for y in ys {
                    let step = || cex().other(l).next_state(y.clone());
                    noblk_inv.record(
                        system_obligation_holds(Theorem::NoblkInv, sys, x, k, Some(l), Some(y))?,
                        step,
                    );
                    if noblk {
                        continue;
                    }
                    if l == s {
                        decreases.record(
                            system_obligation_holds(
                                Theorem::NstrvDecreases,
                                sys,
                                x,
                                k,
                                Some(l),
                                Some(y),
                            )?,
                            step,
                        );
                    }
                    for (th, tally) in [
                        (Theorem::NstrvHolds, &mut holds),
                        (Theorem::StarverPersists, &mut persists),
                    ] {
                        tally.record(
                            system_obligation_holds(th, sys, x, k, Some(l), Some(y))?,
                            step,
                        );
                    }
                }
            }
        }
    }
    report.verdicts = vec![
        terminates.finish(),
        noblk_blk.finish(),
        noblk_inv.finish(),
        unblocked.finish(),
        bounded.finish(),
        decreases.finish(),
        holds.finish(),
        persists.finish(),
    ];
    Ok(report)
}

/// Re-evaluates `theorem` on a counterexample of a single-system suite.
/// Returns whether the theorem holds there (so `false` reproduces a failure).
pub fn replay<S: TaskSystem + ?Sized>(
    sys: &S,
    theorem: Theorem,
    cex: &Counterexample<S::TState>,
) -> Result<bool, ObligationError> {
    let x = &cex.x;
    let need_k = || cex.k.ok_or(ObligationError::IncompleteCounterexample("k"));
    let need_c = || cex.c.as_ref().ok_or(ObligationError::IncompleteCounterexample("c"));
    match theorem {
        Theorem::Init => Ok(sys_init(x, sys)),
        Theorem::NoSelfNext => Ok(need_c()? != x.get(need_k()?)),
        Theorem::NextEnumAgrees => Ok(sys.t_next(x.get(need_k()?), need_c()?, x)),
        Theorem::TNoblkBlk | Theorem::TNoblkInv | Theorem::TNlockDecreases | Theorem::TNstrvDecreases => {
            let l = cex.l.ok_or(ObligationError::IncompleteCounterexample("l"))?;
            task_obligation_holds(theorem, sys, x, need_k()?, l, cex.c.as_ref())
        }
        Theorem::NoblkBlk
        | Theorem::NoblkInv
        | Theorem::StarverTerminates
        | Theorem::StarverUnblocked
        | Theorem::NstrvsBounded
        | Theorem::NstrvDecreases
        | Theorem::NstrvHolds
        | Theorem::StarverPersists => {
            system_obligation_holds(theorem, sys, x, need_k()?, cex.l, cex.y.as_ref())
        }
        Theorem::Invariant(name) => sys
            .invariants()
            .into_iter()
            .find(|i| i.name == name)
            .map(|i| (i.holds)(x))
            .ok_or(ObligationError::NotReplayable(name)),
        Theorem::NoReachableCycle => {
            // The counterexample state realizes a cycle: every key of the
            // state is blocked by the next one.
            let n = x.keys().len();
            Ok(!(n > 0
                && x.keys().iter().all(|k| {
                    let next = Key::new(((k.index() + 1) % n) as u32);
                    sys.t_blok(x.get(k), x.get(next))
                })))
        }
        t => Err(ObligationError::NotReplayable(t.name())),
    }
}

/// Replay for the match suite.
pub fn replay_match<I, S>(
    imp: &I,
    spec: &S,
    theorem: Theorem,
    cex: &Counterexample<I::TState>,
) -> Result<bool, ObligationError>
where
    I: Refines<S> + ?Sized,
    S: TaskSystem,
{
    let k = cex.k.ok_or(ObligationError::IncompleteCounterexample("k"))?;
    let y = cex.y.as_ref().ok_or(ObligationError::IncompleteCounterexample("y"))?;
    match_obligation_holds(theorem, imp, spec, &cex.x, k, cex.l, y)
}

pub fn check_state_invariant<T: Clone>(
    graph: &StateGraph<T>,
    name: &'static str,
    holds: impl Fn(&SystemState<T>) -> bool,
) -> CheckReport<T> {
    let mut report = report_for(Suite::Invariants, graph);
    let mut t = Tally::new(Theorem::Invariant(name));
    for x in graph.states() {
        t.record(holds(x), || Counterexample::at(x.clone()));
    }
    report.pairs = graph.len() as u64;
    report.verdicts.push(t.finish());
    report
}

/// Every invariant the system declares, on every stored state.
pub fn check_declared_invariants<S: TaskSystem + ?Sized>(
    graph: &StateGraph<S::TState>,
    sys: &S,
) -> CheckReport<S::TState> {
    let mut report = report_for(Suite::Invariants, graph);
    for inv in sys.invariants() {
        let r = check_state_invariant(graph, inv.name, inv.holds);
        report.pairs += r.pairs;
        report.verdicts.extend(r.verdicts);
    }
    report
}

/// The t-states of the complete 1-key closure, used when a system does not
/// declare a finite domain.
pub fn derive_domain<S: TaskSystem + ?Sized>(
    sys: &S,
    opts: ExploreOptions,
) -> Result<Vec<S::TState>, ObligationError> {
    if let Some(d) = sys.tstate_domain(KeySet::new(1)) {
        return Ok(d);
    }
    let g = explore(sys, KeySet::new(1), opts)?;
    if !g.completeness().is_complete() {
        return Err(ObligationError::DomainUnavailable(format!(
            "1-key closure {}",
            g.completeness().name()
        )));
    }
    let set: BTreeSet<_> = g.states().iter().map(|x| x.get(Key::new(0)).clone()).collect();
    Ok(set.into_iter().collect())
}

/// Simple cycles `a1 -> a2 -> ... -> a1` of the blocking relation over
/// `domain`, up to `max_len`, each reported once starting at its least
/// element. A self-loop is a cycle of length 1.
pub fn find_blocking_cycles<S: TaskSystem + ?Sized>(
    sys: &S,
    domain: &[S::TState],
    max_len: usize,
) -> Vec<Vec<S::TState>> {
    let mut dom: Vec<&S::TState> = domain.iter().collect();
    dom.sort();
    dom.dedup();
    let n = dom.len();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| sys.t_blok(dom[i], dom[j])).collect())
        .collect();
    let mut out = Vec::new();
    let mut path = Vec::new();
    for start in 0..n {
        path.clear();
        path.push(start);
        extend_cycles(&adj, start, max_len, &mut path, &mut |p| {
            out.push(p.iter().map(|&i| dom[i].clone()).collect())
        });
    }
    out
}

fn extend_cycles(
    adj: &[Vec<usize>],
    start: usize,
    max_len: usize,
    path: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    let last = *path.last().expect("non-empty path");
    for &j in &adj[last] {
        if j == start {
            emit(path);
        } else if j > start && !path.contains(&j) && path.len() < max_len {
            path.push(j);
            extend_cycles(adj, start, max_len, path, emit);
            path.pop();
        }
    }
}

#[derive(Clone, Debug)]
pub struct CycleRealization<T> {
    pub cycle: Vec<T>,
    /// A reachable state whose tasks, reordered so that each is blocked by
    /// the next, form a blocking cycle of the same length.
    pub witness: Option<SystemState<T>>,
    pub completeness: Completeness,
}

/// Some reachable state of `graph` in which distinct keys form a blocking
/// cycle through every key; returned with its tasks in cycle order.
fn realize_cycle<S: TaskSystem + ?Sized>(
    sys: &S,
    graph: &StateGraph<S::TState>,
) -> Option<SystemState<S::TState>> {
    let n = graph.keys().len();
    let perms = permutations(n);
    graph.states().iter().find_map(|x| {
        perms.iter().find_map(|p| {
            let at = |i: usize| x.get(Key::new(p[i % n] as u32));
            (0..n).all(|i| sys.t_blok(at(i), at(i + 1))).then(|| {
                SystemState::from_tasks((0..n).map(|i| at(i).clone()).collect())
            })
        })
    })
}

/// Explores the instance with one key per cycle member and looks for a
/// reachable state in which the keys block each other in a cycle, every
/// blocking edge holding at once.
pub fn check_cycle_reachability<S: TaskSystem + ?Sized>(
    sys: &S,
    cycle: &[S::TState],
    opts: ExploreOptions,
) -> Result<CycleRealization<S::TState>, ObligationError> {
    let g = explore(sys, KeySet::new(cycle.len() as u32), opts)?;
    Ok(CycleRealization {
        cycle: cycle.to_vec(),
        witness: realize_cycle(sys, &g),
        completeness: g.completeness(),
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// The cycles suite report together with every cycle found.
pub type CycleReport<T> = (CheckReport<T>, Vec<CycleRealization<T>>);

/// Cycle search plus realization of every cycle found. Each instance size is
/// explored once.
pub fn check_blocking_cycles<S: TaskSystem + ?Sized>(
    sys: &S,
    domain: &[S::TState],
    max_len: usize,
    opts: ExploreOptions,
) -> Result<CycleReport<S::TState>, ObligationError> {
    let cycles = find_blocking_cycles(sys, domain, max_len);
    let mut report = CheckReport::new(Suite::Cycles, Completeness::Complete, 0);
    let mut t = Tally::new(Theorem::NoReachableCycle);
    let mut by_len = BTreeMap::new();
    let mut realizations = Vec::new();
    for c in &cycles {
        if let alloc::collections::btree_map::Entry::Vacant(e) = by_len.entry(c.len()) {
            let g = explore(sys, KeySet::new(c.len() as u32), opts)?;
            report.states += g.len();
            e.insert((realize_cycle(sys, &g), g.completeness()));
        }
        let (witness, completeness) = by_len[&c.len()].clone();
        report.completeness = report.completeness.meet(completeness);
        report.pairs += 1;
        t.record(witness.is_none(), || {
            Counterexample::at(witness.clone().expect("realized"))
                .detail(format!("reachable blocking cycle of length {}", c.len()))
        });
        realizations.push(CycleRealization {
            cycle: c.clone(),
            witness,
            completeness,
        });
    }
    let mut v = t.finish();
    v.note = Some(format!(
        "{} cycle(s) up to length {max_len} over {} t-states, {} realizable",
        cycles.len(),
        domain.len(),
        realizations.iter().filter(|r| r.witness.is_some()).count()
    ));
    report.verdicts.push(v);
    Ok((report, realizations))
}

/// Status of `theorem` in `report`, if it was checked.
pub fn status_of<T>(report: &CheckReport<T>, theorem: Theorem) -> Option<Status> {
    report.verdict(theorem).map(|v: &Verdict<T>| v.status)
}
