//! Finite run prefixes: fair simulation, legality, fairness witnesses,
//! mapping to the specification and starvation findings.
//!
//! Every result here concerns a finite prefix; an infinite run is only
//! approximated, with lasso detection confirming genuine livelocks.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::measures::prog;
use crate::model::{
    canonical, initial_state, legal_step, map_state, sys_blok, sys_init, sys_next_check, Key,
    KeySet, Refines, Selector, SystemState, TaskSystem,
};
use crate::report::{CheckReport, Completeness, Counterexample, Suite, Tally, Theorem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchedulerPolicy {
    RoundRobin,
    /// Uniform random choice, forcing the most neglected key before its gap
    /// could exceed `bound`.
    AgingRandom { bound: u64 },
    /// Replays the script, looping when it runs out.
    Scripted(Vec<Selector>),
}

impl fmt::Display for SchedulerPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchedulerPolicy::RoundRobin => f.write_str("round-robin"),
            SchedulerPolicy::AgingRandom { bound } => write!(f, "aging-random:{bound}"),
            SchedulerPolicy::Scripted(script) => {
                f.write_str("scripted:")?;
                for (i, s) in script.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{s}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SchedulerParseError {
    #[error("unknown scheduler `{0}`")]
    Unknown(String),
    #[error("bad aging bound `{0}`")]
    Bound(String),
    #[error("bad script entry `{0}`")]
    Script(String),
}

impl core::str::FromStr for SchedulerPolicy {
    type Err = SchedulerParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "round-robin" || s == "rr" {
            return Ok(SchedulerPolicy::RoundRobin);
        }
        if let Some(b) = s.strip_prefix("aging-random:") {
            return b
                .parse()
                .map(|bound| SchedulerPolicy::AgingRandom { bound })
                .map_err(|_| SchedulerParseError::Bound(b.into()));
        }
        if let Some(body) = s.strip_prefix("scripted:") {
            let script = body
                .split(',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| SchedulerParseError::Script(t.into())))
                .collect::<Result<_, _>>()?;
            return Ok(SchedulerPolicy::Scripted(script));
        }
        Err(SchedulerParseError::Unknown(s.into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("system cannot enumerate successors")]
    MissingEnumerator,
    #[error("aging bound {bound} is below the key count {keys}")]
    BoundTooSmall { bound: u64, keys: usize },
    #[error("empty scheduler script")]
    EmptyScript,
    #[error("script selects {0}, which is outside the key set")]
    UnknownKey(Key),
    #[error("{key} is unblocked at step {step} but has no successor")]
    DeadEnd { key: Key, step: usize },
}

/// Selection policy plus the per-key neglect counters it maintains.
#[derive(Clone, Debug)]
pub struct FairScheduler {
    policy: SchedulerPolicy,
    keys: KeySet,
    ages: Vec<u64>,
    pos: usize,
}

impl FairScheduler {
    pub fn new(policy: SchedulerPolicy, keys: KeySet) -> Result<Self, SimError> {
        match &policy {
            SchedulerPolicy::AgingRandom { bound } if (*bound as usize) < keys.len() => {
                return Err(SimError::BoundTooSmall {
                    bound: *bound,
                    keys: keys.len(),
                })
            }
            SchedulerPolicy::Scripted(s) if s.is_empty() => return Err(SimError::EmptyScript),
            SchedulerPolicy::Scripted(s) => {
                if let Some(k) = s.iter().filter_map(|s| s.key()).find(|k| !keys.contains(*k)) {
                    return Err(SimError::UnknownKey(k));
                }
            }
            _ => {}
        }
        Ok(FairScheduler {
            policy,
            keys,
            ages: vec![0; keys.len()],
            pos: 0,
        })
    }

    pub fn policy(&self) -> &SchedulerPolicy {
        &self.policy
    }

    /// Largest gap between selections of one key the policy guarantees.
    pub fn bound(&self) -> Option<u64> {
        match &self.policy {
            SchedulerPolicy::RoundRobin => Some(self.keys.len() as u64),
            SchedulerPolicy::AgingRandom { bound } => Some(*bound),
            SchedulerPolicy::Scripted(_) => None,
        }
    }

    /// Steps since each key was last selected.
    pub fn ages(&self) -> &[u64] {
        &self.ages
    }

    pub fn next(&mut self, rng: &mut impl Rng) -> Selector {
        let n = self.keys.len();
        let sel = match &self.policy {
            _ if n == 0 && !matches!(self.policy, SchedulerPolicy::Scripted(_)) => {
                Selector::Stutter
            }
            SchedulerPolicy::RoundRobin => {
                let k = Key::new((self.pos % n) as u32);
                self.pos = (self.pos + 1) % n;
                Selector::Key(k)
            }
            SchedulerPolicy::AgingRandom { bound } => {
                // After this step every unpicked key ages by one. Forcing the
                // oldest key once its age reaches bound - n + 1 leaves room
                // for the other keys that may reach the threshold later.
                let threshold = bound + 1 - n as u64;
                let (oldest, age) = self
                    .ages
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
                    .map(|(i, a)| (i, *a))
                    .expect("non-empty key set");
                if age >= threshold {
                    Selector::Key(Key::new(oldest as u32))
                } else {
                    Selector::Key(Key::new(rng.gen_range(0..n as u32)))
                }
            }
            SchedulerPolicy::Scripted(script) => {
                let s = script[self.pos % script.len()];
                self.pos = (self.pos + 1) % script.len();
                s
            }
        };
        for (i, a) in self.ages.iter_mut().enumerate() {
            if sel == Selector::Key(Key::new(i as u32)) {
                *a = 0;
            } else {
                *a += 1;
            }
        }
        sel
    }
}

/// A run prefix: `states.len() == picks.len() + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace<T> {
    pub system: String,
    pub keys: KeySet,
    pub scheduler: SchedulerPolicy,
    pub seed: u64,
    pub states: Vec<SystemState<T>>,
    pub picks: Vec<Selector>,
}

impl<T> Trace<T> {
    pub fn len(&self) -> usize {
        self.picks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.picks.is_empty()
    }
}

impl<T: Clone> Trace<T> {
    /// The first `steps` steps.
    pub fn prefix(&self, steps: usize) -> Trace<T> {
        let steps = steps.min(self.len());
        Trace {
            system: self.system.clone(),
            keys: self.keys,
            scheduler: self.scheduler.clone(),
            seed: self.seed,
            states: self.states[..=steps].to_vec(),
            picks: self.picks[..steps].to_vec(),
        }
    }
}

/// Runs `steps` scheduler selections from the initial state. Blocked
/// selections repeat the state; ties among several successors are broken by
/// the seeded generator, which also drives the scheduler.
pub fn simulate<S: TaskSystem + ?Sized>(
    sys: &S,
    keys: KeySet,
    policy: SchedulerPolicy,
    steps: usize,
    seed: u64,
) -> Result<Trace<S::TState>, SimError> {
    let mut sched = FairScheduler::new(policy.clone(), keys)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = initial_state(sys, keys);
    let mut states = Vec::with_capacity(steps + 1);
    let mut picks = Vec::with_capacity(steps);
    states.push(x.clone());
    for step in 0..steps {
        let sel = sched.next(&mut rng);
        if let Selector::Key(k) = sel {
            if !sys_blok(&x, k, sys) {
                let mut succ = sys
                    .successors(x.get(k), &x)
                    .ok_or(SimError::MissingEnumerator)?;
                let b = match succ.len() {
                    0 => return Err(SimError::DeadEnd { key: k, step }),
                    1 => succ.pop().expect("one successor"),
                    n => succ.swap_remove(rng.gen_range(0..n)),
                };
                x = x.with(k, b);
            }
        }
        picks.push(sel);
        states.push(x.clone());
    }
    Ok(Trace {
        system: sys.name().into(),
        keys,
        scheduler: policy,
        seed,
        states,
        picks,
    })
}

pub fn check_run_legal<S: TaskSystem + ?Sized>(
    trace: &Trace<S::TState>,
    sys: &S,
) -> CheckReport<S::TState> {
    let mut report = CheckReport::new(Suite::RunLegal, Completeness::Complete, trace.states.len());
    let mut init = Tally::new(Theorem::RunInit);
    if let Some(x0) = trace.states.first() {
        init.record(sys_init(x0, sys), || {
            Counterexample::at(x0.clone())
                .index(0)
                .detail("first state is not initial")
        });
    }
    let mut step = Tally::new(Theorem::RunStep);
    for (i, (w, sel)) in trace.states.windows(2).zip(&trace.picks).enumerate() {
        step.record(legal_step(&w[0], &w[1], *sel, sys), || {
            let c = Counterexample::at(w[0].clone())
                .next_state(w[1].clone())
                .index(i + 1)
                .detail(format!("illegal step under selector {sel}"));
            match sel.key() {
                Some(k) => c.key(k),
                None => c,
            }
        });
    }
    if trace.states.len() != trace.picks.len() + 1 {
        step.record(false, || {
            Counterexample::at(trace.states[0].clone())
                .detail("state and selector counts disagree")
        });
    }
    report.pairs = trace.picks.len() as u64;
    report.verdicts.push(init.finish());
    report.verdicts.push(step.finish());
    report
}

/// `fair[i][k]`: how many more steps `k` may go unselected after index `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FairWitness {
    pub bound: u64,
    pub values: Vec<Vec<u64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{key} unselected for more than {bound} steps at index {index}")]
pub struct FairViolation {
    pub key: Key,
    pub index: usize,
    pub bound: u64,
}

/// `fair(k, i) = bound - (steps since k was last selected)`; a natural that
/// strictly decreases whenever `k` is not selected.
pub fn derive_fair_witness<T>(trace: &Trace<T>, bound: u64) -> Result<FairWitness, FairViolation> {
    let n = trace.keys.len();
    let mut since = vec![0u64; n];
    let mut values = Vec::with_capacity(trace.picks.len() + 1);
    values.push(vec![bound; n]);
    for (i, sel) in trace.picks.iter().enumerate() {
        let index = i + 1;
        let mut row = Vec::with_capacity(n);
        for (j, s) in since.iter_mut().enumerate() {
            let key = Key::new(j as u32);
            *s = if *sel == Selector::Key(key) { 0 } else { *s + 1 };
            if *s > bound {
                return Err(FairViolation { key, index, bound });
            }
            row.push(bound - *s);
        }
        values.push(row);
    }
    Ok(FairWitness { bound, values })
}

/// Pointwise abstraction; a step whose mapped state is unchanged becomes a
/// stutter.
pub fn map_trace<I, S>(trace: &Trace<I::TState>, imp: &I) -> Trace<S::TState>
where
    I: Refines<S> + ?Sized,
    S: TaskSystem,
{
    let states: Vec<_> = trace.states.iter().map(|x| map_state::<I, S>(x, imp)).collect();
    let picks = trace
        .picks
        .iter()
        .zip(states.windows(2))
        .map(|(sel, w)| if w[0] == w[1] { Selector::Stutter } else { *sel })
        .collect();
    Trace {
        system: format!("map({})", trace.system),
        keys: trace.keys,
        scheduler: trace.scheduler.clone(),
        seed: trace.seed,
        states,
        picks,
    }
}

/// Summary of the stutter structure of a mapped run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StutterStats {
    /// Maximal runs of consecutive spec stutters.
    pub segments: usize,
    pub longest_segment: usize,
    /// Per key, the longest run of its own state-changing but invisible
    /// steps between two of its visible steps.
    pub longest_hidden_run: Vec<usize>,
}

pub fn stutter_stats<T: PartialEq, U: PartialEq>(
    imp: &Trace<T>,
    spec: &Trace<U>,
) -> StutterStats {
    let mut stats = StutterStats {
        longest_hidden_run: vec![0; imp.keys.len()],
        ..StutterStats::default()
    };
    let mut seg = 0usize;
    let mut hidden = vec![0usize; imp.keys.len()];
    for (i, sel) in spec.picks.iter().enumerate() {
        if *sel == Selector::Stutter {
            seg += 1;
        } else {
            if seg > 0 {
                stats.segments += 1;
            }
            seg = 0;
        }
        stats.longest_segment = stats.longest_segment.max(seg);
        if let Selector::Key(k) = imp.picks[i] {
            if imp.states[i] != imp.states[i + 1] {
                let h = &mut hidden[k.index()];
                if *sel == Selector::Stutter {
                    *h += 1;
                    let m = &mut stats.longest_hidden_run[k.index()];
                    *m = (*m).max(*h);
                } else {
                    *h = 0;
                }
            }
        }
    }
    if seg > 0 {
        stats.segments += 1;
    }
    stats
}

/// The mapped trace is a legal spec run, and every invisible implementation
/// step lowers the rank of its key without raising any other key's rank.
pub fn check_refinement_trace<I, S>(
    trace: &Trace<I::TState>,
    imp: &I,
    spec: &S,
) -> CheckReport<I::TState>
where
    I: Refines<S> + ?Sized,
    S: TaskSystem,
{
    let mapped = map_trace::<I, S>(trace, imp);
    let mut report =
        CheckReport::new(Suite::Refinement, Completeness::Complete, trace.states.len());
    let mut legal = Tally::new(Theorem::SpecStepLegal);
    let mut decreases = Tally::new(Theorem::StutterRankDecreases);
    let mut stable = Tally::new(Theorem::StutterRankStable);
    for (i, sel) in trace.picks.iter().enumerate() {
        let (x, y) = (&trace.states[i], &trace.states[i + 1]);
        let Some(k) = sel.key() else { continue };
        if x == y {
            continue;
        }
        let (mx, my) = (&mapped.states[i], &mapped.states[i + 1]);
        let cex = || {
            Counterexample::at(x.clone())
                .key(k)
                .next_state(y.clone())
                .index(i + 1)
        };
        if mx != my {
            legal.record(
                !sys_blok(mx, k, spec) && sys_next_check(mx, my, k, spec),
                || cex().detail("mapped step is not an unblocked spec step"),
            );
        } else {
            decreases.record(imp.t_rank(y.get(k)) < imp.t_rank(x.get(k)), || {
                cex().detail("invisible step does not lower the rank of its key")
            });
        }
        for l in trace.keys.iter().filter(|l| *l != k) {
            stable.record(imp.t_rank(y.get(l)) <= imp.t_rank(x.get(l)), || {
                cex().other(l).detail("step raises the rank of another key")
            });
        }
    }
    report.pairs = trace.picks.len() as u64;
    report.verdicts = vec![legal.finish(), decreases.finish(), stable.finish()];
    report
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StarvationFinding {
    /// `key` made no progress within `horizon` steps from `index`.
    HorizonExceeded { key: Key, index: usize, horizon: u64 },
    /// The run revisits a state without progress of `key` in between, while
    /// every key was selected inside the loop: repeating the loop forever is
    /// a fair run in which `key` starves.
    Lasso { key: Key, start: usize, end: usize },
}

impl StarvationFinding {
    pub fn key(&self) -> Key {
        match self {
            StarvationFinding::HorizonExceeded { key, .. } | StarvationFinding::Lasso { key, .. } => {
                *key
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyProgress {
    pub key: Key,
    pub progress_steps: usize,
    /// Longest stretch of steps without progress, trailing stretch included.
    pub max_gap: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarvationReport {
    pub horizon: u64,
    pub per_key: Vec<KeyProgress>,
    pub findings: Vec<StarvationFinding>,
}

/// `10 * keys * distinct canonical states` of the trace.
pub fn default_horizon<S: TaskSystem + ?Sized>(trace: &Trace<S::TState>, sys: &S) -> u64 {
    let mut seen = alloc::collections::BTreeSet::new();
    for x in &trace.states {
        seen.insert(canonical(x, sys));
    }
    10 * trace.keys.len() as u64 * seen.len() as u64
}

pub fn detect_starvation<S: TaskSystem + ?Sized>(
    trace: &Trace<S::TState>,
    sys: &S,
    horizon: Option<u64>,
) -> StarvationReport {
    let horizon = horizon.unwrap_or_else(|| default_horizon(trace, sys));
    let canon: Vec<_> = trace.states.iter().map(|x| canonical(x, sys)).collect();
    let mut per_key = Vec::new();
    let mut findings = Vec::new();
    for k in trace.keys.iter() {
        let progress: Vec<usize> = (1..trace.states.len())
            .filter(|&j| {
                trace.picks[j - 1] == Selector::Key(k) && trace.states[j] != trace.states[j - 1]
            })
            .collect();
        let mut max_gap = 0;
        let mut last = 0;
        for &j in progress.iter().chain(core::iter::once(&trace.states.len())) {
            max_gap = max_gap.max(j - last - 1);
            last = j;
        }
        // Scan from the last progress point (or the start) so an overlong
        // trailing stretch surfaces as a horizon finding.
        let from = progress.last().copied().unwrap_or(0);
        for start in core::iter::once(0).chain(progress.iter().copied()) {
            if let Err(crate::measures::ProgError::HorizonExceeded { index, .. }) =
                prog(k, start, &trace.states, &trace.picks, horizon)
            {
                findings.push(StarvationFinding::HorizonExceeded {
                    key: k,
                    index,
                    horizon,
                });
                break;
            }
        }
        if let Some(l) = find_lasso(trace, &canon, k, from) {
            findings.push(l);
        }
        per_key.push(KeyProgress {
            key: k,
            progress_steps: progress.len(),
            max_gap,
        });
    }
    StarvationReport {
        horizon,
        per_key,
        findings,
    }
}

/// A repeated canonical state after `from` with every key selected between
/// the two visits; `k` makes no progress there by choice of `from`.
fn find_lasso<T: Ord>(
    trace: &Trace<T>,
    canon: &[SystemState<T>],
    k: Key,
    from: usize,
) -> Option<StarvationFinding> {
    let mut first_seen: BTreeMap<&SystemState<T>, usize> = BTreeMap::new();
    let n = trace.keys.len();
    for (i, x) in canon.iter().enumerate().skip(from) {
        if let Some(&start) = first_seen.get(x) {
            let mut picked = vec![false; n];
            for s in &trace.picks[start..i] {
                if let Selector::Key(l) = s {
                    picked[l.index()] = true;
                }
            }
            if picked.iter().all(|p| *p) {
                return Some(StarvationFinding::Lasso { key: k, start, end: i });
            }
        } else {
            first_seen.insert(x, i);
        }
    }
    None
}
