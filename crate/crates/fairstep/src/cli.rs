//! Command-line driver.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use fairstep_core::explore::{explore, substate_closure_check, ExploreOptions, StateGraph};
use fairstep_core::model::{legal_step, sys_init};
use fairstep_core::obligations::{
    check_blocking_cycles, check_declared_invariants, check_derived_system_obligations,
    check_match_obligations, check_system_props, check_valid_task_obligations, derive_domain,
    replay, replay_match,
};
use fairstep_core::report::{CheckReport, Suite, Theorem};
use fairstep_core::run::{
    check_refinement_trace, check_run_legal, derive_fair_witness, detect_starvation, map_trace,
    simulate, stutter_stats, FairScheduler, SchedulerPolicy, StarvationFinding, Trace,
};
use fairstep_core::systems::{BakeImplTState, BakeryImpl, BakerySpec};
use fairstep_core::{KeySet, Selector, TaskSystem};

use crate::codec::TStateCodec;
use crate::formats::{read_cex, read_trace, write_cex, write_graph, write_trace, CexFile, CEX_MAGIC};
use crate::registry::{lookup, Registered, SYSTEM_NAMES};
use crate::render::{
    info_json, report_json, report_text, starvation_json, starvation_text, Format, Header,
};
use crate::with_system;

/// Process exit status of a finished command.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Pass,
    Bounded,
    Counterexample,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Counterexample => 2,
            Outcome::Bounded => 3,
        }
    }

    fn of<T>(r: &CheckReport<T>) -> Outcome {
        if r.failed() {
            Outcome::Counterexample
        } else if r.qualified() {
            Outcome::Bounded
        } else {
            Outcome::Pass
        }
    }
}

pub const USAGE_ERROR: i32 = 1;

const PREFIX_NOTE: &str =
    "note: runs are finite prefixes; starvation on an infinite run is only confirmed by a lasso";

#[derive(Parser, Debug)]
#[command(name = "fairstep", version, about = "Check fair stuttering refinement obligations of task systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run obligation suites on the explored state graph.
    Check(CheckArgs),
    /// Simulate a fair run and write its trace.
    Simulate(SimulateArgs),
    /// Check a run against the specification through the refinement map.
    Refine(RefineArgs),
    /// Search the blocking relation for reachable cycles.
    Cycles(CyclesArgs),
    /// Check that smaller instances cover projections of larger ones.
    Closure(ClosureArgs),
    /// Explore an instance and optionally dump its graph.
    Explore(ExploreArgs),
    /// Re-evaluate the theorem of a counterexample file.
    Replay(ReplayArgs),
    /// List the registered systems.
    Systems,
}

#[derive(Args, Debug, Clone)]
pub struct ExploreFlags {
    #[arg(long, default_value_t = 2)]
    pub keys: u32,
    /// Rebase unbounded counters before deduplication.
    #[arg(long)]
    pub canon: bool,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, env = "FAIRSTEP_STATE_CAP", default_value_t = fairstep_core::explore::DEFAULT_STATE_CAP)]
    pub state_cap: usize,
}

impl ExploreFlags {
    fn options(&self) -> ExploreOptions {
        ExploreOptions {
            depth: self.depth,
            state_cap: self.state_cap,
            use_canon: self.canon,
        }
    }

    fn key_set(&self) -> Result<KeySet> {
        if self.keys == 0 {
            bail!("--keys must be at least 1");
        }
        Ok(KeySet::new(self.keys))
    }
}

#[derive(Args, Debug, Clone)]
pub struct OutputFlags {
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long)]
    pub system: String,
    /// Specification for the match suite.
    #[arg(long)]
    pub spec: Option<String>,
    #[command(flatten)]
    pub explore: ExploreFlags,
    /// Comma-separated suites; defaults to every applicable one.
    #[arg(long, value_delimiter = ',')]
    pub suites: Vec<String>,
    /// Directory for counterexample files.
    #[arg(long, default_value = ".")]
    pub cex_dir: PathBuf,
    #[command(flatten)]
    pub output: OutputFlags,
}

#[derive(Args, Debug, Clone)]
pub struct SchedFlags {
    /// rr, aging (with --bound), scripted (with --script), or the full
    /// forms `aging-random:B` and `scripted:k0,k1,-`.
    #[arg(long, default_value = "rr")]
    pub sched: String,
    #[arg(long)]
    pub bound: Option<u64>,
    /// File of whitespace-separated selectors for the scripted scheduler.
    #[arg(long)]
    pub script: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    pub steps: usize,
}

impl SchedFlags {
    fn policy(&self) -> Result<SchedulerPolicy> {
        let p = match self.sched.as_str() {
            "rr" | "round-robin" => SchedulerPolicy::RoundRobin,
            "aging" | "aging-random" => SchedulerPolicy::AgingRandom {
                bound: self.bound.context("--sched aging needs --bound")?,
            },
            "scripted" => {
                let path = self.script.as_ref().context("--sched scripted needs --script")?;
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let script = text
                    .split_whitespace()
                    .map(|t| t.parse::<Selector>().map_err(|_| anyhow!("bad selector `{t}`")))
                    .collect::<Result<Vec<_>>>()?;
                SchedulerPolicy::Scripted(script)
            }
            other => other.parse().map_err(|e| anyhow!("{e}"))?,
        };
        if matches!(p, SchedulerPolicy::AgingRandom { .. }) && self.seed.is_none() {
            bail!("a randomized scheduler needs --seed");
        }
        Ok(p)
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub system: String,
    #[arg(long, default_value_t = 2)]
    pub keys: u32,
    #[command(flatten)]
    pub sched: SchedFlags,
    /// Trace file to write.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, env = "FAIRSTEP_HORIZON")]
    pub horizon: Option<u64>,
    #[command(flatten)]
    pub output: OutputFlags,
}

#[derive(Args, Debug)]
pub struct RefineArgs {
    #[arg(long = "impl")]
    pub implementation: String,
    #[arg(long, default_value = "bakery-spec")]
    pub spec: String,
    #[arg(long, default_value_t = 3)]
    pub keys: u32,
    #[command(flatten)]
    pub sched: SchedFlags,
    /// Check this trace file instead of simulating.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Also write the simulated trace here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, env = "FAIRSTEP_HORIZON")]
    pub horizon: Option<u64>,
    #[command(flatten)]
    pub output: OutputFlags,
}

#[derive(Args, Debug)]
pub struct CyclesArgs {
    #[arg(long)]
    pub system: String,
    #[arg(long, default_value_t = 4)]
    pub max_len: usize,
    /// Canonicalize while exploring instances that realize a cycle.
    #[arg(long)]
    pub canon: bool,
    #[arg(long, env = "FAIRSTEP_STATE_CAP", default_value_t = fairstep_core::explore::DEFAULT_STATE_CAP)]
    pub state_cap: usize,
    /// Directory for counterexample files.
    #[arg(long, default_value = ".")]
    pub cex_dir: PathBuf,
    #[command(flatten)]
    pub output: OutputFlags,
}

#[derive(Args, Debug)]
pub struct ClosureArgs {
    #[arg(long)]
    pub system: String,
    #[arg(long, default_value_t = 2)]
    pub keys: u32,
    #[arg(long, env = "FAIRSTEP_STATE_CAP", default_value_t = fairstep_core::explore::DEFAULT_STATE_CAP)]
    pub state_cap: usize,
    #[command(flatten)]
    pub output: OutputFlags,
}

#[derive(Args, Debug)]
pub struct ExploreArgs {
    #[arg(long)]
    pub system: String,
    #[command(flatten)]
    pub explore: ExploreFlags,
    /// Graph dump file.
    #[arg(long)]
    pub dump: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputFlags,
}

#[derive(Args, Debug)]
pub struct ReplayArgs {
    pub file: PathBuf,
}

/// Collects report lines and writes them once the command finishes.
struct Sink {
    format: Format,
    lines: Vec<String>,
}

impl Sink {
    fn new(format: Format) -> Self {
        Sink {
            format,
            lines: Vec::new(),
        }
    }

    fn text(&mut self, s: impl Into<String>) {
        if self.format == Format::Text {
            self.lines.push(s.into());
        }
    }

    fn json(&mut self, records: impl IntoIterator<Item = String>) {
        if self.format == Format::Json {
            self.lines.extend(records);
        }
    }

    fn report<T: TStateCodec>(&mut self, h: &Header, r: &CheckReport<T>) {
        match self.format {
            Format::Text => self.lines.push(report_text(r)),
            Format::Json => self.lines.extend(report_json(h, r)),
        }
    }

    fn finish(self, out: &mut dyn Write, path: Option<&Path>) -> Result<()> {
        let mut body = String::new();
        for l in self.lines {
            body.push_str(&l);
            if !l.ends_with('\n') {
                body.push('\n');
            }
        }
        match path {
            Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display())),
            None => out.write_all(body.as_bytes()).map_err(Into::into),
        }
    }
}

fn system(name: &str) -> Result<Registered> {
    lookup(name).ok_or_else(|| {
        anyhow!(
            "unknown system `{name}`; registered: {}",
            SYSTEM_NAMES.join(", ")
        )
    })
}

/// Runs a parsed command, writing reports to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<Outcome> {
    match cli.command {
        Command::Check(a) => cmd_check(a, out),
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::Refine(a) => cmd_refine(a, out),
        Command::Cycles(a) => cmd_cycles(a, out),
        Command::Closure(a) => cmd_closure(a, out),
        Command::Explore(a) => cmd_explore(a, out),
        Command::Replay(a) => cmd_replay(a, out),
        Command::Systems => {
            for n in SYSTEM_NAMES {
                writeln!(out, "{n}")?;
            }
            Ok(Outcome::Pass)
        }
    }
}

/// Entry point used by the binary: parses `args` and maps errors to exit 1.
pub fn main_with<I, A>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_ERROR } else { 0 };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    match run(cli, out) {
        Ok(o) => o.code(),
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            USAGE_ERROR
        }
    }
}

const DEFAULT_SUITES: [Suite; 5] = [
    Suite::SystemProps,
    Suite::ValidTask,
    Suite::Match,
    Suite::DerivedSystem,
    Suite::Invariants,
];

fn cmd_check(a: CheckArgs, out: &mut dyn Write) -> Result<Outcome> {
    let reg = system(&a.system)?;
    let explicit: Vec<Suite> = a
        .suites
        .iter()
        .map(|s| Suite::from_name(s).ok_or_else(|| anyhow!("unknown suite `{s}`")))
        .collect::<Result<_>>()?;
    if let Some(s) = explicit.iter().find(|s| !DEFAULT_SUITES.contains(s)) {
        bail!("suite `{s}` is not run by check");
    }
    if explicit.contains(&Suite::Match) && a.spec.is_none() {
        bail!("the match suite needs --spec");
    }
    let spec = match &a.spec {
        None => None,
        Some(name) => match (&reg, system(name)?) {
            (Registered::Bakery(_), Registered::BakerySpec(s)) => Some(s),
            _ => bail!("no refinement map from `{}` to `{name}`", a.system),
        },
    };
    let suites = if explicit.is_empty() {
        DEFAULT_SUITES.to_vec()
    } else {
        explicit.clone()
    };
    let keys = a.explore.key_set()?;
    let h = Header {
        command: "check",
        system: a.system.clone(),
        keys: keys.len(),
    };
    let mut sink = Sink::new(a.output.format);
    let outcome = with_system!(&reg, sys => {
        let g = explore(sys, keys, a.explore.options())
            .with_context(|| format!("exploring {}", a.system))?;
        sink.text(format!(
            "{} with {} keys: {} states, {} edges, {}",
            a.system, keys.len(), g.len(), g.edges().len(), g.completeness().name()
        ));
        let mut reports = Vec::new();
        for suite in &suites {
            let r = match suite {
                Suite::SystemProps => Some(check_system_props(&g, sys)?),
                Suite::ValidTask | Suite::DerivedSystem if sys.validity().is_none() => {
                    if explicit.contains(suite) {
                        bail!("{} has no validity bundle", a.system);
                    }
                    sink.text(format!("suite {suite}: inapplicable (no validity bundle)"));
                    None
                }
                Suite::ValidTask => Some(check_valid_task_obligations(&g, sys)?),
                Suite::DerivedSystem => Some(check_derived_system_obligations(&g, sys)?),
                Suite::Invariants => Some(check_declared_invariants(&g, sys)),
                Suite::Match => match spec {
                    Some(s) => Some(match_suite(&reg, &g, s)?),
                    None => None,
                },
                _ => None,
            };
            if let Some(r) = r {
                sink.report(&h, &r);
                reports.push(r);
            }
        }
        let mut outcome = Outcome::Pass;
        for r in &reports {
            outcome = outcome.max(Outcome::of(r));
            let spec = (r.suite == Suite::Match).then(|| a.spec.clone()).flatten();
            write_failures(r, &a.system, spec, &a.cex_dir, &mut sink)?;
        }
        sink.text(format!("result: {}", outcome_word(outcome)));
        outcome
    });
    sink.finish(out, a.output.report.as_deref())?;
    Ok(outcome)
}

/// The match suite is only defined for the Bakery pair; `g` is re-typed
/// through the registry entry.
fn match_suite<T: 'static>(
    reg: &Registered,
    g: &StateGraph<T>,
    spec: BakerySpec,
) -> Result<CheckReport<T>> {
    let Registered::Bakery(b) = reg else {
        bail!("no refinement map for this system");
    };
    let g = (g as &dyn std::any::Any)
        .downcast_ref::<StateGraph<BakeImplTState>>()
        .context("graph type mismatch")?;
    let r = check_match_obligations(g, b, &spec)?;
    let r: Box<dyn std::any::Any> = Box::new(r);
    Ok(*r
        .downcast::<CheckReport<T>>()
        .map_err(|_| anyhow!("report type mismatch"))?)
}

/// Writes `<system>.<theorem>.cex` into `dir` for every failed verdict.
fn write_failures<T: TStateCodec + Clone>(
    r: &CheckReport<T>,
    system: &str,
    spec: Option<String>,
    dir: &Path,
    sink: &mut Sink,
) -> Result<()> {
    for v in r.failures() {
        let file = CexFile {
            system: system.to_string(),
            spec: spec.clone(),
            suite: r.suite,
            theorem: v.theorem.name().to_string(),
            cex: v.counterexample.clone().expect("failures carry a witness"),
        };
        let path = dir.join(format!("{system}.{}.cex", v.theorem.name()));
        std::fs::create_dir_all(dir)?;
        std::fs::write(&path, write_cex(&file))
            .with_context(|| format!("writing {}", path.display()))?;
        sink.text(format!("counterexample written to {}", path.display()));
    }
    Ok(())
}

fn outcome_word(o: Outcome) -> &'static str {
    match o {
        Outcome::Pass => "pass",
        Outcome::Bounded => "pass (bounded)",
        Outcome::Counterexample => "counterexample",
    }
}

fn run_summary<S: TaskSystem>(
    sys: &S,
    t: &Trace<S::TState>,
    h: &Header,
    horizon: Option<u64>,
    sink: &mut Sink,
) -> Outcome
where
    S::TState: TStateCodec,
{
    let legal = check_run_legal(t, sys);
    sink.report(h, &legal);
    let mut outcome = Outcome::of(&legal);
    let bound = FairScheduler::new(t.scheduler.clone(), t.keys)
        .ok()
        .and_then(|s| s.bound());
    match bound {
        Some(b) => match derive_fair_witness(t, b) {
            Ok(_) => {
                sink.text(format!("fair witness: exists with bound {b}"));
                sink.json([info_json(h, "fair-witness", serde_json::json!({"bound": b, "exists": true}))]);
            }
            Err(v) => {
                sink.text(format!("fair witness: {v}"));
                sink.json([info_json(
                    h,
                    "fair-witness",
                    serde_json::json!({"bound": b, "exists": false, "key": v.key.to_string(), "index": v.index}),
                )]);
                outcome = Outcome::Counterexample;
            }
        },
        None => sink.text("fair witness: scheduler promises no bound"),
    }
    let s = detect_starvation(t, sys, horizon);
    sink.text(starvation_text(&s));
    sink.json(starvation_json(h, &s));
    for f in &s.findings {
        outcome = outcome.max(match f {
            StarvationFinding::Lasso { .. } => Outcome::Counterexample,
            StarvationFinding::HorizonExceeded { .. } => Outcome::Bounded,
        });
    }
    outcome
}

fn cmd_simulate(a: SimulateArgs, out: &mut dyn Write) -> Result<Outcome> {
    let reg = system(&a.system)?;
    if a.keys == 0 {
        bail!("--keys must be at least 1");
    }
    let policy = a.sched.policy()?;
    let keys = KeySet::new(a.keys);
    let h = Header {
        command: "simulate",
        system: a.system.clone(),
        keys: keys.len(),
    };
    let mut sink = Sink::new(a.output.format);
    sink.text(PREFIX_NOTE);
    let outcome = with_system!(&reg, sys => {
        let t = simulate(sys, keys, policy, a.sched.steps, a.sched.seed())?;
        if let Some(p) = &a.out {
            std::fs::write(p, write_trace(&t)).with_context(|| format!("writing {}", p.display()))?;
            sink.text(format!("trace of {} steps written to {}", t.len(), p.display()));
        }
        let o = run_summary(sys, &t, &h, a.horizon, &mut sink);
        sink.text(format!("result: {}", outcome_word(o)));
        o
    });
    sink.finish(out, a.output.report.as_deref())?;
    Ok(outcome)
}

fn cmd_refine(a: RefineArgs, out: &mut dyn Write) -> Result<Outcome> {
    let imp = match system(&a.implementation)? {
        Registered::Bakery(b) => b,
        _ => bail!("no refinement map from `{}`", a.implementation),
    };
    if !matches!(system(&a.spec)?, Registered::BakerySpec(_)) {
        bail!("no refinement map from `{}` to `{}`", a.implementation, a.spec);
    }
    let t: Trace<BakeImplTState> = match &a.trace {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let t = read_trace(&text).with_context(|| format!("parsing {}", p.display()))?;
            if t.system != a.implementation {
                bail!("trace is of `{}`, not `{}`", t.system, a.implementation);
            }
            t
        }
        None => {
            if a.keys == 0 {
                bail!("--keys must be at least 1");
            }
            simulate(&imp, KeySet::new(a.keys), a.sched.policy()?, a.sched.steps, a.sched.seed())?
        }
    };
    if let Some(p) = &a.out {
        std::fs::write(p, write_trace(&t)).with_context(|| format!("writing {}", p.display()))?;
    }
    let h = Header {
        command: "refine",
        system: a.implementation.clone(),
        keys: t.keys.len(),
    };
    let mut sink = Sink::new(a.output.format);
    sink.text(PREFIX_NOTE);
    sink.text(format!(
        "{} against {}: {} steps, {} keys, scheduler {}, seed {}",
        a.implementation, a.spec, t.len(), t.keys.len(), t.scheduler, t.seed
    ));
    let mut outcome = run_summary(&imp, &t, &h, a.horizon, &mut sink);
    let r = check_refinement_trace::<BakeryImpl, BakerySpec>(&t, &imp, &BakerySpec);
    sink.report(&h, &r);
    outcome = outcome.max(Outcome::of(&r));
    let mapped = map_trace::<BakeryImpl, BakerySpec>(&t, &imp);
    let st = stutter_stats(&t, &mapped);
    let completions: Vec<usize> = t
        .keys
        .iter()
        .map(|k| {
            t.states
                .windows(2)
                .filter(|w| w[0].get(k).loc == 7 && w[1].get(k).loc == 0)
                .count()
        })
        .collect();
    sink.text(format!(
        "spec stutter segments {}, longest {}, longest invisible run per key {:?}, completions per key {:?}",
        st.segments, st.longest_segment, st.longest_hidden_run, completions
    ));
    sink.json([info_json(
        &h,
        "stutter",
        serde_json::json!({
            "segments": st.segments,
            "longest_segment": st.longest_segment,
            "longest_hidden_run": st.longest_hidden_run,
            "completions": completions,
        }),
    )]);
    sink.text(format!("result: {}", outcome_word(outcome)));
    sink.finish(out, a.output.report.as_deref())?;
    Ok(outcome)
}

fn cmd_cycles(a: CyclesArgs, out: &mut dyn Write) -> Result<Outcome> {
    let reg = system(&a.system)?;
    let opts = ExploreOptions {
        depth: None,
        state_cap: a.state_cap,
        use_canon: a.canon,
    };
    let h = Header {
        command: "cycles",
        system: a.system.clone(),
        keys: a.max_len,
    };
    let mut sink = Sink::new(a.output.format);
    let outcome = with_system!(&reg, sys => {
        let domain = match sys.tstate_domain(KeySet::new(a.max_len as u32)) {
            Some(d) => d,
            None => derive_domain(sys, opts)?,
        };
        let (r, found) = check_blocking_cycles(sys, &domain, a.max_len, opts)?;
        if found.is_empty() {
            sink.text(format!("no cycles up to length {} over {} t-states", a.max_len, domain.len()));
        }
        for c in &found {
            let members: Vec<String> = c.cycle.iter().map(crate::codec::encode_tstate).collect();
            sink.text(format!(
                "cycle of length {} ({}): {}",
                c.cycle.len(),
                if c.witness.is_some() { "reachable" } else { "unreachable" },
                members.join(" -> ")
            ));
        }
        sink.report(&h, &r);
        write_failures(&r, &a.system, None, &a.cex_dir, &mut sink)?;
        Outcome::of(&r)
    });
    sink.finish(out, a.output.report.as_deref())?;
    Ok(outcome)
}

fn cmd_closure(a: ClosureArgs, out: &mut dyn Write) -> Result<Outcome> {
    let reg = system(&a.system)?;
    let h = Header {
        command: "closure",
        system: a.system.clone(),
        keys: a.keys as usize,
    };
    let opts = ExploreOptions {
        state_cap: a.state_cap,
        ..ExploreOptions::default()
    };
    let mut sink = Sink::new(a.output.format);
    let outcome = with_system!(&reg, sys => {
        let r = substate_closure_check(sys, a.keys as usize, opts)?;
        sink.report(&h, &r);
        Outcome::of(&r)
    });
    sink.finish(out, a.output.report.as_deref())?;
    Ok(outcome)
}

fn cmd_explore(a: ExploreArgs, out: &mut dyn Write) -> Result<Outcome> {
    let reg = system(&a.system)?;
    let keys = a.explore.key_set()?;
    let h = Header {
        command: "explore",
        system: a.system.clone(),
        keys: keys.len(),
    };
    let mut sink = Sink::new(a.output.format);
    let outcome = with_system!(&reg, sys => {
        let g = explore(sys, keys, a.explore.options())?;
        if let Some(p) = &a.dump {
            std::fs::write(p, write_graph(&a.system, &g)).with_context(|| format!("writing {}", p.display()))?;
        }
        sink.text(format!(
            "{} with {} keys: {} states, {} edges, {}",
            a.system, keys.len(), g.len(), g.edges().len(), g.completeness().name()
        ));
        sink.json([info_json(&h, "graph", serde_json::json!({
            "states": g.len(),
            "edges": g.edges().len(),
            "completeness": g.completeness().name(),
            "canonical": g.is_canonical(),
        }))]);
        if g.completeness().is_complete() { Outcome::Pass } else { Outcome::Bounded }
    });
    sink.finish(out, a.output.report.as_deref())?;
    Ok(outcome)
}

fn cmd_replay(a: ReplayArgs, out: &mut dyn Write) -> Result<Outcome> {
    let text =
        std::fs::read_to_string(&a.file).with_context(|| format!("reading {}", a.file.display()))?;
    let name = text
        .lines()
        .skip_while(|l| l.trim() != CEX_MAGIC)
        .nth(1)
        .and_then(|l| l.strip_prefix("system "))
        .context("not a counterexample file")?
        .to_string();
    let reg = system(&name)?;
    let holds = with_system!(&reg, sys => replay_file(sys, &reg, &text)?);
    if holds {
        writeln!(out, "not reproduced: the theorem holds on this counterexample")?;
        Ok(Outcome::Pass)
    } else {
        writeln!(out, "reproduced: the theorem fails on this counterexample")?;
        Ok(Outcome::Counterexample)
    }
}

fn replay_file<S: TaskSystem>(sys: &S, reg: &Registered, text: &str) -> Result<bool>
where
    S::TState: TStateCodec + 'static,
{
    let f = read_cex::<S::TState>(text)?;
    let theorem = Theorem::from_name(&f.theorem)
        .or_else(|| {
            sys.invariants()
                .into_iter()
                .find(|i| i.name == f.theorem)
                .map(|i| Theorem::Invariant(i.name))
        })
        .ok_or_else(|| anyhow!("unknown theorem `{}`", f.theorem))?;
    let c = &f.cex;
    Ok(match theorem {
        Theorem::MapMatchesNext | Theorem::MapFiniteStutter | Theorem::MapRankStable => {
            let (Registered::Bakery(b), Some("bakery-spec")) = (reg, f.spec.as_deref()) else {
                bail!("match counterexample without a known specification");
            };
            let any: &dyn std::any::Any = c;
            let c = any
                .downcast_ref()
                .context("counterexample type mismatch")?;
            replay_match(b, &BakerySpec, theorem, c)?
        }
        Theorem::RunInit => sys_init(&c.x, sys),
        Theorem::RunStep => {
            let y = c.y.as_ref().context("counterexample lacks `y`")?;
            let sel = c.k.map_or(Selector::Stutter, Selector::Key);
            legal_step(&c.x, y, sel, sys)
        }
        _ => replay(sys, theorem, c)?,
    })
}

