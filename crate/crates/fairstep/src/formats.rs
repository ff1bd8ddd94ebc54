//! Trace files, graph dumps and counterexample files.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use fairstep_core::explore::{Edge, StateGraph};
use fairstep_core::report::{Completeness, Counterexample, Suite};
use fairstep_core::run::{SchedulerPolicy, Trace};
use fairstep_core::{Key, KeySet, Selector, SystemState};

use crate::codec::{decode_state, decode_tstate, encode_state, encode_tstate, CodecError, TStateCodec};

pub const TRACE_MAGIC: &str = "fairstep-trace 1";
pub const GRAPH_MAGIC: &str = "fairstep-graph 1";
pub const CEX_MAGIC: &str = "fairstep-counterexample 1";

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Codec { line: usize, source: CodecError },
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line: line + 1,
        msg: msg.into(),
    }
}

/// Cursor over the lines of a file, tracking the line number for errors.
struct Lines<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            lines: text.lines().filter(|l| !l.trim().is_empty()).collect(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<&'a str> {
        self.lines.get(self.pos).copied()
    }

    fn next(&mut self) -> Result<&'a str, FormatError> {
        let l = self
            .lines
            .get(self.pos)
            .copied()
            .ok_or_else(|| syntax(self.pos, "unexpected end of file"))?;
        self.pos += 1;
        Ok(l)
    }

    fn expect(&mut self, exact: &str) -> Result<(), FormatError> {
        let at = self.pos;
        let l = self.next()?;
        if l != exact {
            return Err(syntax(at, format!("expected `{exact}`, found `{l}`")));
        }
        Ok(())
    }

    /// `<name> <value>` line.
    fn field(&mut self, name: &str) -> Result<&'a str, FormatError> {
        let at = self.pos;
        let l = self.next()?;
        match l.split_once(' ') {
            Some((n, v)) if n == name => Ok(v),
            _ if l == name => Ok(""),
            _ => Err(syntax(at, format!("expected `{name} ...`, found `{l}`"))),
        }
    }

    fn parsed<T: std::str::FromStr>(&mut self, name: &str) -> Result<T, FormatError> {
        let at = self.pos;
        let v = self.field(name)?;
        v.parse()
            .map_err(|_| syntax(at, format!("bad value `{v}` for `{name}`")))
    }

    fn state<T: TStateCodec>(&mut self, keys: KeySet) -> Result<SystemState<T>, FormatError> {
        let at = self.pos;
        let end = (self.pos + keys.len()).min(self.lines.len());
        let chunk = &self.lines[self.pos..end];
        let x = decode_state(chunk, keys).map_err(|source| FormatError::Codec {
            line: at + 1,
            source,
        })?;
        self.pos = end;
        Ok(x)
    }
}

pub fn write_trace<T: TStateCodec>(t: &Trace<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{TRACE_MAGIC}");
    let _ = writeln!(out, "system {}", t.system);
    let _ = writeln!(out, "keys {}", t.keys.len());
    let _ = writeln!(out, "scheduler {}", t.scheduler);
    let _ = writeln!(out, "seed {}", t.seed);
    let _ = writeln!(out, "length {}", t.picks.len());
    for (i, x) in t.states.iter().enumerate() {
        if i > 0 {
            let _ = writeln!(out, "pick {}", t.picks[i - 1]);
        }
        let _ = writeln!(out, "state {i}");
        for l in encode_state(x) {
            let _ = writeln!(out, "{l}");
        }
    }
    out
}

pub fn read_trace<T: TStateCodec>(text: &str) -> Result<Trace<T>, FormatError> {
    let mut ls = Lines::new(text);
    ls.expect(TRACE_MAGIC)?;
    let system = ls.field("system")?.to_string();
    let keys = KeySet::new(ls.parsed("keys")?);
    let scheduler: SchedulerPolicy = ls.parsed("scheduler")?;
    let seed = ls.parsed("seed")?;
    let length: usize = ls.parsed("length")?;
    let mut states = Vec::with_capacity(length + 1);
    let mut picks = Vec::with_capacity(length);
    for i in 0..=length {
        if i > 0 {
            picks.push(ls.parsed::<Selector>("pick")?);
        }
        ls.expect(&format!("state {i}"))?;
        states.push(ls.state(keys)?);
    }
    if let Some(l) = ls.peek() {
        return Err(syntax(ls.pos, format!("trailing content `{l}`")));
    }
    Ok(Trace {
        system,
        keys,
        scheduler,
        seed,
        states,
        picks,
    })
}

pub fn write_graph<T: TStateCodec>(system: &str, g: &StateGraph<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{GRAPH_MAGIC}");
    let _ = writeln!(
        out,
        "graph system={system} keys={} canonical={} completeness={} states={} edges={}",
        g.keys().len(),
        g.is_canonical(),
        g.completeness().name(),
        g.len(),
        g.edges().len()
    );
    let _ = writeln!(out, "initial");
    for l in encode_state(g.raw_initial()) {
        let _ = writeln!(out, "{l}");
    }
    for (i, x) in g.states().iter().enumerate() {
        let _ = writeln!(out, "state {i}");
        for l in encode_state(x) {
            let _ = writeln!(out, "{l}");
        }
    }
    for e in g.edges() {
        let _ = writeln!(out, "edge {} {} {}", e.src, e.key, e.dst);
    }
    out
}

/// Reads a dump; returns the system name and the graph.
pub fn read_graph<T: TStateCodec + Clone + Eq + std::hash::Hash>(
    text: &str,
) -> Result<(String, StateGraph<T>), FormatError> {
    let mut ls = Lines::new(text);
    ls.expect(GRAPH_MAGIC)?;
    let at = ls.pos;
    let header = ls.field("graph")?;
    let h: BTreeMap<&str, &str> = header
        .split_whitespace()
        .filter_map(|t| t.split_once('='))
        .collect();
    let get = |k: &str| h.get(k).copied().ok_or_else(|| syntax(at, format!("missing `{k}`")));
    let num = |k: &str| -> Result<usize, FormatError> {
        get(k)?.parse().map_err(|_| syntax(at, format!("bad `{k}`")))
    };
    let system = get("system")?.to_string();
    let keys = KeySet::new(num("keys")? as u32);
    let canonical = get("canonical")? == "true";
    let completeness = Completeness::from_name(get("completeness")?)
        .ok_or_else(|| syntax(at, "bad completeness"))?;
    let (n_states, n_edges) = (num("states")?, num("edges")?);
    ls.expect("initial")?;
    let raw = ls.state(keys)?;
    let mut states = Vec::with_capacity(n_states);
    for i in 0..n_states {
        ls.expect(&format!("state {i}"))?;
        states.push(ls.state(keys)?);
    }
    let mut edges = Vec::with_capacity(n_edges);
    for _ in 0..n_edges {
        let at = ls.pos;
        let v = ls.field("edge")?;
        let parts: Vec<&str> = v.split(' ').collect();
        let bad = || syntax(at, format!("bad edge `{v}`"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let src: usize = parts[0].parse().map_err(|_| bad())?;
        let key: Key = parts[1].parse().map_err(|_| bad())?;
        let dst: usize = parts[2].parse().map_err(|_| bad())?;
        if src >= n_states || dst >= n_states {
            return Err(bad());
        }
        edges.push(Edge { src, key, dst });
    }
    Ok((
        system,
        StateGraph::from_parts(keys, states, edges, raw, canonical, completeness),
    ))
}

/// A counterexample with the context needed to replay it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CexFile<T> {
    pub system: String,
    pub spec: Option<String>,
    pub suite: Suite,
    pub theorem: String,
    pub cex: Counterexample<T>,
}

pub fn write_cex<T: TStateCodec>(f: &CexFile<T>) -> String {
    let mut out = String::new();
    let c = &f.cex;
    let _ = writeln!(out, "{CEX_MAGIC}");
    let _ = writeln!(out, "system {}", f.system);
    if let Some(s) = &f.spec {
        let _ = writeln!(out, "spec {s}");
    }
    let _ = writeln!(out, "keys {}", c.x.keys().len());
    let _ = writeln!(out, "suite {}", f.suite);
    let _ = writeln!(out, "theorem {}", f.theorem);
    if let Some(k) = c.k {
        let _ = writeln!(out, "k {k}");
    }
    if let Some(l) = c.l {
        let _ = writeln!(out, "l {l}");
    }
    if let Some(i) = c.index {
        let _ = writeln!(out, "index {i}");
    }
    if !c.detail.is_empty() {
        let _ = writeln!(out, "detail {}", c.detail.replace('\n', " "));
    }
    let _ = writeln!(out, "state x");
    for l in encode_state(&c.x) {
        let _ = writeln!(out, "{l}");
    }
    if let Some(a) = &c.c {
        let _ = writeln!(out, "successor");
        let _ = writeln!(out, "{}", encode_tstate(a));
    }
    if let Some(y) = &c.y {
        let _ = writeln!(out, "state y");
        for l in encode_state(y) {
            let _ = writeln!(out, "{l}");
        }
    }
    out
}

pub fn read_cex<T: TStateCodec>(text: &str) -> Result<CexFile<T>, FormatError> {
    let mut ls = Lines::new(text);
    ls.expect(CEX_MAGIC)?;
    let system = ls.field("system")?.to_string();
    let spec = match ls.peek() {
        Some(l) if l.starts_with("spec ") => Some(ls.field("spec")?.to_string()),
        _ => None,
    };
    let keys = KeySet::new(ls.parsed("keys")?);
    let at = ls.pos;
    let suite_name = ls.field("suite")?;
    let suite = Suite::from_name(suite_name)
        .ok_or_else(|| syntax(at, format!("unknown suite `{suite_name}`")))?;
    let theorem = ls.field("theorem")?.to_string();
    let mut c: Option<Counterexample<T>> = None;
    let (mut k, mut l, mut index, mut detail) = (None, None, None, String::new());
    let (mut succ, mut y) = (None, None);
    while let Some(line) = ls.peek() {
        let at = ls.pos;
        let (head, _) = line.split_once(' ').unwrap_or((line, ""));
        match head {
            "k" => k = Some(ls.parsed::<Key>("k")?),
            "l" => l = Some(ls.parsed::<Key>("l")?),
            "index" => index = Some(ls.parsed::<usize>("index")?),
            "detail" => detail = ls.field("detail")?.to_string(),
            "state" if line == "state x" => {
                ls.next()?;
                c = Some(Counterexample::at(ls.state(keys)?));
            }
            "state" if line == "state y" => {
                ls.next()?;
                y = Some(ls.state(keys)?);
            }
            "successor" => {
                ls.next()?;
                let at = ls.pos;
                let t = ls.next()?;
                succ = Some(decode_tstate(t).map_err(|source| FormatError::Codec {
                    line: at + 1,
                    source,
                })?);
            }
            _ => return Err(syntax(at, format!("unexpected `{line}`"))),
        }
    }
    let mut cex = c.ok_or_else(|| syntax(ls.pos, "missing `state x`"))?;
    cex.k = k;
    cex.l = l;
    cex.index = index;
    cex.detail = detail;
    cex.c = succ;
    cex.y = y;
    Ok(CexFile {
        system,
        spec,
        suite,
        theorem,
        cex,
    })
}
