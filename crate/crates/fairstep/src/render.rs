//! Human-readable and line-delimited JSON renderings of reports.

use std::fmt::Write as _;

use serde_json::{json, Value};

use fairstep_core::report::{CheckReport, Counterexample, Status, Verdict};
use fairstep_core::run::{StarvationFinding, StarvationReport};

use crate::codec::{encode_state, encode_tstate, TStateCodec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Context shared by every record of one command.
#[derive(Clone, Debug)]
pub struct Header {
    pub command: &'static str,
    pub system: String,
    pub keys: usize,
}

fn status_text<T>(r: &CheckReport<T>, v: &Verdict<T>) -> &'static str {
    match v.status {
        Status::Pass if !r.completeness.is_complete() => "pass (bounded)",
        s => s.name(),
    }
}

fn cex_json<T: TStateCodec>(c: &Counterexample<T>) -> Value {
    json!({
        "x": encode_state(&c.x),
        "k": c.k.map(|k| k.to_string()),
        "l": c.l.map(|k| k.to_string()),
        "c": c.c.as_ref().map(encode_tstate),
        "y": c.y.as_ref().map(encode_state),
        "index": c.index,
        "detail": c.detail,
    })
}

pub fn report_json<T: TStateCodec>(h: &Header, r: &CheckReport<T>) -> Vec<String> {
    r.verdicts
        .iter()
        .map(|v| {
            json!({
                "schema": SCHEMA_VERSION,
                "record": "verdict",
                "command": h.command,
                "system": h.system,
                "keys": h.keys,
                "suite": r.suite.name(),
                "theorem": v.theorem.name(),
                "status": v.status.name(),
                "bounded": !r.completeness.is_complete(),
                "completeness": r.completeness.name(),
                "checked": v.checked,
                "states": r.states,
                "pairs": r.pairs,
                "note": v.note,
                "counterexample": v.counterexample.as_ref().map(cex_json),
            })
            .to_string()
        })
        .collect()
}

pub fn report_text<T: TStateCodec>(r: &CheckReport<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "suite {}: {} states, {} pairs, graph {}",
        r.suite,
        r.states,
        r.pairs,
        r.completeness.name()
    );
    for v in &r.verdicts {
        let _ = write!(
            out,
            "  {:<24} {:<14} checked {}",
            v.theorem.name(),
            status_text(r, v),
            v.checked
        );
        if let Some(n) = &v.note {
            let _ = write!(out, "  ({n})");
        }
        out.push('\n');
        if let Some(c) = &v.counterexample {
            out.push_str(&cex_text(c));
        }
    }
    out
}

pub fn cex_text<T: TStateCodec>(c: &Counterexample<T>) -> String {
    let mut out = String::new();
    let mut head = Vec::new();
    if let Some(k) = c.k {
        head.push(format!("k={k}"));
    }
    if let Some(l) = c.l {
        head.push(format!("l={l}"));
    }
    if let Some(i) = c.index {
        head.push(format!("index={i}"));
    }
    let _ = writeln!(out, "    counterexample {}", head.join(" "));
    if !c.detail.is_empty() {
        let _ = writeln!(out, "    {}", c.detail);
    }
    let _ = writeln!(out, "    x:");
    for l in encode_state(&c.x) {
        let _ = writeln!(out, "      {l}");
    }
    if let Some(a) = &c.c {
        let _ = writeln!(out, "    successor: {}", encode_tstate(a));
    }
    if let Some(y) = &c.y {
        let _ = writeln!(out, "    y:");
        for l in encode_state(y) {
            let _ = writeln!(out, "      {l}");
        }
    }
    out
}

fn finding_text(f: &StarvationFinding) -> String {
    match f {
        StarvationFinding::HorizonExceeded {
            key,
            index,
            horizon,
        } => format!("{key}: no progress within {horizon} steps of index {index}"),
        StarvationFinding::Lasso { key, start, end } => {
            format!("{key}: lasso, state at {end} repeats {start} with every key picked and no progress")
        }
    }
}

pub fn starvation_text(s: &StarvationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "starvation: horizon {}", s.horizon);
    for p in &s.per_key {
        let _ = writeln!(
            out,
            "  {:<4} progress steps {:<7} longest gap {}",
            p.key.to_string(),
            p.progress_steps,
            p.max_gap
        );
    }
    if s.findings.is_empty() {
        let _ = writeln!(out, "  no findings");
    }
    for f in &s.findings {
        let _ = writeln!(out, "  finding {}", finding_text(f));
    }
    out
}

pub fn starvation_json(h: &Header, s: &StarvationReport) -> Vec<String> {
    let mut out: Vec<String> = s
        .per_key
        .iter()
        .map(|p| {
            json!({
                "schema": SCHEMA_VERSION,
                "record": "progress",
                "command": h.command,
                "system": h.system,
                "keys": h.keys,
                "key": p.key.to_string(),
                "progress_steps": p.progress_steps,
                "max_gap": p.max_gap,
                "horizon": s.horizon,
            })
            .to_string()
        })
        .collect();
    for f in &s.findings {
        let (kind, extra) = match f {
            StarvationFinding::HorizonExceeded { index, .. } => {
                ("horizon-exceeded", json!({ "index": index }))
            }
            StarvationFinding::Lasso { start, end, .. } => {
                ("lasso", json!({ "start": start, "end": end }))
            }
        };
        out.push(
            json!({
                "schema": SCHEMA_VERSION,
                "record": "starvation",
                "command": h.command,
                "system": h.system,
                "keys": h.keys,
                "key": f.key().to_string(),
                "kind": kind,
                "at": extra,
                "horizon": s.horizon,
            })
            .to_string(),
        );
    }
    out
}

/// A free-form record, e.g. run statistics.
pub fn info_json(h: &Header, what: &str, body: Value) -> String {
    json!({
        "schema": SCHEMA_VERSION,
        "record": what,
        "command": h.command,
        "system": h.system,
        "keys": h.keys,
        "data": body,
    })
    .to_string()
}
