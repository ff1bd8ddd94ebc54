//! Text form of t-states and system states.
//!
//! A system state is one line per key: `key=<name>` followed by the t-state's
//! fields as `name=value`, sorted by name.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use fairstep_core::systems::{BakeImplTState, BakeSpecTState, RelayLoc, SpecLoc};
use fairstep_core::{Key, KeySet, SystemState};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CodecError {
    #[error("missing field `{0}`")]
    Missing(&'static str),
    #[error("bad value `{value}` for field `{field}`")]
    Value { field: String, value: String },
    #[error("malformed token `{0}`")]
    Token(String),
    #[error("unknown field `{0}`")]
    Unknown(String),
    #[error("expected key {expected}, found `{found}`")]
    KeyOrder { expected: Key, found: String },
}

pub type Fields = BTreeMap<String, String>;

pub trait TStateCodec: Sized {
    /// Field names, sorted.
    const FIELDS: &'static [&'static str];
    fn encode(&self) -> Vec<String>;
    fn decode(f: &Fields) -> Result<Self, CodecError>;
}

fn get<T: std::str::FromStr>(f: &Fields, name: &'static str) -> Result<T, CodecError> {
    let v = f.get(name).ok_or(CodecError::Missing(name))?;
    v.parse().map_err(|_| CodecError::Value {
        field: name.into(),
        value: v.clone(),
    })
}

impl TStateCodec for BakeImplTState {
    const FIELDS: &'static [&'static str] = &[
        "choosing", "id", "loc", "old_pos", "pos", "pos_valid", "sh_max", "temp",
    ];

    fn encode(&self) -> Vec<String> {
        vec![
            self.choosing.to_string(),
            self.key.to_string(),
            self.loc.to_string(),
            self.old_pos.to_string(),
            self.pos.to_string(),
            self.pos_valid.to_string(),
            self.sh_max.to_string(),
            self.temp.to_string(),
        ]
    }

    fn decode(f: &Fields) -> Result<Self, CodecError> {
        let loc: u8 = get(f, "loc")?;
        if loc > 7 {
            return Err(CodecError::Value {
                field: "loc".into(),
                value: loc.to_string(),
            });
        }
        Ok(BakeImplTState {
            loc,
            key: get(f, "id")?,
            pos: get(f, "pos")?,
            old_pos: get(f, "old_pos")?,
            temp: get(f, "temp")?,
            sh_max: get(f, "sh_max")?,
            choosing: get(f, "choosing")?,
            pos_valid: get(f, "pos_valid")?,
        })
    }
}

impl TStateCodec for BakeSpecTState {
    const FIELDS: &'static [&'static str] = &["load", "loc", "pos"];

    fn encode(&self) -> Vec<String> {
        vec![
            self.load.to_string(),
            self.loc.name().to_string(),
            self.pos.to_string(),
        ]
    }

    fn decode(f: &Fields) -> Result<Self, CodecError> {
        let loc = f.get("loc").ok_or(CodecError::Missing("loc"))?;
        Ok(BakeSpecTState {
            loc: SpecLoc::from_name(loc).ok_or_else(|| CodecError::Value {
                field: "loc".into(),
                value: loc.clone(),
            })?,
            pos: get(f, "pos")?,
            load: get(f, "load")?,
        })
    }
}

impl TStateCodec for RelayLoc {
    const FIELDS: &'static [&'static str] = &["loc"];

    fn encode(&self) -> Vec<String> {
        vec![self.0.to_string()]
    }

    fn decode(f: &Fields) -> Result<Self, CodecError> {
        let loc: u8 = get(f, "loc")?;
        if loc > 2 {
            return Err(CodecError::Value {
                field: "loc".into(),
                value: loc.to_string(),
            });
        }
        Ok(RelayLoc(loc))
    }
}

/// `name=value` pairs of a t-state, sorted by name.
pub fn encode_tstate<T: TStateCodec>(a: &T) -> String {
    let mut out = String::new();
    for (i, (name, value)) in T::FIELDS.iter().zip(a.encode()).enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{name}={value}");
    }
    out
}

pub fn parse_fields(line: &str) -> Result<Fields, CodecError> {
    let mut f = Fields::new();
    for tok in line.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| CodecError::Token(tok.into()))?;
        f.insert(k.into(), v.into());
    }
    Ok(f)
}

pub fn decode_tstate<T: TStateCodec>(line: &str) -> Result<T, CodecError> {
    let f = parse_fields(line)?;
    if let Some(extra) = f
        .keys()
        .find(|k| !T::FIELDS.contains(&k.as_str()) && k.as_str() != "key")
    {
        return Err(CodecError::Unknown(extra.clone()));
    }
    T::decode(&f)
}

/// One line per key.
pub fn encode_state<T: TStateCodec>(x: &SystemState<T>) -> Vec<String> {
    x.iter()
        .map(|(k, a)| format!("key={k} {}", encode_tstate(a)))
        .collect()
}

/// Reads `keys.len()` lines, which must name the keys in order.
pub fn decode_state<T: TStateCodec>(
    lines: &[&str],
    keys: KeySet,
) -> Result<SystemState<T>, CodecError> {
    let mut tasks = Vec::with_capacity(keys.len());
    for (k, line) in keys.iter().zip(lines) {
        let f = parse_fields(line)?;
        let found = f.get("key").cloned().unwrap_or_default();
        if found != k.to_string() {
            return Err(CodecError::KeyOrder { expected: k, found });
        }
        tasks.push(decode_tstate(line)?);
    }
    if tasks.len() != keys.len() {
        return Err(CodecError::Missing("key"));
    }
    Ok(SystemState::from_tasks(tasks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields_are_sorted() {
        let mut sorted = BakeImplTState::FIELDS.to_vec();
        sorted.sort();
        assert_eq!(sorted, BakeImplTState::FIELDS);
        let mut sorted = BakeSpecTState::FIELDS.to_vec();
        sorted.sort();
        assert_eq!(sorted, BakeSpecTState::FIELDS);
    }

    #[test]
    fn bakery_state_round_trip() {
        let x = SystemState::from_tasks(vec![
            BakeImplTState::initial(Key::new(0)),
            BakeImplTState::initial(Key::new(1)),
        ]);
        let lines = encode_state(&x);
        assert_eq!(
            lines[0],
            "key=k0 choosing=false id=k0 loc=0 old_pos=0 pos=1 pos_valid=false sh_max=1 temp=0"
        );
        let refs: Vec<&str> = lines.iter().map(String::as_str).collect();
        assert_eq!(decode_state::<BakeImplTState>(&refs, KeySet::new(2)), Ok(x));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(decode_tstate::<RelayLoc>("loc=3").is_err());
        assert!(decode_tstate::<RelayLoc>("loc=1 extra=2").is_err());
        assert!(decode_tstate::<BakeSpecTState>("load=1 loc=nowhere pos=0").is_err());
        assert!(decode_state::<RelayLoc>(&["key=k1 loc=0"], KeySet::new(1)).is_err());
    }
}
