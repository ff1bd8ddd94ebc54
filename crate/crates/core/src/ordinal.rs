//! Ordinals below epsilon-zero in Cantor normal form.
//!
//! An [`Ordinal`] is either a bare natural or a non-empty list of
//! `w^exp * coeff` terms with strictly decreasing exponents, followed by a
//! natural remainder. Exponents are themselves ordinals, so measures such as
//! `w^(w^2*1 + 0)*1 + 3` can be expressed directly.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("ill-formed ordinal")]
    IllFormed,
    #[error("coefficient must be positive")]
    ZeroCoefficient,
    #[error("exponent must be greater than the leading exponent of the remainder")]
    ExponentNotGreater,
    #[error("list of length {len} does not fit below exponent {n}")]
    ListTooLong { n: u64, len: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: &'static str },
}

/// A single `w^exp * coeff` summand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub exp: Ordinal,
    pub coeff: u64,
}

/// Constructive ordinal.
///
/// Finite ordinals are always stored as [`Ordinal::Nat`]; the term list of
/// [`Ordinal::Cnf`] is never empty in a well-formed value. With that
/// convention structural equality coincides with ordinal equality.
///
/// The comparison traits assume well-formed operands. Use
/// [`Ordinal::try_lt`] / [`Ordinal::try_le`] when the inputs are untrusted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ordinal {
    Nat(u64),
    Cnf { terms: Vec<Term>, rem: u64 },
}

impl Default for Ordinal {
    fn default() -> Self {
        Ordinal::Nat(0)
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::Nat(n)
    }
}

impl Ordinal {
    pub const ZERO: Ordinal = Ordinal::Nat(0);

    /// The first infinite ordinal.
    pub fn omega() -> Self {
        Ordinal::Cnf {
            terms: vec![Term {
                exp: Ordinal::Nat(1),
                coeff: 1,
            }],
            rem: 0,
        }
    }

    pub fn is_nat(&self) -> bool {
        matches!(self, Ordinal::Nat(_))
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self {
            Ordinal::Nat(n) => Some(*n),
            Ordinal::Cnf { .. } => None,
        }
    }

    /// Leading exponent; a natural has leading exponent 0.
    pub fn leading_exponent(&self) -> Ordinal {
        match self {
            Ordinal::Nat(_) => Ordinal::Nat(0),
            Ordinal::Cnf { terms, .. } => terms
                .first()
                .map(|t| t.exp.clone())
                .unwrap_or(Ordinal::Nat(0)),
        }
    }

    pub fn is_wellformed(&self) -> bool {
        match self {
            Ordinal::Nat(_) => true,
            Ordinal::Cnf { terms, .. } => {
                if terms.is_empty() {
                    return false;
                }
                let mut prev: Option<&Ordinal> = None;
                for t in terms {
                    if t.coeff == 0 || !t.exp.is_wellformed() || t.exp == Ordinal::Nat(0) {
                        return false;
                    }
                    if let Some(p) = prev {
                        if cmp_wf(p, &t.exp) != Ordering::Greater {
                            return false;
                        }
                    }
                    prev = Some(&t.exp);
                }
                true
            }
        }
    }

    pub fn try_lt(&self, other: &Ordinal) -> Result<bool, OrdinalError> {
        check_wf(self)?;
        check_wf(other)?;
        Ok(cmp_wf(self, other) == Ordering::Less)
    }

    pub fn try_le(&self, other: &Ordinal) -> Result<bool, OrdinalError> {
        Ok(!other.try_lt(self)?)
    }
}

fn check_wf(o: &Ordinal) -> Result<(), OrdinalError> {
    if o.is_wellformed() {
        Ok(())
    } else {
        Err(OrdinalError::IllFormed)
    }
}

fn cmp_wf(a: &Ordinal, b: &Ordinal) -> Ordering {
    match (a, b) {
        (Ordinal::Nat(x), Ordinal::Nat(y)) => x.cmp(y),
        (Ordinal::Nat(_), Ordinal::Cnf { .. }) => Ordering::Less,
        (Ordinal::Cnf { .. }, Ordinal::Nat(_)) => Ordering::Greater,
        (Ordinal::Cnf { terms: ta, rem: ra }, Ordinal::Cnf { terms: tb, rem: rb }) => {
            for (x, y) in ta.iter().zip(tb.iter()) {
                let ord = cmp_wf(&x.exp, &y.exp).then(x.coeff.cmp(&y.coeff));
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            // The side with an extra term has a positive power of w left,
            // which dominates any natural remainder.
            ta.len().cmp(&tb.len()).then(ra.cmp(rb))
        }
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_wf(self, other)
    }
}

/// Builds `w^exp * coeff + rest`.
pub fn make_ord(exp: Ordinal, coeff: u64, rest: Ordinal) -> Result<Ordinal, OrdinalError> {
    check_wf(&exp)?;
    check_wf(&rest)?;
    if coeff == 0 {
        return Err(OrdinalError::ZeroCoefficient);
    }
    if cmp_wf(&exp, &rest.leading_exponent()) != Ordering::Greater {
        return Err(OrdinalError::ExponentNotGreater);
    }
    let head = Term { exp, coeff };
    Ok(match rest {
        Ordinal::Nat(rem) => Ordinal::Cnf {
            terms: vec![head],
            rem,
        },
        Ordinal::Cnf { mut terms, rem } => {
            terms.insert(0, head);
            Ordinal::Cnf { terms, rem }
        }
    })
}

/// Lexicographic pair of an ordinal and a natural: `w^e * 1 + n` where `e`
/// is `o + 1` for finite `o` and `o` otherwise.
pub fn ord_nat_pair(o: &Ordinal, n: u64) -> Result<Ordinal, OrdinalError> {
    check_wf(o)?;
    let exp = match o {
        Ordinal::Nat(m) => Ordinal::Nat(m + 1),
        other => other.clone(),
    };
    make_ord(exp, 1, Ordinal::Nat(n))
}

/// First-aligned encoding of a list of naturals.
///
/// Position `i` contributes `w^(n-i) * (1 + l[i])`; positions past the end of
/// the list contribute coefficient 1 down to exponent 1. `n = 0` yields 0
/// regardless of the list.
pub fn nats_to_ord(n: u64, l: &[u64]) -> Result<Ordinal, OrdinalError> {
    if n == 0 {
        return Ok(Ordinal::Nat(0));
    }
    if l.len() as u64 > n {
        return Err(OrdinalError::ListTooLong { n, len: l.len() });
    }
    let terms = (0..n)
        .map(|i| Term {
            exp: Ordinal::Nat(n - i),
            coeff: 1 + l.get(i as usize).copied().unwrap_or(0),
        })
        .collect();
    Ok(Ordinal::Cnf { terms, rem: 0 })
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ordinal::Nat(n) => write!(f, "{n}"),
            Ordinal::Cnf { terms, rem } => {
                for t in terms {
                    match &t.exp {
                        Ordinal::Nat(e) => write!(f, "w^{e}*{} + ", t.coeff)?,
                        e => write!(f, "w^({e})*{} + ", t.coeff)?,
                    }
                }
                write!(f, "{rem}")
            }
        }
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let o = p.ordinal()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        check_wf(&o)?;
        Ok(o)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &'static str) -> OrdinalError {
        OrdinalError::Parse { pos: self.pos, msg }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<u64, OrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a natural"));
        }
        let digits = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        digits.parse().map_err(|_| self.err("natural out of range"))
    }

    fn ordinal(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut terms = Vec::new();
        loop {
            if self.eat(b'w') {
                if !self.eat(b'^') {
                    return Err(self.err("expected '^'"));
                }
                let exp = if self.eat(b'(') {
                    let e = self.ordinal()?;
                    if !self.eat(b')') {
                        return Err(self.err("expected ')'"));
                    }
                    e
                } else {
                    Ordinal::Nat(self.nat()?)
                };
                if !self.eat(b'*') {
                    return Err(self.err("expected '*'"));
                }
                let coeff = self.nat()?;
                terms.push(Term { exp, coeff });
                if !self.eat(b'+') {
                    return Ok(Ordinal::Cnf { terms, rem: 0 });
                }
            } else {
                let rem = self.nat()?;
                return Ok(if terms.is_empty() {
                    Ordinal::Nat(rem)
                } else {
                    Ordinal::Cnf { terms, rem }
                });
            }
        }
    }
}
