//! Finite unions of intervals and points on the extended real line.
//!
//! A [`SetExpr`] is the evaluation algebra for measures: it is closed under
//! union, intersection and complement, and every value has exactly one
//! canonical representation (sorted, pairwise disjoint, non-adjacent spans).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{parse_rational, to_text, Rational};

/// A span endpoint. Infinite endpoints are always open.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Bound {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Bound::Finite(q) => Some(q),
            _ => None,
        }
    }

    fn cmp_value(&self, x: &Rational) -> Ordering {
        match self {
            Bound::NegInf => Ordering::Less,
            Bound::PosInf => Ordering::Greater,
            Bound::Finite(q) => q.cmp(x),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => f.write_str("-inf"),
            Bound::PosInf => f.write_str("+inf"),
            Bound::Finite(q) => f.write_str(&to_text(q)),
        }
    }
}

/// One connected piece: an interval with per-end closedness, or a point
/// (a degenerate closed interval).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Span {
    lo: Bound,
    lo_closed: bool,
    hi: Bound,
    hi_closed: bool,
}

impl Span {
    /// Builds a span, returning `None` when it is empty. Closedness flags on
    /// infinite ends are ignored.
    pub fn new(lo: Bound, lo_closed: bool, hi: Bound, hi_closed: bool) -> Option<Span> {
        let lo_closed = lo_closed && matches!(lo, Bound::Finite(_));
        let hi_closed = hi_closed && matches!(hi, Bound::Finite(_));
        match lo.cmp(&hi) {
            Ordering::Less => {}
            Ordering::Equal if lo_closed && hi_closed => {}
            _ => return None,
        }
        if lo == Bound::PosInf || hi == Bound::NegInf {
            return None;
        }
        Some(Span {
            lo,
            lo_closed,
            hi,
            hi_closed,
        })
    }

    pub fn point(q: Rational) -> Span {
        Span {
            lo: Bound::Finite(q.clone()),
            lo_closed: true,
            hi: Bound::Finite(q),
            hi_closed: true,
        }
    }

    pub fn open(a: Rational, b: Rational) -> Option<Span> {
        Span::new(Bound::Finite(a), false, Bound::Finite(b), false)
    }

    pub fn closed(a: Rational, b: Rational) -> Option<Span> {
        Span::new(Bound::Finite(a), true, Bound::Finite(b), true)
    }

    pub fn real_line() -> Span {
        Span {
            lo: Bound::NegInf,
            lo_closed: false,
            hi: Bound::PosInf,
            hi_closed: false,
        }
    }

    pub fn lo(&self) -> &Bound {
        &self.lo
    }

    pub fn hi(&self) -> &Bound {
        &self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn as_point(&self) -> Option<&Rational> {
        match (&self.lo, &self.hi) {
            (Bound::Finite(a), Bound::Finite(b)) if a == b => Some(a),
            _ => None,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above_lo = match self.lo.cmp_value(x) {
            Ordering::Less => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Greater => false,
        };
        let below_hi = match self.hi.cmp_value(x) {
            Ordering::Greater => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Less => false,
        };
        above_lo && below_hi
    }

    /// True when the span contains `(x, x + eps)` for some `eps > 0`.
    pub fn contains_right_of(&self, x: &Rational) -> bool {
        self.lo.cmp_value(x) != Ordering::Greater && self.hi.cmp_value(x) == Ordering::Greater
    }

    /// True when the span contains `(x - eps, x)` for some `eps > 0`.
    pub fn contains_left_of(&self, x: &Rational) -> bool {
        self.lo.cmp_value(x) == Ordering::Less && self.hi.cmp_value(x) != Ordering::Less
    }

    pub fn is_bounded(&self) -> bool {
        matches!((&self.lo, &self.hi), (Bound::Finite(_), Bound::Finite(_)))
    }

    pub fn intersect(&self, other: &Span) -> Option<Span> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (self.lo.clone(), self.lo_closed),
            Ordering::Less => (other.lo.clone(), other.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_closed),
            Ordering::Greater => (other.hi.clone(), other.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        Span::new(lo, lo_closed, hi, hi_closed)
    }

    /// A rational point strictly inside the span (or the point itself).
    pub fn sample(&self) -> Rational {
        use num_traits::One;
        match (&self.lo, &self.hi) {
            (Bound::Finite(a), Bound::Finite(b)) => (a + b) / Rational::from_integer(2.into()),
            (Bound::Finite(a), Bound::PosInf) => a + Rational::one(),
            (Bound::NegInf, Bound::Finite(b)) => b - Rational::one(),
            _ => Rational::from_integer(0.into()),
        }
    }

    fn lower_key(&self) -> (&Bound, bool) {
        // closed lower ends start "earlier" than open ones at the same value
        (&self.lo, !self.lo_closed)
    }

    fn upper_key(&self) -> (&Bound, bool) {
        (&self.hi, self.hi_closed)
    }
}

impl PartialOrd for Span {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Span {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lower_key()
            .cmp(&other.lower_key())
            .then_with(|| self.upper_key().cmp(&other.upper_key()))
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_point() {
            return write!(f, "{{{}}}", to_text(q));
        }
        let open = if self.lo_closed { '[' } else { '(' };
        let close = if self.hi_closed { ']' } else { ')' };
        write!(f, "{open}{},{}{close}", self.lo, self.hi)
    }
}

/// Canonical finite union of spans.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct SetExpr {
    spans: Vec<Span>,
}

impl SetExpr {
    pub fn empty() -> SetExpr {
        SetExpr::default()
    }

    pub fn real_line() -> SetExpr {
        SetExpr {
            spans: vec![Span::real_line()],
        }
    }

    pub fn from_spans(spans: impl IntoIterator<Item = Span>) -> SetExpr {
        let mut spans: Vec<Span> = spans.into_iter().collect();
        spans.sort();
        let mut merged: Vec<Span> = Vec::with_capacity(spans.len());
        for s in spans {
            if let Some(cur) = merged.last_mut() {
                let touches = match s.lo.cmp(&cur.hi) {
                    Ordering::Less => true,
                    Ordering::Equal => s.lo_closed || cur.hi_closed,
                    Ordering::Greater => false,
                };
                if touches {
                    if s.upper_key() > cur.upper_key() {
                        cur.hi = s.hi;
                        cur.hi_closed = s.hi_closed;
                    }
                    continue;
                }
            }
            merged.push(s);
        }
        SetExpr { spans: merged }
    }

    pub fn span(s: Span) -> SetExpr {
        SetExpr { spans: vec![s] }
    }

    pub fn points(points: impl IntoIterator<Item = Rational>) -> SetExpr {
        SetExpr::from_spans(points.into_iter().map(Span::point))
    }

    pub fn spans(&self) -> &[Span] {
        &self.spans
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    pub fn union(&self, other: &SetExpr) -> SetExpr {
        SetExpr::from_spans(self.spans.iter().chain(other.spans.iter()).cloned())
    }

    pub fn intersect(&self, other: &SetExpr) -> SetExpr {
        let mut out = Vec::new();
        for a in &self.spans {
            for b in &other.spans {
                if let Some(s) = a.intersect(b) {
                    out.push(s);
                }
            }
        }
        SetExpr::from_spans(out)
    }

    /// Complement relative to the whole real line.
    pub fn complement(&self) -> SetExpr {
        let mut out = Vec::new();
        let mut prev_hi = Bound::NegInf;
        let mut prev_hi_closed = false;
        let mut first = true;
        for s in &self.spans {
            let gap = if first {
                Span::new(Bound::NegInf, false, s.lo.clone(), !s.lo_closed)
            } else {
                Span::new(prev_hi.clone(), !prev_hi_closed, s.lo.clone(), !s.lo_closed)
            };
            out.extend(gap);
            first = false;
            prev_hi = s.hi.clone();
            prev_hi_closed = s.hi_closed;
        }
        let tail = if first {
            Some(Span::real_line())
        } else {
            Span::new(prev_hi, !prev_hi_closed, Bound::PosInf, false)
        };
        out.extend(tail);
        SetExpr::from_spans(out)
    }

    /// Complement relative to `space`.
    pub fn complement_in(&self, space: &SetExpr) -> SetExpr {
        space.intersect(&self.complement())
    }

    pub fn difference(&self, other: &SetExpr) -> SetExpr {
        self.intersect(&other.complement())
    }

    pub fn is_subset(&self, other: &SetExpr) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &SetExpr) -> bool {
        self.intersect(other).is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.spans.iter().any(|s| s.contains(x))
    }

    pub fn contains_right_of(&self, x: &Rational) -> bool {
        self.spans.iter().any(|s| s.contains_right_of(x))
    }

    pub fn contains_left_of(&self, x: &Rational) -> bool {
        self.spans.iter().any(|s| s.contains_left_of(x))
    }

    pub fn contains_plus_infinity(&self) -> bool {
        self.spans.last().is_some_and(|s| s.hi == Bound::PosInf)
    }

    pub fn contains_minus_infinity(&self) -> bool {
        self.spans.first().is_some_and(|s| s.lo == Bound::NegInf)
    }

    /// True when `x` lies in the topological closure of the set.
    pub fn closure_contains(&self, x: &Rational) -> bool {
        self.contains(x) || self.contains_left_of(x) || self.contains_right_of(x)
    }

    /// The isolated or interval-endpoint points, when the set is finite.
    pub fn as_points(&self) -> Option<Vec<Rational>> {
        self.spans.iter().map(|s| s.as_point().cloned()).collect()
    }
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.spans.is_empty() {
            return f.write_str("{}");
        }
        for (i, s) in self.spans.iter().enumerate() {
            if i > 0 {
                f.write_str(" U ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid set expression `{text}`: {reason}")]
pub struct ParseSetError {
    pub text: String,
    pub reason: String,
}

fn parse_bound(text: &str) -> Result<Bound, String> {
    match text.trim() {
        "-inf" | "-oo" => Ok(Bound::NegInf),
        "+inf" | "inf" | "+oo" | "oo" => Ok(Bound::PosInf),
        other => parse_rational(other)
            .map(Bound::Finite)
            .map_err(|e| e.to_string()),
    }
}

fn parse_component(text: &str) -> Result<Vec<Span>, String> {
    let t = text.trim();
    if let Some(inner) = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
        if inner.trim().is_empty() {
            return Ok(Vec::new());
        }
        return inner
            .split(',')
            .map(|p| {
                parse_rational(p)
                    .map(Span::point)
                    .map_err(|e| e.to_string())
            })
            .collect();
    }
    let lo_closed = match t.chars().next() {
        Some('[') => true,
        Some('(') => false,
        _ => return Err("expected `[`, `(` or `{`".into()),
    };
    let hi_closed = match t.chars().last() {
        Some(']') => true,
        Some(')') => false,
        _ => return Err("expected `]` or `)`".into()),
    };
    let inner = &t[1..t.len() - 1];
    let (a, b) = inner
        .split_once(',')
        .ok_or("missing `,` between endpoints")?;
    let lo = parse_bound(a)?;
    let hi = parse_bound(b)?;
    if (lo_closed && lo == Bound::NegInf) || (hi_closed && hi == Bound::PosInf) {
        return Err("infinite endpoints must be open".into());
    }
    match Span::new(lo, lo_closed, hi, hi_closed) {
        Some(s) => Ok(vec![s]),
        None => Err("empty interval".into()),
    }
}

impl FromStr for SetExpr {
    type Err = ParseSetError;

    /// Parses `"(0,1) U {2} U [3,+inf)"`; `∪` is accepted for `U` and `{}`
    /// denotes the empty set. Point lists such as `{1,2,3}` are allowed.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut spans = Vec::new();
        for part in s.split(['U', '∪']) {
            if part.trim().is_empty() {
                return Err(ParseSetError {
                    text: s.to_string(),
                    reason: "empty component".into(),
                });
            }
            let parsed = parse_component(part).map_err(|reason| ParseSetError {
                text: s.to_string(),
                reason,
            })?;
            spans.extend(parsed);
        }
        Ok(SetExpr::from_spans(spans))
    }
}

impl Serialize for SetExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SetExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
