//! Finitely additive measures built from indivisible generators.
//!
//! A [`Measure`] is a finite rational combination of [`Generator`]s: Dirac
//! atoms (countably additive) and one-sided limit germs or at-infinity tags
//! (purely finitely additive). Distinct generators are pairwise singular, so
//! lattice operations, the Jordan decomposition and the Yosida-Hewitt split
//! all act coefficientwise.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};
use crate::set_expr::{Bound, SetExpr, Span};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Atom,
    RightLimit,
    LeftLimit,
    PlusInfinity,
    MinusInfinity,
}

impl GeneratorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GeneratorKind::Atom => "atom",
            GeneratorKind::RightLimit => "right_limit",
            GeneratorKind::LeftLimit => "left_limit",
            GeneratorKind::PlusInfinity => "plus_infinity",
            GeneratorKind::MinusInfinity => "minus_infinity",
        }
    }
}

/// A unit measure that cannot be split further inside the representable class.
///
/// The derived order (kind first, then location) is the canonical term order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    /// Dirac mass at a point.
    Atom(Rational),
    /// Unit mass on every `(x, x + eps)`, none on `{x}`.
    RightLimit(Rational),
    /// Unit mass on every `(x - eps, x)`, none on `{x}`.
    LeftLimit(Rational),
    /// Unit mass on every `(a, +inf)`.
    PlusInfinity,
    /// Unit mass on every `(-inf, a)`.
    MinusInfinity,
}

impl Generator {
    pub fn kind(&self) -> GeneratorKind {
        match self {
            Generator::Atom(_) => GeneratorKind::Atom,
            Generator::RightLimit(_) => GeneratorKind::RightLimit,
            Generator::LeftLimit(_) => GeneratorKind::LeftLimit,
            Generator::PlusInfinity => GeneratorKind::PlusInfinity,
            Generator::MinusInfinity => GeneratorKind::MinusInfinity,
        }
    }

    pub fn location(&self) -> Option<&Rational> {
        match self {
            Generator::Atom(x) | Generator::RightLimit(x) | Generator::LeftLimit(x) => Some(x),
            Generator::PlusInfinity | Generator::MinusInfinity => None,
        }
    }

    pub fn from_parts(
        kind: GeneratorKind,
        location: Option<Rational>,
    ) -> Result<Generator, MeasureError> {
        match (kind, location) {
            (GeneratorKind::Atom, Some(x)) => Ok(Generator::Atom(x)),
            (GeneratorKind::RightLimit, Some(x)) => Ok(Generator::RightLimit(x)),
            (GeneratorKind::LeftLimit, Some(x)) => Ok(Generator::LeftLimit(x)),
            (GeneratorKind::PlusInfinity, None) => Ok(Generator::PlusInfinity),
            (GeneratorKind::MinusInfinity, None) => Ok(Generator::MinusInfinity),
            (kind, Some(_)) => Err(MeasureError::Malformed(format!(
                "{} takes no location",
                kind.as_str()
            ))),
            (kind, None) => Err(MeasureError::Malformed(format!(
                "{} requires a location",
                kind.as_str()
            ))),
        }
    }

    pub fn is_countably_additive(&self) -> bool {
        matches!(self, Generator::Atom(_))
    }

    /// Value of the generator on `set`: 1 or 0.
    pub fn charges(&self, set: &SetExpr) -> bool {
        match self {
            Generator::Atom(x) => set.contains(x),
            Generator::RightLimit(x) => set.contains_right_of(x),
            Generator::LeftLimit(x) => set.contains_left_of(x),
            Generator::PlusInfinity => set.contains_plus_infinity(),
            Generator::MinusInfinity => set.contains_minus_infinity(),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Atom(x) => write!(f, "delta({x})"),
            Generator::RightLimit(x) => write!(f, "germ({x}+)"),
            Generator::LeftLimit(x) => write!(f, "germ({x}-)"),
            Generator::PlusInfinity => f.write_str("germ(+inf)"),
            Generator::MinusInfinity => f.write_str("germ(-inf)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MeasureError {
    #[error("lattice operations need nonnegative measures")]
    SignedMeasure,
    #[error("cannot normalize the zero measure")]
    ZeroMeasure,
    #[error("cannot normalize a signed measure")]
    NormalizeSigned,
    #[error("malformed measure: {0}")]
    Malformed(String),
}

/// Finite formal combination of generators with rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is measure
/// equality on the evaluation algebra.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Measure {
    terms: BTreeMap<Generator, Rational>,
}

impl Measure {
    pub fn zero() -> Measure {
        Measure::default()
    }

    pub fn unit(g: Generator) -> Measure {
        Measure::term(Rational::one(), g)
    }

    pub fn term(coefficient: Rational, g: Generator) -> Measure {
        Measure::from_terms([(g, coefficient)])
    }

    pub fn atom(x: Rational) -> Measure {
        Measure::unit(Generator::Atom(x))
    }

    pub fn right_limit(x: Rational) -> Measure {
        Measure::unit(Generator::RightLimit(x))
    }

    pub fn left_limit(x: Rational) -> Measure {
        Measure::unit(Generator::LeftLimit(x))
    }

    /// Sums repeated generators and drops zero coefficients.
    pub fn from_terms(terms: impl IntoIterator<Item = (Generator, Rational)>) -> Measure {
        let mut map: BTreeMap<Generator, Rational> = BTreeMap::new();
        for (g, c) in terms {
            *map.entry(g).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Measure { terms: map }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Generator, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, g: &Generator) -> Rational {
        self.terms.get(g).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn generators(&self) -> impl Iterator<Item = &Generator> {
        self.terms.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    /// Nonnegative with total mass one.
    pub fn is_probability(&self) -> bool {
        self.is_nonnegative() && self.norm().is_one()
    }

    pub fn is_countably_additive(&self) -> bool {
        self.terms.keys().all(Generator::is_countably_additive)
    }

    pub fn is_purely_finitely_additive(&self) -> bool {
        !self.terms.keys().any(Generator::is_countably_additive)
    }

    /// Finite point set carrying the atomic part.
    pub fn atom_support(&self) -> Vec<Rational> {
        self.terms
            .keys()
            .filter_map(|g| match g {
                Generator::Atom(x) => Some(x.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn evaluate(&self, set: &SetExpr) -> Rational {
        self.terms
            .iter()
            .filter(|(g, _)| g.charges(set))
            .fold(Rational::zero(), |acc, (_, c)| acc + c)
    }

    pub fn add(&self, other: &Measure) -> Measure {
        Measure::from_terms(
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(g, c)| (g.clone(), c.clone())),
        )
    }

    pub fn sub(&self, other: &Measure) -> Measure {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, factor: &Rational) -> Measure {
        if factor.is_zero() {
            return Measure::zero();
        }
        Measure {
            terms: self
                .terms
                .iter()
                .map(|(g, c)| (g.clone(), c * factor))
                .collect(),
        }
    }

    /// Total variation; for nonnegative measures this is the mass of the
    /// whole space.
    pub fn norm(&self) -> Rational {
        self.terms
            .values()
            .fold(Rational::zero(), |acc, c| acc + c.abs())
    }

    pub fn normalize(&self) -> Result<Measure, MeasureError> {
        if self.is_zero() {
            return Err(MeasureError::ZeroMeasure);
        }
        if !self.is_nonnegative() {
            return Err(MeasureError::NormalizeSigned);
        }
        Ok(self.scale(&self.norm().recip()))
    }

    /// Jordan decomposition `(positive part, negative part)`.
    pub fn jordan(&self) -> (Measure, Measure) {
        let pos = self.terms.iter().filter(|(_, c)| c.is_positive());
        let neg = self.terms.iter().filter(|(_, c)| c.is_negative());
        (
            Measure::from_terms(pos.map(|(g, c)| (g.clone(), c.clone()))),
            Measure::from_terms(neg.map(|(g, c)| (g.clone(), -c))),
        )
    }

    /// Yosida-Hewitt split into `(countably additive, purely finitely additive)`.
    pub fn yosida_hewitt_split(&self) -> (Measure, Measure) {
        let (ca, pfa): (Vec<_>, Vec<_>) = self
            .terms
            .iter()
            .map(|(g, c)| (g.clone(), c.clone()))
            .partition(|(g, _)| g.is_countably_additive());
        (Measure::from_terms(ca), Measure::from_terms(pfa))
    }

    /// Lattice infimum.
    pub fn meet(&self, other: &Measure) -> Result<Measure, MeasureError> {
        if !self.is_nonnegative() || !other.is_nonnegative() {
            return Err(MeasureError::SignedMeasure);
        }
        Ok(Measure::from_terms(self.terms.iter().filter_map(
            |(g, c)| other.terms.get(g).map(|d| (g.clone(), c.min(d).clone())),
        )))
    }

    /// Lattice supremum.
    pub fn join(&self, other: &Measure) -> Result<Measure, MeasureError> {
        if !self.is_nonnegative() || !other.is_nonnegative() {
            return Err(MeasureError::SignedMeasure);
        }
        let mut terms = self.terms.clone();
        for (g, d) in &other.terms {
            let entry = terms.entry(g.clone()).or_insert_with(Rational::zero);
            if d > entry {
                *entry = d.clone();
            }
        }
        Ok(Measure { terms })
    }

    pub fn is_disjoint(&self, other: &Measure) -> Result<bool, MeasureError> {
        Ok(self.meet(other)?.is_zero())
    }

    pub fn is_singular(&self, other: &Measure) -> Result<bool, MeasureError> {
        Ok(self.singular_witness(other)?.is_some())
    }

    /// Disjoint sets `(d1, d2)` carrying the full mass of `self` and `other`,
    /// or `None` when the measures are not singular.
    ///
    /// Every generator gets a piece of common radius `r`: `{x}` for atoms,
    /// `(x, x + r)` / `(x - r, x)` for germs and `(M, +inf)` / `(-inf, -M')`
    /// beyond all locations. `r` is a third of the smallest gap between
    /// distinct locations, or 1 when there is at most one location.
    pub fn singular_witness(
        &self,
        other: &Measure,
    ) -> Result<Option<(SetExpr, SetExpr)>, MeasureError> {
        if !self.is_disjoint(other)? {
            return Ok(None);
        }
        let mut locations: Vec<&Rational> = self
            .generators()
            .chain(other.generators())
            .filter_map(Generator::location)
            .collect();
        locations.sort();
        locations.dedup();
        let radius = witness_radius(&locations);
        let max = locations
            .last()
            .map(|x| (*x).clone() + &radius)
            .unwrap_or_else(Rational::zero);
        let min = locations
            .first()
            .map(|x| (*x).clone() - &radius)
            .unwrap_or_else(Rational::zero);
        let piece = |g: &Generator| -> Span {
            match g {
                Generator::Atom(x) => Span::point(x.clone()),
                Generator::RightLimit(x) => {
                    Span::open(x.clone(), x + &radius).expect("positive radius")
                }
                Generator::LeftLimit(x) => {
                    Span::open(x - &radius, x.clone()).expect("positive radius")
                }
                Generator::PlusInfinity => {
                    Span::new(Bound::Finite(max.clone()), false, Bound::PosInf, false)
                        .expect("unbounded")
                }
                Generator::MinusInfinity => {
                    Span::new(Bound::NegInf, false, Bound::Finite(min.clone()), false)
                        .expect("unbounded")
                }
            }
        };
        let d1 = SetExpr::from_spans(self.generators().map(piece));
        let d2 = SetExpr::from_spans(other.generators().map(piece));
        debug_assert!(d1.is_disjoint(&d2));
        Ok(Some((d1, d2)))
    }
}

/// A third of the minimum gap between distinct locations; 1 with fewer than two.
pub fn witness_radius(sorted_locations: &[&Rational]) -> Rational {
    sorted_locations
        .windows(2)
        .map(|w| w[1] - w[0])
        .min()
        .map(|gap| gap / Rational::from_integer(3.into()))
        .unwrap_or_else(Rational::one)
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (g, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                write!(f, "{g}")?;
            } else {
                write!(f, "{}*{g}", rational::to_text(c))?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for Generator {
    type Err = MeasureError;

    /// Parses `delta(x)`, `germ(x+)`, `germ(x-)`, `germ(+inf)`, `germ(-inf)`.
    fn from_str(text: &str) -> Result<Generator, MeasureError> {
        let text = text.trim();
        let bad = || MeasureError::Malformed(format!("unrecognised generator `{text}`"));
        let location = |body: &str| rational::parse_rational(body.trim()).map_err(|_| bad());
        if let Some(body) = text
            .strip_prefix("delta(")
            .and_then(|r| r.strip_suffix(')'))
        {
            return Ok(Generator::Atom(location(body)?));
        }
        let body = text
            .strip_prefix("germ(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?
            .trim();
        match body {
            "+inf" | "inf" => Ok(Generator::PlusInfinity),
            "-inf" => Ok(Generator::MinusInfinity),
            _ => {
                if let Some(x) = body.strip_suffix('+') {
                    Ok(Generator::RightLimit(location(x)?))
                } else if let Some(x) = body.strip_suffix('-') {
                    Ok(Generator::LeftLimit(location(x)?))
                } else {
                    Err(bad())
                }
            }
        }
    }
}

impl std::str::FromStr for Measure {
    type Err = MeasureError;

    /// Parses the display form, e.g. `1/2*delta(0) + 1/2*germ(1-)`.
    fn from_str(text: &str) -> Result<Measure, MeasureError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "0" {
            return Ok(Measure::zero());
        }
        if compact.is_empty() {
            return Err(MeasureError::Malformed("empty measure".into()));
        }
        let mut terms = Vec::new();
        let mut depth = 0usize;
        let mut start = 0;
        let bytes = compact.as_bytes();
        for (i, &b) in bytes.iter().enumerate() {
            match b {
                b'(' => depth += 1,
                b')' => depth = depth.saturating_sub(1),
                b'+' | b'-'
                    if depth == 0 && i > start && bytes[i - 1] != b'*' && bytes[i - 1] != b'+' =>
                {
                    terms.push(&compact[start..i]);
                    start = i;
                }
                _ => {}
            }
        }
        terms.push(&compact[start..]);
        let mut parsed = Vec::new();
        for term in terms {
            let (negative, body) = match term.as_bytes()[0] {
                b'+' => (false, &term[1..]),
                b'-' if !term.starts_with("-inf") => (true, &term[1..]),
                _ => (false, term),
            };
            let (coef, generator) = match body.split_once('*') {
                Some((c, g)) => (
                    rational::parse_rational(c)
                        .map_err(|_| MeasureError::Malformed(format!("bad coefficient `{c}`")))?,
                    g,
                ),
                None => (Rational::one(), body),
            };
            let coef = if negative { -coef } else { coef };
            parsed.push((generator.parse::<Generator>()?, coef));
        }
        Ok(Measure::from_terms(parsed))
    }
}

/// Wire form of a single term.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermRecord {
    pub kind: GeneratorKind,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "opt_rational"
    )]
    pub location: Option<Rational>,
    #[serde(with = "rational::serde_text")]
    pub coefficient: Rational,
}

/// Wire form of a measure: terms in canonical order on output, any order on
/// input.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureRecord {
    pub terms: Vec<TermRecord>,
}

impl From<&Measure> for MeasureRecord {
    fn from(m: &Measure) -> Self {
        MeasureRecord {
            terms: m
                .terms()
                .map(|(g, c)| TermRecord {
                    kind: g.kind(),
                    location: g.location().cloned(),
                    coefficient: c.clone(),
                })
                .collect(),
        }
    }
}

impl TryFrom<MeasureRecord> for Measure {
    type Error = MeasureError;

    fn try_from(rec: MeasureRecord) -> Result<Self, Self::Error> {
        let terms = rec
            .terms
            .into_iter()
            .map(|t| Generator::from_parts(t.kind, t.location).map(|g| (g, t.coefficient)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Measure::from_terms(terms))
    }
}

impl Serialize for Measure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MeasureRecord::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Measure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rec = MeasureRecord::deserialize(d)?;
        Measure::try_from(rec).map_err(serde::de::Error::custom)
    }
}

mod opt_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => rational::serde_text::serialize(q, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        rational::serde_text::deserialize(d).map(Some)
    }
}
