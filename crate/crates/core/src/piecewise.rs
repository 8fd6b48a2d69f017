//! Piecewise-polynomial functions on finite unions of spans.
//!
//! These serve both as the bounded test functions the operator `T` acts on
//! and as the point maps of deterministic kernels.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::measure::{Generator, Measure};
use crate::poly::{PolyError, Polynomial};
use crate::rational::{self, Rational};
use crate::set_expr::{Bound, SetExpr, Span};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Piece {
    pub span: Span,
    pub poly: Polynomial,
}

impl Piece {
    pub fn new(span: Span, poly: Polynomial) -> Piece {
        Piece { span, poly }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PiecewiseError {
    #[error("pieces {0} and {1} overlap")]
    PieceOverlap(String, String),
    #[error("function is not defined at {0}")]
    Undefined(String),
    #[error("cannot integrate against {0}: the function has no constant tail there")]
    NonConstantTail(String),
    #[error("function takes values outside [0, 1] on {0}")]
    RangeViolation(String),
    #[error("{0}")]
    Poly(#[from] PolyError),
}

impl PiecewiseError {
    /// Stable name of the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            PiecewiseError::PieceOverlap(..) => "PieceOverlap",
            PiecewiseError::Undefined(_) => "Undefined",
            PiecewiseError::NonConstantTail(_) => "NonConstantTail",
            PiecewiseError::RangeViolation(_) => "RangeViolation",
            PiecewiseError::Poly(e) => e.code(),
        }
    }
}

/// Pieces sorted by span, pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PiecewisePoly {
    pieces: Vec<Piece>,
}

impl PiecewisePoly {
    pub fn new(mut pieces: Vec<Piece>) -> Result<PiecewisePoly, PiecewiseError> {
        pieces.sort_by(|a, b| a.span.cmp(&b.span));
        for (i, a) in pieces.iter().enumerate() {
            for b in &pieces[i + 1..] {
                if a.span.intersect(&b.span).is_some() {
                    return Err(PiecewiseError::PieceOverlap(
                        a.span.to_string(),
                        b.span.to_string(),
                    ));
                }
            }
        }
        Ok(PiecewisePoly { pieces })
    }

    /// One polynomial on the whole of `domain`.
    pub fn uniform(domain: &SetExpr, poly: Polynomial) -> PiecewisePoly {
        PiecewisePoly {
            pieces: domain
                .spans()
                .iter()
                .map(|s| Piece::new(s.clone(), poly.clone()))
                .collect(),
        }
    }

    pub fn constant(domain: &SetExpr, c: Rational) -> PiecewisePoly {
        PiecewisePoly::uniform(domain, Polynomial::constant(c))
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn domain(&self) -> SetExpr {
        SetExpr::from_spans(self.pieces.iter().map(|p| p.span.clone()))
    }

    pub fn piece_at(&self, x: &Rational) -> Option<&Piece> {
        self.pieces.iter().find(|p| p.span.contains(x))
    }

    /// The piece containing `(x, x + eps)` for small `eps`.
    pub fn piece_right_of(&self, x: &Rational) -> Option<&Piece> {
        self.pieces.iter().find(|p| p.span.contains_right_of(x))
    }

    pub fn piece_left_of(&self, x: &Rational) -> Option<&Piece> {
        self.pieces.iter().find(|p| p.span.contains_left_of(x))
    }

    pub fn plus_tail(&self) -> Option<&Piece> {
        self.pieces.iter().find(|p| *p.span.hi() == Bound::PosInf)
    }

    pub fn minus_tail(&self) -> Option<&Piece> {
        self.pieces.iter().find(|p| *p.span.lo() == Bound::NegInf)
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        self.piece_at(x).map(|p| p.poly.eval(x))
    }

    /// Pairing with a measure: atoms read point values, germs read one-sided
    /// limits, infinity tags read constant tails.
    pub fn integrate(&self, mu: &Measure) -> Result<Rational, PiecewiseError> {
        let mut total = Rational::zero();
        for (g, c) in mu.terms() {
            total += self.generator_value(g)? * c;
        }
        Ok(total)
    }

    pub fn generator_value(&self, g: &Generator) -> Result<Rational, PiecewiseError> {
        let undefined = || PiecewiseError::Undefined(g.to_string());
        match g {
            Generator::Atom(x) => self.eval(x).ok_or_else(undefined),
            Generator::RightLimit(x) => self
                .piece_right_of(x)
                .map(|p| p.poly.eval(x))
                .ok_or_else(undefined),
            Generator::LeftLimit(x) => self
                .piece_left_of(x)
                .map(|p| p.poly.eval(x))
                .ok_or_else(undefined),
            Generator::PlusInfinity | Generator::MinusInfinity => {
                let tail = if *g == Generator::PlusInfinity {
                    self.plus_tail()
                } else {
                    self.minus_tail()
                };
                let tail = tail.ok_or_else(undefined)?;
                if tail.poly.is_constant() {
                    Ok(tail.poly.constant_term())
                } else {
                    Err(PiecewiseError::NonConstantTail(g.to_string()))
                }
            }
        }
    }

    /// Merges touching pieces that carry the same polynomial.
    pub fn simplified(&self) -> PiecewisePoly {
        let mut out: Vec<Piece> = Vec::with_capacity(self.pieces.len());
        for p in &self.pieces {
            if let Some(last) = out.last_mut() {
                if last.poly == p.poly {
                    let joined = SetExpr::from_spans([last.span.clone(), p.span.clone()]);
                    if let [single] = joined.spans() {
                        last.span = single.clone();
                        continue;
                    }
                }
            }
            out.push(p.clone());
        }
        PiecewisePoly { pieces: out }
    }

    /// Image of the whole function domain.
    pub fn range(&self) -> Result<SetExpr, PiecewiseError> {
        let mut out = SetExpr::empty();
        for p in &self.pieces {
            out = out.union(&p.poly.image_of(&p.span)?);
        }
        Ok(out)
    }

    /// Checks `0 <= f <= 1` everywhere on the domain.
    pub fn check_unit_range(&self) -> Result<(), PiecewiseError> {
        let unit = SetExpr::span(Span::closed(Rational::zero(), num_traits::One::one()).unwrap());
        for p in &self.pieces {
            if !p.poly.image_of(&p.span)?.is_subset(&unit) {
                return Err(PiecewiseError::RangeViolation(p.span.to_string()));
            }
        }
        Ok(())
    }

    /// Exact description of `{x : f(x) = value}`.
    pub fn level_set(&self, value: &Rational) -> Result<SetExpr, PiecewiseError> {
        let mut spans = Vec::new();
        for p in &self.pieces {
            let shifted = p.poly.sub(&Polynomial::constant(value.clone()));
            if shifted.is_zero() {
                spans.push(p.span.clone());
            } else {
                spans.extend(shifted.roots_in(&p.span)?.into_iter().map(Span::point));
            }
        }
        Ok(SetExpr::from_spans(spans))
    }
}

impl fmt::Display for PiecewisePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}: {}", p.span, p.poly)?;
        }
        Ok(())
    }
}

/// Wire form of a piece: `{piece: "(0,1)", poly_coeffs: ["1", "0", "1"]}`,
/// coefficients low-to-high.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PieceRecord {
    pub piece: SetExpr,
    #[serde(with = "rational::serde_text_vec")]
    pub poly_coeffs: Vec<Rational>,
}

impl Serialize for PiecewisePoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let recs: Vec<PieceRecord> = self
            .pieces
            .iter()
            .map(|p| PieceRecord {
                piece: SetExpr::span(p.span.clone()),
                poly_coeffs: p.poly.coeffs().to_vec(),
            })
            .collect();
        recs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PiecewisePoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let recs = Vec::<PieceRecord>::deserialize(d)?;
        let mut pieces = Vec::new();
        for r in recs {
            let poly = Polynomial::new(r.poly_coeffs);
            pieces.extend(
                r.piece
                    .spans()
                    .iter()
                    .map(|s| Piece::new(s.clone(), poly.clone())),
            );
        }
        PiecewisePoly::new(pieces).map_err(serde::de::Error::custom)
    }
}
