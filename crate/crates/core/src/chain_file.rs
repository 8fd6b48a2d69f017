//! Chain files.
//!
//! A chain file is TOML:
//!
//! ```toml
//! name = "two_cycle"
//! space = "(0,1) U (1,2)"
//!
//! [[deterministic]]
//! piece = "(0,1)"
//! poly_coeffs = ["1", "0", "1"]   # low-to-high: 1 + x^2
//!
//! [stochastic]
//! states = ["3", "4"]
//! matrix = [["0", "1"], ["1/2", "1/2"]]
//!
//! [[declared_cycles]]
//! kind = "measures"
//! coords = ["germ(0+)", "germ(1+)"]
//!
//! [[declared_cycles]]
//! kind = "states"
//! sets = ["(0,1)", "(1,2)"]
//! ```
//!
//! Rationals are `"p/q"` strings; plain integers are accepted. Every load
//! error carries the line of the offending entry when one can be named.

use std::fmt;
use std::ops::Range;
use std::path::Path;

use serde::Deserialize;
use toml::Spanned;

use crate::kernel::{FiniteChain, Kernel, KernelError};
use crate::measure::{Measure, MeasureError};
use crate::piecewise::{Piece, PiecewiseError, PiecewisePoly};
use crate::poly::Polynomial;
use crate::rational::{self, Rational};
use crate::set_expr::SetExpr;
use crate::state_cycles::StateCycle;

/// Bundled chain files, by name.
pub const BUNDLED: &[(&str, &str)] = &[
    (
        "three_state_swap",
        include_str!("../chains/three_state_swap.toml"),
    ),
    (
        "two_interval_germs",
        include_str!("../chains/two_interval_germs.toml"),
    ),
    (
        "half_open_mixed",
        include_str!("../chains/half_open_mixed.toml"),
    ),
    (
        "permutation_4_cycle",
        include_str!("../chains/permutation_4_cycle.toml"),
    ),
    (
        "absorbing_2_state",
        include_str!("../chains/absorbing_2_state.toml"),
    ),
    ("identity", include_str!("../chains/identity.toml")),
];

pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainFileErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("invalid set `{0}`")]
    Set(String),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("declared cycle is empty")]
    EmptyDeclaredCycle,
}

impl ChainFileErrorKind {
    /// Stable name of the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            ChainFileErrorKind::Syntax(_) => "Syntax",
            ChainFileErrorKind::Set(_) => "InvalidSet",
            ChainFileErrorKind::Measure(_) => "InvalidMeasure",
            ChainFileErrorKind::Kernel(e) => e.code(),
            ChainFileErrorKind::EmptyDeclaredCycle => "EmptyDeclaredCycle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainFileError {
    /// 1-based line of the offending entry.
    pub line: Option<usize>,
    pub kind: ChainFileErrorKind,
}

impl fmt::Display for ChainFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}: {}", self.kind.code(), self.kind),
            None => write!(f, "{}: {}", self.kind.code(), self.kind),
        }
    }
}

impl std::error::Error for ChainFileError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeclaredBody {
    Measures(Vec<Measure>),
    States(StateCycle),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeclaredCycle {
    pub line: usize,
    pub body: DeclaredBody,
}

#[derive(Debug, Clone)]
pub struct ChainFile {
    pub name: String,
    pub description: Option<String>,
    pub kernel: Kernel,
    pub declared_cycles: Vec<DeclaredCycle>,
}

#[derive(Deserialize)]
struct Q(#[serde(with = "rational::serde_text")] Rational);

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChainFile {
    name: String,
    #[serde(default)]
    description: Option<String>,
    space: Spanned<String>,
    #[serde(default)]
    deterministic: Vec<Spanned<RawPiece>>,
    #[serde(default)]
    stochastic: Option<Spanned<RawChain>>,
    #[serde(default)]
    declared_cycles: Vec<Spanned<RawDeclared>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPiece {
    piece: Spanned<String>,
    poly_coeffs: Vec<Q>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChain {
    states: Spanned<Vec<Q>>,
    matrix: Vec<Spanned<Vec<Q>>>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawDeclared {
    Measures { coords: Vec<String> },
    States { sets: Vec<String> },
}

struct Lines<'a>(&'a str);

impl Lines<'_> {
    fn of(&self, span: Range<usize>) -> usize {
        let end = span.start.min(self.0.len());
        self.0[..end].bytes().filter(|&b| b == b'\n').count() + 1
    }
}

fn err(line: Option<usize>, kind: impl Into<ChainFileErrorKind>) -> ChainFileError {
    ChainFileError {
        line,
        kind: kind.into(),
    }
}

fn parse_set(text: &str, line: usize) -> Result<SetExpr, ChainFileError> {
    text.parse()
        .map_err(|_| err(Some(line), ChainFileErrorKind::Set(text.to_string())))
}

impl ChainFile {
    pub fn load(path: &Path) -> std::io::Result<Result<ChainFile, ChainFileError>> {
        let text = std::fs::read_to_string(path)?;
        Ok(ChainFile::parse(&text))
    }

    pub fn parse(text: &str) -> Result<ChainFile, ChainFileError> {
        let lines = Lines(text);
        let raw: RawChainFile = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|s| lines.of(s));
            err(line, ChainFileErrorKind::Syntax(e.message().to_string()))
        })?;
        let space_line = lines.of(raw.space.span());
        let space = parse_set(raw.space.get_ref(), space_line)?;

        let mut pieces = Vec::new();
        let mut piece_lines = Vec::new();
        for rec in &raw.deterministic {
            let line = lines.of(rec.get_ref().piece.span());
            let set = parse_set(rec.get_ref().piece.get_ref(), line)?;
            let poly = Polynomial::new(
                rec.get_ref()
                    .poly_coeffs
                    .iter()
                    .map(|q| q.0.clone())
                    .collect(),
            );
            for s in set.spans() {
                pieces.push(Piece::new(s.clone(), poly.clone()));
                piece_lines.push((s.to_string(), line));
            }
        }
        let piece_line = |label: &str| {
            piece_lines
                .iter()
                .rev()
                .find(|(s, _)| s == label)
                .map(|(_, l)| *l)
        };
        let map = PiecewisePoly::new(pieces).map_err(|e| {
            let line = match &e {
                PiecewiseError::PieceOverlap(a, b) => piece_line(b).or_else(|| piece_line(a)),
                _ => None,
            };
            err(line, KernelError::Function(e))
        })?;

        let chain = match &raw.stochastic {
            None => None,
            Some(section) => {
                let c = section.get_ref();
                let states: Vec<Rational> =
                    c.states.get_ref().iter().map(|q| q.0.clone()).collect();
                let matrix: Vec<Vec<Rational>> = c
                    .matrix
                    .iter()
                    .map(|row| row.get_ref().iter().map(|q| q.0.clone()).collect())
                    .collect();
                let chain = FiniteChain::new(states, matrix).map_err(|e| {
                    let line = match &e {
                        KernelError::RowNotStochastic { row, .. }
                        | KernelError::MatrixShape { row, .. }
                        | KernelError::EntryOutOfRange { row, .. } => {
                            c.matrix.get(*row).map(|r| lines.of(r.span()))
                        }
                        KernelError::DuplicateState(_) => Some(lines.of(c.states.span())),
                        _ => Some(lines.of(section.span())),
                    };
                    err(line, e)
                })?;
                Some(chain)
            }
        };

        let kernel = Kernel::new(space, map, chain).map_err(|e| {
            let line = match &e {
                KernelError::PieceOverlap(a, _) => piece_line(a),
                KernelError::ImageOutsideSpace { piece, .. }
                | KernelError::IrrationalCriticalPoint(piece) => piece_line(piece),
                _ => None,
            };
            err(line.or(Some(space_line)), e)
        })?;

        let mut declared_cycles = Vec::new();
        for rec in &raw.declared_cycles {
            let line = lines.of(rec.span());
            let body = match rec.get_ref() {
                RawDeclared::Measures { coords } => DeclaredBody::Measures(
                    coords
                        .iter()
                        .map(|c| c.parse::<Measure>().map_err(|e| err(Some(line), e)))
                        .collect::<Result<_, _>>()?,
                ),
                RawDeclared::States { sets } => DeclaredBody::States(StateCycle::new(
                    sets.iter()
                        .map(|s| parse_set(s, line))
                        .collect::<Result<_, _>>()?,
                )),
            };
            let empty = match &body {
                DeclaredBody::Measures(m) => m.is_empty(),
                DeclaredBody::States(s) => s.sets().is_empty(),
            };
            if empty {
                return Err(err(Some(line), ChainFileErrorKind::EmptyDeclaredCycle));
            }
            declared_cycles.push(DeclaredCycle { line, body });
        }

        Ok(ChainFile {
            name: raw.name,
            description: raw.description,
            kernel,
            declared_cycles,
        })
    }
}
