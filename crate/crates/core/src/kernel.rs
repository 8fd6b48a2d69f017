//! Transition functions and the two Markov operators they generate.
//!
//! A [`Kernel`] is a disjoint union of a deterministic piecewise-polynomial
//! point map (over interval pieces) and a finite stochastic matrix (over
//! isolated states). [`Kernel::apply`] is the operator `A` on measures,
//! [`Kernel::apply_t`] the operator `T` on functions.
//!
//! Germ pushforward: for a germ at `x` following piece polynomial `f`, let
//! `L = f(x)` and `k` the first order with `f^(k)(x) != 0`. The image is the
//! atom at `L` when `f` is constant, otherwise a germ at `L` on the side
//! given by the sign of `f^(k)(x)`, flipped by `(-1)^k` for left germs.

use num_traits::{One, Signed, Zero};

use crate::measure::{Generator, Measure};
use crate::piecewise::{Piece, PiecewiseError, PiecewisePoly};
use crate::poly::{PolyError, Polynomial};
use crate::rational::{self, Rational};
use crate::set_expr::{SetExpr, Span};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("phase space is empty")]
    EmptySpace,
    #[error("matrix row {row} has {found} entries, expected {expected}")]
    MatrixShape {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("matrix row {row} sums to {sum}, expected 1")]
    RowNotStochastic { row: usize, sum: String },
    #[error("matrix entry ({row}, {col}) = {value} is outside [0, 1]")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: String,
    },
    #[error("state {0} is listed twice")]
    DuplicateState(String),
    #[error("pieces {0} and {1} overlap")]
    PieceOverlap(String, String),
    #[error(
        "pieces do not partition the phase space (uncovered: {uncovered}, outside: {outside})"
    )]
    NotPartition { uncovered: String, outside: String },
    #[error("piece {piece} maps to {image}, which leaves the phase space")]
    ImageOutsideSpace { piece: String, image: String },
    #[error("piece {0} has irrational critical points; its image is not exactly computable")]
    IrrationalCriticalPoint(String),
    #[error("atom at {0} lies outside the phase space")]
    AtomOutsideSpace(String),
    #[error("{0} has no one-sided neighbourhood inside the phase space")]
    GermOutsideSpace(String),
    #[error("no single piece contains the neighbourhood of {0}")]
    AmbiguousPiece(String),
    #[error("finite stochastic kernels only act on atoms, got {0}")]
    NonAtomicInput(String),
    #[error("breakpoint preimage under the map on {0} is irrational")]
    IrrationalBreakpointPreimage(String),
    #[error("point {0} escapes the phase space")]
    PointEscapesSpace(String),
    #[error("kernel is not deterministic at {0}")]
    NotDeterministic(String),
    #[error(transparent)]
    Function(#[from] PiecewiseError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl KernelError {
    /// Stable name of the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            KernelError::EmptySpace => "EmptySpace",
            KernelError::MatrixShape { .. } => "MatrixShape",
            KernelError::RowNotStochastic { .. } => "RowNotStochastic",
            KernelError::EntryOutOfRange { .. } => "EntryOutOfRange",
            KernelError::DuplicateState(_) => "DuplicateState",
            KernelError::PieceOverlap(..) => "PieceOverlap",
            KernelError::NotPartition { .. } => "NotPartition",
            KernelError::ImageOutsideSpace { .. } => "ImageOutsideSpace",
            KernelError::IrrationalCriticalPoint(_) => "IrrationalCriticalPoint",
            KernelError::AtomOutsideSpace(_) => "AtomOutsideSpace",
            KernelError::GermOutsideSpace(_) => "GermOutsideSpace",
            KernelError::AmbiguousPiece(_) => "AmbiguousPiece",
            KernelError::NonAtomicInput(_) => "NonAtomicInput",
            KernelError::IrrationalBreakpointPreimage(_) => "IrrationalBreakpointPreimage",
            KernelError::PointEscapesSpace(_) => "PointEscapesSpace",
            KernelError::NotDeterministic(_) => "NotDeterministic",
            KernelError::Function(e) => e.code(),
            KernelError::Poly(e) => e.code(),
        }
    }
}

/// Row-stochastic matrix over a finite list of rational states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteChain {
    states: Vec<Rational>,
    matrix: Vec<Vec<Rational>>,
}

impl FiniteChain {
    pub fn new(
        states: Vec<Rational>,
        matrix: Vec<Vec<Rational>>,
    ) -> Result<FiniteChain, KernelError> {
        let n = states.len();
        for (i, s) in states.iter().enumerate() {
            if states[..i].contains(s) {
                return Err(KernelError::DuplicateState(rational::to_text(s)));
            }
        }
        if matrix.len() != n {
            return Err(KernelError::MatrixShape {
                row: matrix.len(),
                found: 0,
                expected: n,
            });
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(KernelError::MatrixShape {
                    row: i,
                    found: row.len(),
                    expected: n,
                });
            }
            for (j, p) in row.iter().enumerate() {
                if p.is_negative() || *p > Rational::one() {
                    return Err(KernelError::EntryOutOfRange {
                        row: i,
                        col: j,
                        value: rational::to_text(p),
                    });
                }
            }
            let sum: Rational = row.iter().sum();
            if !sum.is_one() {
                return Err(KernelError::RowNotStochastic {
                    row: i,
                    sum: rational::to_text(&sum),
                });
            }
        }
        Ok(FiniteChain { states, matrix })
    }

    pub fn states(&self) -> &[Rational] {
        &self.states
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, x: &Rational) -> Option<usize> {
        self.states.iter().position(|s| s == x)
    }

    /// Indices reachable in one step with positive probability.
    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.matrix[i]
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_positive())
            .map(|(j, _)| j)
    }

    /// Row `i` as a measure on the states.
    pub fn row_measure(&self, i: usize) -> Measure {
        Measure::from_terms(
            self.states
                .iter()
                .zip(&self.matrix[i])
                .map(|(s, p)| (Generator::Atom(s.clone()), p.clone())),
        )
    }

    pub fn state_set(&self) -> SetExpr {
        SetExpr::points(self.states.iter().cloned())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernel {
    space: SetExpr,
    map: PiecewisePoly,
    chain: Option<FiniteChain>,
}

impl Kernel {
    /// Validates that the map pieces and chain states partition `space` and
    /// that every piece maps into `space`.
    pub fn new(
        space: SetExpr,
        map: PiecewisePoly,
        chain: Option<FiniteChain>,
    ) -> Result<Kernel, KernelError> {
        if space.is_empty() {
            return Err(KernelError::EmptySpace);
        }
        let map_domain = map.domain();
        let states = chain
            .as_ref()
            .map(FiniteChain::state_set)
            .unwrap_or_default();
        if let Some(p) = map
            .pieces()
            .iter()
            .find(|p| !states.intersect(&SetExpr::span(p.span.clone())).is_empty())
        {
            return Err(KernelError::PieceOverlap(
                p.span.to_string(),
                states.to_string(),
            ));
        }
        let covered = map_domain.union(&states);
        if covered != space {
            return Err(KernelError::NotPartition {
                uncovered: space.difference(&covered).to_string(),
                outside: covered.difference(&space).to_string(),
            });
        }
        if space != SetExpr::real_line() {
            for p in map.pieces() {
                let image = p.poly.image_of(&p.span).map_err(|e| match e {
                    PolyError::IrrationalRoot(_) => {
                        KernelError::IrrationalCriticalPoint(p.span.to_string())
                    }
                    other => KernelError::Poly(other),
                })?;
                if !image.is_subset(&space) {
                    return Err(KernelError::ImageOutsideSpace {
                        piece: p.span.to_string(),
                        image: image.to_string(),
                    });
                }
            }
        }
        Ok(Kernel { space, map, chain })
    }

    pub fn deterministic(space: SetExpr, map: PiecewisePoly) -> Result<Kernel, KernelError> {
        Kernel::new(space, map, None)
    }

    /// Finite chain on its own state set.
    pub fn stochastic(chain: FiniteChain) -> Result<Kernel, KernelError> {
        Kernel::new(chain.state_set(), PiecewisePoly::default(), Some(chain))
    }

    /// `f(x) = x` on `space`.
    pub fn identity(space: SetExpr) -> Kernel {
        let map = PiecewisePoly::uniform(&space, Polynomial::identity());
        Kernel::deterministic(space, map).expect("identity is a valid kernel")
    }

    pub fn space(&self) -> &SetExpr {
        &self.space
    }

    pub fn map(&self) -> &PiecewisePoly {
        &self.map
    }

    pub fn chain(&self) -> Option<&FiniteChain> {
        self.chain.as_ref()
    }

    /// Pure finite stochastic kernel (no interval pieces).
    pub fn as_finite_chain(&self) -> Option<&FiniteChain> {
        if self.map.is_empty() {
            self.chain.as_ref()
        } else {
            None
        }
    }

    /// Image of a single generator under `A`.
    pub fn push_generator(&self, g: &Generator) -> Result<Measure, KernelError> {
        let germ_err = || {
            if self.map.is_empty() {
                KernelError::NonAtomicInput(g.to_string())
            } else {
                KernelError::GermOutsideSpace(g.to_string())
            }
        };
        match g {
            Generator::Atom(x) => {
                if let Some(i) = self.chain.as_ref().and_then(|c| c.index_of(x)) {
                    return Ok(self.chain.as_ref().unwrap().row_measure(i));
                }
                self.map
                    .eval(x)
                    .map(Measure::atom)
                    .ok_or_else(|| KernelError::AtomOutsideSpace(rational::to_text(x)))
            }
            Generator::RightLimit(x) | Generator::LeftLimit(x) => {
                let right = matches!(g, Generator::RightLimit(_));
                let inside = if right {
                    self.space.contains_right_of(x)
                } else {
                    self.space.contains_left_of(x)
                };
                if !inside {
                    return Err(germ_err());
                }
                let piece = if right {
                    self.map.piece_right_of(x)
                } else {
                    self.map.piece_left_of(x)
                };
                let piece = piece.ok_or_else(|| KernelError::AmbiguousPiece(g.to_string()))?;
                Ok(Measure::unit(germ_image(&piece.poly, x, right)))
            }
            Generator::PlusInfinity | Generator::MinusInfinity => {
                let plus = *g == Generator::PlusInfinity;
                let inside = if plus {
                    self.space.contains_plus_infinity()
                } else {
                    self.space.contains_minus_infinity()
                };
                if !inside {
                    return Err(germ_err());
                }
                let tail = if plus {
                    self.map.plus_tail()
                } else {
                    self.map.minus_tail()
                };
                let tail = tail.ok_or_else(|| KernelError::AmbiguousPiece(g.to_string()))?;
                let poly = &tail.poly;
                let image = match poly.limit_at_infinity(plus) {
                    crate::set_expr::Bound::Finite(c) => Generator::Atom(c),
                    crate::set_expr::Bound::PosInf => Generator::PlusInfinity,
                    crate::set_expr::Bound::NegInf => Generator::MinusInfinity,
                };
                Ok(Measure::unit(image))
            }
        }
    }

    /// The operator `A`, extended linearly.
    pub fn apply(&self, mu: &Measure) -> Result<Measure, KernelError> {
        let mut out = Measure::zero();
        for (g, c) in mu.terms() {
            out = out.add(&self.push_generator(g)?.scale(c));
        }
        Ok(out)
    }

    /// `A^n`.
    pub fn apply_n(&self, mu: &Measure, n: usize) -> Result<Measure, KernelError> {
        let mut cur = mu.clone();
        for _ in 0..n {
            cur = self.apply(&cur)?;
        }
        Ok(cur)
    }

    /// `p(x, set)`.
    pub fn transition_probability(
        &self,
        x: &Rational,
        set: &SetExpr,
    ) -> Result<Rational, KernelError> {
        Ok(self.apply(&Measure::atom(x.clone()))?.evaluate(set))
    }

    /// One step of the point dynamics; only defined where the transition is
    /// a Dirac mass.
    pub fn step_point(&self, x: &Rational) -> Result<Rational, KernelError> {
        if !self.space.contains(x) {
            return Err(KernelError::PointEscapesSpace(rational::to_text(x)));
        }
        let image = self.apply(&Measure::atom(x.clone()))?;
        let mut terms = image.terms();
        match (terms.next(), terms.next()) {
            (Some((Generator::Atom(y), c)), None) if c.is_one() => Ok(y.clone()),
            _ => Err(KernelError::NotDeterministic(rational::to_text(x))),
        }
    }

    /// The operator `T`: `(Tf)(x) = integral of f(y) p(x, dy)`.
    pub fn apply_t(&self, f: &PiecewisePoly) -> Result<PiecewisePoly, KernelError> {
        let mut pieces = Vec::new();
        for p in self.map.pieces() {
            pieces.extend(compose_on_piece(f, p)?);
        }
        if let Some(chain) = &self.chain {
            for (i, s) in chain.states().iter().enumerate() {
                let mut value = Rational::zero();
                for (t, prob) in chain.states().iter().zip(&chain.matrix()[i]) {
                    if prob.is_zero() {
                        continue;
                    }
                    let ft = f
                        .eval(t)
                        .ok_or_else(|| PiecewiseError::Undefined(rational::to_text(t)))?;
                    value += prob * ft;
                }
                pieces.push(Piece::new(
                    Span::point(s.clone()),
                    Polynomial::constant(value),
                ));
            }
        }
        Ok(PiecewisePoly::new(pieces)?.simplified())
    }

    /// Image of a set of states under the point map, together with the
    /// support of the stochastic rows it touches.
    pub fn image_of(&self, set: &SetExpr) -> Result<SetExpr, KernelError> {
        let mut image = SetExpr::empty();
        for p in self.map.pieces() {
            for s in set.intersect(&SetExpr::span(p.span.clone())).spans() {
                let part = p.poly.image_of(s).map_err(|e| match e {
                    PolyError::IrrationalRoot(_) => {
                        KernelError::IrrationalCriticalPoint(s.to_string())
                    }
                    other => KernelError::Poly(other),
                })?;
                image = image.union(&part);
            }
        }
        if let Some(chain) = &self.chain {
            for (i, s) in chain.states().iter().enumerate() {
                if set.contains(s) {
                    image = image.union(&SetExpr::points(
                        chain.successors(i).map(|j| chain.states()[j].clone()),
                    ));
                }
            }
        }
        Ok(image)
    }

    /// Canonical seeds for cycle search: an atom per state and per closed
    /// piece endpoint, germs at finite piece endpoints from inside the
    /// space, and infinity tags for unbounded pieces.
    pub fn canonical_seeds(&self) -> Vec<Measure> {
        let mut gens = Vec::new();
        if let Some(chain) = &self.chain {
            gens.extend(chain.states().iter().cloned().map(Generator::Atom));
        }
        for p in self.map.pieces() {
            match p.span.lo() {
                crate::set_expr::Bound::Finite(a) => {
                    if p.span.lo_closed() {
                        gens.push(Generator::Atom(a.clone()));
                    }
                    if self.space.contains_right_of(a) {
                        gens.push(Generator::RightLimit(a.clone()));
                    }
                }
                _ => gens.push(Generator::MinusInfinity),
            }
            match p.span.hi() {
                crate::set_expr::Bound::Finite(b) => {
                    if p.span.hi_closed() {
                        gens.push(Generator::Atom(b.clone()));
                    }
                    if self.space.contains_left_of(b) {
                        gens.push(Generator::LeftLimit(b.clone()));
                    }
                }
                _ => gens.push(Generator::PlusInfinity),
            }
        }
        gens.sort();
        gens.dedup();
        gens.into_iter().map(Measure::unit).collect()
    }
}

/// Germ pushed through `poly` at `x`; `right` selects the side.
fn germ_image(poly: &Polynomial, x: &Rational, right: bool) -> Generator {
    let taylor = poly.taylor_at(x);
    let value = taylor.constant_term();
    let first = taylor
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, c)| !c.is_zero());
    match first {
        None => Generator::Atom(value),
        Some((k, c)) => {
            let mut upward = c.is_positive();
            if !right && k % 2 == 1 {
                upward = !upward;
            }
            if upward {
                Generator::RightLimit(value)
            } else {
                Generator::LeftLimit(value)
            }
        }
    }
}

/// `f o g` restricted to one kernel piece, split at preimages of `f`'s
/// breakpoints.
fn compose_on_piece(f: &PiecewisePoly, piece: &Piece) -> Result<Vec<Piece>, KernelError> {
    let g = &piece.poly;
    let undefined =
        |y: &Rational| KernelError::Function(PiecewiseError::Undefined(rational::to_text(y)));
    if g.is_constant() {
        let c = g.constant_term();
        let v = f.eval(&c).ok_or_else(|| undefined(&c))?;
        return Ok(vec![Piece::new(
            piece.span.clone(),
            Polynomial::constant(v),
        )]);
    }
    let mut breakpoints: Vec<Rational> = f
        .pieces()
        .iter()
        .flat_map(|p| [p.span.lo().finite().cloned(), p.span.hi().finite().cloned()])
        .flatten()
        .collect();
    breakpoints.sort();
    breakpoints.dedup();
    let mut splits = Vec::new();
    for b in &breakpoints {
        let shifted = g.sub(&Polynomial::constant(b.clone()));
        let roots = shifted.roots_in(&piece.span).map_err(|e| match e {
            PolyError::IrrationalRoot(_) => {
                KernelError::IrrationalBreakpointPreimage(piece.span.to_string())
            }
            other => KernelError::Poly(other),
        })?;
        splits.extend(roots);
    }
    splits.sort();
    splits.dedup();
    let whole = SetExpr::span(piece.span.clone());
    let rest = whole.difference(&SetExpr::points(splits.iter().cloned()));
    let mut out = Vec::new();
    for s in rest
        .spans()
        .iter()
        .cloned()
        .chain(splits.into_iter().map(Span::point))
    {
        let y = g.eval(&s.sample());
        let target = f.piece_at(&y).ok_or_else(|| undefined(&y))?;
        out.push(Piece::new(s, target.poly.compose(g)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn set(s: &str) -> SetExpr {
        s.parse().unwrap()
    }

    fn poly(cs: &[i64]) -> Polynomial {
        Polynomial::new(cs.iter().map(|&c| int(c)).collect())
    }

    fn three_state_swap() -> Kernel {
        let z = int(0);
        let o = int(1);
        Kernel::stochastic(
            FiniteChain::new(
                vec![int(1), int(2), int(3)],
                vec![
                    vec![o.clone(), z.clone(), z.clone()],
                    vec![z.clone(), z.clone(), o.clone()],
                    vec![z.clone(), o.clone(), z.clone()],
                ],
            )
            .unwrap(),
        )
        .unwrap()
    }

    fn two_interval_germs() -> Kernel {
        let map = PiecewisePoly::new(vec![
            Piece::new(Span::open(int(0), int(1)).unwrap(), poly(&[1, 0, 1])),
            Piece::new(Span::open(int(1), int(2)).unwrap(), poly(&[1, -2, 1])),
        ])
        .unwrap();
        Kernel::deterministic(set("(0,1) U (1,2)"), map).unwrap()
    }

    #[test]
    fn stochastic_pushforward() {
        let k = three_state_swap();
        assert_eq!(
            k.apply(&Measure::atom(int(2))).unwrap(),
            Measure::atom(int(3))
        );
        assert_eq!(
            k.apply(&Measure::atom(int(1))).unwrap(),
            Measure::atom(int(1))
        );
        assert!(matches!(
            k.apply(&Measure::right_limit(int(1))),
            Err(KernelError::NonAtomicInput(_))
        ));
        assert!(matches!(
            k.apply(&Measure::atom(int(7))),
            Err(KernelError::AtomOutsideSpace(_))
        ));
    }

    #[test]
    fn germ_rule() {
        let k = two_interval_germs();
        assert_eq!(
            k.apply(&Measure::right_limit(int(0))).unwrap(),
            Measure::right_limit(int(1))
        );
        // (x - 1)^2 at 1+: second-order contact, opens upward
        assert_eq!(
            k.apply(&Measure::right_limit(int(1))).unwrap(),
            Measure::right_limit(int(0))
        );
        assert_eq!(
            k.apply(&Measure::left_limit(int(1))).unwrap(),
            Measure::left_limit(int(2))
        );
        assert_eq!(
            k.apply(&Measure::left_limit(int(2))).unwrap(),
            Measure::left_limit(int(1))
        );
        assert!(matches!(
            k.apply(&Measure::left_limit(int(0))),
            Err(KernelError::GermOutsideSpace(_))
        ));
        assert!(matches!(
            k.apply(&Measure::atom(int(1))),
            Err(KernelError::AtomOutsideSpace(_))
        ));

        // 1 - x^3 at 0-: k = 3, coefficient negative, flipped by (-1)^3 -> upward
        assert_eq!(
            germ_image(&poly(&[1, 0, 0, -1]), &int(0), false),
            Generator::RightLimit(int(1))
        );
        assert_eq!(
            germ_image(&poly(&[1, 0, 0, -1]), &int(0), true),
            Generator::LeftLimit(int(1))
        );
        assert_eq!(
            germ_image(&poly(&[3]), &int(0), true),
            Generator::Atom(int(3))
        );
    }

    #[test]
    fn identity_fixes_everything() {
        let k = Kernel::identity(SetExpr::real_line());
        let mu = Measure::from_terms([
            (Generator::Atom(int(0)), rat(1, 3)),
            (Generator::LeftLimit(int(2)), rat(1, 3)),
            (Generator::PlusInfinity, rat(1, 6)),
            (Generator::MinusInfinity, rat(1, 6)),
        ]);
        assert_eq!(k.apply(&mu).unwrap(), mu);
    }

    #[test]
    fn infinity_pushforward() {
        let space = SetExpr::real_line();
        let k = Kernel::deterministic(
            space.clone(),
            PiecewisePoly::uniform(&space, poly(&[0, 0, 0, -1])),
        )
        .unwrap();
        let plus = Measure::unit(Generator::PlusInfinity);
        assert_eq!(
            k.apply(&plus).unwrap(),
            Measure::unit(Generator::MinusInfinity)
        );
        assert_eq!(
            k.apply(&Measure::unit(Generator::MinusInfinity)).unwrap(),
            plus
        );
        let c = Kernel::deterministic(space.clone(), PiecewisePoly::uniform(&space, poly(&[4])))
            .unwrap();
        assert_eq!(c.apply(&plus).unwrap(), Measure::atom(int(4)));
    }

    #[test]
    fn validation_errors() {
        let z = int(0);
        let bad_row = FiniteChain::new(vec![int(0)], vec![vec![rat(9, 10)]]);
        assert!(matches!(
            bad_row,
            Err(KernelError::RowNotStochastic { row: 0, .. })
        ));
        let neg = FiniteChain::new(
            vec![int(0), int(1)],
            vec![vec![int(2), int(-1)], vec![z.clone(), int(1)]],
        );
        assert!(matches!(neg, Err(KernelError::EntryOutOfRange { .. })));
        let escape = Kernel::deterministic(
            set("(0,1)"),
            PiecewisePoly::uniform(&set("(0,1)"), poly(&[1, 1])),
        );
        assert!(matches!(escape, Err(KernelError::ImageOutsideSpace { .. })));
        let gap = Kernel::deterministic(
            set("(0,2)"),
            PiecewisePoly::uniform(&set("(0,1)"), poly(&[0, 1])),
        );
        assert!(matches!(gap, Err(KernelError::NotPartition { .. })));
        let irr = Kernel::deterministic(
            set("[-1,1]"),
            PiecewisePoly::uniform(
                &set("[-1,1]"),
                Polynomial::new(vec![z.clone(), rat(-1, 2), z, rat(1, 2)]),
            ),
        );
        assert!(matches!(irr, Err(KernelError::IrrationalCriticalPoint(_))));
    }

    #[test]
    fn operator_t() {
        let k = three_state_swap();
        let f = PiecewisePoly::new(vec![
            Piece::new(Span::point(int(1)), Polynomial::constant(int(10))),
            Piece::new(Span::point(int(2)), Polynomial::constant(int(20))),
            Piece::new(Span::point(int(3)), Polynomial::constant(int(30))),
        ])
        .unwrap();
        let tf = k.apply_t(&f).unwrap();
        assert_eq!(tf.eval(&int(1)), Some(int(10)));
        assert_eq!(tf.eval(&int(2)), Some(int(30)));
        assert_eq!(tf.eval(&int(3)), Some(int(20)));

        let k = two_interval_germs();
        let one = PiecewisePoly::constant(k.space(), int(1));
        assert_eq!(k.apply_t(&one).unwrap(), one);

        let f = PiecewisePoly::new(vec![
            Piece::new(Span::open(int(0), int(1)).unwrap(), Polynomial::zero()),
            Piece::new(Span::open(int(1), int(2)).unwrap(), Polynomial::identity()),
        ])
        .unwrap();
        let tf = k.apply_t(&f).unwrap();
        for x in [rat(1, 4), rat(1, 2), rat(3, 4)] {
            assert_eq!(tf.eval(&x).unwrap(), int(1) + &x * &x);
        }
        assert_eq!(tf.eval(&rat(3, 2)).unwrap(), int(0));
    }

    #[test]
    fn composition_splits_at_breakpoint_preimages() {
        // g(x) = 2x on R, f = 0 below 1, 1 at and above 1
        let space = SetExpr::real_line();
        let k = Kernel::deterministic(space.clone(), PiecewisePoly::uniform(&space, poly(&[0, 2])))
            .unwrap();
        let f = PiecewisePoly::new(vec![
            Piece::new(
                Span::new(
                    crate::set_expr::Bound::NegInf,
                    false,
                    crate::set_expr::Bound::Finite(int(1)),
                    false,
                )
                .unwrap(),
                Polynomial::zero(),
            ),
            Piece::new(
                Span::new(
                    crate::set_expr::Bound::Finite(int(1)),
                    true,
                    crate::set_expr::Bound::PosInf,
                    false,
                )
                .unwrap(),
                Polynomial::constant(int(1)),
            ),
        ])
        .unwrap();
        let tf = k.apply_t(&f).unwrap();
        assert_eq!(tf.pieces().len(), 2);
        assert_eq!(tf.eval(&rat(1, 2)), Some(int(1)));
        assert_eq!(tf.eval(&rat(49, 100)), Some(int(0)));

        // x^2 = 2 has no rational solution
        let sq = Kernel::deterministic(
            space.clone(),
            PiecewisePoly::uniform(&space, poly(&[0, 0, 1])),
        )
        .unwrap();
        let step = PiecewisePoly::new(vec![
            Piece::new(
                Span::new(
                    crate::set_expr::Bound::NegInf,
                    false,
                    crate::set_expr::Bound::Finite(int(2)),
                    false,
                )
                .unwrap(),
                Polynomial::zero(),
            ),
            Piece::new(
                Span::new(
                    crate::set_expr::Bound::Finite(int(2)),
                    true,
                    crate::set_expr::Bound::PosInf,
                    false,
                )
                .unwrap(),
                Polynomial::constant(int(1)),
            ),
        ])
        .unwrap();
        assert!(matches!(
            sq.apply_t(&step),
            Err(KernelError::IrrationalBreakpointPreimage(_))
        ));
    }

    #[test]
    fn mixed_kernel() {
        // states {5, 6} swap; interval (0,1) maps by x^2
        let chain = FiniteChain::new(
            vec![int(5), int(6)],
            vec![vec![int(0), int(1)], vec![int(1), int(0)]],
        )
        .unwrap();
        let map = PiecewisePoly::uniform(&set("(0,1)"), poly(&[0, 0, 1]));
        let k = Kernel::new(set("(0,1) U {5,6}"), map, Some(chain)).unwrap();
        let mu = Measure::atom(int(5)).add(&Measure::left_limit(int(1)));
        assert_eq!(
            k.apply(&mu).unwrap(),
            Measure::atom(int(6)).add(&Measure::left_limit(int(1)))
        );
        assert_eq!(k.canonical_seeds().len(), 4);
        assert_eq!(
            k.image_of(&set("(0,1/2) U {5}")).unwrap(),
            set("(0,1/4) U {6}")
        );
    }

    #[test]
    fn point_dynamics() {
        let k = two_interval_germs();
        assert_eq!(k.step_point(&rat(1, 2)).unwrap(), rat(5, 4));
        assert_eq!(k.step_point(&rat(5, 4)).unwrap(), rat(1, 16));
        assert!(matches!(
            k.step_point(&int(1)),
            Err(KernelError::PointEscapesSpace(_))
        ));
    }
}
