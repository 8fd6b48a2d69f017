//! Univariate polynomials over the rationals.
//!
//! Besides the ring operations this provides the exact root handling the
//! piecewise machinery needs: rational roots via the rational root theorem,
//! Sturm counts to certify that no irrational root hides in an interval, and
//! exact images of intervals by monotone subdivision.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::{self, Rational};
use crate::set_expr::{Bound, SetExpr, Span};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("polynomial has an irrational root inside {0}")]
    IrrationalRoot(String),
    #[error("coefficients too large for rational root search")]
    CoefficientsTooLarge,
}

impl PolyError {
    /// Stable name of the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            PolyError::IrrationalRoot(_) => "IrrationalRoot",
            PolyError::CoefficientsTooLarge => "CoefficientsTooLarge",
        }
    }
}

/// Coefficients stored low-to-high with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Polynomial {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Polynomial {
        Polynomial::default()
    }

    pub fn constant(c: Rational) -> Polynomial {
        Polynomial::new(vec![c])
    }

    /// The identity map `x`.
    pub fn identity() -> Polynomial {
        Polynomial::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeffs.first().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        Polynomial::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, factor: &Rational) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Polynomial) -> Polynomial {
        self.coeffs.iter().rev().fold(Polynomial::zero(), |acc, c| {
            acc.mul(inner).add(&Polynomial::constant(c.clone()))
        })
    }

    /// Coefficients of `t -> self(x + t)`; entry `k` is `f^(k)(x) / k!`.
    pub fn taylor_at(&self, x: &Rational) -> Polynomial {
        self.compose(&Polynomial::new(vec![x.clone(), Rational::one()]))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (Polynomial::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + d] / &lead;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(d);
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// Limit as `x -> +inf` (or `-inf` when `plus` is false).
    pub fn limit_at_infinity(&self, plus: bool) -> Bound {
        match self.degree() {
            None => Bound::Finite(Rational::zero()),
            Some(0) => Bound::Finite(self.coeffs[0].clone()),
            Some(d) => {
                let mut positive = self.leading().is_positive();
                if !plus && d % 2 == 1 {
                    positive = !positive;
                }
                if positive {
                    Bound::PosInf
                } else {
                    Bound::NegInf
                }
            }
        }
    }

    fn value_at(&self, b: &Bound) -> Bound {
        match b {
            Bound::Finite(x) => Bound::Finite(self.eval(x)),
            Bound::PosInf => self.limit_at_infinity(true),
            Bound::NegInf => self.limit_at_infinity(false),
        }
    }

    /// Sign of `self` at a bound: -1, 0 or 1. At infinities this is the
    /// eventual sign.
    fn sign_at(&self, b: &Bound) -> i8 {
        let Some(d) = self.degree() else { return 0 };
        let sign_of = |q: &Rational| -> i8 {
            if q.is_positive() {
                1
            } else if q.is_negative() {
                -1
            } else {
                0
            }
        };
        match b {
            Bound::Finite(x) => sign_of(&self.eval(x)),
            Bound::PosInf => sign_of(&self.leading()),
            Bound::NegInf => {
                let s = sign_of(&self.leading());
                if d % 2 == 1 {
                    -s
                } else {
                    s
                }
            }
        }
    }

    fn sturm_sequence(&self) -> Vec<Polynomial> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            seq.push(r.scale(&-Rational::one()));
        }
        seq.pop();
        seq
    }

    /// Number of distinct real roots strictly between `lo` and `hi`, which
    /// must not themselves be roots.
    pub fn count_roots_between(&self, lo: &Bound, hi: &Bound) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let seq = self.sturm_sequence();
        let variations = |b: &Bound| -> usize {
            let signs: Vec<i8> = seq
                .iter()
                .map(|p| p.sign_at(b))
                .filter(|s| *s != 0)
                .collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        variations(lo).saturating_sub(variations(hi))
    }

    /// Distinct rational roots, ascending.
    pub fn rational_roots(&self) -> Result<Vec<Rational>, PolyError> {
        if self.degree().unwrap_or(0) == 0 {
            return Ok(Vec::new());
        }
        // integer primitive form
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut roots = Vec::new();
        let trailing = ints.iter().take_while(|c| c.is_zero()).count();
        if trailing > 0 {
            roots.push(Rational::zero());
            ints.drain(..trailing);
        }
        if ints.len() > 1 {
            let a0 = ints[0].abs();
            let an = ints.last().unwrap().abs();
            let num_divs = divisors(&a0)?;
            let den_divs = divisors(&an)?;
            let reduced = Polynomial::new(
                ints.iter()
                    .map(|c| Rational::from_integer(c.clone()))
                    .collect(),
            );
            for p in &num_divs {
                for q in &den_divs {
                    if !p.gcd(q).is_one() {
                        continue;
                    }
                    for sign in [1, -1] {
                        let cand = Rational::new(p * BigInt::from(sign), q.clone());
                        if reduced.eval(&cand).is_zero() {
                            roots.push(cand);
                        }
                    }
                }
            }
        }
        roots.sort();
        roots.dedup();
        Ok(roots)
    }

    /// Removes every rational root (with multiplicity).
    fn without_rational_roots(&self, roots: &[Rational]) -> Polynomial {
        let mut q = self.clone();
        for r in roots {
            let lin = Polynomial::new(vec![-r.clone(), Rational::one()]);
            loop {
                let (quot, rem) = q.div_rem(&lin);
                if !rem.is_zero() || quot.is_zero() {
                    break;
                }
                q = quot;
            }
        }
        q
    }

    /// All roots inside `span`, provided they are all rational.
    ///
    /// Fails with [`PolyError::IrrationalRoot`] when the span contains an
    /// irrational root. Must not be called on the zero polynomial.
    pub fn roots_in(&self, span: &Span) -> Result<Vec<Rational>, PolyError> {
        debug_assert!(!self.is_zero());
        let roots = self.rational_roots()?;
        let cofactor = self.without_rational_roots(&roots);
        if cofactor.count_roots_between(span.lo(), span.hi()) > 0 {
            return Err(PolyError::IrrationalRoot(span.to_string()));
        }
        Ok(roots.into_iter().filter(|r| span.contains(r)).collect())
    }

    /// Exact image of `span`, by subdividing at critical points.
    pub fn image_of(&self, span: &Span) -> Result<SetExpr, PolyError> {
        if let Some(x) = span.as_point() {
            return Ok(SetExpr::points([self.eval(x)]));
        }
        if self.is_constant() {
            return Ok(SetExpr::points([self.constant_term()]));
        }
        let interior = Span::new(span.lo().clone(), false, span.hi().clone(), false)
            .expect("non-degenerate span");
        let critical = self.derivative().roots_in(&interior)?;
        let mut cuts: Vec<(Bound, bool)> = vec![(span.lo().clone(), span.lo_closed())];
        cuts.extend(critical.into_iter().map(|c| (Bound::Finite(c), true)));
        cuts.push((span.hi().clone(), span.hi_closed()));
        let mut pieces = Vec::new();
        for w in cuts.windows(2) {
            let (a, a_in) = (&w[0].0, w[0].1);
            let (b, b_in) = (&w[1].0, w[1].1);
            let (fa, fb) = (self.value_at(a), self.value_at(b));
            let piece = if fa <= fb {
                Span::new(fa, a_in, fb, b_in)
            } else {
                Span::new(fb, b_in, fa, a_in)
            };
            pieces.extend(piece);
        }
        Ok(SetExpr::from_spans(pieces))
    }
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>, PolyError> {
    let n = n
        .to_u64()
        .filter(|v| *v <= 1_000_000_000_000)
        .ok_or(PolyError::CoefficientsTooLarge)?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let abs = c.abs();
            let coef = rational::to_text(&abs);
            match k {
                0 => f.write_str(&coef)?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{coef}*")?;
                    }
                    if k == 1 {
                        f.write_str("x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
