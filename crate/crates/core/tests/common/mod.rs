//! Random instance generators and independent oracles shared by the
//! integration tests.
#![allow(dead_code)]

use fa_cycles::kernel::{FiniteChain, Kernel, KernelError};
use fa_cycles::measure::{Generator, Measure};
use fa_cycles::piecewise::{Piece, PiecewisePoly};
use fa_cycles::poly::Polynomial;
use fa_cycles::rational::{int, rat, Rational};
use fa_cycles::set_expr::{Bound, SetExpr, Span};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small rational with denominator at most `den`.
pub fn small_rational(r: &mut impl Rng, range: i64, den: i64) -> Rational {
    let d = r.random_range(1..=den);
    rat(r.random_range(-range * d..=range * d), d)
}

/// Positive weights summing to one.
pub fn random_distribution(r: &mut impl Rng, len: usize) -> Vec<Rational> {
    let weights: Vec<i64> = (0..len).map(|_| r.random_range(1..=4)).collect();
    let total: i64 = weights.iter().sum();
    weights.into_iter().map(|w| rat(w, total)).collect()
}

/// Row-stochastic matrix on `n` states with sparse random rows.
pub fn random_stochastic_matrix(r: &mut impl Rng, n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|_| {
            let support_len = r.random_range(1..=n.min(3));
            let mut support: Vec<usize> = (0..n).collect();
            for i in 0..support_len {
                let j = r.random_range(i..n);
                support.swap(i, j);
            }
            support.truncate(support_len);
            let mut row = vec![Rational::zero(); n];
            for (j, p) in support.into_iter().zip(random_distribution(r, support_len)) {
                row[j] = p;
            }
            row
        })
        .collect()
}

/// States `0..n` on the integers.
pub fn integer_states(n: usize) -> Vec<Rational> {
    (0..n as i64).map(int).collect()
}

pub fn random_chain(r: &mut impl Rng, max_states: usize) -> FiniteChain {
    let n = r.random_range(1..=max_states);
    FiniteChain::new(integer_states(n), random_stochastic_matrix(r, n))
        .expect("generated rows are stochastic")
}

/// A chain built around a singular cycle of state sets `D_1..D_m`, plus a few
/// transient states. Rows on `D_i` put positive mass on every state of
/// `D_{i+1}`.
pub struct ChainWithStateCycle {
    pub kernel: Kernel,
    pub sets: Vec<Vec<Rational>>,
}

pub fn random_chain_with_state_cycle(r: &mut impl Rng) -> ChainWithStateCycle {
    let m = r.random_range(1..=4);
    let sizes: Vec<usize> = (0..m).map(|_| r.random_range(1..=2)).collect();
    let transient = r.random_range(0..=2);
    let n: usize = sizes.iter().sum::<usize>() + transient;
    let mut order: Vec<usize> = (0..n).collect();
    for i in 0..n {
        let j = r.random_range(i..n);
        order.swap(i, j);
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    for &s in &sizes {
        groups.push(order[next..next + s].to_vec());
        next += s;
    }
    let mut matrix = vec![vec![Rational::zero(); n]; n];
    for (i, group) in groups.iter().enumerate() {
        let target = &groups[(i + 1) % m];
        for &x in group {
            for (&y, p) in target.iter().zip(random_distribution(r, target.len())) {
                matrix[x][y] = p;
            }
        }
    }
    for &x in &order[next..] {
        for (y, p) in random_distribution(r, n).into_iter().enumerate() {
            matrix[x][y] = p;
        }
    }
    let states = integer_states(n);
    let sets = groups
        .iter()
        .map(|g| g.iter().map(|&i| states[i].clone()).collect())
        .collect();
    let chain = FiniteChain::new(states, matrix).expect("generated rows are stochastic");
    ChainWithStateCycle {
        kernel: Kernel::stochastic(chain).expect("valid chain"),
        sets,
    }
}

/// Deterministic kernel with a period-`m` orbit `p_0 -> ... -> p_{m-1} -> p_0`
/// whose one-sided germs also return after exactly `m` steps.
pub struct MixedCycleKernel {
    pub kernel: Kernel,
    pub points: Vec<Rational>,
}

pub fn random_mixed_cycle_kernel(r: &mut impl Rng) -> MixedCycleKernel {
    loop {
        let m = r.random_range(1..=4);
        let points: Vec<Rational> = (0..m as i64)
            .map(|i| int(3 * i) + rat(r.random_range(0..=4), 4))
            .collect();
        let mut pieces = Vec::new();
        let mut spans = Vec::new();
        for i in 0..m {
            let p = &points[i];
            let q = &points[(i + 1) % m];
            // f(x) = q + a (x - p) + b (x - p)^2 with |a| + |b| < 1 keeps
            // (p - 1, p + 1) inside (q - 1, q + 1)
            let a = rat(r.random_range(-3..=3), 8);
            let b = if r.random_bool(0.5) {
                rat(r.random_range(-3..=3), 8)
            } else {
                Rational::zero()
            };
            let (a, b) = if a.is_zero() && b.is_zero() {
                (rat(1, 2), b)
            } else {
                (a, b)
            };
            let shift = Polynomial::new(vec![-p.clone(), Rational::one()]);
            let local = Polynomial::new(vec![q.clone(), a, b]);
            let span = Span::open(p - int(1), p + int(1)).unwrap();
            pieces.push(Piece::new(span.clone(), local.compose(&shift)));
            spans.push(span);
        }
        let space = SetExpr::from_spans(spans);
        let Ok(map) = PiecewisePoly::new(pieces) else {
            continue;
        };
        let Ok(kernel) = Kernel::deterministic(space, map) else {
            continue;
        };
        let germ = Measure::right_limit(points[0].clone());
        if kernel.apply_n(&germ, m).ok() == Some(germ) {
            return MixedCycleKernel { kernel, points };
        }
    }
}

/// Random bounded piecewise quadratic on `(-inf, c_1), [c_1, c_2), ...,
/// [c_k, +inf)` with constant tails.
pub fn random_function_on_line(r: &mut impl Rng) -> PiecewisePoly {
    let k = r.random_range(1..=3);
    let mut cuts: Vec<Rational> = (0..k).map(|_| small_rational(r, 3, 2)).collect();
    cuts.sort();
    cuts.dedup();
    let mut bounds: Vec<Bound> = cuts.into_iter().map(Bound::Finite).collect();
    bounds.push(Bound::PosInf);
    let mut lo = Bound::NegInf;
    let mut pieces = Vec::new();
    for hi in bounds {
        let bounded = matches!((&lo, &hi), (Bound::Finite(_), Bound::Finite(_)));
        let poly = if bounded {
            Polynomial::new(
                (0..r.random_range(1..=3))
                    .map(|_| small_rational(r, 2, 3))
                    .collect(),
            )
        } else {
            Polynomial::constant(small_rational(r, 2, 3))
        };
        pieces.push(Piece::new(
            Span::new(lo.clone(), true, hi.clone(), false).unwrap(),
            poly,
        ));
        lo = hi;
    }
    PiecewisePoly::new(pieces).unwrap()
}

/// Deterministic kernel on the real line with linear or quadratic pieces.
pub fn random_line_kernel(r: &mut impl Rng) -> Kernel {
    let k = r.random_range(0..=2);
    let mut cuts: Vec<Rational> = (0..k).map(|_| small_rational(r, 2, 2)).collect();
    cuts.sort();
    cuts.dedup();
    let mut bounds: Vec<Bound> = cuts.into_iter().map(Bound::Finite).collect();
    bounds.push(Bound::PosInf);
    let mut lo = Bound::NegInf;
    let mut pieces = Vec::new();
    for hi in bounds {
        let degree = r.random_range(0..=2);
        let mut coeffs: Vec<Rational> = (0..=degree).map(|_| small_rational(r, 2, 2)).collect();
        if degree > 0 && coeffs[degree].is_zero() {
            coeffs[degree] = int(1);
        }
        let span = Span::new(lo.clone(), true, hi.clone(), false).unwrap();
        pieces.push(Piece::new(span, Polynomial::new(coeffs)));
        lo = hi;
    }
    Kernel::deterministic(SetExpr::real_line(), PiecewisePoly::new(pieces).unwrap()).unwrap()
}

/// `(0,1)` mapped into itself plus a finite chain on `{2, 3, ...}`.
pub fn random_mixed_kernel(r: &mut impl Rng) -> Kernel {
    let maps = [
        Polynomial::new(vec![int(0), int(0), int(1)]),
        Polynomial::new(vec![int(1), int(-1)]),
        Polynomial::new(vec![rat(1, 2), rat(1, 2)]),
        Polynomial::new(vec![int(0), int(2), int(-2)]),
    ];
    let poly = maps[r.random_range(0..maps.len())].clone();
    let unit = SetExpr::span(Span::open(int(0), int(1)).unwrap());
    let map = PiecewisePoly::uniform(&unit, poly);
    let n = r.random_range(1..=3);
    let states: Vec<Rational> = (0..n as i64).map(|i| int(i + 2)).collect();
    let chain = FiniteChain::new(states, random_stochastic_matrix(r, n)).unwrap();
    let space = unit.union(&chain.state_set());
    Kernel::new(space, map, Some(chain)).unwrap()
}

/// Nonnegative measure built from generators charging `space`.
pub fn random_measure_in(r: &mut impl Rng, kernel: &Kernel) -> Measure {
    let mut candidates: Vec<Generator> = Vec::new();
    for s in kernel.space().spans() {
        if let Some(x) = s.as_point() {
            candidates.push(Generator::Atom(x.clone()));
            continue;
        }
        let sample = s.sample();
        candidates.push(Generator::Atom(sample.clone()));
        candidates.push(Generator::RightLimit(sample.clone()));
        candidates.push(Generator::LeftLimit(sample));
        match s.lo() {
            Bound::Finite(a) => candidates.push(Generator::RightLimit(a.clone())),
            _ => candidates.push(Generator::MinusInfinity),
        }
        match s.hi() {
            Bound::Finite(b) => candidates.push(Generator::LeftLimit(b.clone())),
            _ => candidates.push(Generator::PlusInfinity),
        }
        if kernel.space() == &SetExpr::real_line() {
            for _ in 0..3 {
                let x = small_rational(r, 3, 2);
                candidates.push(Generator::Atom(x.clone()));
                candidates.push(Generator::RightLimit(x.clone()));
                candidates.push(Generator::LeftLimit(x));
            }
        }
    }
    let count = r.random_range(1..=4);
    Measure::from_terms((0..count).map(|_| {
        (
            candidates[r.random_range(0..candidates.len())].clone(),
            rat(r.random_range(1..=5), 4),
        )
    }))
}

/// Atomic probability measure on at most `max_atoms` points of `pool`.
pub fn random_atomic_probability(r: &mut impl Rng, pool: &[Rational], max_atoms: usize) -> Measure {
    let count = r.random_range(1..=max_atoms.min(pool.len()));
    let mut idx: Vec<usize> = (0..pool.len()).collect();
    for i in 0..count {
        let j = r.random_range(i..pool.len());
        idx.swap(i, j);
    }
    let weights = random_distribution(r, count);
    Measure::from_terms(
        idx[..count]
            .iter()
            .zip(weights)
            .map(|(&i, w)| (Generator::Atom(pool[i].clone()), w)),
    )
}

/// Positive atomic measure (not normalized) on points drawn from `pool`.
pub fn random_atomic_measure(r: &mut impl Rng, pool: &[Rational], max_atoms: usize) -> Measure {
    let count = r.random_range(1..=max_atoms);
    Measure::from_terms((0..count).map(|_| {
        (
            Generator::Atom(pool[r.random_range(0..pool.len())].clone()),
            rat(r.random_range(1..=6), r.random_range(1..=3)),
        )
    }))
}

/// A function with values in `[0, 1]` on `[0, 4)`, given both as a library
/// object and as raw `(lo, hi, coeffs)` pieces for independent evaluation.
pub struct UnitFunction {
    pub function: PiecewisePoly,
    pub raw: Vec<(Rational, Rational, Vec<Rational>)>,
    /// Points where the function equals 1.
    pub ones: Vec<Rational>,
    /// Points where it does not.
    pub others: Vec<Rational>,
}

/// Pieces `[i, i+1)`, each one of: constant 1, a constant below 1, or
/// `1 - c (x - r)^2` touching 1 at a rational `r`.
pub fn random_unit_function(r: &mut impl Rng) -> UnitFunction {
    let mut raw = Vec::new();
    let mut ones = Vec::new();
    let mut others = Vec::new();
    for i in 0..4 {
        let lo = int(i);
        let hi = int(i + 1);
        let inner = |k: i64| &lo + rat(k, 4);
        let coeffs = match r.random_range(0..3) {
            0 => {
                ones.extend([inner(0), inner(2)]);
                vec![int(1)]
            }
            1 => {
                let c = rat(r.random_range(0..4), 4);
                others.extend([inner(0), inner(3)]);
                vec![c]
            }
            _ => {
                let root = inner(r.random_range(0..4));
                let c = rat(r.random_range(1..=4), 4);
                // 1 - c (x - root)^2 stays in [0, 1] while |x - root| <= 1
                let coeffs = vec![int(1) - &c * &root * &root, int(2) * &c * &root, -c];
                ones.push(root.clone());
                others.extend((0..4).map(inner).filter(|x| *x != root));
                coeffs
            }
        };
        raw.push((lo, hi, coeffs));
    }
    let pieces = raw
        .iter()
        .map(|(lo, hi, c)| {
            Piece::new(
                Span::new(
                    Bound::Finite(lo.clone()),
                    true,
                    Bound::Finite(hi.clone()),
                    false,
                )
                .unwrap(),
                Polynomial::new(c.clone()),
            )
        })
        .collect();
    UnitFunction {
        function: PiecewisePoly::new(pieces).unwrap(),
        raw,
        ones,
        others,
    }
}

/// Evaluation of raw pieces by Horner's rule.
pub fn eval_raw(raw: &[(Rational, Rational, Vec<Rational>)], x: &Rational) -> Option<Rational> {
    raw.iter()
        .find(|(lo, hi, _)| lo <= x && x < hi)
        .map(|(_, _, c)| c.iter().rev().fold(Rational::zero(), |acc, a| acc * x + a))
}

/// Determinant by Laplace expansion; inputs here are at most 8 x 8.
pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    match m.len() {
        0 => Rational::one(),
        1 => m[0][0].clone(),
        n => (0..n)
            .filter(|&j| !m[0][j].is_zero())
            .map(|j| {
                let minor: Vec<Vec<Rational>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * determinant(&minor);
                if j % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .fold(Rational::zero(), |a, b| a + b),
    }
}

/// Linear independence via the Gram determinant of coefficient vectors.
pub fn independent_by_gram(measures: &[Measure]) -> bool {
    let dot = |a: &Measure, b: &Measure| {
        a.terms()
            .fold(Rational::zero(), |acc, (g, c)| acc + c * b.coefficient(g))
    };
    let gram: Vec<Vec<Rational>> = measures
        .iter()
        .map(|a| measures.iter().map(|b| dot(a, b)).collect())
        .collect();
    !determinant(&gram).is_zero()
}

/// Mass of an atomic measure on a subset of its locations, computed from
/// the coefficient table.
pub fn atomic_mass(mu: &Measure, points: &[Rational]) -> Rational {
    points.iter().fold(Rational::zero(), |acc, x| {
        acc + mu.coefficient(&Generator::Atom(x.clone()))
    })
}

pub fn is_kernel_preimage_error(e: &KernelError) -> bool {
    matches!(
        e,
        KernelError::IrrationalBreakpointPreimage(_) | KernelError::IrrationalCriticalPoint(_)
    )
}

pub fn nonnegative(mu: &Measure) -> bool {
    mu.terms().all(|(_, c)| !c.is_negative())
}
