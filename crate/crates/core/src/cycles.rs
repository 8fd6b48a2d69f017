//! Cycles of measures: tuples of distinct positive measures that the
//! operator `A` permutes cyclically.

use std::collections::HashMap;
use std::fmt;
use std::hash::{DefaultHasher, Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::kernel::{FiniteChain, Kernel, KernelError};
use crate::linalg;
use crate::measure::{Generator, Measure, MeasureError};
use crate::rational::Rational;
use crate::state_cycles;

/// Extra iterations allowed for a seed's orbit to settle before it repeats.
pub const TRANSIENT_BUDGET: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycleError {
    #[error("a cycle needs at least one coordinate")]
    Empty,
    #[error("cycle coordinates must be nonnegative and nonzero")]
    NotPositive,
    #[error("the coordinates are not cyclically permuted by the operator")]
    NotACycle,
    #[error("cannot add cycles of periods {0} and {1}")]
    PeriodMismatch(usize, usize),
    #[error("cycles can only be scaled by a positive factor")]
    NonPositiveScale,
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error("cycle coordinates are not pairwise disjoint; the coordinatewise split is unverified")]
    NotDisjointCycle { ca: Vec<Measure>, pfa: Vec<Measure> },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleKind {
    CountablyAdditive,
    PurelyFinitelyAdditive,
    Mixed,
}

impl fmt::Display for CycleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CycleKind::CountablyAdditive => "countably additive",
            CycleKind::PurelyFinitelyAdditive => "purely finitely additive",
            CycleKind::Mixed => "mixed",
        })
    }
}

/// Ordered coordinates `(mu_1, ..., mu_m)` with `A mu_i = mu_{i+1}` and
/// `A mu_m = mu_1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    coords: Vec<Measure>,
}

/// True iff the coordinates are pairwise distinct, positive, and cyclically
/// permuted by `A`.
pub fn verify_cycle(kernel: &Kernel, coords: &[Measure]) -> Result<bool, CycleError> {
    if coords.is_empty() {
        return Err(CycleError::Empty);
    }
    if coords.iter().any(|m| m.is_zero() || !m.is_nonnegative()) {
        return Err(CycleError::NotPositive);
    }
    for (i, a) in coords.iter().enumerate() {
        if coords[i + 1..].contains(a) {
            return Ok(false);
        }
    }
    let m = coords.len();
    for i in 0..m {
        if kernel.apply(&coords[i])? != coords[(i + 1) % m] {
            return Ok(false);
        }
    }
    Ok(true)
}

impl Cycle {
    /// Verified construction.
    pub fn new(kernel: &Kernel, coords: Vec<Measure>) -> Result<Cycle, CycleError> {
        if verify_cycle(kernel, &coords)? {
            Ok(Cycle { coords })
        } else {
            Err(CycleError::NotACycle)
        }
    }

    /// Raw tuple, not checked against any kernel.
    pub fn from_coords_unchecked(coords: Vec<Measure>) -> Cycle {
        Cycle { coords }
    }

    pub fn coords(&self) -> &[Measure] {
        &self.coords
    }

    pub fn period(&self) -> usize {
        self.coords.len()
    }

    /// Common norm of the coordinates.
    pub fn norm(&self) -> Rational {
        self.coords
            .first()
            .map(Measure::norm)
            .unwrap_or_else(Rational::zero)
    }

    pub fn mean_measure(&self) -> Measure {
        let sum = self
            .coords
            .iter()
            .fold(Measure::zero(), |acc, m| acc.add(m));
        sum.scale(&Rational::new(1.into(), self.period().into()))
    }

    pub fn scale(&self, factor: &Rational) -> Result<Cycle, CycleError> {
        if !factor.is_positive() {
            return Err(CycleError::NonPositiveScale);
        }
        Ok(Cycle {
            coords: self.coords.iter().map(|m| m.scale(factor)).collect(),
        })
    }

    pub fn is_probability(&self) -> bool {
        self.coords.iter().all(|m| m.norm().is_one())
    }

    /// Probability cycle.
    pub fn normalize(&self) -> Result<Cycle, CycleError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(CycleError::NotPositive);
        }
        self.scale(&n.recip())
    }

    pub fn rotated(&self, shift: usize) -> Cycle {
        let mut coords = self.coords.clone();
        if !coords.is_empty() {
            let len = coords.len();
            coords.rotate_left(shift % len);
        }
        Cycle { coords }
    }

    /// The rotation with the least coordinate list in canonical measure order.
    pub fn canonical_rotation(&self) -> Cycle {
        (0..self.period().max(1))
            .map(|r| self.rotated(r))
            .min()
            .unwrap_or_else(|| self.clone())
    }

    /// Identity of cycles up to renumbering (rotation, never reflection).
    pub fn same_as(&self, other: &Cycle) -> bool {
        self.period() == other.period() && (0..self.period()).any(|r| self.rotated(r) == *other)
    }

    pub fn is_pairwise_disjoint(&self) -> Result<bool, CycleError> {
        for (i, a) in self.coords.iter().enumerate() {
            for b in &self.coords[i + 1..] {
                if !a.is_disjoint(b)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Classification by the Yosida-Hewitt parts of the coordinates. All
    /// coordinates must agree; disagreement is reported as an invariant
    /// violation.
    pub fn classify(&self) -> Result<CycleKind, CycleError> {
        let kinds: Vec<CycleKind> = self.coords.iter().map(measure_kind).collect();
        let first = *kinds.first().ok_or(CycleError::Empty)?;
        if kinds.iter().any(|k| *k != first) {
            return Err(CycleError::InvariantViolation(format!(
                "cycle coordinates disagree in kind: {}",
                kinds
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            )));
        }
        Ok(first)
    }

    /// Rank of the coordinates as vectors over their generators.
    pub fn rank(&self) -> usize {
        rank_of(&self.coords)
    }

    pub fn is_linearly_independent(&self) -> bool {
        self.rank() == self.period()
    }
}

fn measure_kind(m: &Measure) -> CycleKind {
    let (ca, pfa) = m.yosida_hewitt_split();
    match (ca.is_zero(), pfa.is_zero()) {
        (false, true) => CycleKind::CountablyAdditive,
        (true, false) => CycleKind::PurelyFinitelyAdditive,
        _ => CycleKind::Mixed,
    }
}

/// Exact rank of a list of measures.
pub fn rank_of(measures: &[Measure]) -> usize {
    let mut basis: Vec<&Generator> = measures.iter().flat_map(Measure::generators).collect();
    basis.sort();
    basis.dedup();
    let rows: Vec<Vec<Rational>> = measures
        .iter()
        .map(|m| basis.iter().map(|g| m.coefficient(g)).collect())
        .collect();
    linalg::rank(&rows)
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, m) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str(")")
    }
}

/// Coordinatewise sum, verified as a cycle of `kernel`.
pub fn cycle_sum(kernel: &Kernel, a: &Cycle, b: &Cycle) -> Result<Cycle, CycleError> {
    if a.period() != b.period() {
        return Err(CycleError::PeriodMismatch(a.period(), b.period()));
    }
    let coords = a
        .coords
        .iter()
        .zip(&b.coords)
        .map(|(x, y)| x.add(y))
        .collect();
    Cycle::new(kernel, coords)
}

/// Iterates `A` from `seed` until a measure repeats, then returns the cycle
/// the orbit entered. `None` if nothing repeats within `max_steps`
/// applications.
pub fn find_cycle_from(
    kernel: &Kernel,
    seed: &Measure,
    max_steps: usize,
) -> Result<Option<Cycle>, CycleError> {
    if seed.is_zero() || !seed.is_nonnegative() {
        return Err(CycleError::NotPositive);
    }
    if let Some(chain) = kernel.as_finite_chain() {
        if let Some(found) = chain_orbit_cycle(chain, seed, max_steps) {
            return Ok(found);
        }
    }
    let mut orbit = vec![seed.clone()];
    let mut seen: HashMap<u64, Vec<usize>> = HashMap::from([(fingerprint(seed), vec![0])]);
    for step in 1..=max_steps {
        let next = kernel.apply(orbit.last().unwrap())?;
        let key = fingerprint(&next);
        if let Some(start) = seen
            .get(&key)
            .and_then(|ix| ix.iter().copied().find(|&i| orbit[i] == next))
        {
            return Ok(Some(Cycle {
                coords: orbit.split_off(start),
            }));
        }
        seen.entry(key).or_default().push(step);
        orbit.push(next);
    }
    Ok(None)
}

/// Orbit search for an atomic seed of a pure finite chain. Distributions are
/// kept as integer vectors over a common denominator in lowest terms, so a
/// step costs integer products only. `None` when the seed has mass off the
/// states.
fn chain_orbit_cycle(
    chain: &FiniteChain,
    seed: &Measure,
    max_steps: usize,
) -> Option<Option<Cycle>> {
    let n = chain.len();
    let mut start = vec![Rational::zero(); n];
    for (g, c) in seed.terms() {
        match g {
            Generator::Atom(x) => start[chain.index_of(x)?] = c.clone(),
            _ => return None,
        }
    }
    let common = chain
        .matrix()
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let scaled: Vec<Vec<BigInt>> = chain
        .matrix()
        .iter()
        .map(|row| {
            row.iter()
                .map(|q| q.numer() * (&common / q.denom()))
                .collect()
        })
        .collect();
    let reduce = |mut w: Vec<BigInt>, mut d: BigInt| {
        let g = w.iter().fold(d.clone(), |acc, x| acc.gcd(x));
        if !g.is_one() {
            w.iter_mut().for_each(|x| *x /= &g);
            d /= &g;
        }
        (w, d)
    };
    let d0 = start
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let w0: Vec<BigInt> = start
        .iter()
        .map(|q| q.numer() * (&d0 / q.denom()))
        .collect();
    let mut orbit = vec![reduce(w0, d0)];
    let mut seen: HashMap<(Vec<BigInt>, BigInt), usize> = HashMap::from([(orbit[0].clone(), 0)]);
    for step in 1..=max_steps {
        let (w, d) = orbit.last().unwrap();
        let next: Vec<BigInt> = (0..n)
            .map(|j| {
                (0..n)
                    .filter(|&i| !w[i].is_zero())
                    .fold(BigInt::zero(), |acc, i| acc + &w[i] * &scaled[i][j])
            })
            .collect();
        let state = reduce(next, d * &common);
        if let Some(&first) = seen.get(&state) {
            let coords = orbit[first..]
                .iter()
                .map(|(w, d)| {
                    Measure::from_terms(chain.states().iter().zip(w).map(|(x, c)| {
                        (
                            Generator::Atom(x.clone()),
                            Rational::new(c.clone(), d.clone()),
                        )
                    }))
                })
                .collect();
            return Some(Some(Cycle { coords }));
        }
        seen.insert(state.clone(), step);
        orbit.push(state);
    }
    Some(None)
}

/// Hash of the reduced numerators and denominators. `Ratio`'s own `Hash`
/// expands a continued fraction, which dominates long orbits.
fn fingerprint(mu: &Measure) -> u64 {
    let mut h = DefaultHasher::new();
    for (g, c) in mu.terms() {
        g.kind().hash(&mut h);
        if let Some(x) = g.location() {
            x.numer().hash(&mut h);
            x.denom().hash(&mut h);
        }
        c.numer().hash(&mut h);
        c.denom().hash(&mut h);
    }
    h.finish()
}

/// Result of splitting a pairwise-disjoint cycle into its countably additive
/// and purely finitely additive cycles. A side is `None` when all of its
/// coordinates vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub ca: Option<Cycle>,
    pub pfa: Option<Cycle>,
}

impl Decomposition {
    /// Coordinatewise sum of the two sides.
    pub fn recombined(&self) -> Vec<Measure> {
        match (&self.ca, &self.pfa) {
            (Some(a), Some(b)) => a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| x.add(y))
                .collect(),
            (Some(a), None) => a.coords.clone(),
            (None, Some(b)) => b.coords.clone(),
            (None, None) => Vec::new(),
        }
    }
}

/// Coordinatewise Yosida-Hewitt decomposition of a cycle.
///
/// Requires pairwise disjoint coordinates; otherwise the raw split comes
/// back inside [`CycleError::NotDisjointCycle`].
pub fn decompose_cycle(kernel: &Kernel, cycle: &Cycle) -> Result<Decomposition, CycleError> {
    let (ca, pfa): (Vec<Measure>, Vec<Measure>) = cycle
        .coords
        .iter()
        .map(Measure::yosida_hewitt_split)
        .unzip();
    if !cycle.is_pairwise_disjoint()? {
        return Err(CycleError::NotDisjointCycle { ca, pfa });
    }
    let side = |coords: Vec<Measure>| -> Result<Option<Cycle>, CycleError> {
        let zeros = coords.iter().filter(|m| m.is_zero()).count();
        if zeros == coords.len() {
            return Ok(None);
        }
        if zeros > 0 {
            return Err(CycleError::InvariantViolation(
                "a decomposition side vanishes on some coordinates only".into(),
            ));
        }
        Cycle::new(kernel, coords).map(Some).map_err(|e| match e {
            CycleError::NotACycle => {
                CycleError::InvariantViolation("a decomposition side is not a cycle".into())
            }
            other => other,
        })
    };
    let out = Decomposition {
        ca: side(ca)?,
        pfa: side(pfa)?,
    };
    if out.recombined() != cycle.coords {
        return Err(CycleError::InvariantViolation(
            "decomposition does not sum to the input".into(),
        ));
    }
    if let (Some(a), Some(b)) = (&out.ca, &out.pfa) {
        for x in &a.coords {
            for y in &b.coords {
                if !x.is_disjoint(y)? {
                    return Err(CycleError::InvariantViolation(
                        "ca and pfa cycles are not disjoint".into(),
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// Seeds for [`enumerate_cycles`]: the kernel's canonical seeds plus, for a
/// finite chain part, the stationary law of each recurrent class restricted
/// to its first cyclic subclass.
pub fn enumeration_seeds(kernel: &Kernel) -> Vec<Measure> {
    let mut seeds = kernel.canonical_seeds();
    if let Some(chain) = kernel.chain() {
        for class in state_cycles::find_cyclic_classes(chain) {
            let first = &class.subclasses[0];
            let restricted = Measure::from_terms(first.iter().map(|&i| {
                (
                    Generator::Atom(chain.states()[i].clone()),
                    class.stationary[i].clone(),
                )
            }));
            if let Ok(p) = restricted.normalize() {
                seeds.push(p);
            }
        }
    }
    seeds
}

/// All distinct cycles of period at most `max_period` reachable from the
/// enumeration seeds, each in canonical rotation, sorted.
pub fn enumerate_cycles(kernel: &Kernel, max_period: usize) -> Result<Vec<Cycle>, CycleError> {
    let budget = max_period + TRANSIENT_BUDGET + kernel.chain().map_or(0, |c| c.len());
    let mut found: Vec<Cycle> = Vec::new();
    for seed in enumeration_seeds(kernel) {
        if let Some(c) = find_cycle_from(kernel, &seed, budget)? {
            if c.period() <= max_period {
                found.push(c.canonical_rotation());
            }
        }
    }
    found.sort();
    found.dedup();
    Ok(found)
}

/// Mean measure is countably additive exactly when the cycle is.
pub fn mean_matches_classification(cycle: &Cycle) -> Result<bool, CycleError> {
    let kind = cycle.classify()?;
    let (ca, pfa) = cycle.mean_measure().yosida_hewitt_split();
    Ok(match kind {
        CycleKind::CountablyAdditive => pfa.is_zero(),
        CycleKind::PurelyFinitelyAdditive => ca.is_zero(),
        CycleKind::Mixed => !ca.is_zero() && !pfa.is_zero(),
    })
}

/// Wire form: `{"period": m, "coords": [measure, ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CycleRecord {
    pub period: usize,
    pub coords: Vec<Measure>,
}

impl Serialize for Cycle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycleRecord {
            period: self.period(),
            coords: self.coords.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cycle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rec = CycleRecord::deserialize(d)?;
        if rec.period != rec.coords.len() || rec.coords.is_empty() {
            return Err(serde::de::Error::custom(format!(
                "period {} does not match {} coordinates",
                rec.period,
                rec.coords.len()
            )));
        }
        Ok(Cycle { coords: rec.coords })
    }
}
