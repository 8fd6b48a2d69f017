//! Cycles of sets of states and their correspondence with cycles of
//! measures.
//!
//! For finite chains the classical structure is computed directly: recurrent
//! classes are the closed strongly connected components of the transition
//! digraph, the period is the gcd of level differences along edges of a
//! breadth-first layering, and the cyclic subclasses are the level residues.

use std::collections::VecDeque;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::cycles::{Cycle, CycleError};
use crate::kernel::{FiniteChain, Kernel, KernelError};
use crate::linalg;
use crate::measure::{Generator, Measure};
use crate::piecewise::{PiecewiseError, PiecewisePoly};
use crate::poly::PolyError;
use crate::rational::Rational;
use crate::set_expr::{Bound, SetExpr};

/// Iterations of `A^m` tried per seed when looking for an invariant measure
/// of a deterministic kernel.
pub const INVARIANT_SEARCH_BUDGET: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StateCycleError {
    #[error("the sets do not form a cycle of states")]
    NotAStateCycle,
    #[error("the cycle of states is not singular")]
    NotSingular,
    #[error("no representable invariant measure found within the search budget")]
    NoRepresentableInvariant,
    #[error("cycle coordinates are not countably additive")]
    NotCountablyAdditive,
    #[error("cycle coordinates are not pairwise disjoint")]
    NotDisjoint,
    #[error("measure is not a probability")]
    NotProbability,
    #[error("function takes values outside [0, 1]")]
    RangeViolation,
    #[error("the level set {{f = 1}} has irrational boundary points")]
    IrrationalRootBoundary,
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Function(#[from] PiecewiseError),
}

/// A recurrent class of a finite chain with its cyclic structure. State
/// references are indices into the chain's state list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrentClass {
    pub states: Vec<usize>,
    pub period: usize,
    /// `subclasses[r]` is mapped into `subclasses[(r + 1) % period]`.
    pub subclasses: Vec<Vec<usize>>,
    /// Stationary law of the class, indexed over all chain states.
    pub stationary: Vec<Rational>,
}

/// Recurrent classes ordered by their smallest state index.
pub fn find_cyclic_classes(chain: &FiniteChain) -> Vec<RecurrentClass> {
    let n = chain.len();
    let mut graph: DiGraph<usize, ()> = DiGraph::new();
    let nodes: Vec<_> = (0..n).map(|i| graph.add_node(i)).collect();
    for i in 0..n {
        for j in chain.successors(i) {
            graph.add_edge(nodes[i], nodes[j], ());
        }
    }
    let mut classes = Vec::new();
    for component in tarjan_scc(&graph) {
        let mut members: Vec<usize> = component.iter().map(|ix| graph[*ix]).collect();
        members.sort_unstable();
        let closed = members.iter().all(|&i| {
            chain
                .successors(i)
                .all(|j| members.binary_search(&j).is_ok())
        });
        if closed {
            classes.push(describe_class(chain, members));
        }
    }
    classes.sort_by_key(|c| c.states[0]);
    classes
}

fn describe_class(chain: &FiniteChain, members: Vec<usize>) -> RecurrentClass {
    let n = chain.len();
    let mut level: Vec<Option<usize>> = vec![None; n];
    let root = members[0];
    level[root] = Some(0);
    let mut queue = VecDeque::from([root]);
    let mut period = 0usize;
    while let Some(u) = queue.pop_front() {
        let lu = level[u].unwrap();
        for v in chain.successors(u) {
            match level[v] {
                None => {
                    level[v] = Some(lu + 1);
                    queue.push_back(v);
                }
                Some(lv) => period = period.gcd(&(lu + 1).abs_diff(lv)),
            }
        }
    }
    // the tree edges contribute zero, so an edgeless gcd means period 1 only
    // when there are no cycles at all, which cannot happen in a closed class
    let period = period.max(1);
    let mut subclasses = vec![Vec::new(); period];
    for &i in &members {
        subclasses[level[i].unwrap() % period].push(i);
    }
    let sub: Vec<Vec<Rational>> = members
        .iter()
        .map(|&i| {
            members
                .iter()
                .map(|&j| chain.matrix()[i][j].clone())
                .collect()
        })
        .collect();
    let local =
        linalg::stationary(&sub).expect("closed communicating class has a unique stationary law");
    let mut stationary = vec![Rational::zero(); n];
    for (k, &i) in members.iter().enumerate() {
        stationary[i] = local[k].clone();
    }
    RecurrentClass {
        states: members,
        period,
        subclasses,
        stationary,
    }
}

/// `(D_1, ..., D_m)` with `p(x, D_{i+1}) = 1` for `x` in `D_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateCycle {
    sets: Vec<SetExpr>,
}

impl StateCycle {
    pub fn new(sets: Vec<SetExpr>) -> StateCycle {
        StateCycle { sets }
    }

    pub fn sets(&self) -> &[SetExpr] {
        &self.sets
    }

    pub fn period(&self) -> usize {
        self.sets.len()
    }

    /// Pairwise disjoint sets.
    pub fn is_singular(&self) -> bool {
        self.sets
            .iter()
            .enumerate()
            .all(|(i, a)| self.sets[i + 1..].iter().all(|b| a.is_disjoint(b)))
    }

    pub fn rotated(&self, shift: usize) -> StateCycle {
        let mut sets = self.sets.clone();
        if !sets.is_empty() {
            let len = sets.len();
            sets.rotate_left(shift % len);
        }
        StateCycle { sets }
    }

    pub fn same_as(&self, other: &StateCycle) -> bool {
        self.period() == other.period() && (0..self.period()).any(|r| self.rotated(r) == *other)
    }
}

impl fmt::Display for StateCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.sets.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}

#[derive(Serialize, Deserialize)]
struct StateCycleRecord {
    sets: Vec<SetExpr>,
    #[serde(default)]
    singular: Option<bool>,
}

impl Serialize for StateCycle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        StateCycleRecord {
            sets: self.sets.clone(),
            singular: Some(self.is_singular()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StateCycle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rec = StateCycleRecord::deserialize(d)?;
        let cycle = StateCycle { sets: rec.sets };
        if cycle.sets.is_empty() {
            return Err(serde::de::Error::custom(
                "a state cycle needs at least one set",
            ));
        }
        if let Some(flag) = rec.singular {
            if flag != cycle.is_singular() {
                return Err(serde::de::Error::custom(
                    "singular flag does not match the sets",
                ));
            }
        }
        Ok(cycle)
    }
}

/// Checks pairwise distinctness and `image(D_i) ⊆ D_{i+1}` cyclically; for
/// finite states this is `sum over D_{i+1} of p(x, .) = 1`.
pub fn verify_state_cycle(kernel: &Kernel, cycle: &StateCycle) -> Result<bool, StateCycleError> {
    let sets = cycle.sets();
    if sets.is_empty() {
        return Ok(false);
    }
    for (i, a) in sets.iter().enumerate() {
        if a.is_empty() || !a.is_subset(kernel.space()) || sets[i + 1..].contains(a) {
            return Ok(false);
        }
    }
    let m = sets.len();
    for i in 0..m {
        if !kernel.image_of(&sets[i])?.is_subset(&sets[(i + 1) % m]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Singular cycle of measures carried by a singular cycle of states, with
/// `mu_i(D_j) = 1` if `i = j` and `0` otherwise.
pub fn measures_from_state_cycle(
    kernel: &Kernel,
    cycle: &StateCycle,
) -> Result<Cycle, StateCycleError> {
    measures_from_state_cycle_with_budget(kernel, cycle, INVARIANT_SEARCH_BUDGET)
}

pub fn measures_from_state_cycle_with_budget(
    kernel: &Kernel,
    cycle: &StateCycle,
    budget: usize,
) -> Result<Cycle, StateCycleError> {
    if !verify_state_cycle(kernel, cycle)? {
        return Err(StateCycleError::NotAStateCycle);
    }
    if !cycle.is_singular() {
        return Err(StateCycleError::NotSingular);
    }
    let m = cycle.period();
    let first = match finite_invariant(kernel, cycle)? {
        Some(mu) => mu,
        None => deterministic_invariant(kernel, cycle, budget)?,
    };
    let mut coords = vec![first];
    for _ in 1..m {
        coords.push(kernel.apply(coords.last().unwrap())?);
    }
    let result = Cycle::new(kernel, coords)?;
    for (i, mu) in result.coords().iter().enumerate() {
        for (j, d) in cycle.sets().iter().enumerate() {
            let expected = if i == j {
                Rational::one()
            } else {
                Rational::zero()
            };
            if mu.evaluate(d) != expected {
                return Err(StateCycleError::InvariantViolation(format!(
                    "mu_{}(D_{}) != {}",
                    i + 1,
                    j + 1,
                    expected
                )));
            }
        }
    }
    Ok(result)
}

/// Invariant probability of `A^m` on `D_1` when every set consists of
/// finite-chain states: the average of the stationary laws of the recurrent
/// classes of the restricted chain.
fn finite_invariant(
    kernel: &Kernel,
    cycle: &StateCycle,
) -> Result<Option<Measure>, StateCycleError> {
    let Some(chain) = kernel.chain() else {
        return Ok(None);
    };
    let mut index_sets = Vec::new();
    for d in cycle.sets() {
        let Some(points) = d.as_points() else {
            return Ok(None);
        };
        let idx: Option<Vec<usize>> = points.iter().map(|x| chain.index_of(x)).collect();
        let Some(idx) = idx else { return Ok(None) };
        index_sets.push(idx);
    }
    let m = cycle.period();
    let power = linalg::mat_pow(chain.matrix(), m);
    let d1 = &index_sets[0];
    let states: Vec<Rational> = d1.iter().map(|&i| chain.states()[i].clone()).collect();
    let restricted: Vec<Vec<Rational>> = d1
        .iter()
        .map(|&i| d1.iter().map(|&j| power[i][j].clone()).collect())
        .collect();
    let sub = FiniteChain::new(states.clone(), restricted)?;
    let classes = find_cyclic_classes(&sub);
    let weight = Rational::new(1.into(), classes.len().into());
    let mut mu = Measure::zero();
    for class in &classes {
        let law = Measure::from_terms(
            states
                .iter()
                .zip(&class.stationary)
                .map(|(s, p)| (Generator::Atom(s.clone()), p.clone())),
        );
        mu = mu.add(&law.scale(&weight));
    }
    Ok(Some(mu))
}

/// Candidate unit measures concentrated on `set`.
fn seeds_inside(set: &SetExpr) -> Vec<Measure> {
    let mut gens = Vec::new();
    for s in set.spans() {
        if let Some(x) = s.as_point() {
            gens.push(Generator::Atom(x.clone()));
            continue;
        }
        match s.lo() {
            Bound::Finite(a) => gens.push(Generator::RightLimit(a.clone())),
            _ => gens.push(Generator::MinusInfinity),
        }
        match s.hi() {
            Bound::Finite(b) => gens.push(Generator::LeftLimit(b.clone())),
            _ => gens.push(Generator::PlusInfinity),
        }
        if s.lo_closed() {
            gens.push(Generator::Atom(s.lo().finite().unwrap().clone()));
        }
        if s.hi_closed() {
            gens.push(Generator::Atom(s.hi().finite().unwrap().clone()));
        }
    }
    gens.into_iter().map(Measure::unit).collect()
}

fn deterministic_invariant(
    kernel: &Kernel,
    cycle: &StateCycle,
    budget: usize,
) -> Result<Measure, StateCycleError> {
    let m = cycle.period();
    for seed in seeds_inside(&cycle.sets()[0]) {
        let mut cur = seed;
        for _ in 0..budget {
            let next = kernel.apply_n(&cur, m)?;
            if next == cur {
                return Ok(cur);
            }
            cur = next;
        }
    }
    Err(StateCycleError::NoRepresentableInvariant)
}

/// Singular cycle of state sets carried by a disjoint countably additive
/// cycle: `D_i` is the atom support of `mu_i`.
///
/// Also checks `p(x, D_{i+1}) = 1` at every atom of `mu_i` and, for `m >= 2`,
/// `p(x, D_i) = 0` there.
pub fn state_cycle_from_measures(
    kernel: &Kernel,
    cycle: &Cycle,
) -> Result<StateCycle, StateCycleError> {
    if !cycle.coords().iter().all(Measure::is_countably_additive) {
        return Err(StateCycleError::NotCountablyAdditive);
    }
    if !cycle.is_pairwise_disjoint()? {
        return Err(StateCycleError::NotDisjoint);
    }
    let sets: Vec<SetExpr> = cycle
        .coords()
        .iter()
        .map(|mu| SetExpr::points(mu.atom_support()))
        .collect();
    let m = sets.len();
    for (i, mu) in cycle.coords().iter().enumerate() {
        for x in mu.atom_support() {
            let next = kernel.transition_probability(&x, &sets[(i + 1) % m])?;
            if !next.is_one() {
                return Err(StateCycleError::InvariantViolation(format!(
                    "p({x}, D_{}) = {next}",
                    (i + 1) % m + 1
                )));
            }
            if m >= 2 {
                let stay = kernel.transition_probability(&x, &sets[i])?;
                if !stay.is_zero() {
                    return Err(StateCycleError::InvariantViolation(format!(
                        "p({x}, D_{}) = {stay}",
                        i + 1
                    )));
                }
            }
        }
        for (j, d) in sets.iter().enumerate() {
            let expected = if i == j { mu.norm() } else { Rational::zero() };
            if mu.evaluate(d) != expected {
                return Err(StateCycleError::InvariantViolation(format!(
                    "mu_{}(D_{}) != {}",
                    i + 1,
                    j + 1,
                    expected
                )));
            }
        }
    }
    Ok(StateCycle { sets })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    #[serde(with = "crate::rational::serde_text")]
    pub integral: Rational,
    /// `mu({x : f(x) = 1})`.
    #[serde(with = "crate::rational::serde_text")]
    pub level_set_mass: Rational,
    pub lemma_holds: bool,
}

/// For `0 <= f <= 1` and a probability `mu`: whether `integral f dmu = 1`
/// forces `f = 1` `mu`-almost everywhere.
///
/// The implication always holds for countably additive `mu`; a failure there
/// is an invariant violation. Germ measures can break it.
pub fn lemma_check(f: &PiecewisePoly, mu: &Measure) -> Result<LemmaReport, StateCycleError> {
    if !mu.is_probability() {
        return Err(StateCycleError::NotProbability);
    }
    match f.check_unit_range() {
        Ok(()) => {}
        Err(PiecewiseError::RangeViolation(_)) => return Err(StateCycleError::RangeViolation),
        Err(e) => return Err(e.into()),
    }
    let integral = f.integrate(mu)?;
    let level = f.level_set(&Rational::one()).map_err(|e| match e {
        PiecewiseError::Poly(PolyError::IrrationalRoot(_)) => {
            StateCycleError::IrrationalRootBoundary
        }
        other => other.into(),
    })?;
    let level_set_mass = mu.evaluate(&level);
    let lemma_holds = !(integral.is_one() && !level_set_mass.is_one());
    if mu.is_countably_additive() && !lemma_holds {
        return Err(StateCycleError::InvariantViolation(
            "integral is 1 but f != 1 on an atom".into(),
        ));
    }
    Ok(LemmaReport {
        integral,
        level_set_mass,
        lemma_holds,
    })
}

/// When a finite chain has a unique invariant law and exactly one cycle,
/// that cycle is countably additive with the invariant law as its mean.
/// Returns `None` when the hypothesis does not apply.
pub fn unique_cycle_check(kernel: &Kernel, cycles: &[Cycle]) -> Result<Option<bool>, CycleError> {
    let Some(chain) = kernel.as_finite_chain() else {
        return Ok(None);
    };
    let classes = find_cyclic_classes(chain);
    if classes.len() != 1 || cycles.len() != 1 {
        return Ok(None);
    }
    let law = Measure::from_terms(
        chain
            .states()
            .iter()
            .zip(&classes[0].stationary)
            .map(|(s, p)| (Generator::Atom(s.clone()), p.clone())),
    );
    let cycle = cycles[0].normalize()?;
    Ok(Some(
        cycle.mean_measure() == law
            && cycle.classify()? == crate::cycles::CycleKind::CountablyAdditive,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain_file::{bundled, ChainFile};
    use crate::poly::Polynomial;
    use crate::rational::{int, rat};

    fn kernel(name: &str) -> Kernel {
        ChainFile::parse(bundled(name).unwrap()).unwrap().kernel
    }

    fn sets(items: &[&str]) -> StateCycle {
        StateCycle::new(items.iter().map(|s| s.parse().unwrap()).collect())
    }

    #[test]
    fn cyclic_classes_of_bundled_chains() {
        let k = kernel("three_state_swap");
        let classes = find_cyclic_classes(k.as_finite_chain().unwrap());
        assert_eq!(classes.len(), 2);
        assert_eq!((classes[0].states.clone(), classes[0].period), (vec![0], 1));
        assert_eq!(
            (classes[1].states.clone(), classes[1].period),
            (vec![1, 2], 2)
        );
        assert_eq!(classes[1].subclasses, vec![vec![1], vec![2]]);
        assert_eq!(classes[1].stationary, vec![int(0), rat(1, 2), rat(1, 2)]);

        let k = kernel("permutation_4_cycle");
        let classes = find_cyclic_classes(k.as_finite_chain().unwrap());
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].period, 4);
        assert_eq!(
            classes[0].subclasses,
            vec![vec![0], vec![1], vec![2], vec![3]]
        );

        let k = kernel("absorbing_2_state");
        let classes = find_cyclic_classes(k.as_finite_chain().unwrap());
        assert_eq!(
            classes.iter().map(|c| c.period).collect::<Vec<_>>(),
            vec![1, 1]
        );
    }

    #[test]
    fn transient_states_are_not_classes() {
        let chain = FiniteChain::new(
            vec![int(0), int(1), int(2)],
            vec![
                vec![rat(1, 2), rat(1, 4), rat(1, 4)],
                vec![int(0), int(0), int(1)],
                vec![int(0), int(1), int(0)],
            ],
        )
        .unwrap();
        let classes = find_cyclic_classes(&chain);
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].states, vec![1, 2]);
        assert_eq!(classes[0].period, 2);
    }

    #[test]
    fn verifies_state_cycles() {
        let k = kernel("two_interval_germs");
        assert!(verify_state_cycle(&k, &sets(&["(0,1)", "(1,2)"])).unwrap());
        assert!(verify_state_cycle(&k, &sets(&["(0,1/10)", "(1,11/10)"])).unwrap());
        assert!(!verify_state_cycle(&k, &sets(&["(0,1/2)", "(1,11/10)"])).unwrap());
        let k = kernel("half_open_mixed");
        assert!(verify_state_cycle(&k, &sets(&["{0}", "{1}"])).unwrap());
        let k = kernel("three_state_swap");
        let overlapping = sets(&["{1,2}", "{1,3}"]);
        assert!(verify_state_cycle(&k, &overlapping).unwrap());
        assert!(!overlapping.is_singular());
        assert!(matches!(
            measures_from_state_cycle(&k, &overlapping),
            Err(StateCycleError::NotSingular)
        ));
    }

    #[test]
    fn measures_from_sets() {
        let k = kernel("two_interval_germs");
        let c = measures_from_state_cycle(&k, &sets(&["(0,1)", "(1,2)"])).unwrap();
        let germs = Cycle::from_coords_unchecked(vec![
            Measure::right_limit(int(0)),
            Measure::right_limit(int(1)),
        ]);
        assert!(c.same_as(&germs));

        let k = kernel("three_state_swap");
        let c = measures_from_state_cycle(&k, &sets(&["{2}", "{3}"])).unwrap();
        assert_eq!(c.coords(), &[Measure::atom(int(2)), Measure::atom(int(3))]);

        let k = kernel("half_open_mixed");
        let c = measures_from_state_cycle(&k, &sets(&["{0}", "{1}"])).unwrap();
        assert_eq!(c.coords(), &[Measure::atom(int(0)), Measure::atom(int(1))]);
    }

    #[test]
    fn sets_from_measures() {
        let k = kernel("half_open_mixed");
        let c = Cycle::new(&k, vec![Measure::atom(int(0)), Measure::atom(int(1))]).unwrap();
        assert_eq!(
            state_cycle_from_measures(&k, &c).unwrap(),
            sets(&["{0}", "{1}"])
        );
        let germs = Cycle::new(
            &k,
            vec![Measure::right_limit(int(0)), Measure::right_limit(int(1))],
        )
        .unwrap();
        assert!(matches!(
            state_cycle_from_measures(&k, &germs),
            Err(StateCycleError::NotCountablyAdditive)
        ));

        let k = kernel("three_state_swap");
        let c = Cycle::new(&k, vec![Measure::atom(int(2)), Measure::atom(int(3))]).unwrap();
        assert_eq!(
            state_cycle_from_measures(&k, &c).unwrap(),
            sets(&["{2}", "{3}"])
        );
        let eta = Cycle::new(
            &k,
            vec![
                Measure::atom(int(1)).add(&Measure::atom(int(2))),
                Measure::atom(int(1)).add(&Measure::atom(int(3))),
            ],
        )
        .unwrap();
        assert!(matches!(
            state_cycle_from_measures(&k, &eta),
            Err(StateCycleError::NotDisjoint)
        ));
    }

    #[test]
    fn lemma_on_germs_and_atoms() {
        let f = PiecewisePoly::uniform(&"(0,1)".parse().unwrap(), Polynomial::identity());
        let r = lemma_check(&f, &Measure::left_limit(int(1))).unwrap();
        assert_eq!(
            (r.integral, r.level_set_mass, r.lemma_holds),
            (int(1), int(0), false)
        );

        let one = PiecewisePoly::constant(&SetExpr::real_line(), int(1));
        let mu = Measure::atom(int(3))
            .add(&Measure::right_limit(int(0)))
            .scale(&rat(1, 2));
        let r = lemma_check(&one, &mu).unwrap();
        assert_eq!(
            (r.integral, r.level_set_mass, r.lemma_holds),
            (int(1), int(1), true)
        );

        // 1 - x + x^2 equals 1 on [0,1] only at 0 and 1
        let bump = PiecewisePoly::uniform(
            &"[0,1]".parse().unwrap(),
            Polynomial::new(vec![int(1), int(-1), int(1)]),
        );
        let mu = Measure::atom(int(0))
            .add(&Measure::atom(int(1)))
            .scale(&rat(1, 2));
        let r = lemma_check(&bump, &mu).unwrap();
        assert_eq!(
            (r.integral, r.level_set_mass, r.lemma_holds),
            (int(1), int(1), true)
        );

        let wide = PiecewisePoly::uniform(&"(0,2)".parse().unwrap(), Polynomial::identity());
        assert!(matches!(
            lemma_check(&wide, &Measure::atom(rat(1, 2))),
            Err(StateCycleError::RangeViolation)
        ));
        assert!(matches!(
            lemma_check(&f, &Measure::zero()),
            Err(StateCycleError::NotProbability)
        ));
    }

    #[test]
    fn state_cycle_wire_form() {
        let s = sets(&["(0,1)", "(1,2)"]);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"sets":["(0,1)","(1,2)"],"singular":true}"#);
        assert_eq!(serde_json::from_str::<StateCycle>(&json).unwrap(), s);
        assert!(
            serde_json::from_str::<StateCycle>(r#"{"sets":["{1}","{1}"],"singular":true}"#)
                .is_err()
        );
    }
}
