//! Realizability of (partial) assignments as straight-segment embeddings over
//! the fixed planar vertices.
//!
//! Each vertex gets a height variable. An assigned crossing asks that the
//! over strand be strictly higher than the under strand at the crossing
//! point, which is a homogeneous linear inequality in four heights. The
//! system is strictly feasible exactly when `rows · z >= 1` is feasible, and
//! that is decided with exact simplex.

use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diagram::{CrossingAssignment, Pseudodiagram, Shadow};
use crate::error::Error;
use crate::geometry::{orient, ratio, Rational};
use crate::lp;

/// `over - under > 0` at one crossing, as coefficients on vertex heights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintRow {
    pub crossing: usize,
    pub coeffs: Vec<(usize, Rational)>,
}

impl ConstraintRow {
    pub fn eval(&self, heights: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(v, c)| c * &heights[*v]).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem {
    pub num_vars: usize,
    pub rows: Vec<ConstraintRow>,
    /// Vertex positions when the rows come from a shadow. Such rows vanish
    /// on every affine height function, which the solver uses to fix three
    /// heights in advance.
    plane: Option<Arc<Shadow>>,
}

impl ConstraintSystem {
    /// A system with no geometry attached.
    pub fn new(num_vars: usize, rows: Vec<ConstraintRow>) -> Self {
        Self { num_vars, rows, plane: None }
    }

    pub fn without_row(&self, index: usize) -> Self {
        let mut out = self.clone();
        out.rows.remove(index);
        out
    }

    /// The subsystem made of the rows for the given crossing ids.
    pub fn restricted_to(&self, crossings: &[usize]) -> Self {
        let mut out = self.clone();
        out.rows.retain(|r| crossings.contains(&r.crossing));
        out
    }

    /// Up to three used vertices in affinely independent position. Subtracting
    /// the affine function through their heights keeps any solution a
    /// solution, so their heights can be taken to be zero.
    fn gauge(&self) -> Vec<usize> {
        let Some(shadow) = &self.plane else { return Vec::new() };
        let mut used: Vec<usize> = self.rows.iter().flat_map(|r| r.coeffs.iter().map(|(v, _)| *v)).collect();
        used.sort_unstable();
        used.dedup();
        let pts = shadow.vertices();
        let mut out: Vec<usize> = Vec::with_capacity(3);
        for v in used {
            let independent = match out.as_slice() {
                [] => true,
                [a] => pts[*a] != pts[v],
                [a, b] => !orient(&pts[*a], &pts[*b], &pts[v]).is_zero(),
                _ => break,
            };
            if independent {
                out.push(v);
            }
        }
        out
    }

    /// True when every row evaluates to at least `margin`.
    pub fn satisfied_with_margin(&self, heights: &[Rational], margin: &Rational) -> bool {
        self.rows.iter().all(|r| r.eval(heights) >= *margin)
    }
}

/// Height difference `first edge - second edge` at a crossing.
pub fn first_minus_second(shadow: &Shadow, crossing: usize) -> Vec<(usize, Rational)> {
    let g = &shadow.crossings()[crossing];
    let (a0, a1) = shadow.edge_ends(g.edge_a);
    let (b0, b1) = shadow.edge_ends(g.edge_b);
    let one = Rational::one();
    vec![
        (a0, &one - &g.s),
        (a1, g.s.clone()),
        (b0, -(&one - &g.t)),
        (b1, -g.t.clone()),
    ]
}

fn row_for(shadow: &Shadow, crossing: usize, value: CrossingAssignment) -> ConstraintRow {
    let mut coeffs = first_minus_second(shadow, crossing);
    if value == CrossingAssignment::SecondOver {
        for (_, c) in coeffs.iter_mut() {
            *c = -c.clone();
        }
    }
    ConstraintRow { crossing, coeffs }
}

/// One strict row per assigned crossing; precrossings contribute nothing.
pub fn build_constraints(p: &Pseudodiagram) -> ConstraintSystem {
    let rows = p.assigned().into_iter().map(|(id, a)| row_for(p.shadow(), id, a)).collect();
    ConstraintSystem { num_vars: p.shadow().num_vertices(), rows, plane: Some(Arc::clone(p.shadow_arc())) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FeasibilityStatus {
    Feasible,
    Infeasible,
}

impl fmt::Display for FeasibilityStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Feasible => "FEASIBLE",
            Self::Infeasible => "INFEASIBLE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityResult {
    pub status: FeasibilityStatus,
    /// Heights with every row at least 1, when feasible.
    pub witness: Option<Vec<Rational>>,
    /// A minimal infeasible set of crossing ids, when requested and infeasible.
    pub core: Option<Vec<usize>>,
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        self.status == FeasibilityStatus::Feasible
    }
}

fn solve(cs: &ConstraintSystem) -> Option<Vec<Rational>> {
    let gauge = cs.gauge();
    let rows: Vec<Vec<(usize, Rational)>> = cs
        .rows
        .iter()
        .map(|r| r.coeffs.iter().filter(|(v, _)| !gauge.contains(v)).cloned().collect())
        .collect();
    let z = lp::solve_at_least_one(&rows, cs.num_vars)?;
    debug_assert!(cs.satisfied_with_margin(&z, &Rational::one()));
    Some(z)
}

/// Decides whether some heights make every row strictly positive.
pub fn check_feasibility(cs: &ConstraintSystem) -> FeasibilityResult {
    match solve(cs) {
        Some(z) => FeasibilityResult {
            status: FeasibilityStatus::Feasible,
            witness: Some(z),
            core: None,
        },
        None => FeasibilityResult {
            status: FeasibilityStatus::Infeasible,
            witness: None,
            core: None,
        },
    }
}

/// Feasibility plus a minimal infeasible core when the system is infeasible.
pub fn diagnose(cs: &ConstraintSystem) -> FeasibilityResult {
    let mut result = check_feasibility(cs);
    if !result.is_feasible() {
        result.core = minimal_infeasible_core(cs).ok();
    }
    result
}

/// Deletion filter: drop each row (ascending crossing id) whenever the rest
/// stays infeasible. Every row left is necessary.
pub fn minimal_infeasible_core(cs: &ConstraintSystem) -> Result<Vec<usize>, Error> {
    if solve(cs).is_some() {
        return Err(Error::NotInfeasible);
    }
    let mut current = cs.clone();
    current.rows.sort_by_key(|r| r.crossing);
    let mut i = 0;
    while i < current.rows.len() {
        let trial = current.without_row(i);
        if solve(&trial).is_none() {
            current = trial;
        } else {
            i += 1;
        }
    }
    Ok(current.rows.iter().map(|r| r.crossing).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialRealizability {
    pub realizable: bool,
    /// Heights realizing the assigned crossings with no precrossing at equal
    /// heights.
    pub witness: Option<Vec<Rational>>,
    /// The total resolution read off the witness.
    pub completion: Option<Pseudodiagram>,
}

const PERTURBATION_SEED: u64 = 0x5eed_0f4e16;

/// Whether some completion of `p` is realizable, with a witness whose
/// heights separate every precrossing as well.
pub fn is_partial_realizable(p: &Pseudodiagram) -> PartialRealizability {
    let cs = build_constraints(p);
    let Some(z) = solve(&cs) else {
        return PartialRealizability { realizable: false, witness: None, completion: None };
    };
    let free: Vec<Vec<(usize, Rational)>> = p
        .precrossings()
        .into_iter()
        .map(|c| first_minus_second(p.shadow(), c))
        .collect();
    let z = separate_precrossings(&cs, &free, z);
    let mut completion = p.clone();
    for (c, coeffs) in p.precrossings().into_iter().zip(&free) {
        let diff: Rational = coeffs.iter().map(|(v, k)| k * &z[*v]).sum();
        completion
            .set(c, Some(CrossingAssignment::from_bit(diff.is_positive())))
            .expect("precrossing id is valid");
    }
    PartialRealizability { realizable: true, witness: Some(z), completion: Some(completion) }
}

/// Nudges `z` so that no precrossing has equal heights while every assigned
/// row keeps a margin of at least 1/2.
fn separate_precrossings(
    cs: &ConstraintSystem,
    free: &[Vec<(usize, Rational)>],
    z: Vec<Rational>,
) -> Vec<Rational> {
    let eval = |coeffs: &[(usize, Rational)], h: &[Rational]| -> Rational {
        coeffs.iter().map(|(v, k)| k * &h[*v]).sum()
    };
    if free.iter().all(|f| !eval(f, &z).is_zero()) {
        return z;
    }
    let half = ratio(1, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(PERTURBATION_SEED);
    loop {
        let dir: Vec<Rational> = (0..z.len()).map(|_| ratio(rng.gen_range(-1000..=1000), 1000)).collect();
        // A direction parallel to a tied hyperplane can never break the tie.
        if free.iter().any(|f| eval(f, &z).is_zero() && eval(f, &dir).is_zero()) {
            continue;
        }
        let mut eps = Rational::one();
        loop {
            let moved: Vec<Rational> = z.iter().zip(&dir).map(|(a, d)| a + &eps * d).collect();
            if cs.satisfied_with_margin(&moved, &half) && free.iter().all(|f| !eval(f, &moved).is_zero()) {
                return moved;
            }
            eps /= Rational::from_integer(2.into());
        }
    }
}

/// Answers "does some completion of this assignment realize?".
pub trait FeasibilityOracle: Sync {
    fn feasible(&self, p: &Pseudodiagram) -> bool;

    /// Heights for a feasible `p`, if the oracle can produce them cheaply.
    fn witness(&self, _p: &Pseudodiagram) -> Option<Vec<Rational>> {
        None
    }
}

/// Solves a fresh LP on every query.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExactOracle;

impl FeasibilityOracle for ExactOracle {
    fn feasible(&self, p: &Pseudodiagram) -> bool {
        solve(&build_constraints(p)).is_some()
    }

    fn witness(&self, p: &Pseudodiagram) -> Option<Vec<Rational>> {
        solve(&build_constraints(p))
    }
}

/// Memoizes feasibility per assignment of one fixed shadow.
#[derive(Debug)]
pub struct CachedOracle {
    shadow: Arc<Shadow>,
    cache: DashMap<Vec<u8>, bool>,
}

impl CachedOracle {
    pub fn new(shadow: Arc<Shadow>) -> Self {
        Self { shadow, cache: DashMap::new() }
    }

    pub fn len(&self) -> usize {
        self.cache.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cache.is_empty()
    }
}

fn key(p: &Pseudodiagram) -> Vec<u8> {
    p.assignment()
        .iter()
        .map(|a| match a {
            None => 0,
            Some(CrossingAssignment::FirstOver) => 1,
            Some(CrossingAssignment::SecondOver) => 2,
        })
        .collect()
}

impl FeasibilityOracle for CachedOracle {
    fn feasible(&self, p: &Pseudodiagram) -> bool {
        debug_assert!(Arc::ptr_eq(p.shadow_arc(), &self.shadow) || **p.shadow_arc() == *self.shadow);
        let k = key(p);
        if let Some(hit) = self.cache.get(&k) {
            return *hit;
        }
        let ans = ExactOracle.feasible(p);
        self.cache.insert(k, ans);
        ans
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PropagationStatus {
    Completed,
    Stuck,
    Contradiction,
}

impl fmt::Display for PropagationStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Completed => "COMPLETED",
            Self::Stuck => "STUCK",
            Self::Contradiction => "CONTRADICTION",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropagationOutcome {
    pub derived: Vec<(usize, CrossingAssignment)>,
    pub status: PropagationStatus,
    pub remaining: Vec<usize>,
}

/// Repeatedly assigns every precrossing that has only one realizable option,
/// restarting the scan after each assignment.
pub fn propagate_forced(p: &Pseudodiagram) -> PropagationOutcome {
    propagate_with(p, &ExactOracle)
}

pub fn propagate_with<O: FeasibilityOracle + ?Sized>(p: &Pseudodiagram, oracle: &O) -> PropagationOutcome {
    let mut current = p.clone();
    let mut derived = Vec::new();

    let mut hint = oracle.witness(&current);
    if hint.is_none() && !oracle.feasible(&current) {
        return PropagationOutcome {
            derived,
            status: PropagationStatus::Contradiction,
            remaining: current.precrossings(),
        };
    }

    'scan: loop {
        let open = current.precrossings();
        if open.is_empty() {
            return PropagationOutcome { derived, status: PropagationStatus::Completed, remaining: open };
        }
        for &c in &open {
            // A witness for the current assignment already realizes the side
            // of c it happens to put on top.
            let known = hint.as_ref().and_then(|z| {
                let diff: Rational = first_minus_second(current.shadow(), c)
                    .iter()
                    .map(|(v, k)| k * &z[*v])
                    .sum();
                if diff.is_zero() {
                    None
                } else {
                    Some(CrossingAssignment::from_bit(diff.is_positive()))
                }
            });
            let mut ok = [false; 2];
            for (i, value) in CrossingAssignment::BOTH.into_iter().enumerate() {
                ok[i] = known == Some(value) || oracle.feasible(&current.with(c, value));
            }
            let choice = match ok {
                [true, true] => continue,
                [false, false] => {
                    return PropagationOutcome {
                        derived,
                        status: PropagationStatus::Contradiction,
                        remaining: open,
                    }
                }
                [true, false] => CrossingAssignment::FirstOver,
                [false, true] => CrossingAssignment::SecondOver,
            };
            current = current.with(c, choice);
            derived.push((c, choice));
            hint = oracle.witness(&current);
            continue 'scan;
        }
        return PropagationOutcome { derived, status: PropagationStatus::Stuck, remaining: open };
    }
}

/// Propagation in rounds: every crossing forced by the assignment at the
/// start of a round is collected before any of them is applied. The round
/// sizes give the shape of a forcing cascade.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropagationWaves {
    pub waves: Vec<Vec<(usize, CrossingAssignment)>>,
    pub status: PropagationStatus,
    pub remaining: Vec<usize>,
}

impl PropagationWaves {
    pub fn shape(&self) -> Vec<usize> {
        self.waves.iter().map(Vec::len).collect()
    }
}

pub fn propagate_waves<O: FeasibilityOracle + ?Sized>(p: &Pseudodiagram, oracle: &O) -> PropagationWaves {
    let mut current = p.clone();
    let mut waves = Vec::new();
    if !oracle.feasible(&current) {
        return PropagationWaves { waves, status: PropagationStatus::Contradiction, remaining: current.precrossings() };
    }
    loop {
        let open = current.precrossings();
        if open.is_empty() {
            return PropagationWaves { waves, status: PropagationStatus::Completed, remaining: open };
        }
        let mut wave = Vec::new();
        for &c in &open {
            let ok = CrossingAssignment::BOTH.map(|v| oracle.feasible(&current.with(c, v)));
            match ok {
                [true, true] => {}
                [false, false] => {
                    return PropagationWaves { waves, status: PropagationStatus::Contradiction, remaining: open }
                }
                [true, false] => wave.push((c, CrossingAssignment::FirstOver)),
                [false, true] => wave.push((c, CrossingAssignment::SecondOver)),
            }
        }
        if wave.is_empty() {
            return PropagationWaves { waves, status: PropagationStatus::Stuck, remaining: open };
        }
        for &(c, v) in &wave {
            current = current.with(c, v);
        }
        waves.push(wave);
    }
}
