//! Weighted resolution sets, forcing sets and forced-crossing counts.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use itertools::Itertools;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::diagram::{CrossingAssignment, Pseudodiagram};
use crate::error::Error;
use crate::geometry::{format_rational, Rational};
use crate::invariants::{classify, KnotClass};
use crate::realizability::{
    build_constraints, minimal_infeasible_core, propagate_waves, propagate_with, CachedOracle,
    FeasibilityOracle, PropagationOutcome, PropagationStatus, PropagationWaves,
};

/// Work counter shared with whoever is polling a long computation.
#[derive(Debug, Default)]
pub struct Progress {
    done: AtomicU64,
    total: AtomicU64,
}

impl Progress {
    pub fn new() -> Self {
        Self::default()
    }

    fn start(&self, total: u64) {
        self.done.store(0, Ordering::Relaxed);
        self.total.store(total, Ordering::Relaxed);
    }

    fn tick(&self) {
        self.done.fetch_add(1, Ordering::Relaxed);
    }

    /// `(done, total)`.
    pub fn snapshot(&self) -> (u64, u64) {
        (self.done.load(Ordering::Relaxed), self.total.load(Ordering::Relaxed))
    }
}

fn tick(progress: Option<&Progress>) {
    if let Some(p) = progress {
        p.tick();
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Only realizable completions are classified; the rest count as empty.
    Pl,
    /// Every completion is classified.
    Smooth,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pl" => Ok(Self::Pl),
            "smooth" => Ok(Self::Smooth),
            other => Err(Error::InvalidArgument(format!("unknown mode {other:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pl => "pl",
            Self::Smooth => "smooth",
        })
    }
}

/// Probability of each knot type among uniformly random completions, plus
/// the probability of landing on a nonrealizable one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeReSet {
    pub mode: Mode,
    pub entries: BTreeMap<KnotClass, Rational>,
    pub empty_prob: Rational,
    /// Number of completions enumerated, `2^k` for `k` precrossings.
    pub completions: u64,
}

impl WeReSet {
    pub fn get(&self, class: &str) -> Rational {
        self.entries.get(&KnotClass(class.to_string())).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> Rational {
        self.entries.values().fold(self.empty_prob.clone(), |acc, p| acc + p)
    }

    /// Class name to reduced `"p/q"`, with the empty entry under `"empty"`
    /// when it is nonzero.
    pub fn to_string_map(&self) -> BTreeMap<String, String> {
        let mut out: BTreeMap<String, String> =
            self.entries.iter().map(|(k, v)| (k.0.clone(), format_rational(v))).collect();
        if self.empty_prob != Rational::default() {
            out.insert("empty".to_string(), format_rational(&self.empty_prob));
        }
        out
    }
}

impl Serialize for WeReSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let map = self.to_string_map();
        let mut m = serializer.serialize_map(Some(map.len()))?;
        for (k, v) in &map {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl fmt::Display for WeReSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_string_map().into_iter().map(|(k, v)| format!("({k}, {v})")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// The pseudodiagram with precrossing `precrossings[j]` set from bit `j` of
/// `index` (`1` = first over).
pub fn completion(d: &Pseudodiagram, precrossings: &[usize], index: u64) -> Pseudodiagram {
    let mut r = d.clone();
    for (j, &c) in precrossings.iter().enumerate() {
        r = r.with(c, CrossingAssignment::from_bit(index >> j & 1 == 1));
    }
    r
}

fn completion_count(k: usize) -> Result<u64, Error> {
    if k >= 63 {
        return Err(Error::InvalidArgument(format!("{k} precrossings is too many to enumerate")));
    }
    Ok(1u64 << k)
}

pub fn were_set(d: &Pseudodiagram, mode: Mode) -> Result<WeReSet, Error> {
    were_set_with(d, mode, &CachedOracle::new(d.shadow_arc().clone()), None)
}

/// Enumerates all completions of `d` in parallel. Counts are integers, so the
/// result does not depend on scheduling.
pub fn were_set_with<O: FeasibilityOracle + ?Sized>(
    d: &Pseudodiagram,
    mode: Mode,
    oracle: &O,
    progress: Option<&Progress>,
) -> Result<WeReSet, Error> {
    let free = d.precrossings();
    let total = completion_count(free.len())?;
    if let Some(p) = progress {
        p.start(total);
    }
    let counts: HashMap<Option<KnotClass>, u64> = (0..total)
        .into_par_iter()
        .map(|i| {
            let r = completion(d, &free, i);
            let outcome = if mode == Mode::Pl && !oracle.feasible(&r) {
                None
            } else {
                Some(classify(&r).expect("completion is total"))
            };
            tick(progress);
            outcome
        })
        .fold(HashMap::new, |mut acc, k| {
            *acc.entry(k).or_insert(0) += 1;
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, n) in b {
                *a.entry(k).or_insert(0) += n;
            }
            a
        });

    let denom = Rational::from_integer(total.into());
    let mut entries = BTreeMap::new();
    let mut empty_prob = Rational::default();
    for (class, n) in counts {
        let p = Rational::from_integer(n.into()) / &denom;
        match class {
            Some(k) => {
                entries.insert(k, p);
            }
            None => empty_prob = p,
        }
    }
    Ok(WeReSet { mode, entries, empty_prob, completions: total })
}

fn extend(d: &Pseudodiagram, a: &BTreeMap<usize, CrossingAssignment>) -> Result<Pseudodiagram, Error> {
    let n = d.shadow().num_crossings();
    if let Some(&bad) = a.keys().find(|&&c| c >= n) {
        return Err(Error::UnknownCrossing(bad));
    }
    let overlap: Vec<usize> = a.keys().copied().filter(|&c| d.get(c).is_some()).collect();
    if !overlap.is_empty() {
        return Err(Error::InvalidSet(overlap));
    }
    let mut out = d.clone();
    for (&c, &v) in a {
        out = out.with(c, v);
    }
    Ok(out)
}

/// Whether assigning `a` on top of `d` leaves every other precrossing forced.
pub fn forces(d: &Pseudodiagram, a: &BTreeMap<usize, CrossingAssignment>) -> Result<bool, Error> {
    forces_with(d, a, &CachedOracle::new(d.shadow_arc().clone()))
}

pub fn forces_with<O: FeasibilityOracle + ?Sized>(
    d: &Pseudodiagram,
    a: &BTreeMap<usize, CrossingAssignment>,
    oracle: &O,
) -> Result<bool, Error> {
    let extended = extend(d, a)?;
    Ok(propagate_with(&extended, oracle).status == PropagationStatus::Completed)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForcingReport {
    /// `None` when no set of at most `searched_up_to` precrossings forces.
    pub forcing_number: Option<usize>,
    pub witness_set: Vec<usize>,
    pub witness_assignment: BTreeMap<usize, CrossingAssignment>,
    pub propagation_trace: Option<PropagationOutcome>,
    /// Round structure of the witness's propagation.
    pub waves: Option<PropagationWaves>,
    /// The witness is every precrossing, so nothing is left to force.
    pub vacuous: bool,
    /// Smallest forcing set that leaves at least one precrossing to derive.
    pub non_vacuous_forcing_number: Option<usize>,
    pub searched_up_to: usize,
    pub precrossings: usize,
}

/// Smallest number of precrossings whose assignment forces the rest.
/// Sizes are tried in increasing order, subsets of each size in
/// lexicographic order and assignments in bit order, so the witness is the
/// first one in that order.
pub fn forcing_number(d: &Pseudodiagram, max_size: Option<usize>) -> Result<ForcingReport, Error> {
    forcing_number_with(d, max_size, &CachedOracle::new(d.shadow_arc().clone()), None)
}

pub fn forcing_number_with<O: FeasibilityOracle + ?Sized>(
    d: &Pseudodiagram,
    max_size: Option<usize>,
    oracle: &O,
    progress: Option<&Progress>,
) -> Result<ForcingReport, Error> {
    let free = d.precrossings();
    if free.is_empty() {
        return Err(Error::NoPrecrossings);
    }
    let limit = max_size.unwrap_or(free.len()).min(free.len());
    completion_count(limit)?;
    if let Some(p) = progress {
        let total: u64 = (1..=limit).map(|k| binomial(free.len(), k) << k).sum();
        p.start(total);
    }

    let mut found: Option<BTreeMap<usize, CrossingAssignment>> = None;
    let mut non_vacuous = None;
    for k in 1..=limit {
        let candidates: Vec<(Vec<usize>, u64)> = free
            .iter()
            .copied()
            .combinations(k)
            .flat_map(|s| (0..1u64 << k).map(move |bits| (s.clone(), bits)))
            .collect();
        let hit = candidates.par_iter().find_first(|(s, bits)| {
            let a = assignment_from_bits(s, *bits);
            let ok = forces_with(d, &a, oracle).expect("subset of precrossings");
            tick(progress);
            ok
        });
        if let Some((s, bits)) = hit {
            found = Some(assignment_from_bits(s, *bits));
            if k < free.len() {
                non_vacuous = Some(k);
            }
            break;
        }
    }

    let Some(a) = found else {
        return Ok(ForcingReport {
            forcing_number: None,
            witness_set: Vec::new(),
            witness_assignment: BTreeMap::new(),
            propagation_trace: None,
            waves: None,
            vacuous: false,
            non_vacuous_forcing_number: None,
            searched_up_to: limit,
            precrossings: free.len(),
        });
    };
    let extended = extend(d, &a)?;
    let k = a.len();
    Ok(ForcingReport {
        forcing_number: Some(k),
        witness_set: a.keys().copied().collect(),
        propagation_trace: Some(propagate_with(&extended, oracle)),
        waves: Some(propagate_waves(&extended, oracle)),
        witness_assignment: a,
        vacuous: k == free.len(),
        non_vacuous_forcing_number: non_vacuous,
        searched_up_to: k,
        precrossings: free.len(),
    })
}

fn assignment_from_bits(s: &[usize], bits: u64) -> BTreeMap<usize, CrossingAssignment> {
    s.iter()
        .enumerate()
        .map(|(j, &c)| (c, CrossingAssignment::from_bit(bits >> j & 1 == 1)))
        .collect()
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

pub const DEFAULT_MAX_FORCED_BUDGET: u64 = 600_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxForcedReport {
    /// Largest number of crossings derived by propagation from any partial
    /// assignment explored.
    pub m: usize,
    pub assignment: BTreeMap<usize, CrossingAssignment>,
    pub derived: Vec<(usize, CrossingAssignment)>,
    pub states_explored: u64,
    /// `3^k`, or `None` when that does not fit in 64 bits.
    pub total_states: Option<u64>,
    pub budget_exceeded: bool,
}

/// Exhaustive search over partial assignments of the precrossings of `d`
/// for the one whose propagation derives the most crossings. State `i`
/// reads precrossing `j` from base-3 digit `j` of `i` (0 unset, 1 first
/// over, 2 second over). Ties go to the smallest state. Partial assignments
/// without a realizable completion are skipped.
pub fn max_forced(d: &Pseudodiagram, budget: Option<u64>) -> MaxForcedReport {
    max_forced_with(d, budget, &CachedOracle::new(d.shadow_arc().clone()), None)
}

pub fn max_forced_with<O: FeasibilityOracle + ?Sized>(
    d: &Pseudodiagram,
    budget: Option<u64>,
    oracle: &O,
    progress: Option<&Progress>,
) -> MaxForcedReport {
    let free = d.precrossings();
    let budget = budget.unwrap_or(DEFAULT_MAX_FORCED_BUDGET);
    let total_states = 3u64.checked_pow(free.len() as u32);
    let explored = total_states.map_or(budget, |t| t.min(budget));
    if let Some(p) = progress {
        p.start(explored);
    }

    let state = |i: u64| -> Pseudodiagram {
        let mut r = d.clone();
        let mut rest = i;
        for &c in &free {
            match rest % 3 {
                1 => r = r.with(c, CrossingAssignment::FirstOver),
                2 => r = r.with(c, CrossingAssignment::SecondOver),
                _ => {}
            }
            rest /= 3;
        }
        r
    };

    let best = (0..explored)
        .into_par_iter()
        .filter_map(|i| {
            let p = state(i);
            let out = if oracle.feasible(&p) {
                Some((propagate_with(&p, oracle).derived.len(), i))
            } else {
                None
            };
            tick(progress);
            out
        })
        .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });

    let (m, assignment, derived) = match best {
        Some((m, i)) => {
            let p = state(i);
            let assignment = p
                .assigned()
                .into_iter()
                .filter(|(c, _)| d.get(*c).is_none())
                .collect();
            (m, assignment, propagate_with(&p, oracle).derived)
        }
        None => (0, BTreeMap::new(), Vec::new()),
    };
    MaxForcedReport {
        m,
        assignment,
        derived,
        states_explored: explored,
        total_states,
        budget_exceeded: total_states.is_none_or(|t| t > budget),
    }
}

/// A distinct minimal infeasible set of assigned crossings, with how many
/// completions it is the deletion-filter core of.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CoreEntry {
    pub crossings: Vec<(usize, CrossingAssignment)>,
    pub resolutions: u64,
}

/// Minimal infeasible cores over every nonrealizable completion of `d`,
/// smallest first.
pub fn infeasible_core_catalog(d: &Pseudodiagram) -> Result<Vec<CoreEntry>, Error> {
    let free = d.precrossings();
    let total = completion_count(free.len())?;
    let counts: BTreeMap<Vec<(usize, CrossingAssignment)>, u64> = (0..total)
        .into_par_iter()
        .filter_map(|i| {
            let r = completion(d, &free, i);
            let core = minimal_infeasible_core(&build_constraints(&r)).ok()?;
            Some(core.into_iter().map(|c| (c, r.get(c).expect("total"))).collect::<Vec<_>>())
        })
        .fold(BTreeMap::new, |mut acc, k| {
            *acc.entry(k).or_insert(0) += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, n) in b {
                *a.entry(k).or_insert(0) += n;
            }
            a
        });
    let mut out: Vec<CoreEntry> =
        counts.into_iter().map(|(crossings, resolutions)| CoreEntry { crossings, resolutions }).collect();
    out.sort_by(|a, b| a.crossings.len().cmp(&b.crossings.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{bowtie, gen_star, square};
    use crate::geometry::ratio;
    use std::sync::Arc;

    fn pentagram() -> Pseudodiagram {
        Pseudodiagram::unassigned(Arc::new(gen_star(5).unwrap()))
    }

    #[test]
    fn square_is_unknot() {
        let d = Pseudodiagram::unassigned(Arc::new(square()));
        for mode in [Mode::Pl, Mode::Smooth] {
            let w = were_set(&d, mode).unwrap();
            assert_eq!(w.to_string_map(), BTreeMap::from([("0_1".into(), "1".into())]));
        }
    }

    #[test]
    fn pentagram_smooth() {
        let w = were_set(&pentagram(), Mode::Smooth).unwrap();
        assert_eq!(w.get("0_1"), ratio(20, 32));
        assert_eq!(w.get("3_1"), ratio(10, 32));
        assert_eq!(w.get("5_1"), ratio(2, 32));
        assert_eq!(w.total(), ratio(1, 1));
    }

    #[test]
    fn pentagram_pl_sums_to_one() {
        let w = were_set(&pentagram(), Mode::Pl).unwrap();
        assert_eq!(w.total(), ratio(1, 1));
        assert_eq!(w.entries.len(), 1);
    }

    #[test]
    fn forces_rejects_overlap() {
        let d = pentagram().with(0, CrossingAssignment::FirstOver);
        let a = BTreeMap::from([(0, CrossingAssignment::FirstOver)]);
        assert_eq!(forces(&d, &a), Err(Error::InvalidSet(vec![0])));
        let a = BTreeMap::from([(9, CrossingAssignment::FirstOver)]);
        assert_eq!(forces(&d, &a), Err(Error::UnknownCrossing(9)));
    }

    #[test]
    fn bowtie_forcing_is_vacuous() {
        let d = Pseudodiagram::unassigned(Arc::new(bowtie()));
        let r = forcing_number(&d, None).unwrap();
        assert_eq!(r.forcing_number, Some(1));
        assert!(r.vacuous);
        assert_eq!(r.non_vacuous_forcing_number, None);
    }

    #[test]
    fn no_precrossings() {
        let d = Pseudodiagram::unassigned(Arc::new(square()));
        assert_eq!(forcing_number(&d, None), Err(Error::NoPrecrossings));
        assert_eq!(max_forced(&d, None).m, 0);
    }

    #[test]
    fn pentagram_forcing() {
        let d = pentagram();
        let r = forcing_number(&d, None).unwrap();
        assert_eq!(r.forcing_number, Some(2));
        assert!(!r.vacuous);
        let trace = r.propagation_trace.unwrap();
        assert_eq!(trace.status, PropagationStatus::Completed);
        assert_eq!(trace.derived.len(), 3);
        for c in 0..5 {
            for v in CrossingAssignment::BOTH {
                assert!(!forces(&d, &BTreeMap::from([(c, v)])).unwrap());
            }
        }
    }

    #[test]
    fn pentagram_max_forced() {
        let r = max_forced(&pentagram(), None);
        assert!(!r.budget_exceeded);
        assert_eq!(r.states_explored, 243);
        assert!(r.m >= 3);
        let tiny = max_forced(&pentagram(), Some(10));
        assert!(tiny.budget_exceeded);
        assert_eq!(tiny.states_explored, 10);
    }

    #[test]
    fn pentagram_cores() {
        let cat = infeasible_core_catalog(&pentagram()).unwrap();
        let total: u64 = cat.iter().map(|e| e.resolutions).sum();
        let w = were_set(&pentagram(), Mode::Pl).unwrap();
        assert_eq!(Rational::from_integer(total.into()) / Rational::from_integer(32.into()), w.empty_prob);
        for e in &cat {
            assert!(e.crossings.len() <= 5);
        }
    }
}
