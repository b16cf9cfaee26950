//! Shadows, pseudodiagrams and resolutions, plus the Gauss and PD codes read
//! off a resolved diagram.

use std::fmt;
use std::sync::Arc;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::geometry::{
    compute_crossings, cross, CrossingGeometry, GeneralPositionViolation, PlanePoint, Rational,
};

/// A closed planar polygon in general position with its crossings cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shadow {
    vertices: Vec<PlanePoint>,
    crossings: Vec<CrossingGeometry>,
}

impl Shadow {
    pub fn new(vertices: Vec<PlanePoint>) -> Result<Self, GeneralPositionViolation> {
        let crossings = compute_crossings(&vertices)?;
        Ok(Self { vertices, crossings })
    }

    pub fn from_ints(coords: &[(i64, i64)]) -> Result<Self, GeneralPositionViolation> {
        Self::new(coords.iter().map(|&(x, y)| PlanePoint::from_ints(x, y)).collect())
    }

    pub fn vertices(&self) -> &[PlanePoint] {
        &self.vertices
    }

    pub fn crossings(&self) -> &[CrossingGeometry] {
        &self.crossings
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_crossings(&self) -> usize {
        self.crossings.len()
    }

    /// Start and end vertex indices of edge `k`.
    pub fn edge_ends(&self, k: usize) -> (usize, usize) {
        (k, (k + 1) % self.vertices.len())
    }

    /// Direction vector of edge `k`.
    pub fn edge_direction(&self, k: usize) -> PlanePoint {
        let (a, b) = self.edge_ends(k);
        self.vertices[b].sub(&self.vertices[a])
    }

    /// Crossings met along the polygon, starting at vertex 0 and following
    /// edges in order: `(crossing id, on edge_a?)` per passage.
    pub fn passages(&self) -> Vec<(usize, bool)> {
        let mut out = Vec::with_capacity(2 * self.crossings.len());
        for k in 0..self.vertices.len() {
            let mut on_edge: Vec<(&Rational, usize, bool)> = Vec::new();
            for (id, c) in self.crossings.iter().enumerate() {
                if c.edge_a == k {
                    on_edge.push((&c.s, id, true));
                }
                if c.edge_b == k {
                    on_edge.push((&c.t, id, false));
                }
            }
            on_edge.sort();
            out.extend(on_edge.into_iter().map(|(_, id, first)| (id, first)));
        }
        out
    }
}

/// Over/under information at one crossing. `FirstOver` means the edge with
/// the smaller index passes over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingAssignment {
    FirstOver,
    SecondOver,
}

impl CrossingAssignment {
    pub fn flipped(self) -> Self {
        match self {
            Self::FirstOver => Self::SecondOver,
            Self::SecondOver => Self::FirstOver,
        }
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Self::FirstOver
        } else {
            Self::SecondOver
        }
    }

    pub fn as_bit(self) -> bool {
        self == Self::FirstOver
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::FirstOver => "first_over",
            Self::SecondOver => "second_over",
        }
    }

    pub const BOTH: [CrossingAssignment; 2] = [Self::FirstOver, Self::SecondOver];
}

impl fmt::Display for CrossingAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A shadow together with a partial over/under assignment. Crossings
/// without an entry are precrossings. When every crossing is assigned the
/// pseudodiagram is a resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pseudodiagram {
    shadow: Arc<Shadow>,
    assignment: Vec<Option<CrossingAssignment>>,
}

impl Pseudodiagram {
    /// The shadow itself: nothing assigned.
    pub fn unassigned(shadow: Arc<Shadow>) -> Self {
        let c = shadow.num_crossings();
        Self { shadow, assignment: vec![None; c] }
    }

    pub fn with_assignment(
        shadow: Arc<Shadow>,
        assignment: Vec<Option<CrossingAssignment>>,
    ) -> Result<Self, Error> {
        if assignment.len() != shadow.num_crossings() {
            return Err(Error::LengthMismatch {
                expected: shadow.num_crossings(),
                got: assignment.len(),
            });
        }
        Ok(Self { shadow, assignment })
    }

    /// Total assignment from one bit per crossing id (`1` = first over).
    pub fn resolution_from_bits(shadow: Arc<Shadow>, bits: &[bool]) -> Result<Self, Error> {
        let assignment = bits.iter().map(|&b| Some(CrossingAssignment::from_bit(b))).collect();
        Self::with_assignment(shadow, assignment)
    }

    /// Resolution number `index`, where bit `i` of `index` is crossing `i`.
    pub fn resolution_from_index(shadow: Arc<Shadow>, index: u64) -> Self {
        let c = shadow.num_crossings();
        let assignment = (0..c)
            .map(|i| Some(CrossingAssignment::from_bit(index >> i & 1 == 1)))
            .collect();
        Self { shadow, assignment }
    }

    pub fn shadow(&self) -> &Shadow {
        &self.shadow
    }

    pub fn shadow_arc(&self) -> &Arc<Shadow> {
        &self.shadow
    }

    pub fn assignment(&self) -> &[Option<CrossingAssignment>] {
        &self.assignment
    }

    pub fn get(&self, id: usize) -> Option<CrossingAssignment> {
        self.assignment.get(id).copied().flatten()
    }

    pub fn set(&mut self, id: usize, value: Option<CrossingAssignment>) -> Result<(), Error> {
        let slot = self
            .assignment
            .get_mut(id)
            .ok_or(Error::UnknownCrossing(id))?;
        *slot = value;
        Ok(())
    }

    pub fn with(&self, id: usize, value: CrossingAssignment) -> Self {
        let mut next = self.clone();
        next.assignment[id] = Some(value);
        next
    }

    pub fn is_total(&self) -> bool {
        self.assignment.iter().all(Option::is_some)
    }

    pub fn precrossings(&self) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&i| self.assignment[i].is_none()).collect()
    }

    pub fn assigned(&self) -> Vec<(usize, CrossingAssignment)> {
        self.assignment
            .iter()
            .enumerate()
            .filter_map(|(i, a)| a.map(|a| (i, a)))
            .collect()
    }

    /// Flips every assigned crossing.
    pub fn mirror(&self) -> Self {
        Self {
            shadow: Arc::clone(&self.shadow),
            assignment: self.assignment.iter().map(|a| a.map(CrossingAssignment::flipped)).collect(),
        }
    }

    /// Bit string in crossing-id order, `None` if any crossing is unassigned.
    pub fn bits(&self) -> Option<String> {
        self.assignment
            .iter()
            .map(|a| a.map(|a| if a.as_bit() { '1' } else { '0' }))
            .collect()
    }

    fn require_total(&self) -> Result<(), Error> {
        if self.is_total() {
            Ok(())
        } else {
            Err(Error::PartialAssignment)
        }
    }

    /// Whether the edge-`first`-side strand goes over at crossing `id`.
    fn first_is_over(&self, id: usize) -> bool {
        self.assignment[id] == Some(CrossingAssignment::FirstOver)
    }
}

/// Parses a `0`/`1` string into bits. Anything else is rejected.
pub fn parse_bits(s: &str) -> Result<Vec<bool>, Error> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::InvalidBits(format!("unexpected character {other:?}"))),
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strand {
    Over,
    Under,
}

/// Traversal sequence of `(crossing id, over|under)` pairs.
pub fn gauss_sequence(r: &Pseudodiagram) -> Result<Vec<(usize, Strand)>, Error> {
    r.require_total()?;
    Ok(r
        .shadow
        .passages()
        .into_iter()
        .map(|(id, on_first)| {
            let over = r.first_is_over(id) == on_first;
            (id, if over { Strand::Over } else { Strand::Under })
        })
        .collect())
}

/// Sign of the crossing under the standard right-hand convention.
pub fn crossing_sign(r: &Pseudodiagram, id: usize) -> Result<i32, Error> {
    let a = r.get(id).ok_or(Error::PartialAssignment)?;
    let c = &r.shadow.crossings()[id];
    let da = r.shadow.edge_direction(c.edge_a);
    let db = r.shadow.edge_direction(c.edge_b);
    let (over, under) = match a {
        CrossingAssignment::FirstOver => (da, db),
        CrossingAssignment::SecondOver => (db, da),
    };
    Ok(if cross(&over, &under).is_positive() { 1 } else { -1 })
}

pub fn writhe(r: &Pseudodiagram) -> Result<i32, Error> {
    r.require_total()?;
    (0..r.shadow.num_crossings()).map(|i| crossing_sign(r, i)).sum()
}

/// Planar-diagram code: one `[a, b, c, d]` tuple per crossing (in crossing-id
/// order), labels listed counterclockwise starting from the incoming
/// under-strand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdCode(pub Vec<[u32; 4]>);

impl PdCode {
    pub fn num_crossings(&self) -> usize {
        self.0.len()
    }

    /// Swaps over and under at every crossing.
    pub fn mirror(&self) -> Self {
        let n = 2 * self.0.len() as u32;
        PdCode(
            self.0
                .iter()
                .map(|&[a, b, c, d]| {
                    // With two arcs the successor test is ambiguous; there the
                    // over strand always enters on the label the under strand
                    // leaves on.
                    let b_incoming = if n == 2 { b == c } else { d == b % n + 1 };
                    if b_incoming {
                        [b, c, d, a]
                    } else {
                        [d, a, b, c]
                    }
                })
                .collect(),
        )
    }

    /// Checks the label structure: each of `1..=2c` appears exactly twice and
    /// the arcs link up into a single closed component.
    pub fn validate(&self) -> Result<(), Error> {
        let n = 2 * self.0.len() as u32;
        let mut count = vec![0u32; n as usize + 1];
        for x in &self.0 {
            for &l in x {
                if l == 0 || l > n {
                    return Err(Error::InvalidPdCode(format!("label {l} out of range 1..={n}")));
                }
                count[l as usize] += 1;
            }
        }
        if let Some(l) = (1..=n).find(|&l| count[l as usize] != 2) {
            return Err(Error::InvalidPdCode(format!("label {l} appears {} times", count[l as usize])));
        }
        if self.components() != 1 {
            return Err(Error::InvalidPdCode("diagram is not a single component".into()));
        }
        Ok(())
    }

    /// Number of components: strands pass a→c and b→d through each crossing.
    pub fn components(&self) -> usize {
        let n = 2 * self.0.len();
        if n == 0 {
            return 1;
        }
        let mut parent: Vec<usize> = (0..=n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &[a, b, c, d] in &self.0 {
            for (x, y) in [(a, c), (b, d)] {
                let (rx, ry) = (find(&mut parent, x as usize), find(&mut parent, y as usize));
                parent[rx] = ry;
            }
        }
        let mut roots: Vec<usize> = (1..=n).map(|x| find(&mut parent, x)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }
}

impl fmt::Display for PdCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|[a, b, c, d]| format!("X[{a},{b},{c},{d}]"))
            .collect();
        write!(f, "PD[{}]", parts.join(", "))
    }
}

/// PD code of a resolution. Arc `k + 1` is the stretch of polygon entering
/// the `k`-th passage of the traversal that starts at vertex 0.
pub fn pd_code(r: &Pseudodiagram) -> Result<PdCode, Error> {
    r.require_total()?;
    let c = r.shadow.num_crossings();
    if c == 0 {
        return Err(Error::NoCrossings);
    }
    let passages = r.shadow.passages();
    let total = passages.len() as u32;
    // (incoming, outgoing) labels for each crossing's first/second-edge passage
    let mut on_a = vec![(0u32, 0u32); c];
    let mut on_b = vec![(0u32, 0u32); c];
    for (k, &(id, on_first)) in passages.iter().enumerate() {
        let incoming = k as u32 + 1;
        let outgoing = (k as u32 + 1) % total + 1;
        if on_first {
            on_a[id] = (incoming, outgoing);
        } else {
            on_b[id] = (incoming, outgoing);
        }
    }
    let tuples = (0..c)
        .map(|id| {
            let g = &r.shadow.crossings()[id];
            let da = r.shadow.edge_direction(g.edge_a);
            let db = r.shadow.edge_direction(g.edge_b);
            let ((ui, uo), (oi, oo), du, dov) = if r.first_is_over(id) {
                (on_b[id], on_a[id], db, da)
            } else {
                (on_a[id], on_b[id], da, db)
            };
            // Counterclockwise from the incoming under-strand the next arm is
            // the incoming over-strand when the over strand runs right to left.
            if cross(&du, &dov).is_positive() {
                [ui, oi, uo, oo]
            } else {
                [ui, oo, uo, oi]
            }
        })
        .collect();
    Ok(PdCode(tuples))
}

/// The alternating resolution: passages alternate over, under, over, ...
/// starting with `start_over` at the first passage after vertex 0.
pub fn alternating_resolution(shadow: Arc<Shadow>, start_over: bool) -> Pseudodiagram {
    let mut assignment = vec![None; shadow.num_crossings()];
    for (k, (id, on_first)) in shadow.passages().into_iter().enumerate() {
        let over_here = (k % 2 == 0) == start_over;
        if assignment[id].is_none() {
            let first_over = over_here == on_first;
            assignment[id] = Some(CrossingAssignment::from_bit(first_over));
        }
    }
    Pseudodiagram { shadow, assignment }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bowtie() -> Arc<Shadow> {
        Arc::new(Shadow::from_ints(&[(0, 0), (4, 0), (0, 3), (4, 3)]).unwrap())
    }

    fn pentagram() -> Arc<Shadow> {
        Arc::new(Shadow::from_ints(&[(0, 4), (3, -4), (-4, 1), (4, 1), (-3, -4)]).unwrap())
    }

    #[test]
    fn bits_map_to_crossing_ids() {
        let r = Pseudodiagram::resolution_from_bits(bowtie(), &[true]).unwrap();
        assert_eq!(r.get(0), Some(CrossingAssignment::FirstOver));
        let r = Pseudodiagram::resolution_from_bits(pentagram(), &parse_bits("00000").unwrap()).unwrap();
        assert!(r.assignment().iter().all(|a| *a == Some(CrossingAssignment::SecondOver)));
        assert!(Pseudodiagram::resolution_from_bits(pentagram(), &[true]).is_err());
    }

    #[test]
    fn bit_encoding_is_a_bijection() {
        let s = pentagram();
        let mut seen = std::collections::HashSet::new();
        for i in 0..32u64 {
            let r = Pseudodiagram::resolution_from_index(Arc::clone(&s), i);
            let bits = r.bits().unwrap();
            let back = Pseudodiagram::resolution_from_bits(Arc::clone(&s), &parse_bits(&bits).unwrap()).unwrap();
            assert_eq!(back, r);
            assert!(seen.insert(bits));
        }
        assert_eq!(seen.len(), 32);
    }

    #[test]
    fn mirror_flips_only_assigned() {
        let s = pentagram();
        let all_first = Pseudodiagram::resolution_from_bits(Arc::clone(&s), &[true; 5]).unwrap();
        assert_eq!(all_first.mirror(), Pseudodiagram::resolution_from_bits(Arc::clone(&s), &[false; 5]).unwrap());
        assert_eq!(all_first.mirror().mirror(), all_first);

        let mut partial = Pseudodiagram::unassigned(s);
        partial.set(1, Some(CrossingAssignment::FirstOver)).unwrap();
        partial.set(3, Some(CrossingAssignment::SecondOver)).unwrap();
        let m = partial.mirror();
        assert_eq!(m.get(1), Some(CrossingAssignment::SecondOver));
        assert_eq!(m.get(3), Some(CrossingAssignment::FirstOver));
        assert_eq!(m.precrossings(), vec![0, 2, 4]);
    }

    #[test]
    fn gauss_sequences() {
        let r = Pseudodiagram::resolution_from_bits(bowtie(), &[true]).unwrap();
        let g = gauss_sequence(&r).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].0, g[1].0);
        assert_ne!(g[0].1, g[1].1);

        let r = Pseudodiagram::resolution_from_bits(pentagram(), &parse_bits("10110").unwrap()).unwrap();
        let g = gauss_sequence(&r).unwrap();
        assert_eq!(g.len(), 10);
        for id in 0..5 {
            assert_eq!(g.iter().filter(|x| **x == (id, Strand::Over)).count(), 1);
            assert_eq!(g.iter().filter(|x| **x == (id, Strand::Under)).count(), 1);
        }

        let sq = Arc::new(Shadow::from_ints(&[(0, 0), (4, 0), (4, 4), (0, 4)]).unwrap());
        assert!(gauss_sequence(&Pseudodiagram::unassigned(sq)).unwrap().is_empty());
        assert_eq!(gauss_sequence(&Pseudodiagram::unassigned(pentagram())), Err(Error::PartialAssignment));
    }

    #[test]
    fn pd_code_structure() {
        let r = Pseudodiagram::resolution_from_bits(bowtie(), &[true]).unwrap();
        let pd = pd_code(&r).unwrap();
        assert_eq!(pd.num_crossings(), 1);
        pd.validate().unwrap();

        let sq = Arc::new(Shadow::from_ints(&[(0, 0), (4, 0), (4, 4), (0, 4)]).unwrap());
        assert_eq!(pd_code(&Pseudodiagram::unassigned(sq)), Err(Error::NoCrossings));

        for i in 0..32 {
            let r = Pseudodiagram::resolution_from_index(pentagram(), i);
            let pd = pd_code(&r).unwrap();
            pd.validate().unwrap();
            // mirror exchanges over/under roles
            assert_eq!(pd_code(&r.mirror()).unwrap(), pd.mirror());
        }
    }

    #[test]
    fn pd_code_agrees_with_gauss_traversal() {
        // Oracle: walk the Gauss sequence and check that every passage's
        // incoming/outgoing labels sit on the matching strand of its tuple.
        for i in 0..32 {
            let r = Pseudodiagram::resolution_from_index(pentagram(), i);
            let g = gauss_sequence(&r).unwrap();
            let pd = pd_code(&r).unwrap();
            let n = g.len() as u32;
            for (k, (id, strand)) in g.iter().enumerate() {
                let inc = k as u32 + 1;
                let out = inc % n + 1;
                let [a, b, c, d] = pd.0[*id];
                match strand {
                    Strand::Under => assert_eq!((a, c), (inc, out)),
                    Strand::Over => assert!((b, d) == (inc, out) || (d, b) == (inc, out)),
                }
            }
        }
    }

    #[test]
    fn alternating_resolution_alternates() {
        let r = alternating_resolution(pentagram(), true);
        let g = gauss_sequence(&r).unwrap();
        for (k, (_, s)) in g.iter().enumerate() {
            assert_eq!(*s == Strand::Over, k % 2 == 0);
        }
        assert_eq!(alternating_resolution(pentagram(), false), r.mirror());
    }
}
