//! JSON shapes sent to clients. Rationals travel as reduced `"p/q"` strings.

use std::collections::BTreeMap;

use plknot_core::geometry::{format_rational, PlanePoint};
use plknot_core::realizability::{
    build_constraints, is_partial_realizable, minimal_infeasible_core, propagate_forced, PropagationOutcome,
};
use plknot_core::{CrossingAssignment, Pseudodiagram};
use serde::Serialize;

fn point(p: &PlanePoint) -> [String; 2] {
    [format_rational(&p.x), format_rational(&p.y)]
}

#[derive(Debug, Serialize)]
pub struct CrossingPayload {
    pub id: usize,
    pub edge_a: usize,
    pub edge_b: usize,
    pub s: String,
    pub t: String,
    pub point: [String; 2],
}

#[derive(Debug, Serialize)]
pub struct SessionPayload {
    pub id: String,
    pub revision: u64,
    pub vertices: Vec<[String; 2]>,
    pub crossings: Vec<CrossingPayload>,
    pub assignments: BTreeMap<usize, CrossingAssignment>,
    pub precrossings: Vec<usize>,
}

impl SessionPayload {
    pub fn new(id: &str, revision: u64, d: &Pseudodiagram) -> Self {
        let shadow = d.shadow();
        Self {
            id: id.to_string(),
            revision,
            vertices: shadow.vertices().iter().map(point).collect(),
            crossings: shadow
                .crossings()
                .iter()
                .enumerate()
                .map(|(i, g)| CrossingPayload {
                    id: i,
                    edge_a: g.edge_a,
                    edge_b: g.edge_b,
                    s: format_rational(&g.s),
                    t: format_rational(&g.t),
                    point: point(&g.point),
                })
                .collect(),
            assignments: d.assigned().into_iter().collect(),
            precrossings: d.precrossings(),
        }
    }
}

/// What a client needs after every change: can the current choices still be
/// completed, what do they force, and what is wrong if nothing works.
#[derive(Debug, Serialize)]
pub struct StatusPayload {
    pub session: String,
    pub revision: u64,
    pub assignments: BTreeMap<usize, CrossingAssignment>,
    pub realizable: bool,
    pub witness: Option<Vec<String>>,
    /// Bits of the realizable completion read off the witness.
    pub completion: Option<String>,
    pub propagation: PropagationOutcome,
    pub core: Option<Vec<usize>>,
}

impl StatusPayload {
    pub fn compute(id: &str, revision: u64, d: &Pseudodiagram) -> Self {
        let partial = is_partial_realizable(d);
        let core = if partial.realizable { None } else { minimal_infeasible_core(&build_constraints(d)).ok() };
        Self {
            session: id.to_string(),
            revision,
            assignments: d.assigned().into_iter().collect(),
            realizable: partial.realizable,
            witness: partial.witness.map(|z| z.iter().map(format_rational).collect()),
            completion: partial.completion.and_then(|c| c.bits()),
            propagation: propagate_forced(d),
            core,
        }
    }
}
