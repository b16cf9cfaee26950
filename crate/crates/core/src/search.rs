//! Seeded search through random shadows for one with a prescribed PL
//! weighted resolution set.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::Range;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{were_set, Mode};
use crate::diagram::{Pseudodiagram, Shadow};
use crate::generators::gen_random;
use crate::geometry::validate_general_position;
use crate::geometry::PlanePoint;

/// Where candidate shadows come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// [`gen_random`] polygons.
    Random,
    /// A jittered pentagram with extra vertices bent off its edges.
    Pentagram,
}

impl Family {
    pub fn sample(self, num_vertices: usize, seed: u64) -> Option<Shadow> {
        match self {
            Family::Random => gen_random(num_vertices, seed).ok(),
            Family::Pentagram => pentagram_variant(num_vertices, seed),
        }
    }
}

const TIPS: [(i64, i64); 5] = [(0, 100), (59, -81), (-95, 31), (95, 31), (-59, -81)];

/// The pentagram on a radius-100 circle with each tip moved by up to 15 in
/// each coordinate and `num_vertices - 5` extra vertices, each placed on a
/// random edge and pushed sideways by up to 30.
pub fn pentagram_variant(num_vertices: usize, seed: u64) -> Option<Shadow> {
    if num_vertices < 5 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<(i64, i64)> =
        TIPS.iter().map(|&(x, y)| (x + rng.gen_range(-15..=15), y + rng.gen_range(-15..=15))).collect();
    for _ in 5..num_vertices {
        let e = rng.gen_range(0..pts.len());
        let (a, b) = (pts[e], pts[(e + 1) % pts.len()]);
        let f: f64 = rng.gen_range(0.2..0.8);
        let (dx, dy) = ((b.0 - a.0) as f64, (b.1 - a.1) as f64);
        let len = dx.hypot(dy);
        let off: f64 = rng.gen_range(-30.0..30.0);
        let x = a.0 as f64 + f * dx - off * dy / len;
        let y = a.1 as f64 + f * dy + off * dx / len;
        pts.insert(e + 1, (x.round() as i64, y.round() as i64));
    }
    let vertices: Vec<PlanePoint> = pts.iter().map(|&(x, y)| PlanePoint::from_ints(x, y)).collect();
    if !validate_general_position(&vertices).is_empty() {
        return None;
    }
    Shadow::new(vertices).ok()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchTarget {
    pub name: String,
    pub family: Family,
    pub num_vertices: usize,
    pub num_crossings: usize,
    /// Expected PL set in the `to_string_map` form.
    pub were: BTreeMap<String, String>,
}

impl SearchTarget {
    pub fn new(name: &str, family: Family, num_vertices: usize, num_crossings: usize, were: &[(&str, &str)]) -> Self {
        Self {
            name: name.to_string(),
            family,
            num_vertices,
            num_crossings,
            were: were.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        }
    }
}

/// The three small shadows whose weighted resolution sets are quoted
/// without coordinates.
pub fn figure_targets() -> Vec<SearchTarget> {
    vec![
        SearchTarget::new("five-edge", Family::Random, 5, 3, &[("0_1", "3/4"), ("empty", "1/4")]),
        SearchTarget::new("six-edge", Family::Pentagram, 6, 5, &[("0_1", "5/8"), ("3_1", "1/16"), ("empty", "5/16")]),
        SearchTarget::new("seven-edge", Family::Random, 7, 5, &[("0_1", "5/8"), ("3_1", "5/16"), ("empty", "1/16")]),
    ]
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub target: SearchTarget,
    pub seeds: Range<u64>,
    /// Seeds whose polygon had the right number of crossings.
    pub candidates: u64,
    /// Every PL set seen among candidates, with its count and first seed.
    pub seen: BTreeMap<String, (u64, u64)>,
    pub found: Option<(u64, Pseudodiagram)>,
}

impl SearchOutcome {
    /// Deterministic plain-text report.
    pub fn log(&self) -> String {
        let mut out = String::new();
        let t = &self.target;
        let _ = writeln!(out, "target {}: {} vertices, {} crossings, {:?} family", t.name, t.num_vertices, t.num_crossings, t.family);
        let _ = writeln!(out, "  wanted {}", format_map(&t.were));
        let _ = writeln!(out, "  seeds {}..{}, {} candidates", self.seeds.start, self.seeds.end, self.candidates);
        for (were, (count, first)) in &self.seen {
            let _ = writeln!(out, "  seen {count:>6} first seed {first:>8}  {were}");
        }
        match &self.found {
            Some((seed, _)) => {
                let _ = writeln!(out, "  found at seed {seed}");
            }
            None => {
                let _ = writeln!(out, "  not found");
            }
        }
        out
    }
}

fn format_map(m: &BTreeMap<String, String>) -> String {
    let parts: Vec<String> = m.iter().map(|(k, v)| format!("({k}, {v})")).collect();
    format!("{{{}}}", parts.join(", "))
}

const CHUNK: u64 = 256;

/// Scans `seeds` in order. All seeds up to and including the first match
/// are examined, so the log does not depend on thread scheduling.
pub fn search(target: &SearchTarget, seeds: Range<u64>) -> SearchOutcome {
    let mut outcome = SearchOutcome {
        target: target.clone(),
        seeds: seeds.clone(),
        candidates: 0,
        seen: BTreeMap::new(),
        found: None,
    };
    let mut start = seeds.start;
    while start < seeds.end && outcome.found.is_none() {
        let end = (start + CHUNK).min(seeds.end);
        let results: Vec<(u64, Pseudodiagram, BTreeMap<String, String>)> = (start..end)
            .into_par_iter()
            .filter_map(|seed| {
                let shadow = target.family.sample(target.num_vertices, seed)?;
                if shadow.num_crossings() != target.num_crossings {
                    return None;
                }
                let d = Pseudodiagram::unassigned(Arc::new(shadow));
                let w = were_set(&d, Mode::Pl).ok()?.to_string_map();
                Some((seed, d, w))
            })
            .collect();
        for (seed, d, w) in results {
            outcome.candidates += 1;
            let entry = outcome.seen.entry(format_map(&w)).or_insert((0, seed));
            entry.0 += 1;
            if w == target.were {
                outcome.found = Some((seed, d));
                break;
            }
        }
        start = end;
    }
    if let Some((seed, _)) = &outcome.found {
        outcome.seeds = seeds.start..seed + 1;
    }
    outcome
}
