//! Shadows shared by the property and acceptance tests.

use std::path::PathBuf;
use std::sync::Arc;

use plknot_core::generators::{bowtie, gen_random, gen_star, gen_torus, square};
use plknot_core::io::read_shadow;
use plknot_core::{Pseudodiagram, Shadow};

pub struct Named {
    pub name: String,
    pub shadow: Arc<Shadow>,
}

impl Named {
    fn new(name: impl Into<String>, shadow: Shadow) -> Self {
        Named { name: name.into(), shadow: Arc::new(shadow) }
    }

    pub fn unassigned(&self) -> Pseudodiagram {
        Pseudodiagram::unassigned(Arc::clone(&self.shadow))
    }

    pub fn edges(&self) -> usize {
        self.shadow.num_vertices()
    }

    pub fn crossings(&self) -> usize {
        self.shadow.num_crossings()
    }
}

pub fn pentagram() -> Arc<Shadow> {
    Arc::new(gen_star(5).unwrap())
}

pub fn figure_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/figures").join(format!("{name}.json"))
}

pub fn figure(name: &str) -> Pseudodiagram {
    let bytes = std::fs::read(figure_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
    read_shadow(&bytes).unwrap()
}

/// Random polygons with `vertices` edges, for seeds `0..seeds`.
pub fn random(vertices: usize, seeds: u64) -> Vec<Named> {
    (0..seeds)
        .map(|s| Named::new(format!("random-{vertices}-{s}"), gen_random(vertices, s).unwrap()))
        .collect()
}

/// Generated families, bundled figure instances and a few random polygons
/// of each size from four to eight edges.
pub fn corpus() -> Vec<Named> {
    let mut out = vec![
        Named::new("square", square()),
        Named::new("bowtie", bowtie()),
        Named::new("star-5", gen_star(5).unwrap()),
        Named::new("star-7", gen_star(7).unwrap()),
    ];
    for n in [3, 5, 7] {
        out.push(Named::new(format!("torus-{n}"), gen_torus(n, 2).unwrap()));
    }
    for name in ["five-edge", "seven-edge"] {
        let d = figure(name);
        out.push(Named { name: format!("figure-{name}"), shadow: Arc::clone(d.shadow_arc()) });
    }
    for n in 4..=8 {
        out.extend(random(n, 6));
    }
    out
}

/// Corpus shadows with at most `max` crossings.
pub fn small(max: usize) -> Vec<Named> {
    corpus().into_iter().filter(|s| s.crossings() <= max).collect()
}

/// Every shadow in the corpus with at most five edges, plus extra random
/// quadrilaterals and pentagons.
pub fn few_edges() -> Vec<Named> {
    let mut out: Vec<Named> = corpus().into_iter().filter(|s| s.edges() <= 5).collect();
    out.extend(random(4, 60));
    out.extend(random(5, 120));
    out
}

pub fn all_resolutions(shadow: &Arc<Shadow>) -> impl Iterator<Item = Pseudodiagram> + '_ {
    (0..1u64 << shadow.num_crossings()).map(move |i| Pseudodiagram::resolution_from_index(Arc::clone(shadow), i))
}
