//! The shadow document: vertices as exact rationals plus the crossing
//! assignment keyed by crossing id.
//!
//! ```json
//! {
//!   "version": 1,
//!   "vertices": [["0", "4"], ["3", "-4"], ["-4", "1"]],
//!   "assignments": {"0": "first_over"}
//! }
//! ```
//!
//! Crossing ids are not stored. They are recomputed from the vertices, and a
//! document assigning an id that does not exist is rejected.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{de, Deserialize, Deserializer};

use crate::diagram::{CrossingAssignment, Pseudodiagram, Shadow};
use crate::error::Error;
use crate::geometry::{format_rational, parse_rational, PlanePoint, Rational};

pub const FORMAT_VERSION: u32 = 1;

struct RationalText(Rational);

impl<'de> Deserialize<'de> for RationalText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map(RationalText).map_err(de::Error::custom)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    version: u32,
    vertices: Vec<[RationalText; 2]>,
    #[serde(default)]
    assignments: BTreeMap<usize, CrossingAssignment>,
}

pub fn read_shadow(bytes: &[u8]) -> Result<Pseudodiagram, Error> {
    let doc: Document = serde_json::from_slice(bytes).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if doc.version != FORMAT_VERSION {
        return Err(Error::Validation(format!("unsupported version {}", doc.version)));
    }
    if doc.vertices.len() < 3 {
        return Err(Error::Validation(format!("need at least 3 vertices, got {}", doc.vertices.len())));
    }
    let vertices = doc.vertices.into_iter().map(|[x, y]| PlanePoint::new(x.0, y.0)).collect();
    let shadow = Shadow::new(vertices).map_err(|e| Error::Validation(e.to_string()))?;
    let mut p = Pseudodiagram::unassigned(Arc::new(shadow));
    for (id, value) in doc.assignments {
        p.set(id, Some(value))
            .map_err(|_| Error::Validation(format!("crossing {id} does not exist")))?;
    }
    Ok(p)
}

/// Canonical text: fixed key order, reduced rationals, ids in numeric order.
pub fn write_shadow(p: &Pseudodiagram) -> String {
    let mut out = String::new();
    out.push_str("{\n  \"version\": 1,\n  \"vertices\": [\n");
    let vs = p.shadow().vertices();
    for (i, v) in vs.iter().enumerate() {
        let sep = if i + 1 < vs.len() { "," } else { "" };
        let _ = writeln!(out, "    [\"{}\", \"{}\"]{sep}", format_rational(&v.x), format_rational(&v.y));
    }
    out.push_str("  ],\n  \"assignments\": {");
    let assigned = p.assigned();
    if assigned.is_empty() {
        out.push_str("}\n}\n");
        return out;
    }
    out.push('\n');
    for (i, (id, value)) in assigned.iter().enumerate() {
        let sep = if i + 1 < assigned.len() { "," } else { "" };
        let _ = writeln!(out, "    \"{id}\": \"{}\"{sep}", value.as_str());
    }
    out.push_str("  }\n}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_star;
    use crate::geometry::ratio;

    #[test]
    fn round_trip() {
        let s = Arc::new(gen_star(5).unwrap());
        let p = Pseudodiagram::unassigned(s)
            .with(1, CrossingAssignment::FirstOver)
            .with(3, CrossingAssignment::SecondOver);
        let text = write_shadow(&p);
        let back = read_shadow(text.as_bytes()).unwrap();
        assert_eq!(back, p);
        assert_eq!(write_shadow(&back), text);
    }

    #[test]
    fn fractions_survive() {
        let doc = r#"{"version":1,"vertices":[["1/3","0"],["4","2/-4"],["0","7/2"]]}"#;
        let p = read_shadow(doc.as_bytes()).unwrap();
        assert_eq!(p.shadow().vertices()[1].y, ratio(-1, 2));
        let text = write_shadow(&p);
        assert!(text.contains(r#"["4", "-1/2"]"#));
        assert_eq!(read_shadow(text.as_bytes()).unwrap(), p);
    }

    #[test]
    fn too_few_vertices() {
        let doc = r#"{"version":1,"vertices":[["0","0"],["1","0"]],"assignments":{}}"#;
        assert!(matches!(read_shadow(doc.as_bytes()), Err(Error::Validation(_))));
    }

    #[test]
    fn unknown_crossing() {
        let doc = r#"{"version":1,"vertices":[["0","0"],["4","0"],["4","4"],["0","4"]],
            "assignments":{"0":"first_over"}}"#;
        assert!(matches!(read_shadow(doc.as_bytes()), Err(Error::Validation(m)) if m.contains("crossing 0")));
    }

    #[test]
    fn parse_errors_have_positions() {
        let doc = "{\"version\":1,\n\"vertices\":[[\"1/0\",\"0\"]]}";
        match read_shadow(doc.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(read_shadow(b"{\"version\":1,"), Err(Error::Parse { .. })));
        let doc = r#"{"version":1,"vertices":[],"extra":0}"#;
        assert!(matches!(read_shadow(doc.as_bytes()), Err(Error::Parse { .. })));
        let doc = r#"{"version":1,"vertices":[["0","0"],["4","0"],["0","3"],["4","3"]],"assignments":{"0":"sideways"}}"#;
        assert!(matches!(read_shadow(doc.as_bytes()), Err(Error::Parse { .. })));
    }

    #[test]
    fn degenerate_geometry() {
        let doc = r#"{"version":1,"vertices":[["0","0"],["2","0"],["1","0"],["1","1"]]}"#;
        assert!(matches!(read_shadow(doc.as_bytes()), Err(Error::Validation(_))));
    }
}
