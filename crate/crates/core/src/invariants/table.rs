use std::collections::HashMap;
use std::sync::Arc;

use once_cell::sync::Lazy;
use serde::Deserialize;

use super::{fingerprint_of_pd, jones_fingerprint, KnotClass, KnotFingerprint, LaurentPolynomial};
use crate::diagram::{alternating_resolution, PdCode};
use crate::generators::gen_torus;

const TABLE_JSON: &str = include_str!("../../data/knot_table.json");

#[derive(Debug, Deserialize)]
struct TableFile {
    version: u32,
    knots: Vec<RawEntry>,
}

#[derive(Debug, Deserialize)]
struct RawEntry {
    name: String,
    #[serde(default)]
    torus: Option<usize>,
    #[serde(default)]
    pd: Option<Vec<[u32; 4]>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReferenceSource {
    /// Alternating resolution of `gen_torus(n, 2)`.
    Torus(usize),
    Pd(PdCode),
}

#[derive(Clone, Debug)]
pub struct ReferenceEntry {
    pub name: String,
    pub source: ReferenceSource,
    pub fingerprint: KnotFingerprint,
}

/// Knots through seven crossings, fingerprints computed when loaded.
#[derive(Debug)]
pub struct ReferenceTable {
    entries: Vec<ReferenceEntry>,
    by_jones: HashMap<LaurentPolynomial, usize>,
}

impl ReferenceTable {
    pub fn from_json(text: &str) -> Result<Self, String> {
        let file: TableFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if file.version != 1 {
            return Err(format!("unsupported table version {}", file.version));
        }
        let mut entries = Vec::new();
        for raw in file.knots {
            let (source, fingerprint) = match (raw.torus, raw.pd) {
                (Some(n), None) => {
                    let shadow = gen_torus(n, 2).map_err(|e| e.to_string())?;
                    let r = alternating_resolution(Arc::new(shadow), true);
                    let fp = jones_fingerprint(&r).map_err(|e| e.to_string())?;
                    (ReferenceSource::Torus(n), fp)
                }
                (None, Some(tuples)) => {
                    let pd = PdCode(tuples);
                    pd.validate().map_err(|e| format!("{}: {e}", raw.name))?;
                    let fp = fingerprint_of_pd(&pd);
                    (ReferenceSource::Pd(pd), fp)
                }
                _ => return Err(format!("{}: need exactly one of torus or pd", raw.name)),
            };
            entries.push(ReferenceEntry { name: raw.name, source, fingerprint });
        }
        let mut by_jones = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            if by_jones.insert(e.fingerprint.jones_normalized.clone(), i).is_some() {
                return Err(format!("{} shares its Jones fingerprint with another entry", e.name));
            }
        }
        Ok(Self { entries, by_jones })
    }

    pub fn entries(&self) -> &[ReferenceEntry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&ReferenceEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Name for a fingerprint. The Jones part picks the entry; a determinant
    /// mismatch means the fingerprint is not really that knot.
    pub fn classify(&self, fp: &KnotFingerprint) -> KnotClass {
        if fp.jones_normalized == LaurentPolynomial::one() && fp.determinant == 1 {
            return KnotClass::unknot();
        }
        match self.by_jones.get(&fp.jones_normalized) {
            Some(&i) if self.entries[i].fingerprint.determinant == fp.determinant => {
                KnotClass(self.entries[i].name.clone())
            }
            _ => KnotClass(format!("unknown:{fp}")),
        }
    }
}

static TABLE: Lazy<ReferenceTable> =
    Lazy::new(|| ReferenceTable::from_json(TABLE_JSON).expect("bundled knot table is valid"));

pub fn reference_table() -> &'static ReferenceTable {
    &TABLE
}
