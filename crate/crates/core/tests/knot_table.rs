mod support;

use plknot_core::invariants::{fingerprint_of_pd, reference_table, ReferenceSource};
use support::dt::{pd_from_dt, DT_CODES};

#[test]
fn table_agrees_with_dt_codes() {
    let table = reference_table();
    for (name, dt) in DT_CODES {
        let candidates = pd_from_dt(dt);
        assert!(!candidates.is_empty(), "{name}: no planar embedding");
        let fps: Vec<_> = candidates.iter().map(fingerprint_of_pd).collect();
        assert!(fps.windows(2).all(|w| w[0] == w[1]), "{name}: embeddings disagree");
        let entry = table.get(name).unwrap_or_else(|| panic!("{name} missing from table"));
        if std::env::var("PRINT_DT_PD").is_ok() {
            println!("{name} {:?}", candidates[0].0);
        }
        assert_eq!(entry.fingerprint, fps[0], "{name}");
    }
    assert_eq!(table.entries().len(), DT_CODES.len());
}

#[test]
fn torus_entries_come_from_the_generator() {
    let table = reference_table();
    for (name, n) in [("3_1", 3), ("5_1", 5), ("7_1", 7)] {
        assert_eq!(table.get(name).unwrap().source, ReferenceSource::Torus(n));
    }
}
