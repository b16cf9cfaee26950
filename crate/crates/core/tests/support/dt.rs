//! Dowker–Thistlethwaite codes of alternating knots turned into PD codes by
//! brute force over crossing orientations, keeping the ones whose rotation
//! system is planar (V - E + F = 2).

use plknot_core::PdCode;

/// DT codes of the prime knots through seven crossings.
pub const DT_CODES: &[(&str, &[u32])] = &[
    ("3_1", &[4, 6, 2]),
    ("4_1", &[4, 6, 8, 2]),
    ("5_1", &[6, 8, 10, 2, 4]),
    ("5_2", &[4, 8, 10, 2, 6]),
    ("6_1", &[4, 8, 12, 10, 2, 6]),
    ("6_2", &[4, 8, 10, 12, 2, 6]),
    ("6_3", &[4, 8, 10, 2, 12, 6]),
    ("7_1", &[8, 10, 12, 14, 2, 4, 6]),
    ("7_2", &[4, 10, 14, 12, 2, 8, 6]),
    ("7_3", &[6, 10, 12, 14, 2, 4, 8]),
    ("7_4", &[6, 10, 12, 14, 4, 2, 8]),
    ("7_5", &[4, 10, 12, 14, 2, 8, 6]),
    ("7_6", &[4, 8, 12, 2, 14, 6, 10]),
    ("7_7", &[4, 8, 10, 12, 2, 14, 6]),
];

fn faces(pd: &PdCode) -> usize {
    let n = pd.0.len();
    // dart = 4 * crossing + slot
    let mut other_end = vec![usize::MAX; 4 * n];
    let mut first_seen: Vec<Option<usize>> = vec![None; 2 * n + 1];
    for (x, tuple) in pd.0.iter().enumerate() {
        for (slot, &l) in tuple.iter().enumerate() {
            let dart = 4 * x + slot;
            match first_seen[l as usize] {
                None => first_seen[l as usize] = Some(dart),
                Some(o) => {
                    other_end[o] = dart;
                    other_end[dart] = o;
                }
            }
        }
    }
    let next_ccw = |d: usize| 4 * (d / 4) + (d % 4 + 1) % 4;
    let mut seen = vec![false; 4 * n];
    let mut count = 0;
    for start in 0..4 * n {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            d = next_ccw(other_end[d]);
        }
    }
    count
}

/// All planar PD codes for the alternating diagram with this DT code.
pub fn pd_from_dt(dt: &[u32]) -> Vec<PdCode> {
    let n = dt.len();
    let total = 2 * n as u32;
    // positions p in 1..=2n; crossing i is met at 2i+1 (odd) and dt[i] (even)
    let succ = |p: u32| p % total + 1;
    let mut out = Vec::new();
    for signs in 0u32..(1 << n) {
        let tuples: Vec<[u32; 4]> = (0..n)
            .map(|i| {
                let odd = 2 * i as u32 + 1;
                let even = dt[i];
                // alternating: odd passages under, even passages over
                let (u, o) = (odd, even);
                if signs >> i & 1 == 0 {
                    [u, o, succ(u), succ(o)]
                } else {
                    [u, succ(o), succ(u), o]
                }
            })
            .collect();
        let pd = PdCode(tuples);
        if faces(&pd) == n + 2 {
            out.push(pd);
        }
    }
    out
}
