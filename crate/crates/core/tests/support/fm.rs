//! Fourier–Motzkin elimination for homogeneous strict systems `A z > 0`.
//! Slow and simple; used only to cross-check the simplex solver.

use std::collections::HashSet;

use num_traits::{Signed, Zero};
use plknot_core::realizability::ConstraintSystem;
use plknot_core::Rational;

pub fn dense(cs: &ConstraintSystem) -> Vec<Vec<Rational>> {
    cs.rows
        .iter()
        .map(|r| {
            let mut row = vec![Rational::zero(); cs.num_vars];
            for (v, c) in &r.coeffs {
                row[*v] += c;
            }
            row
        })
        .collect()
}

/// Scale by the absolute value of the first nonzero entry so that positive
/// multiples of a row coincide.
fn normalize(mut row: Vec<Rational>) -> Vec<Rational> {
    if let Some(lead) = row.iter().find(|c| !c.is_zero()).map(Rational::abs) {
        row.iter_mut().for_each(|c| *c /= &lead);
    }
    row
}

/// Whether some `z` makes every row strictly positive.
pub fn strictly_feasible(rows: &[Vec<Rational>]) -> bool {
    let mut rows: Vec<Vec<Rational>> = {
        let set: HashSet<Vec<Rational>> = rows.iter().cloned().map(normalize).collect();
        set.into_iter().collect()
    };
    loop {
        // 0 > 0 can never hold.
        if rows.iter().any(|r| r.iter().all(Zero::is_zero)) {
            return false;
        }
        let Some(n) = rows.first().map(Vec::len) else {
            return true;
        };
        let count = |j: usize| {
            let pos = rows.iter().filter(|r| r[j].is_positive()).count();
            let neg = rows.iter().filter(|r| r[j].is_negative()).count();
            (pos, neg)
        };
        let Some(j) = (0..n)
            .filter(|&j| rows.iter().any(|r| !r[j].is_zero()))
            .min_by_key(|&j| {
                let (p, q) = count(j);
                p * q
            })
        else {
            return true;
        };
        let (pos, neg): (Vec<_>, Vec<_>) = rows.iter().filter(|r| !r[j].is_zero()).partition(|r| r[j].is_positive());
        let mut next: HashSet<Vec<Rational>> = rows.iter().filter(|r| r[j].is_zero()).cloned().collect();
        // With only one sign present, z_j alone can satisfy those rows.
        for p in &pos {
            for q in &neg {
                let (a, b) = (p[j].clone(), -q[j].clone());
                let combo: Vec<Rational> = p.iter().zip(q.iter()).map(|(x, y)| x * &b + y * &a).collect();
                next.insert(normalize(combo));
            }
        }
        rows = next.into_iter().collect();
    }
}

pub fn system_feasible(cs: &ConstraintSystem) -> bool {
    strictly_feasible(&dense(cs))
}
