//! Exact phase-one simplex for systems `A z >= 1` with free `z`.
//!
//! Free variables are split as `z = z⁺ - z⁻`, each row gets a surplus and an
//! artificial column, and the sum of artificials is minimized with Bland's
//! least-index rule, so the method terminates without any tolerance.

use num_traits::{One, Signed, Zero};

use crate::geometry::Rational;

/// Solves `rows · z >= 1` over the rationals. Each row is a sparse list of
/// `(variable, coefficient)`. Returns a solution when one exists.
pub fn solve_at_least_one(rows: &[Vec<(usize, Rational)>], num_vars: usize) -> Option<Vec<Rational>> {
    let m = rows.len();
    if m == 0 {
        return Some(vec![Rational::zero(); num_vars]);
    }

    // Only variables that occur somewhere need columns.
    let mut used: Vec<usize> = rows.iter().flat_map(|r| r.iter().map(|(v, _)| *v)).collect();
    used.sort_unstable();
    used.dedup();
    let col_of = |v: usize| used.binary_search(&v).unwrap();
    let n = used.len();

    // columns: z⁺ [0, n), z⁻ [n, 2n), surplus [2n, 2n+m), artificial [2n+m, 2n+2m), rhs
    let width = 2 * n + 2 * m + 1;
    let rhs = width - 1;
    let art0 = 2 * n + m;
    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(m + 1);
    for (i, row) in rows.iter().enumerate() {
        let mut t = vec![Rational::zero(); width];
        for (v, c) in row {
            let j = col_of(*v);
            t[j] += c;
            t[n + j] -= c;
        }
        t[2 * n + i] = -Rational::one();
        t[art0 + i] = Rational::one();
        t[rhs] = Rational::one();
        tab.push(t);
    }
    // Objective row holds reduced costs of minimizing the artificial sum;
    // its rhs entry is minus the current objective value.
    let mut obj = vec![Rational::zero(); width];
    for t in &tab {
        for j in 0..art0 {
            obj[j] -= &t[j];
        }
        obj[rhs] -= &t[rhs];
    }
    tab.push(obj);
    let mut basis: Vec<usize> = (art0..art0 + m).collect();

    while let Some(entering) = (0..rhs).find(|&j| tab[m][j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if tab[i][entering].is_positive() {
                let ratio = &tab[i][rhs] / &tab[i][entering];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // The phase-one objective is bounded below by zero.
        let (pivot_row, _) = leave.expect("phase-one objective cannot be unbounded");
        pivot(&mut tab, pivot_row, entering);
        basis[pivot_row] = entering;
    }

    if !tab[m][rhs].is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); 2 * n];
    for (i, &b) in basis.iter().enumerate() {
        if b < 2 * n {
            x[b] = tab[i][rhs].clone();
        }
    }
    let mut z = vec![Rational::zero(); num_vars];
    for (j, &v) in used.iter().enumerate() {
        z[v] = &x[j] - &x[n + j];
    }
    Some(z)
}

fn pivot(tab: &mut [Vec<Rational>], r: usize, c: usize) {
    let p = tab[r][c].clone();
    if !p.is_one() {
        for x in tab[r].iter_mut() {
            if !x.is_zero() {
                *x /= &p;
            }
        }
    }
    let pivot_row = tab[r].clone();
    let nz: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for &j in &nz {
            let delta = &f * &pivot_row[j];
            row[j] -= delta;
        }
    }
}
