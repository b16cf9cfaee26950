//! Knot determinant as `|Δ(-1)|`, from an Alexander matrix built by walking
//! the labels of a PD code. Independent of the library's coloring matrix.

use num_traits::{Signed, Zero};
use plknot_core::{PdCode, Rational};

/// Arc index of every label: a new arc starts wherever the walk leaves a
/// crossing on the under strand.
fn arcs(pd: &PdCode) -> (Vec<usize>, usize) {
    let n = 2 * pd.0.len();
    let starts_arc: Vec<bool> = (0..=n).map(|l| pd.0.iter().any(|x| x[2] as usize == l)).collect();
    let mut arc = vec![0; n + 1];
    let mut current = 0;
    for l in 1..=n {
        if l > 1 && starts_arc[l] {
            current += 1;
        }
        arc[l] = current;
    }
    // The last run wraps around into the first unless label 1 starts it.
    let count = if starts_arc[1] {
        current + 1
    } else {
        for l in (1..=n).rev() {
            if arc[l] != current {
                break;
            }
            arc[l] = 0;
        }
        current.max(1)
    };
    (arc, count)
}

fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut acc = Rational::from_integer(1.into());
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            m.swap(p, k);
            acc = -acc;
        }
        let pivot = m[k][k].clone();
        acc *= &pivot;
        let top = m[k].clone();
        for row in m.iter_mut().skip(k + 1) {
            let f = &row[k] / &pivot;
            for (x, t) in row.iter_mut().zip(&top).skip(k) {
                *x -= &f * t;
            }
        }
    }
    acc
}

/// Rows `(1-t)·over + t·under_in - under_out` at `t = -1`; any principal
/// minor of order `c - 1` gives `±Δ(-1)`.
pub fn determinant(pd: &PdCode) -> u64 {
    let c = pd.0.len();
    if c <= 1 {
        return 1;
    }
    let (arc, k) = arcs(pd);
    let mut m = vec![vec![Rational::zero(); k]; c];
    for (row, &[a, b, cc, _]) in pd.0.iter().enumerate() {
        m[row][arc[b as usize]] += Rational::from_integer(2.into());
        m[row][arc[a as usize]] -= Rational::from_integer(1.into());
        m[row][arc[cc as usize]] -= Rational::from_integer(1.into());
    }
    let minor: Vec<Vec<Rational>> = m[1..].iter().map(|r| r[1..].to_vec()).collect();
    let d = det(minor).abs();
    assert!(d.is_integer());
    d.to_integer().try_into().unwrap()
}
