//! Knot identification of resolutions: Kauffman bracket, a mirror-normalized
//! Jones fingerprint, the determinant, and lookup in a reference table.

mod bracket;
mod polynomial;
mod table;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use bracket::{bracket_brute_force, bracket_of_pd, kauffman_bracket, loop_value};
pub use polynomial::LaurentPolynomial;
pub use table::{reference_table, ReferenceEntry, ReferenceSource, ReferenceTable};

use crate::diagram::{pd_code, writhe, PdCode, Pseudodiagram};
use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KnotFingerprint {
    /// The smaller of `f(A)` and `f(1/A)` for the writhe-normalized bracket.
    pub jones_normalized: LaurentPolynomial,
    pub determinant: u64,
}

impl fmt::Display for KnotFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "det={};f={}", self.determinant, self.jones_normalized)
    }
}

/// Name of a knot type, mirror images collapsed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KnotClass(pub String);

impl KnotClass {
    pub fn unknot() -> Self {
        KnotClass("0_1".to_string())
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_unknown(&self) -> bool {
        self.0.starts_with("unknown:")
    }
}

impl fmt::Display for KnotClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `(-A)^(-3w) <D>`, the bracket normalized to be invariant under all
/// Reidemeister moves.
pub fn normalized_bracket(bracket: &LaurentPolynomial, writhe: i32) -> LaurentPolynomial {
    let sign = if writhe.rem_euclid(2) == 0 { 1 } else { -1 };
    let scaled = bracket.shift(-3 * writhe);
    if sign == 1 {
        scaled
    } else {
        -&scaled
    }
}

fn mirror_normalize(f: LaurentPolynomial) -> LaurentPolynomial {
    let g = f.invert_variable();
    if g < f {
        g
    } else {
        f
    }
}

/// Fingerprint of a PD code: writhe read off the code itself.
pub fn fingerprint_of_pd(pd: &PdCode) -> KnotFingerprint {
    let f = normalized_bracket(&bracket_of_pd(pd), pd_writhe(pd));
    KnotFingerprint {
        jones_normalized: mirror_normalize(f),
        determinant: determinant_of_pd(pd),
    }
}

/// Fingerprint of a resolution, with the writhe taken from the geometric
/// orientation of each crossing.
pub fn jones_fingerprint(r: &Pseudodiagram) -> Result<KnotFingerprint, Error> {
    let bracket = kauffman_bracket(r)?;
    let w = writhe(r)?;
    let determinant = if r.shadow().num_crossings() == 0 {
        1
    } else {
        determinant_of_pd(&pd_code(r)?)
    };
    Ok(KnotFingerprint {
        jones_normalized: mirror_normalize(normalized_bracket(&bracket, w)),
        determinant,
    })
}

/// Looks the fingerprint up in the bundled table.
pub fn classify(r: &Pseudodiagram) -> Result<KnotClass, Error> {
    Ok(reference_table().classify(&jones_fingerprint(r)?))
}

/// Crossing sign from label order: the over strand runs `d -> b` on a
/// positive crossing of `X[a,b,c,d]`.
fn pd_writhe(pd: &PdCode) -> i32 {
    let n = 2 * pd.0.len() as u32;
    pd.0.iter()
        .map(|&[_, b, c, d]| {
            let b_incoming = if n == 2 { b == c } else { d == b % n + 1 };
            if b_incoming {
                -1
            } else {
                1
            }
        })
        .sum()
}

/// `|det|` of any `(c-1)`-minor of the Fox coloring matrix: one row per
/// crossing, `2·over - under_in - under_out` over the diagram's arcs.
pub fn determinant_of_pd(pd: &PdCode) -> u64 {
    let c = pd.0.len();
    if c <= 1 {
        return 1;
    }
    let labels = 2 * c;
    let mut parent: Vec<usize> = (0..=labels).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    // The over strand is one arc of the diagram.
    for &[_, b, _, d] in &pd.0 {
        let (rb, rd) = (find(&mut parent, b as usize), find(&mut parent, d as usize));
        parent[rb] = rd;
    }
    let mut arcs: Vec<usize> = (1..=labels).map(|l| find(&mut parent, l)).collect();
    arcs.sort_unstable();
    arcs.dedup();
    let index = |p: &mut [usize], l: u32| arcs.binary_search(&find(p, l as usize)).unwrap();

    let k = arcs.len();
    let mut m = vec![vec![0i128; k]; c];
    for (row, &[a, b, cc, _]) in pd.0.iter().enumerate() {
        let over = index(&mut parent, b);
        m[row][over] += 2;
        m[row][index(&mut parent, a)] -= 1;
        m[row][index(&mut parent, cc)] -= 1;
    }
    // Drop the last row and last column.
    let minor: Vec<Vec<i128>> = m[..c - 1].iter().map(|r| r[..k - 1].to_vec()).collect();
    if minor.is_empty() || minor[0].is_empty() {
        return 1;
    }
    bareiss_determinant(minor).unsigned_abs() as u64
}

/// Fraction-free Gaussian elimination on a square integer matrix.
pub fn bareiss_determinant(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_small() {
        assert_eq!(bareiss_determinant(vec![vec![2, 1], vec![1, 3]]), 5);
        assert_eq!(bareiss_determinant(vec![vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(
            bareiss_determinant(vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]),
            4
        );
    }

    #[test]
    fn kink_is_trivial() {
        for pd in [PdCode(vec![[1, 1, 2, 2]]), PdCode(vec![[1, 2, 2, 1]])] {
            let fp = fingerprint_of_pd(&pd);
            assert_eq!(fp.jones_normalized, LaurentPolynomial::one());
            assert_eq!(fp.determinant, 1);
        }
    }

    #[test]
    fn trefoil_fingerprint() {
        let pd = PdCode(vec![[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]);
        let fp = fingerprint_of_pd(&pd);
        assert_eq!(fp.determinant, 3);
        // mirror has the same normalized fingerprint
        assert_eq!(fingerprint_of_pd(&pd.mirror()), fp);
        // the Jones polynomial of the trefoil spans three powers of t
        assert_eq!(fp.jones_normalized.span().map(|(lo, hi)| hi - lo), Some(12));
    }
}
