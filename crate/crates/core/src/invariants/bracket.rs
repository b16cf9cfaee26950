//! Kauffman bracket by a state sum that merges identical partial
//! smoothings as crossings are absorbed one at a time.

use std::collections::HashMap;

use super::LaurentPolynomial;
use crate::diagram::{pd_code, PdCode, Pseudodiagram};
use crate::error::Error;

/// `-A^2 - A^-2`
pub fn loop_value() -> LaurentPolynomial {
    LaurentPolynomial::from_terms([(2, -1), (-2, -1)])
}

/// Bracket of a resolution, normalized so a crossingless circle is 1.
pub fn kauffman_bracket(r: &Pseudodiagram) -> Result<LaurentPolynomial, Error> {
    if !r.is_total() {
        return Err(Error::PartialAssignment);
    }
    if r.shadow().num_crossings() == 0 {
        return Ok(LaurentPolynomial::one());
    }
    Ok(bracket_of_pd(&pd_code(r)?))
}

/// Partial smoothing: open strand ends paired up, sorted for hashing.
type OpenPairs = Vec<(u32, u32)>;

/// Bracket of a PD code. For `X[a,b,c,d]` the A-smoothing joins `a-b` and
/// `c-d`, the A^-1-smoothing joins `a-d` and `b-c`.
pub fn bracket_of_pd(pd: &PdCode) -> LaurentPolynomial {
    if pd.0.is_empty() {
        return LaurentPolynomial::one();
    }
    // state -> polynomial in A per number of closed loops
    let mut states: HashMap<(OpenPairs, u32), LaurentPolynomial> = HashMap::new();
    states.insert((Vec::new(), 0), LaurentPolynomial::one());

    for &[a, b, c, d] in &pd.0 {
        let mut next: HashMap<(OpenPairs, u32), LaurentPolynomial> = HashMap::new();
        for ((pairs, loops), poly) in states {
            for (joins, exp) in [([(a, b), (c, d)], 1), ([(a, d), (b, c)], -1)] {
                let mut partner: HashMap<u32, u32> = HashMap::new();
                for &(x, y) in &pairs {
                    partner.insert(x, y);
                    partner.insert(y, x);
                }
                let mut closed = loops;
                for (x, y) in joins {
                    closed += join(&mut partner, x, y);
                }
                let mut key: OpenPairs = partner
                    .iter()
                    .filter(|(x, y)| x < y)
                    .map(|(&x, &y)| (x, y))
                    .collect();
                key.sort_unstable();
                let term = poly.shift(exp);
                let slot = next.entry((key, closed)).or_default();
                *slot = &*slot + &term;
            }
        }
        states = next;
    }

    let d = loop_value();
    let mut total = LaurentPolynomial::zero();
    for ((pairs, loops), poly) in states {
        debug_assert!(pairs.is_empty());
        total = &total + &(&poly * &d.pow(loops - 1));
    }
    total
}

/// Connects strand ends `x` and `y`. A label is an open end after its first
/// slot has been absorbed and becomes interior after its second. Returns 1
/// if the connection closes a loop.
fn join(partner: &mut HashMap<u32, u32>, x: u32, y: u32) -> u32 {
    if x == y {
        // both slots of one arc at this crossing, joined to each other
        return 1;
    }
    match (partner.get(&x).copied(), partner.get(&y).copied()) {
        (Some(px), _) if px == y => {
            partner.remove(&x);
            partner.remove(&y);
            1
        }
        (px, py) => {
            // Far ends of the paths through x and y; a fresh label is its own end.
            let ex = match px {
                Some(p) => {
                    partner.remove(&x);
                    p
                }
                None => x,
            };
            let ey = match py {
                Some(p) => {
                    partner.remove(&y);
                    p
                }
                None => y,
            };
            partner.insert(ex, ey);
            partner.insert(ey, ex);
            0
        }
    }
}

/// Plain sum over all `2^c` states, counting loops with union-find. Kept as
/// an independent check on [`bracket_of_pd`].
pub fn bracket_brute_force(pd: &PdCode) -> LaurentPolynomial {
    let c = pd.0.len();
    if c == 0 {
        return LaurentPolynomial::one();
    }
    let labels = 2 * c;
    let d = loop_value();
    let mut total = LaurentPolynomial::zero();
    for state in 0u64..(1 << c) {
        let mut parent: Vec<usize> = (0..=labels).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let n = p[y];
                p[y] = r;
                y = n;
            }
            r
        }
        let mut a_count = 0i32;
        for (i, &[a, b, cc, dd]) in pd.0.iter().enumerate() {
            let joins = if state >> i & 1 == 0 {
                a_count += 1;
                [(a, b), (cc, dd)]
            } else {
                a_count -= 1;
                [(a, dd), (b, cc)]
            };
            for (x, y) in joins {
                let (rx, ry) = (find(&mut parent, x as usize), find(&mut parent, y as usize));
                parent[rx] = ry;
            }
        }
        let mut roots: Vec<usize> = (1..=labels).map(|x| find(&mut parent, x)).collect();
        roots.sort_unstable();
        roots.dedup();
        let loops = roots.len() as u32;
        total = &total + &d.pow(loops - 1).shift(a_count);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinks() {
        assert_eq!(bracket_of_pd(&PdCode(vec![[1, 1, 2, 2]])), LaurentPolynomial::monomial(-1, 3));
        assert_eq!(bracket_of_pd(&PdCode(vec![[1, 2, 2, 1]])), LaurentPolynomial::monomial(-1, -3));
        assert_eq!(bracket_brute_force(&PdCode(vec![[1, 1, 2, 2]])), LaurentPolynomial::monomial(-1, 3));
    }

    #[test]
    fn trefoil_matches_brute_force() {
        let pd = PdCode(vec![[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]);
        let b = bracket_of_pd(&pd);
        assert_eq!(b, bracket_brute_force(&pd));
        // A^7 - A^3 - A^-5 for this handedness
        assert_eq!(b, LaurentPolynomial::from_terms([(7, 1), (3, -1), (-5, -1)]));
    }
}
