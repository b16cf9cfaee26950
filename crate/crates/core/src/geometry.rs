//! Exact planar primitives: rational points, segment intersection, crossing
//! detection and general-position validation.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number. Always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Builds an integer-valued rational.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// Builds `num/den` in lowest terms. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// `"p/q"` in lowest terms, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"` or `"p"`. The result is reduced.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let bad = || format!("{s:?} is not a rational of the form p/q");
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    let num: num_bigint::BigInt = num.parse().map_err(|_| bad())?;
    let den: num_bigint::BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(format!("{s:?} has a zero denominator"));
    }
    Ok(Rational::new(num, den))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlanePoint {
    pub x: Rational,
    pub y: Rational,
}

impl PlanePoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(int(x), int(y))
    }

    pub fn sub(&self, other: &PlanePoint) -> PlanePoint {
        PlanePoint::new(&self.x - &other.x, &self.y - &other.y)
    }

    /// `(1 - t) * self + t * other`
    pub fn lerp(&self, other: &PlanePoint, t: &Rational) -> PlanePoint {
        let one_minus = Rational::one() - t;
        PlanePoint::new(
            &one_minus * &self.x + t * &other.x,
            &one_minus * &self.y + t * &other.y,
        )
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// z-component of the cross product of two plane vectors.
pub fn cross(u: &PlanePoint, v: &PlanePoint) -> Rational {
    &u.x * &v.y - &u.y * &v.x
}

fn dot(u: &PlanePoint, v: &PlanePoint) -> Rational {
    &u.x * &v.x + &u.y * &v.y
}

/// Orientation of `c` relative to the directed line `a -> b`.
pub fn orient(a: &PlanePoint, b: &PlanePoint, c: &PlanePoint) -> Rational {
    cross(&b.sub(a), &c.sub(a))
}

/// True when `p` lies on the closed segment `a b`.
pub fn on_segment(a: &PlanePoint, b: &PlanePoint, p: &PlanePoint) -> bool {
    if !orient(a, b, p).is_zero() {
        return false;
    }
    let ab = b.sub(a);
    let ap = p.sub(a);
    let d = dot(&ab, &ap);
    !d.is_negative() && d <= dot(&ab, &ab)
}

/// A transversal double point of two non-adjacent edges.
///
/// Edge `k` runs from vertex `k` to vertex `k + 1` (cyclically). `s` is the
/// parameter along `edge_a`, `t` along `edge_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingGeometry {
    pub edge_a: usize,
    pub edge_b: usize,
    pub s: Rational,
    pub t: Rational,
    pub point: PlanePoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentIntersection {
    pub s: Rational,
    pub t: Rational,
    pub point: PlanePoint,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Degeneracy {
    #[error("segments overlap collinearly")]
    CollinearOverlap,
    #[error("an endpoint lies in the interior of the other segment")]
    EndpointOnInterior,
    #[error("zero-length segment")]
    ZeroLength,
}

/// Intersects the closed segments `p1 p2` and `q1 q2`.
///
/// Returns `Ok(None)` when they are disjoint or meet only at endpoints, and
/// the interior transversal intersection otherwise. Any contact that is not
/// a clean crossing is reported as a [`Degeneracy`].
pub fn intersect_segments(
    p1: &PlanePoint,
    p2: &PlanePoint,
    q1: &PlanePoint,
    q2: &PlanePoint,
) -> Result<Option<SegmentIntersection>, Degeneracy> {
    if p1 == p2 || q1 == q2 {
        return Err(Degeneracy::ZeroLength);
    }
    let r = p2.sub(p1);
    let d = q2.sub(q1);
    let denom = cross(&r, &d);
    let qp = q1.sub(p1);

    if denom.is_zero() {
        if !cross(&qp, &r).is_zero() {
            // parallel, distinct lines
            return Ok(None);
        }
        // Collinear: project q1, q2 onto p's parameter line.
        let rr = dot(&r, &r);
        let a = dot(&qp, &r) / &rr;
        let b = dot(&q2.sub(p1), &r) / &rr;
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let zero = Rational::zero();
        let one = Rational::one();
        if hi < zero || lo > one {
            return Ok(None);
        }
        if hi == zero || lo == one {
            // touching at a single shared endpoint
            return Ok(None);
        }
        return Err(Degeneracy::CollinearOverlap);
    }

    let s = cross(&qp, &d) / &denom;
    let t = cross(&qp, &r) / &denom;
    let zero = Rational::zero();
    let one = Rational::one();
    if s < zero || s > one || t < zero || t > one {
        return Ok(None);
    }
    let s_end = s.is_zero() || s == one;
    let t_end = t.is_zero() || t == one;
    match (s_end, t_end) {
        (true, true) => Ok(None),
        (false, false) => {
            let point = p1.lerp(p2, &s);
            Ok(Some(SegmentIntersection { s, t, point }))
        }
        _ => Err(Degeneracy::EndpointOnInterior),
    }
}

/// One reason a vertex list fails to describe a shadow in general position.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("need at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertices {0} and {1} coincide")]
    RepeatedVertex(usize, usize),
    #[error("vertex {vertex} lies on non-incident edge {edge}")]
    VertexOnEdge { vertex: usize, edge: usize },
    #[error("edges {0} and {1} meet non-transversally ({2})")]
    NonTransversal(usize, usize, Degeneracy),
    #[error("adjacent edges {0} and {1} overlap")]
    AdjacentOverlap(usize, usize),
    #[error("three or more edges pass through {0}")]
    TriplePoint(PlanePoint),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("general position violated: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct GeneralPositionViolation(pub Vec<Violation>);

fn edge(vertices: &[PlanePoint], k: usize) -> (&PlanePoint, &PlanePoint) {
    (&vertices[k], &vertices[(k + 1) % vertices.len()])
}

fn adjacent(n: usize, i: usize, j: usize) -> bool {
    let d = i.abs_diff(j);
    d == 1 || d == n - 1
}

/// Checks every general-position requirement and reports all violations
/// found. An empty list means the polygon is a valid shadow.
pub fn validate_general_position(vertices: &[PlanePoint]) -> Vec<Violation> {
    let n = vertices.len();
    if n < 3 {
        return vec![Violation::TooFewVertices(n)];
    }
    let mut out = Vec::new();

    for i in 0..n {
        for j in i + 1..n {
            if vertices[i] == vertices[j] {
                out.push(Violation::RepeatedVertex(i, j));
            }
        }
    }
    if !out.is_empty() {
        // Everything below assumes distinct vertices.
        return out;
    }

    for v in 0..n {
        for e in 0..n {
            if e == v || (e + 1) % n == v {
                continue;
            }
            let (a, b) = edge(vertices, e);
            if on_segment(a, b, &vertices[v]) {
                out.push(Violation::VertexOnEdge { vertex: v, edge: e });
            }
        }
    }

    let mut points: Vec<PlanePoint> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (p1, p2) = edge(vertices, i);
            let (q1, q2) = edge(vertices, j);
            if adjacent(n, i, j) {
                // Adjacent edges share one vertex; they must not fold back.
                let shared = if (i + 1) % n == j { p2 } else { p1 };
                let (other_p, other_q) = if (i + 1) % n == j { (p1, q2) } else { (p2, q1) };
                let u = other_p.sub(shared);
                let w = other_q.sub(shared);
                if cross(&u, &w).is_zero() && dot(&u, &w).is_positive() {
                    out.push(Violation::AdjacentOverlap(i, j));
                }
                continue;
            }
            match intersect_segments(p1, p2, q1, q2) {
                Ok(Some(hit)) => points.push(hit.point),
                Ok(None) => {}
                Err(Degeneracy::EndpointOnInterior) => {
                    // Already reported as VertexOnEdge.
                }
                Err(d) => out.push(Violation::NonTransversal(i, j, d)),
            }
        }
    }

    points.sort_by(|a, b| (&a.x, &a.y).cmp(&(&b.x, &b.y)));
    let mut k = 0;
    while k < points.len() {
        let mut m = k + 1;
        while m < points.len() && points[m] == points[k] {
            m += 1;
        }
        if m - k > 1 {
            out.push(Violation::TriplePoint(points[k].clone()));
        }
        k = m;
    }
    out
}

/// All transversal crossings of a closed polygon, sorted by `(edge_a, s)`.
/// The position in the returned list is the crossing id.
pub fn compute_crossings(
    vertices: &[PlanePoint],
) -> Result<Vec<CrossingGeometry>, GeneralPositionViolation> {
    let violations = validate_general_position(vertices);
    if !violations.is_empty() {
        return Err(GeneralPositionViolation(violations));
    }
    let n = vertices.len();
    let mut crossings = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if adjacent(n, i, j) {
                continue;
            }
            let (p1, p2) = edge(vertices, i);
            let (q1, q2) = edge(vertices, j);
            // Validation above rules out degeneracies.
            if let Ok(Some(hit)) = intersect_segments(p1, p2, q1, q2) {
                crossings.push(CrossingGeometry {
                    edge_a: i,
                    edge_b: j,
                    s: hit.s,
                    t: hit.t,
                    point: hit.point,
                });
            }
        }
    }
    crossings.sort_by(|a, b| (a.edge_a, &a.s).cmp(&(b.edge_a, &b.s)));
    Ok(crossings)
}
