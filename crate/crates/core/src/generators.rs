//! Deterministic shadow constructions: star polygons, (n,2)-torus shadows
//! and seeded random polygons.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::Shadow;
use crate::error::Error;
use crate::geometry::{validate_general_position, PlanePoint};

pub const STAR_RADIUS: i64 = 10_000;
const RADIUS_RETRIES: i64 = 64;

fn polar(radius: f64, angle: f64) -> (i64, i64) {
    ((radius * angle.cos()).round() as i64, (radius * angle.sin()).round() as i64)
}

fn checked(coords: Vec<(i64, i64)>, crossings: usize) -> Option<Shadow> {
    let shadow = Shadow::from_ints(&coords).ok()?;
    (shadow.num_crossings() == crossings).then_some(shadow)
}

/// Tip `j` of the `{n/2}` star: every second point of a regular n-gon,
/// starting at the top.
fn tip_angle(n: usize, j: usize) -> f64 {
    FRAC_PI_2 + 4.0 * PI * j as f64 / n as f64
}

/// The `{n/2}` star polygon on integer approximations of a radius-10^4
/// circle. Has exactly `n` crossings.
pub fn gen_star(n: usize) -> Result<Shadow, Error> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("star needs odd n >= 5, got {n}")));
    }
    for jitter in 0..RADIUS_RETRIES {
        let r = (STAR_RADIUS + jitter) as f64;
        let coords = (0..n).map(|j| polar(r, tip_angle(n, j))).collect();
        if let Some(s) = checked(coords, n) {
            return Ok(s);
        }
    }
    Err(Error::ExhaustedRetries(RADIUS_RETRIES as usize))
}

/// Shadow of the (n,2)-torus knot with `n * subdiv` edges: the `{n/2}` star
/// with every edge cut into `subdiv` pieces and the cut points pushed
/// outward by 1/100 of the radius.
///
/// For `n = 3` the star degenerates into a triangle, so the cut points are
/// instead placed on the circle of half the radius, which keeps the curve
/// winding twice around the center.
pub fn gen_torus(n: usize, subdiv: usize) -> Result<Shadow, Error> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("torus needs odd n >= 3, got {n}")));
    }
    if subdiv < 2 {
        return Err(Error::InvalidArgument(format!("subdiv must be >= 2, got {subdiv}")));
    }
    for jitter in 0..RADIUS_RETRIES {
        let r = (STAR_RADIUS + jitter) as f64;
        let push = r / 100.0;
        let mut coords = Vec::with_capacity(n * subdiv);
        for j in 0..n {
            let (a0, a1) = (tip_angle(n, j), tip_angle(n, j + 1));
            coords.push(polar(r, a0));
            for i in 1..subdiv {
                let f = i as f64 / subdiv as f64;
                if n == 3 {
                    coords.push(polar(r / 2.0, a0 + f * (a1 - a0)));
                } else {
                    let (x0, y0) = (r * a0.cos(), r * a0.sin());
                    let (x1, y1) = (r * a1.cos(), r * a1.sin());
                    let (x, y) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
                    let len = x.hypot(y);
                    let scale = (len + push) / len;
                    coords.push(((x * scale).round() as i64, (y * scale).round() as i64));
                }
            }
        }
        if let Some(s) = checked(coords, n) {
            return Ok(s);
        }
    }
    Err(Error::ExhaustedRetries(RADIUS_RETRIES as usize))
}

pub const RANDOM_COORD_RANGE: i64 = 100;
const RANDOM_ATTEMPTS: usize = 10_000;

/// A seeded random closed polygon with integer coordinates in general
/// position. Same arguments, same polygon.
pub fn gen_random(num_vertices: usize, seed: u64) -> Result<Shadow, Error> {
    if num_vertices < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 vertices, got {num_vertices}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_ATTEMPTS {
        let vertices: Vec<PlanePoint> = (0..num_vertices)
            .map(|_| {
                PlanePoint::from_ints(
                    rng.gen_range(-RANDOM_COORD_RANGE..=RANDOM_COORD_RANGE),
                    rng.gen_range(-RANDOM_COORD_RANGE..=RANDOM_COORD_RANGE),
                )
            })
            .collect();
        if validate_general_position(&vertices).is_empty() {
            return Ok(Shadow::new(vertices)?);
        }
    }
    Err(Error::ExhaustedRetries(RANDOM_ATTEMPTS))
}

/// Axis-aligned square, no crossings.
pub fn square() -> Shadow {
    Shadow::from_ints(&[(0, 0), (4, 0), (4, 4), (0, 4)]).expect("square is in general position")
}

/// Four-edge polygon with a single crossing.
pub fn bowtie() -> Shadow {
    Shadow::from_ints(&[(0, 0), (4, 0), (0, 3), (4, 3)]).expect("bowtie is in general position")
}
