//! Deterministic polygon generators for testing and benchmarking.
//!
//! Exact coordinates are jittered by small seeded rationals so that no three
//! vertices are collinear; a generator retries with fresh jitter until the
//! polygon validates. Identical parameters and seed always give an identical
//! polygon.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{rq, Point, PolygonWithHoles, Rat};
use crate::{Error, Result};

const ATTEMPTS: usize = 64;

fn param_err(msg: &str) -> Error {
    Error::InvalidPolygon(msg.to_string())
}

/// Distinct pseudorandom numerators in `1..bound`, in draw order.
fn distinct_draws(rng: &mut ChaCha8Rng, count: usize, bound: u64) -> Vec<u64> {
    assert!((bound as usize) > 2 * count, "jitter space too small");
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v = rng.gen_range(1..bound);
        if seen.insert(v) {
            out.push(v);
        }
    }
    out
}

/// A comb with `k` teeth on a shallow base: the classic family needing one
/// guard per tooth. 4k vertices; tooth tips and notch floors carry distinct
/// jitters so no two lie on a common horizontal.
pub fn comb(k: usize, seed: u64) -> Result<PolygonWithHoles> {
    if !(1..=64).contains(&k) {
        return Err(param_err("comb teeth count must lie in 1..=64"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    for _ in 0..ATTEMPTS {
        let draws = distinct_draws(&mut rng, 2 * k - 1, 1024);
        let tip = |i: usize| rq(3, 1) + rq(draws[i] as i64, 1024);
        let floor = |j: usize| rq(1, 1) + rq(draws[k + j] as i64, 1024);
        let mut ring = vec![Point::from_ints(0, 0), Point::from_ints(2 * k as i64 - 1, 0)];
        for i in (0..k).rev() {
            let x = 2 * i as i64;
            ring.push(Point::new(rq(x + 1, 1), tip(i)));
            ring.push(Point::new(rq(x, 1), tip(i)));
            if i > 0 {
                ring.push(Point::new(rq(x, 1), floor(i - 1)));
                ring.push(Point::new(rq(x - 1, 1), floor(i - 1)));
            }
        }
        match PolygonWithHoles::new(ring, Vec::new()) {
            Ok(poly) => return Ok(poly),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt runs"))
}

/// Rational point at parameter `t` on the circle of radius `r`: the
/// stereographic map (r(1-t^2)/(1+t^2), 2rt/(1+t^2)).
fn circle_point(r: &Rat, t: &Rat) -> Point {
    let t2 = t * t;
    let den = Rat::from_integer(1.into()) + &t2;
    let x = r * (Rat::from_integer(1.into()) - &t2) / den.clone();
    let y = r * rq(2, 1) * t / den;
    Point::new(x, y)
}

/// A horseshoe with a convex outer arc and a reflex inner arc whose radius
/// shrinks along the sweep. `n` vertices total.
pub fn spiral(n: usize, seed: u64) -> Result<PolygonWithHoles> {
    if !(6..=256).contains(&n) {
        return Err(param_err("spiral vertex count must lie in 6..=256"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outer_count = n / 2 + 1;
    let inner_count = n - outer_count;
    let mut last = None;
    for _ in 0..ATTEMPTS {
        let mut ring = Vec::with_capacity(n);
        for j in 0..outer_count {
            // t sweeps [-2, 2], an arc of roughly 254 degrees.
            let t = rq(4 * j as i64, outer_count as i64 - 1) - rq(2, 1);
            let r = rq(16, 1) + rq(rng.gen_range(0..32), 256);
            ring.push(circle_point(&r, &t));
        }
        for j in 0..inner_count {
            // The inner arc runs back inside the outer sweep while its
            // radius decays from 11 toward 7.
            let t = rq(7, 4) - rq(7 * j as i64, 2 * (inner_count as i64 - 1).max(1));
            let r = rq(11, 1) - rq(4 * j as i64, (inner_count as i64 - 1).max(1))
                + rq(rng.gen_range(0..32), 256);
            ring.push(circle_point(&r, &t));
        }
        match PolygonWithHoles::new(ring, Vec::new()) {
            Ok(poly) => return Ok(poly),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt runs"))
}

fn jittered_square(cx: Rat, cy: Rat, half: Rat, rng: &mut ChaCha8Rng) -> Vec<Point> {
    let mut j = |sx: i64, sy: i64| {
        let dx = rq(rng.gen_range(0..16) * sx, 128);
        let dy = rq(rng.gen_range(0..16) * sy, 128);
        Point::new(&cx + &half * rq(sx, 1) - dx, &cy + &half * rq(sy, 1) - dy)
    };
    vec![j(-1, -1), j(1, -1), j(1, 1), j(-1, 1)]
}

/// An axis-aligned square of the given side with `h` jittered square holes in
/// a row across the middle.
pub fn grid_holes(size: usize, h: usize, seed: u64) -> Result<PolygonWithHoles> {
    if !(4..=256).contains(&size) {
        return Err(param_err("grid size must lie in 4..=256"));
    }
    if h > 16 || (h > 0 && size < 3 * h + 4) {
        return Err(param_err("grid needs size >= 3h + 4 to fit the holes"));
    }
    let s = size as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    for _ in 0..ATTEMPTS {
        let ring = vec![
            Point::from_ints(0, 0),
            Point::from_ints(s, 0),
            Point::from_ints(s, s),
            Point::from_ints(0, s),
        ];
        let holes: Vec<Vec<Point>> = (0..h)
            .map(|j| {
                jittered_square(
                    rq(3 * j as i64 + 3, 1),
                    rq(s, 2),
                    rq(1, 2),
                    &mut rng,
                )
            })
            .collect();
        match PolygonWithHoles::new(ring, holes) {
            Ok(poly) => return Ok(poly),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt runs"))
}

/// An `n`-vertex polygon with `h` holes: a jittered circular arc outside and
/// a row of jittered square holes inside. Used for the growth families where
/// the exact vertex count matters.
pub fn blob(n: usize, h: usize, seed: u64) -> Result<PolygonWithHoles> {
    if h > 8 {
        return Err(param_err("blob supports at most 8 holes"));
    }
    let outer_count = n
        .checked_sub(4 * h)
        .filter(|&m| m >= 6)
        .ok_or_else(|| param_err("blob needs at least 4h + 6 vertices"))?;
    let radius = 4 * h as i64 + 8;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    for _ in 0..ATTEMPTS {
        let mut ring = Vec::with_capacity(outer_count);
        for i in 0..outer_count {
            let t = rq(8 * i as i64, outer_count as i64) - rq(4, 1);
            let r = rq(radius, 1) + rq(rng.gen_range(0..32), 256);
            ring.push(circle_point(&r, &t));
        }
        let holes: Vec<Vec<Point>> = (0..h)
            .map(|j| {
                jittered_square(
                    rq(6 * j as i64 - 3 * h as i64 + 3, 1),
                    rq(0, 1),
                    rq(1, 1),
                    &mut rng,
                )
            })
            .collect();
        match PolygonWithHoles::new(ring, holes) {
            Ok(poly) => return Ok(poly),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt runs"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epsnet::kk::visibility_matrix;

    #[test]
    fn combs_have_4k_vertices_and_repeat_under_a_seed() {
        for k in 1..=6 {
            let poly = comb(k, 7).unwrap();
            assert_eq!(poly.vertex_count(), 4 * k);
            assert_eq!(poly.hole_count(), 0);
            let again = comb(k, 7).unwrap();
            assert_eq!(poly.ring(0), again.ring(0));
            let other = comb(k, 8).unwrap();
            assert_eq!(other.vertex_count(), 4 * k);
        }
        assert!(comb(0, 0).is_err());
        assert!(comb(65, 0).is_err());
    }

    #[test]
    fn comb_tooth_tips_are_mutually_invisible() {
        let poly = comb(3, 0).unwrap();
        let m = visibility_matrix(&poly);
        // Tip corner ids per tooth, rightmost tooth first: the ring starts
        // with the two base corners and climbs each tooth in turn.
        let tips = [[2usize, 3], [6, 7], [10, 11]];
        for a in 0..3 {
            assert!(m.sees(tips[a][0], tips[a][1]));
            for b in a + 1..3 {
                for &u in &tips[a] {
                    for &v in &tips[b] {
                        assert!(!m.sees(u, v), "tips {u} and {v} must not see each other");
                    }
                }
            }
        }
    }

    #[test]
    fn spirals_validate_at_many_sizes() {
        for &n in &[6, 9, 14, 20, 40, 80] {
            let poly = spiral(n, 3).unwrap();
            assert_eq!(poly.vertex_count(), n);
            assert_eq!(poly.hole_count(), 0);
            let again = spiral(n, 3).unwrap();
            assert_eq!(poly.ring(0), again.ring(0));
        }
        assert!(spiral(5, 0).is_err());
    }

    #[test]
    fn grids_fit_their_holes() {
        let poly = grid_holes(16, 2, 1).unwrap();
        assert_eq!(poly.hole_count(), 2);
        assert_eq!(poly.vertex_count(), 12);
        let again = grid_holes(16, 2, 1).unwrap();
        for i in 0..=2 {
            assert_eq!(poly.ring(i), again.ring(i));
        }
        assert!(grid_holes(8, 2, 0).is_err());
        assert!(grid_holes(3, 0, 0).is_err());
    }

    #[test]
    fn blobs_hit_exact_vertex_counts() {
        for &(n, h) in &[(20, 0), (20, 1), (20, 2), (40, 2), (80, 2)] {
            let poly = blob(n, h, 5).unwrap();
            assert_eq!(poly.vertex_count(), n);
            assert_eq!(poly.hole_count(), h);
        }
        assert!(blob(9, 1, 0).is_err());
    }
}
