//! Scanline trapezoid decomposition of polygonal regions, used for exact
//! triangulation, interior representative points, and area-uniform sampling.
//!
//! The decomposition cuts the plane into vertical slabs at the distinct
//! vertex abscissae. Inside each open slab the region is a stack of
//! trapezoids found by even-odd pairing of the edges spanning the slab,
//! ordered by height at the slab midline. This works for any even-odd
//! region given by closed rings, including rings with collinear chains, so
//! it serves both validated polygons and faces cut out of arrangements.

use super::{Point, PolygonWithHoles, Rat};
use num::Signed;
use rand::Rng;

/// A triangle with positively oriented corners.
#[derive(Clone, Debug)]
pub struct Triangle {
    pub a: Point,
    pub b: Point,
    pub c: Point,
}

impl Triangle {
    fn new(a: Point, b: Point, c: Point) -> Self {
        let t = Triangle { a, b, c };
        debug_assert!(t.area2().is_positive(), "triangle not positively oriented");
        t
    }

    /// Twice the (positive) area.
    pub fn area2(&self) -> Rat {
        self.a.to(&self.b).cross(&self.a.to(&self.c))
    }

    pub fn centroid(&self) -> Point {
        let three = super::ri(3);
        Point::new(
            (&self.a.x + &self.b.x + &self.c.x) / three.clone(),
            (&self.a.y + &self.b.y + &self.c.y) / three,
        )
    }

    /// A near-uniform point of the triangle. The float image of a uniform
    /// barycentric draw is snapped to a global 1/4096 grid and kept only if
    /// it lands strictly inside, which makes every downstream exact
    /// computation run on single-limb rationals. Thin triangles can reject
    /// every snap attempt; the exact barycentric construction at the end
    /// then still terminates, at higher coordinate complexity.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Point {
        const DENOM: i64 = 4096;
        let (ax, ay) = self.a.approx();
        let (bx, by) = self.b.approx();
        let (cx, cy) = self.c.approx();
        for _ in 0..32 {
            let mut u = rng.gen_range(0..=DENOM) as f64 / DENOM as f64;
            let mut v = rng.gen_range(0..=DENOM) as f64 / DENOM as f64;
            if u + v > 1.0 {
                u = 1.0 - u;
                v = 1.0 - v;
            }
            let fx = ax + u * (bx - ax) + v * (cx - ax);
            let fy = ay + u * (by - ay) + v * (cy - ay);
            let g = Point::new(
                super::rq((fx * DENOM as f64).round() as i64, DENOM),
                super::rq((fy * DENOM as f64).round() as i64, DENOM),
            );
            if super::orient(&self.a, &self.b, &g) > 0
                && super::orient(&self.b, &self.c, &g) > 0
                && super::orient(&self.c, &self.a, &g) > 0
            {
                return g;
            }
        }
        let mut u = super::rq(rng.gen_range(0..=DENOM), DENOM);
        let mut v = super::rq(rng.gen_range(0..=DENOM), DENOM);
        if &u + &v > super::ri(1) {
            u = super::ri(1) - u;
            v = super::ri(1) - v;
        }
        let ab = self.a.to(&self.b);
        let ac = self.a.to(&self.c);
        self.a.add(&ab.scale(&u)).add(&ac.scale(&v))
    }
}

/// Triangulates the even-odd region bounded by the given closed rings.
/// Ring orientation is irrelevant. Panics on rings with overlapping edges.
pub fn triangulate_rings(rings: &[Vec<Point>]) -> Vec<Triangle> {
    let mut xs: Vec<Rat> = rings
        .iter()
        .flat_map(|r| r.iter().map(|p| p.x.clone()))
        .collect();
    xs.sort();
    xs.dedup();

    struct Edge<'a> {
        lo: &'a Point, // smaller x
        hi: &'a Point,
    }
    let mut edges: Vec<Edge> = Vec::new();
    for ring in rings {
        for i in 0..ring.len() {
            let a = &ring[i];
            let b = &ring[(i + 1) % ring.len()];
            if a.x == b.x {
                continue; // vertical edges lie on slab boundaries
            }
            let (lo, hi) = if a.x < b.x { (a, b) } else { (b, a) };
            edges.push(Edge { lo, hi });
        }
    }

    let y_at = |e: &Edge, x: &Rat| -> Rat {
        &e.lo.y + (x - &e.lo.x) * (&e.hi.y - &e.lo.y) / (&e.hi.x - &e.lo.x)
    };

    let mut tris = Vec::new();
    for w in xs.windows(2) {
        let (l, r) = (&w[0], &w[1]);
        let mid = (l + r) / super::ri(2);
        let mut spanning: Vec<&Edge> = edges
            .iter()
            .filter(|e| e.lo.x <= *l && e.hi.x >= *r)
            .collect();
        spanning.sort_by(|e1, e2| y_at(e1, &mid).cmp(&y_at(e2, &mid)));
        assert!(spanning.len() % 2 == 0, "odd edge parity in slab");
        for pair in spanning.chunks(2) {
            let (lower, upper) = (pair[0], pair[1]);
            let p0 = Point::new(l.clone(), y_at(lower, l));
            let p1 = Point::new(r.clone(), y_at(lower, r));
            let p2 = Point::new(r.clone(), y_at(upper, r));
            let p3 = Point::new(l.clone(), y_at(upper, l));
            if p0 == p3 {
                tris.push(Triangle::new(p0, p1, p2));
            } else if p1 == p2 {
                tris.push(Triangle::new(p0, p1, p3));
            } else {
                tris.push(Triangle::new(p0.clone(), p1, p2.clone()));
                tris.push(Triangle::new(p0, p2, p3));
            }
        }
    }
    tris
}

/// Triangulates a validated polygon with holes.
pub fn triangulate_polygon(poly: &PolygonWithHoles) -> Vec<Triangle> {
    let rings: Vec<Vec<Point>> = (0..poly.ring_count())
        .map(|i| poly.ring(i).to_vec())
        .collect();
    let tris = triangulate_rings(&rings);
    debug_assert_eq!(
        tris.iter().map(|t| t.area2()).sum::<Rat>(),
        poly.area2(),
        "triangulation area mismatch"
    );
    tris
}

/// The centroid of the largest triangle, ties broken by triangle order.
/// Strictly interior to the triangulated region.
pub fn representative_point(tris: &[Triangle]) -> Point {
    assert!(!tris.is_empty(), "empty triangulation");
    let mut best = 0;
    let mut best_area = tris[0].area2();
    for (i, t) in tris.iter().enumerate().skip(1) {
        let a = t.area2();
        if a > best_area {
            best = i;
            best_area = a;
        }
    }
    tris[best].centroid()
}

/// Draws points uniformly from a triangulated region: a triangle is chosen
/// with probability proportional to area, then a point uniformly inside it.
pub struct AreaSampler<'a> {
    tris: &'a [Triangle],
    cumulative: Vec<f64>,
}

impl<'a> AreaSampler<'a> {
    pub fn new(tris: &'a [Triangle]) -> Self {
        use num::ToPrimitive;
        assert!(!tris.is_empty(), "empty triangulation");
        let mut cumulative = Vec::with_capacity(tris.len());
        let mut acc = 0.0;
        for t in tris {
            acc += t.area2().to_f64().unwrap_or(0.0);
            cumulative.push(acc);
        }
        AreaSampler { tris, cumulative }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Point {
        let total = *self.cumulative.last().unwrap();
        let target = rng.gen::<f64>() * total;
        let idx = self
            .cumulative
            .partition_point(|&c| c <= target)
            .min(self.tris.len() - 1);
        self.tris[idx].sample(rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Location;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ell() -> PolygonWithHoles {
        PolygonWithHoles::from_ints(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 3), (0, 3)], &[])
            .unwrap()
    }

    fn quad_with_hole() -> PolygonWithHoles {
        PolygonWithHoles::from_ints(
            &[(0, 0), (9, 1), (8, 8), (1, 7)],
            &[&[(3, 2), (6, 5), (4, 6)]],
        )
        .unwrap()
    }

    #[test]
    fn areas_add_up() {
        for poly in [ell(), quad_with_hole()] {
            let tris = triangulate_polygon(&poly);
            let total: Rat = tris.iter().map(|t| t.area2()).sum();
            assert_eq!(total, poly.area2());
            for t in &tris {
                assert!(t.area2().is_positive());
            }
        }
    }

    #[test]
    fn centroids_are_interior() {
        for poly in [ell(), quad_with_hole()] {
            let tris = triangulate_polygon(&poly);
            for t in &tris {
                assert_eq!(poly.locate(&t.centroid()), Location::Interior);
            }
            assert_eq!(poly.locate(&representative_point(&tris)), Location::Interior);
        }
    }

    #[test]
    fn representative_is_deterministic() {
        let poly = quad_with_hole();
        let tris = triangulate_polygon(&poly);
        assert_eq!(representative_point(&tris), representative_point(&tris));
    }

    #[test]
    fn samples_stay_inside() {
        let poly = quad_with_hole();
        let tris = triangulate_polygon(&poly);
        let sampler = AreaSampler::new(&tris);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let p = sampler.sample(&mut rng);
            assert_ne!(poly.locate(&p), Location::Exterior);
        }
    }

    #[test]
    fn sampling_covers_both_lobes_of_the_ell() {
        // The L has mass on both sides of x = 1; a uniform sampler must
        // reach both.
        let poly = ell();
        let tris = triangulate_polygon(&poly);
        let sampler = AreaSampler::new(&tris);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let one = crate::geom::ri(1);
        let (mut left, mut right) = (0usize, 0usize);
        for _ in 0..200 {
            let p = sampler.sample(&mut rng);
            if p.x < one {
                left += 1;
            } else if p.x > one {
                right += 1;
            }
        }
        assert!(left > 30 && right > 15, "left={} right={}", left, right);
    }

    #[test]
    fn triangulates_ring_with_collinear_chain() {
        // A square given with an extra vertex in the middle of its bottom
        // edge: not a valid polygon, but a valid even-odd ring, as faces
        // cut from arrangements routinely are.
        let ring = vec![
            Point::from_ints(0, 0),
            Point::from_ints(1, 0),
            Point::from_ints(2, 0),
            Point::from_ints(2, 2),
            Point::from_ints(0, 2),
        ];
        let tris = triangulate_rings(&[ring]);
        let total: Rat = tris.iter().map(|t| t.area2()).sum();
        assert_eq!(total, crate::geom::ri(8));
    }
}
