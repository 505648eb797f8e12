//! Exact rational plane geometry: points, orientation and intersection
//! predicates, polygons with holes, point location, and segment visibility.

mod polygon;
mod trapezoid;

pub use polygon::{EdgeRef, Location, PolygonWithHoles, VertexRef};
pub use trapezoid::{
    representative_point, triangulate_polygon, triangulate_rings, AreaSampler, Triangle,
};

use num::{BigRational, Signed, Zero};

/// Exact rational scalar used for every coordinate in the crate.
pub type Rat = BigRational;

/// Build a rational from an integer.
pub fn ri(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Build a rational n/d.
pub fn rq(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

/// A point with exact rational coordinates.
///
/// Each point also carries rounded f64 copies of its coordinates, set once
/// at construction. They feed the floating-point filters below and never
/// participate in equality, ordering, or hashing.
#[derive(Clone)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
    fx: f64,
    fy: f64,
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x && self.y == other.y
    }
}

impl Eq for Point {}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.x, &self.y).cmp(&(&other.x, &other.y))
    }
}

impl std::hash::Hash for Point {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.x.hash(state);
        self.y.hash(state);
    }
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Self {
        use num::ToPrimitive;
        let fx = x.to_f64().unwrap_or(f64::NAN);
        let fy = y.to_f64().unwrap_or(f64::NAN);
        Point { x, y, fx, fy }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(ri(x), ri(y))
    }

    /// Vector from self to other.
    pub fn to(&self, other: &Point) -> Vector {
        Vector {
            x: &other.x - &self.x,
            y: &other.y - &self.y,
        }
    }

    pub fn add(&self, v: &Vector) -> Point {
        Point::new(&self.x + &v.x, &self.y + &v.y)
    }

    /// Midpoint of self and other.
    pub fn midpoint(&self, other: &Point) -> Point {
        Point::new((&self.x + &other.x) / ri(2), (&self.y + &other.y) / ri(2))
    }

    pub fn approx(&self) -> (f64, f64) {
        (self.fx, self.fy)
    }
}

impl std::fmt::Debug for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A displacement with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Vector {
    pub x: Rat,
    pub y: Rat,
}

impl Vector {
    pub fn new(x: Rat, y: Rat) -> Self {
        Vector { x, y }
    }

    pub fn cross(&self, other: &Vector) -> Rat {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn dot(&self, other: &Vector) -> Rat {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn neg(&self) -> Vector {
        Vector::new(-self.x.clone(), -self.y.clone())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector::new(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn scale(&self, s: &Rat) -> Vector {
        Vector::new(&self.x * s, &self.y * s)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

/// Half the distance between adjacent doubles at magnitude one.
const ROUND: f64 = f64::EPSILON / 2.0;

/// A float with a running bound on its absolute error against the exact
/// value it approximates. Used to resolve predicate signs cheaply; any sign
/// the bound cannot certify falls back to exact rational arithmetic, so
/// results never depend on the float path.
#[derive(Clone, Copy)]
struct Filtered {
    v: f64,
    e: f64,
}

impl Filtered {
    /// A coordinate as converted by `Point::new`. The conversion goes
    /// through separate numerator and denominator roundings plus one
    /// division, so allow several ulps rather than the half ulp of a
    /// single correct rounding.
    fn coord(v: f64) -> Filtered {
        Filtered { v, e: 8.0 * ROUND * v.abs() }
    }

    fn sub(self, o: Filtered) -> Filtered {
        let v = self.v - o.v;
        Filtered { v, e: self.e + o.e + ROUND * v.abs() }
    }

    fn mul(self, o: Filtered) -> Filtered {
        let v = self.v * o.v;
        let e = self.v.abs() * o.e + o.v.abs() * self.e + self.e * o.e + ROUND * v.abs();
        Filtered { v, e }
    }

    /// The certain sign, or None when the error bound straddles zero. The
    /// factor absorbs the rounding of the bound arithmetic itself; NaN and
    /// infinite values always return None.
    fn sign(self) -> Option<i32> {
        if self.e.is_finite() && self.v.abs() > 4.0 * self.e {
            Some(if self.v > 0.0 { 1 } else { -1 })
        } else {
            None
        }
    }
}

fn orient_filtered(p: &Point, q: &Point, r: &Point) -> Option<i32> {
    let px = Filtered::coord(p.fx);
    let py = Filtered::coord(p.fy);
    let qx = Filtered::coord(q.fx);
    let qy = Filtered::coord(q.fy);
    let rx = Filtered::coord(r.fx);
    let ry = Filtered::coord(r.fy);
    let det = qx.sub(px).mul(ry.sub(py)).sub(qy.sub(py).mul(rx.sub(px)));
    det.sign()
}

/// Sign of the signed area of the triangle (p, q, r): +1 when r lies to the
/// left of the directed line p->q, -1 to the right, 0 when collinear.
pub fn orient(p: &Point, q: &Point, r: &Point) -> i32 {
    if let Some(s) = orient_filtered(p, q, r) {
        return s;
    }
    // The filter can never certify an exact zero, and most exact zeros in
    // practice are repeated points (segment endpoints meeting at a vertex).
    if p == q || r == p || r == q {
        return 0;
    }
    let v = p.to(q).cross(&p.to(r));
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign of a rational.
pub fn sign(r: &Rat) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// A closed segment with distinct endpoints.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        assert!(a != b, "degenerate segment");
        Segment { a, b }
    }

    pub fn dir(&self) -> Vector {
        self.a.to(&self.b)
    }

    /// True when p lies on the closed segment.
    pub fn contains(&self, p: &Point) -> bool {
        if orient(&self.a, &self.b, p) != 0 {
            return false;
        }
        let d = self.dir();
        let t = self.a.to(p).dot(&d);
        !t.is_negative() && t <= d.dot(&d)
    }
}

/// Result of intersecting two closed segments.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SegmentIntersection {
    Empty,
    Point(Point),
    /// Collinear overlap of positive length.
    Overlap(Point, Point),
}

/// Exact intersection of two closed segments.
pub fn segment_intersection(s1: &Segment, s2: &Segment) -> SegmentIntersection {
    // Disjointness is decided by orientation signs alone, long before any
    // intersection point is worth computing.
    let o1 = orient(&s1.a, &s1.b, &s2.a);
    let o2 = orient(&s1.a, &s1.b, &s2.b);
    if o1 * o2 > 0 {
        return SegmentIntersection::Empty;
    }
    let o3 = orient(&s2.a, &s2.b, &s1.a);
    let o4 = orient(&s2.a, &s2.b, &s1.b);
    if o3 * o4 > 0 {
        return SegmentIntersection::Empty;
    }
    // Once both gates pass the closed segments intersect. A zero among the
    // orientations in the non-collinear case pins the intersection at the
    // corresponding endpoint, no parameters needed.
    if (o1 != 0 || o2 != 0) && (o1 == 0 || o2 == 0 || o3 == 0 || o4 == 0) {
        let x = if o3 == 0 {
            s1.a.clone()
        } else if o4 == 0 {
            s1.b.clone()
        } else if o1 == 0 {
            s2.a.clone()
        } else {
            s2.b.clone()
        };
        return SegmentIntersection::Point(x);
    }
    let d1 = s1.dir();
    let d2 = s2.dir();
    let denom = d1.cross(&d2);
    let w = s1.a.to(&s2.a);
    if !denom.is_zero() {
        let t = w.cross(&d2) / denom.clone();
        let u = w.cross(&d1) / denom;
        let in01 = |r: &Rat| !r.is_negative() && r <= &ri(1);
        if in01(&t) && in01(&u) {
            return SegmentIntersection::Point(s1.a.add(&d1.scale(&t)));
        }
        return SegmentIntersection::Empty;
    }
    if !w.cross(&d1).is_zero() {
        return SegmentIntersection::Empty; // parallel, distinct lines
    }
    // Collinear: project onto d1.
    let len2 = d1.dot(&d1);
    let t0 = Rat::zero();
    let t1 = len2.clone();
    let ta = s1.a.to(&s2.a).dot(&d1);
    let tb = s1.a.to(&s2.b).dot(&d1);
    let (lo, hi) = if ta <= tb { (ta, tb) } else { (tb, ta) };
    let lo = lo.max(t0);
    let hi = hi.min(t1);
    if lo > hi {
        SegmentIntersection::Empty
    } else if lo == hi {
        let t = lo / len2;
        SegmentIntersection::Point(s1.a.add(&d1.scale(&t)))
    } else {
        let p = s1.a.add(&d1.scale(&(lo / len2.clone())));
        let q = s1.a.add(&d1.scale(&(hi / len2)));
        SegmentIntersection::Overlap(p, q)
    }
}

/// Even-odd crossing parity of a horizontal ray from `p` toward +x against
/// one closed ring, with the half-open edge rule: an edge counts when it
/// spans the ray line with its lower endpoint inclusive, and its crossing
/// lies strictly right of `p`. Only meaningful when `p` is off the ring.
pub(crate) fn ray_parity(ring: &[Point], p: &Point) -> bool {
    // Filtered comparison of two rationals through their cached floats.
    let le = |a: &Rat, fa: f64, b: &Rat, fb: f64| -> bool {
        match Filtered::coord(fa).sub(Filtered::coord(fb)).sign() {
            Some(s) => s < 0,
            None => a <= b,
        }
    };
    let mut inside = false;
    for i in 0..ring.len() {
        let a = &ring[i];
        let b = &ring[(i + 1) % ring.len()];
        let (lo, hi) = if le(&a.y, a.fy, &b.y, b.fy) { (a, b) } else { (b, a) };
        if le(&lo.y, lo.fy, &p.y, p.fy) && !le(&hi.y, hi.fy, &p.y, p.fy) {
            // x of the edge at height p.y exceeds p.x, compared exactly:
            // (p.y - lo.y) / (hi.y - lo.y) * (hi.x - lo.x) + lo.x > p.x
            let fl = Filtered::coord(p.fy)
                .sub(Filtered::coord(lo.fy))
                .mul(Filtered::coord(hi.fx).sub(Filtered::coord(lo.fx)));
            let fr = Filtered::coord(p.fx)
                .sub(Filtered::coord(lo.fx))
                .mul(Filtered::coord(hi.fy).sub(Filtered::coord(lo.fy)));
            let crosses = match fl.sub(fr).sign() {
                Some(s) => s > 0,
                None => {
                    let lhs = (&p.y - &lo.y) * (&hi.x - &lo.x);
                    let rhs = (&p.x - &lo.x) * (&hi.y - &lo.y);
                    lhs > rhs
                }
            };
            if crosses {
                inside = !inside;
            }
        }
    }
    inside
}

/// Locate a point against a single closed ring by the even-odd rule.
///
/// Works on any closed chain regardless of orientation, repeated collinear
/// vertices included, so derived chains (visibility regions, pockets) are
/// fine here even when they would not validate as polygon rings.
pub fn even_odd_in_ring(ring: &[Point], p: &Point) -> Location {
    for i in 0..ring.len() {
        let a = &ring[i];
        let b = &ring[(i + 1) % ring.len()];
        if a == b {
            if a == p {
                return Location::Boundary;
            }
            continue;
        }
        if Segment::new(a.clone(), b.clone()).contains(p) {
            return Location::Boundary;
        }
    }
    if ray_parity(ring, p) {
        Location::Interior
    } else {
        Location::Exterior
    }
}

/// Twice the signed area of a ring (positive for counterclockwise).
pub fn ring_area2(ring: &[Point]) -> Rat {
    let mut acc = Rat::zero();
    for i in 0..ring.len() {
        let p = &ring[i];
        let q = &ring[(i + 1) % ring.len()];
        acc += &p.x * &q.y - &q.x * &p.y;
    }
    acc
}

/// Angular comparison of nonzero direction vectors, counterclockwise from
/// the reference direction `d0`. Returns the relative class and an exact
/// within-class comparator via `ccw_key_cmp`.
///
/// Class 0: parallel to d0, same direction. Class 1: strictly
/// counterclockwise within the first half turn. Class 2: opposite to d0.
/// Class 3: strictly counterclockwise beyond the half turn.
pub fn ccw_class(d0: &Vector, u: &Vector) -> u8 {
    let c = d0.cross(u);
    if c.is_positive() {
        1
    } else if c.is_negative() {
        3
    } else if d0.dot(u).is_positive() {
        0
    } else {
        2
    }
}

/// Total order on nonzero directions by counterclockwise angle from `d0`.
/// Parallel same-direction vectors compare equal.
pub fn ccw_cmp(d0: &Vector, u: &Vector, v: &Vector) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let cu = ccw_class(d0, u);
    let cv = ccw_class(d0, v);
    if cu != cv {
        return cu.cmp(&cv);
    }
    let c = u.cross(v);
    if c.is_positive() {
        Ordering::Less
    } else if c.is_negative() {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}

/// True when `u` lies strictly inside the counterclockwise cone from `from`
/// to `to` (both excluded). The cone may span more than a half turn.
pub fn strictly_in_ccw_cone(from: &Vector, to: &Vector, u: &Vector) -> bool {
    use std::cmp::Ordering;
    let cu = ccw_cmp(from, u, to);
    cu == Ordering::Less && ccw_class(from, u) != 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    #[test]
    fn orient_signs() {
        assert_eq!(orient(&p(0, 0), &p(1, 0), &p(0, 1)), 1);
        assert_eq!(orient(&p(0, 0), &p(1, 0), &p(0, -1)), -1);
        assert_eq!(orient(&p(0, 0), &p(1, 0), &p(2, 0)), 0);
        // Consistency under cyclic shifts.
        assert_eq!(orient(&p(2, 3), &p(5, 4), &p(1, 7)), orient(&p(5, 4), &p(1, 7), &p(2, 3)));
    }

    #[test]
    fn intersections_proper_and_touching() {
        let s1 = Segment::new(p(0, 0), p(4, 4));
        let s2 = Segment::new(p(0, 4), p(4, 0));
        assert_eq!(
            segment_intersection(&s1, &s2),
            SegmentIntersection::Point(p(2, 2))
        );
        // Endpoint touch.
        let s3 = Segment::new(p(4, 4), p(8, 0));
        assert_eq!(
            segment_intersection(&s1, &s3),
            SegmentIntersection::Point(p(4, 4))
        );
        // Disjoint parallels.
        let s4 = Segment::new(p(0, 1), p(4, 5));
        assert_eq!(segment_intersection(&s1, &s4), SegmentIntersection::Empty);
    }

    #[test]
    fn intersections_collinear() {
        let s1 = Segment::new(p(0, 0), p(4, 0));
        let s2 = Segment::new(p(2, 0), p(6, 0));
        assert_eq!(
            segment_intersection(&s1, &s2),
            SegmentIntersection::Overlap(p(2, 0), p(4, 0))
        );
        let s3 = Segment::new(p(4, 0), p(6, 0));
        assert_eq!(
            segment_intersection(&s1, &s3),
            SegmentIntersection::Point(p(4, 0))
        );
        let s4 = Segment::new(p(5, 0), p(6, 0));
        assert_eq!(segment_intersection(&s1, &s4), SegmentIntersection::Empty);
    }

    #[test]
    fn t_junction_intersection() {
        let s1 = Segment::new(p(0, 0), p(4, 0));
        let s2 = Segment::new(p(2, 0), p(2, 3));
        assert_eq!(
            segment_intersection(&s1, &s2),
            SegmentIntersection::Point(p(2, 0))
        );
    }

    #[test]
    fn rational_coordinates_are_exact() {
        let s1 = Segment::new(p(0, 0), p(3, 1));
        let s2 = Segment::new(p(0, 1), p(3, 0));
        match segment_intersection(&s1, &s2) {
            SegmentIntersection::Point(q) => {
                assert_eq!(q, Point::new(rq(3, 2), rq(1, 2)));
            }
            other => panic!("expected point, got {:?}", other),
        }
    }

    #[test]
    fn ccw_ordering_full_turn() {
        let e = Vector::new(ri(1), ri(0));
        let dirs = [
            Vector::new(ri(1), ri(0)),   // 0
            Vector::new(ri(1), ri(1)),   // 45
            Vector::new(ri(0), ri(1)),   // 90
            Vector::new(ri(-1), ri(0)),  // 180
            Vector::new(ri(-1), ri(-1)), // 225
            Vector::new(ri(0), ri(-1)),  // 270
        ];
        for w in dirs.windows(2) {
            assert_eq!(ccw_cmp(&e, &w[0], &w[1]), std::cmp::Ordering::Less);
        }
        assert!(strictly_in_ccw_cone(
            &Vector::new(ri(1), ri(0)),
            &Vector::new(ri(0), ri(1)),
            &Vector::new(ri(2), ri(1)),
        ));
        assert!(!strictly_in_ccw_cone(
            &Vector::new(ri(1), ri(0)),
            &Vector::new(ri(0), ri(1)),
            &Vector::new(ri(2), ri(-1)),
        ));
        // Reflex cone spanning three quadrants.
        assert!(strictly_in_ccw_cone(
            &Vector::new(ri(0), ri(1)),
            &Vector::new(ri(1), ri(0)),
            &Vector::new(ri(-1), ri(-1)),
        ));
    }

    #[test]
    fn ring_area_sign() {
        let sq = vec![p(0, 0), p(2, 0), p(2, 2), p(0, 2)];
        assert_eq!(ring_area2(&sq), ri(8));
        let mut rev = sq.clone();
        rev.reverse();
        assert_eq!(ring_area2(&rev), ri(-8));
    }
}
