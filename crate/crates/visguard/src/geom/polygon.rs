//! Polygons with holes: validated construction, vertex and edge addressing,
//! exact point location, and segment visibility inside the closed region.

use super::{
    orient, ring_area2, segment_intersection, Point, Rat, Segment, SegmentIntersection, Vector,
};
use crate::{Error, Result};
use num::{Signed, Zero};

/// Identifies a vertex by its ring (0 = outer boundary, k >= 1 = hole k-1)
/// and its index within the ring.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexRef {
    pub ring: usize,
    pub index: usize,
}

impl VertexRef {
    pub fn new(ring: usize, index: usize) -> Self {
        VertexRef { ring, index }
    }
}

/// Identifies the directed boundary edge from vertex `index` to the next
/// vertex of the same ring.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeRef {
    pub ring: usize,
    pub index: usize,
}

/// Where a point lies relative to the closed polygonal region.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
}

/// A polygon with zero or more holes. The outer ring is stored
/// counterclockwise and every hole ring clockwise, so the interior always
/// lies to the left of each directed boundary edge.
#[derive(Clone, Debug)]
pub struct PolygonWithHoles {
    rings: Vec<Vec<Point>>,
    /// Every boundary edge with its segment, cached once so the hot
    /// location and visibility loops never rebuild segments.
    edge_cache: Vec<(EdgeRef, Segment)>,
}

impl PartialEq for PolygonWithHoles {
    fn eq(&self, other: &Self) -> bool {
        self.rings == other.rings
    }
}

impl Eq for PolygonWithHoles {}

fn build_edge_cache(rings: &[Vec<Point>]) -> Vec<(EdgeRef, Segment)> {
    rings
        .iter()
        .enumerate()
        .flat_map(|(ri, ring)| {
            (0..ring.len()).map(move |i| {
                (
                    EdgeRef { ring: ri, index: i },
                    Segment::new(ring[i].clone(), ring[(i + 1) % ring.len()].clone()),
                )
            })
        })
        .collect()
}

impl PolygonWithHoles {
    /// Validates and normalizes the rings. Rejects rings with fewer than
    /// three vertices, repeated vertices, any three collinear vertices
    /// anywhere in the input, self- or cross-intersecting rings, and holes
    /// that are not strictly inside the outer ring or not pairwise disjoint.
    /// Ring orientations are normalized rather than rejected.
    pub fn new(outer: Vec<Point>, holes: Vec<Vec<Point>>) -> Result<Self> {
        let mut rings = Vec::with_capacity(1 + holes.len());
        rings.push(outer);
        rings.extend(holes);

        for (ri, ring) in rings.iter().enumerate() {
            if ring.len() < 3 {
                return Err(Error::InvalidPolygon(format!(
                    "ring {} has {} vertices, need at least 3",
                    ri,
                    ring.len()
                )));
            }
        }

        // No duplicate vertices anywhere.
        {
            let mut all: Vec<(&Point, usize, usize)> = Vec::new();
            for (ri, ring) in rings.iter().enumerate() {
                for (vi, p) in ring.iter().enumerate() {
                    all.push((p, ri, vi));
                }
            }
            all.sort_by(|a, b| a.0.cmp(b.0));
            for w in all.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(Error::InvalidPolygon(format!(
                        "duplicate vertex {:?} at ring {} index {} and ring {} index {}",
                        w[0].0, w[0].1, w[0].2, w[1].1, w[1].2
                    )));
                }
            }
        }

        check_no_collinear_triple(&rings)?;

        // Normalize orientation: outer counterclockwise, holes clockwise.
        for (ri, ring) in rings.iter_mut().enumerate() {
            let a2 = ring_area2(ring);
            if a2.is_zero() {
                return Err(Error::InvalidPolygon(format!("ring {} has zero area", ri)));
            }
            let want_ccw = ri == 0;
            if a2.is_positive() != want_ccw {
                ring.reverse();
            }
        }

        let edge_cache = build_edge_cache(&rings);
        let poly = PolygonWithHoles { rings, edge_cache };
        poly.check_simplicity()?;
        poly.check_hole_placement()?;
        Ok(poly)
    }

    /// Construct from integer coordinates, for fixtures.
    pub fn from_ints(outer: &[(i64, i64)], holes: &[&[(i64, i64)]]) -> Result<Self> {
        let conv = |pts: &[(i64, i64)]| {
            pts.iter()
                .map(|&(x, y)| Point::from_ints(x, y))
                .collect::<Vec<_>>()
        };
        PolygonWithHoles::new(conv(outer), holes.iter().map(|h| conv(h)).collect())
    }

    fn check_simplicity(&self) -> Result<()> {
        // Every pair of boundary edges may meet only at a shared ring
        // endpoint. With the no-collinear-triple and no-duplicate checks
        // already done, any other contact is an error.
        let edges = self.edges().collect::<Vec<_>>();
        for i in 0..edges.len() {
            for j in (i + 1)..edges.len() {
                let (e1, s1) = &edges[i];
                let (e2, s2) = &edges[j];
                match segment_intersection(s1, s2) {
                    SegmentIntersection::Empty => {}
                    SegmentIntersection::Overlap(_, _) => {
                        return Err(Error::InvalidPolygon(format!(
                            "edges {:?} and {:?} overlap",
                            e1, e2
                        )));
                    }
                    SegmentIntersection::Point(p) => {
                        let shared_endpoint = e1.ring == e2.ring
                            && (p == s1.a || p == s1.b)
                            && (p == s2.a || p == s2.b);
                        if !shared_endpoint {
                            return Err(Error::InvalidPolygon(format!(
                                "edges {:?} and {:?} cross at {:?}",
                                e1, e2, p
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Wraps one already validated ring, for the containment tests below.
    fn single_ring(ring: Vec<Point>) -> PolygonWithHoles {
        let rings = vec![ring];
        let edge_cache = build_edge_cache(&rings);
        PolygonWithHoles { rings, edge_cache }
    }

    fn check_hole_placement(&self) -> Result<()> {
        // Edge crossings were excluded above, so one strict-interior test
        // per hole vertex suffices; likewise one vertex per pair of holes.
        let outer_only = PolygonWithHoles::single_ring(self.rings[0].clone());
        for (hi, hole) in self.rings.iter().enumerate().skip(1) {
            for p in hole {
                if outer_only.locate(p) != Location::Interior {
                    return Err(Error::InvalidPolygon(format!(
                        "hole {} vertex {:?} is not strictly inside the outer ring",
                        hi - 1,
                        p
                    )));
                }
            }
        }
        for hi in 1..self.rings.len() {
            for hj in (hi + 1)..self.rings.len() {
                // Even-odd location ignores ring orientation, so the stored
                // clockwise hole ring can stand alone here.
                let a = PolygonWithHoles::single_ring(self.rings[hi].clone());
                if a.locate(&self.rings[hj][0]) != Location::Exterior {
                    return Err(Error::InvalidPolygon(format!(
                        "holes {} and {} are not disjoint",
                        hi - 1,
                        hj - 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn ring_count(&self) -> usize {
        self.rings.len()
    }

    pub fn hole_count(&self) -> usize {
        self.rings.len() - 1
    }

    pub fn ring(&self, i: usize) -> &[Point] {
        &self.rings[i]
    }

    pub fn outer(&self) -> &[Point] {
        &self.rings[0]
    }

    /// Total number of vertices over all rings.
    pub fn vertex_count(&self) -> usize {
        self.rings.iter().map(|r| r.len()).sum()
    }

    pub fn point(&self, v: VertexRef) -> &Point {
        &self.rings[v.ring][v.index]
    }

    /// All vertices in ring order, outer ring first.
    pub fn vertices(&self) -> impl Iterator<Item = (VertexRef, &Point)> {
        self.rings.iter().enumerate().flat_map(|(ri, ring)| {
            ring.iter()
                .enumerate()
                .map(move |(vi, p)| (VertexRef::new(ri, vi), p))
        })
    }

    /// Flat vertex id in [0, vertex_count): ring-major order.
    pub fn vertex_id(&self, v: VertexRef) -> usize {
        let mut base = 0;
        for r in 0..v.ring {
            base += self.rings[r].len();
        }
        base + v.index
    }

    pub fn vertex_from_id(&self, mut id: usize) -> VertexRef {
        for (ri, ring) in self.rings.iter().enumerate() {
            if id < ring.len() {
                return VertexRef::new(ri, id);
            }
            id -= ring.len();
        }
        panic!("vertex id out of range");
    }

    pub fn next_vertex(&self, v: VertexRef) -> VertexRef {
        VertexRef::new(v.ring, (v.index + 1) % self.rings[v.ring].len())
    }

    pub fn prev_vertex(&self, v: VertexRef) -> VertexRef {
        let n = self.rings[v.ring].len();
        VertexRef::new(v.ring, (v.index + n - 1) % n)
    }

    /// Directed boundary edges, interior on the left.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeRef, &Segment)> + '_ {
        self.edge_cache.iter().map(|(e, s)| (*e, s))
    }

    pub fn edge_segment(&self, e: EdgeRef) -> Segment {
        let ring = &self.rings[e.ring];
        Segment::new(
            ring[e.index].clone(),
            ring[(e.index + 1) % ring.len()].clone(),
        )
    }

    /// True when `v` is a reflex vertex (interior angle > half turn).
    pub fn is_reflex(&self, v: VertexRef) -> bool {
        let p = self.point(self.prev_vertex(v));
        let c = self.point(v);
        let n = self.point(self.next_vertex(v));
        orient(p, c, n) < 0
    }

    /// Locates a point by an even-odd ray crossing count against all rings,
    /// after an exact on-boundary test.
    pub fn locate(&self, p: &Point) -> Location {
        for (_, seg) in self.edges() {
            if seg.contains(p) {
                return Location::Boundary;
            }
        }
        // Even-odd over all rings: inside the outer ring, outside every hole.
        let mut inside = false;
        for ring in &self.rings {
            inside ^= super::ray_parity(ring, p);
        }
        if inside {
            Location::Interior
        } else {
            Location::Exterior
        }
    }

    /// True when the closed segment pq stays inside the closed region. Both
    /// endpoints must not be exterior; otherwise the answer is false.
    ///
    /// The segment is split at every contact with the boundary (proper
    /// crossings, endpoint touches, collinear overlap ends) and the midpoint
    /// of each resulting open piece is located; the segment is inside
    /// exactly when no midpoint is exterior.
    pub fn sees(&self, p: &Point, q: &Point) -> bool {
        if p == q {
            return self.locate(p) != Location::Exterior;
        }
        let lp = self.locate(p);
        if lp == Location::Exterior {
            return false;
        }
        self.sees_located(p, lp, q, self.locate(q))
    }

    /// `sees` for callers that already hold the endpoint locations, saving
    /// the two point-location passes. The locations must be exact.
    pub fn sees_located(&self, p: &Point, lp: Location, q: &Point, lq: Location) -> bool {
        if lp == Location::Exterior || lq == Location::Exterior {
            return false;
        }
        if p == q {
            return true;
        }
        let seg = Segment::new(p.clone(), q.clone());
        let d = seg.dir();
        let len2 = d.dot(&d);
        let param = |pt: &Point| -> Rat { seg.a.to(pt).dot(&d) / len2.clone() };
        let mut ts: Vec<Rat> = vec![Rat::zero(), num::One::one()];
        // Tracks whether the open segment met the boundary anywhere.
        let mut clean = true;
        for (_, e) in self.edges() {
            // Classify by orientation signs first: most edges miss the
            // sight line outright, and a strict double straddle is a
            // transversal crossing interior to both segments, which puts
            // part of the sight line outside. Only degenerate contacts
            // (endpoint touches, collinear overlaps) need the intersection
            // point itself.
            let o1 = orient(&seg.a, &seg.b, &e.a);
            let o2 = orient(&seg.a, &seg.b, &e.b);
            if o1 * o2 > 0 {
                continue;
            }
            let o3 = orient(&e.a, &e.b, &seg.a);
            let o4 = orient(&e.a, &e.b, &seg.b);
            if o3 * o4 > 0 {
                continue;
            }
            if o1 * o2 < 0 && o3 * o4 < 0 {
                return false;
            }
            match segment_intersection(&seg, e) {
                SegmentIntersection::Empty => {}
                SegmentIntersection::Point(x) => {
                    if x != seg.a && x != seg.b {
                        if x != e.a && x != e.b {
                            return false;
                        }
                        clean = false;
                        ts.push(param(&x));
                    }
                }
                SegmentIntersection::Overlap(x, y) => {
                    clean = false;
                    if x != seg.a && x != seg.b {
                        ts.push(param(&x));
                    }
                    if y != seg.a && y != seg.b {
                        ts.push(param(&y));
                    }
                }
            }
        }
        if clean && (lp == Location::Interior || lq == Location::Interior) {
            // The open segment avoids the boundary entirely, and one end
            // sits strictly inside, so the whole open segment does too.
            return true;
        }
        ts.sort();
        ts.dedup();
        for w in ts.windows(2) {
            let tm = (&w[0] + &w[1]) / super::ri(2);
            let m = seg.a.add(&d.scale(&tm));
            if self.locate(&m) == Location::Exterior {
                return false;
            }
        }
        true
    }

    /// Visibility between two polygon vertices.
    pub fn sees_vertices(&self, u: VertexRef, v: VertexRef) -> bool {
        self.sees(self.point(u), self.point(v))
    }

    /// Twice the area of the region (outer minus holes).
    pub fn area2(&self) -> Rat {
        let mut acc = Rat::zero();
        for ring in &self.rings {
            acc += ring_area2(ring);
        }
        acc
    }

    /// The two boundary directions out of `v`: toward the next vertex and
    /// toward the previous vertex.
    pub fn neighbor_dirs(&self, v: VertexRef) -> (Vector, Vector) {
        let c = self.point(v);
        let n = self.point(self.next_vertex(v));
        let p = self.point(self.prev_vertex(v));
        (c.to(n), c.to(p))
    }

    /// True when direction `u` out of vertex `v` points strictly into the
    /// interior cone at `v`. The interior cone runs counterclockwise from
    /// the next-vertex direction to the previous-vertex direction.
    pub fn dir_strictly_interior(&self, v: VertexRef, u: &Vector) -> bool {
        let (dn, dp) = self.neighbor_dirs(v);
        super::strictly_in_ccw_cone(&dn, &dp, u)
    }
}

/// Rejects any three collinear vertices across all rings. For each pivot,
/// the directions to every other vertex are normalized to a canonical
/// half-plane representative and sorted; a repeat means two vertices are
/// collinear with the pivot.
fn check_no_collinear_triple(rings: &[Vec<Point>]) -> Result<()> {
    let mut pts: Vec<(Point, usize, usize)> = Vec::new();
    for (ri, ring) in rings.iter().enumerate() {
        for (vi, p) in ring.iter().enumerate() {
            pts.push((p.clone(), ri, vi));
        }
    }
    let n = pts.len();
    for i in 0..n {
        let pivot = &pts[i].0;
        let mut dirs: Vec<(Rat, Rat, usize)> = Vec::with_capacity(n - 1);
        for (j, other) in pts.iter().enumerate() {
            if j == i {
                continue;
            }
            let v = pivot.to(&other.0);
            // Canonical axial representative: flip into y > 0, or y == 0
            // with x > 0, then divide out one coordinate.
            let (mut x, mut y) = (v.x, v.y);
            if y.is_negative() || (y.is_zero() && x.is_negative()) {
                x = -x;
                y = -y;
            }
            let key = if y.is_zero() {
                (Rat::zero(), Rat::zero(), j)
            } else {
                (x / y.clone(), num::One::one(), j)
            };
            dirs.push(key);
        }
        dirs.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        for w in dirs.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                let a = &pts[w[0].2];
                let b = &pts[w[1].2];
                let c = &pts[i];
                return Err(Error::InvalidPolygon(format!(
                    "collinear vertices: ring {} index {} {:?}, ring {} index {} {:?}, ring {} index {} {:?}",
                    c.1, c.2, c.0, a.1, a.2, a.0, b.1, b.2, b.0
                )));
            }
        }
    }
    Ok(())
}
