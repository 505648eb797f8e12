//! The minimum visibility decomposition: the planar subdivision of the
//! polygon cut by every window, cells labeled with the set of vertices
//! seeing them, the directed dual across windows, and its sinks.
//!
//! Faces are assembled from a half-edge structure on the planarized
//! segments. Visible sets are propagated cell to cell: crossing a window
//! toggles exactly its owner, on the side the window's base blocks. Direct
//! recomputation by `sees` is kept behind `verify_visible_sets`.

pub mod oracle;
mod sweep;

use crate::bitset::VertexSet;
use crate::geom::{
    ccw_cmp, representative_point, triangulate_rings, EdgeRef, Point,
    PolygonWithHoles, Rat, Segment, Vector,
};
use crate::visibility::{all_windows, Window};
use crate::{Error, Result};
use num::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// All windows of all vertices, deduplicated by geometry. Two distinct
/// owners can never induce the same segment (that would put three vertices
/// on one line), so deduplication is a formality, but it keeps the output
/// canonical: sorted by base, then far endpoint, then owner.
pub fn collect_windows(poly: &PolygonWithHoles) -> Vec<Window> {
    let mut ws = all_windows(poly);
    ws.sort_by(|a, b| {
        (a.base, &a.end, a.owner)
            .cmp(&(b.base, &b.end, b.owner))
    });
    ws.dedup_by(|a, b| a.base == b.base && a.end == b.end);
    ws
}

/// Which input segment a sub-edge came from.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum SegSource {
    Boundary(EdgeRef),
    Window(usize),
}

struct Dart {
    from: usize,
    to: usize,
    src: SegSource,
    next: usize,
    cell: Option<usize>,
}

/// One face of the decomposition that lies inside the polygon.
#[derive(Clone, Debug)]
pub struct Cell {
    /// Interior point: centroid of the largest triangle of the face.
    pub rep: Point,
    /// Vertices seeing the whole cell; empty until sets are assigned.
    pub visible: VertexSet,
    /// Boundary walk, counterclockwise.
    pub ring: Vec<Point>,
}

pub struct Decomposition {
    poly: PolygonWithHoles,
    windows: Vec<Window>,
    crossing_count: usize,
    cells: Vec<Cell>,
    /// Per window sub-edge: (cell left of base->end, cell right of it,
    /// window index).
    adjacency: Vec<(usize, usize, usize)>,
    labeled: bool,
}

/// The set of vertices of `poly` that see `p`, as flat vertex ids.
pub fn visible_set(poly: &PolygonWithHoles, p: &Point) -> VertexSet {
    let mut set = VertexSet::with_capacity(poly.vertex_count());
    for (v, vp) in poly.vertices() {
        if poly.sees(vp, p) {
            set.insert(poly.vertex_id(v));
        }
    }
    set
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

/// Builds the planar subdivision of the polygon interior induced by the
/// windows. Faces outside the polygon (the unbounded face and the hole
/// interiors) are identified structurally and dropped.
pub fn build_decomposition(poly: &PolygonWithHoles, windows: Vec<Window>) -> Result<Decomposition> {
    for w in &windows {
        let seg = poly.edge_segment(w.end_edge);
        if !seg.contains(&w.end) || w.end == seg.a || w.end == seg.b {
            return Err(Error::WindowOffBoundary(
                format!("{:?}", w.end),
                format!("{:?}", w.end_edge),
            ));
        }
    }

    let mut segs: Vec<Segment> = Vec::new();
    let mut srcs: Vec<SegSource> = Vec::new();
    for (e, s) in poly.edges() {
        segs.push(s.clone());
        srcs.push(SegSource::Boundary(e));
    }
    for (i, w) in windows.iter().enumerate() {
        segs.push(Segment::new(w.base_point(poly).clone(), w.end.clone()));
        srcs.push(SegSource::Window(i));
    }

    let pl = sweep::planarize(&segs);

    // Vertices and twinned darts of the planar graph. Twins are adjacent
    // in the dart list: twin(d) = d ^ 1, with even darts running along the
    // input segment's own direction.
    let mut ids: BTreeMap<Point, usize> = BTreeMap::new();
    let mut points: Vec<Point> = Vec::new();
    let intern = |p: &Point, points: &mut Vec<Point>, ids: &mut BTreeMap<Point, usize>| {
        *ids.entry(p.clone()).or_insert_with(|| {
            points.push(p.clone());
            points.len() - 1
        })
    };
    let mut darts: Vec<Dart> = Vec::new();
    for (si, chain) in pl.splits.iter().enumerate() {
        for pair in chain.windows(2) {
            let a = intern(&pair[0], &mut points, &mut ids);
            let b = intern(&pair[1], &mut points, &mut ids);
            assert_ne!(a, b, "zero-length sub-edge");
            for (f, t) in [(a, b), (b, a)] {
                darts.push(Dart {
                    from: f,
                    to: t,
                    src: srcs[si],
                    next: usize::MAX,
                    cell: None,
                });
            }
        }
    }

    // The graph is connected: every hole ring carries a window that leaves
    // its top vertex upward and lands on a ring with a higher top.
    let mut dsu = Dsu::new(points.len());
    for d in darts.iter().step_by(2) {
        dsu.union(d.from, d.to);
    }
    let root = dsu.find(0);
    assert!(
        (0..points.len()).all(|i| dsu.find(i) == root),
        "subdivision graph is disconnected"
    );

    // Rotation at each vertex: outgoing darts counterclockwise from east.
    let east = Vector::new(crate::geom::ri(1), crate::geom::ri(0));
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); points.len()];
    for (d, dart) in darts.iter().enumerate() {
        out[dart.from].push(d);
    }
    for (v, ds) in out.iter_mut().enumerate() {
        ds.sort_by(|&a, &b| {
            ccw_cmp(
                &east,
                &points[v].to(&points[darts[a].to]),
                &points[v].to(&points[darts[b].to]),
            )
        });
        for pair in ds.windows(2) {
            assert_ne!(
                ccw_cmp(
                    &east,
                    &points[v].to(&points[darts[pair[0]].to]),
                    &points[v].to(&points[darts[pair[1]].to]),
                ),
                std::cmp::Ordering::Equal,
                "overlapping darts at one vertex"
            );
        }
    }

    // next(d): at the head of d, the clockwise neighbor of d's twin, which
    // walks each face with its interior on the left.
    for d in 0..darts.len() {
        let head = darts[d].to;
        let ds = &out[head];
        let j = ds.iter().position(|&x| x == (d ^ 1)).unwrap();
        darts[d].next = ds[(j + ds.len() - 1) % ds.len()];
    }

    // Trace face cycles.
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut cycle_of = vec![usize::MAX; darts.len()];
    for d0 in 0..darts.len() {
        if cycle_of[d0] != usize::MAX {
            continue;
        }
        let cid = cycles.len();
        let mut walk = Vec::new();
        let mut d = d0;
        loop {
            cycle_of[d] = cid;
            walk.push(d);
            d = darts[d].next;
            if d == d0 {
                break;
            }
        }
        cycles.push(walk);
    }

    // Euler check for a connected planar graph.
    let edge_count = darts.len() / 2;
    assert_eq!(cycles.len(), edge_count - points.len() + 2, "face count breaks Euler's relation");

    // Sort cycles into the unbounded face, one face per hole, and cells.
    let h = poly.hole_count();
    let mut unbounded = None;
    let mut hole_rings: BTreeSet<usize> = BTreeSet::new();
    let mut cells: Vec<Cell> = Vec::new();
    let mut cell_of_cycle: Vec<Option<usize>> = vec![None; cycles.len()];
    for (cid, walk) in cycles.iter().enumerate() {
        let mut area2 = Rat::zero();
        for &d in walk {
            let p = &points[darts[d].from];
            let q = &points[darts[d].to];
            area2 += &p.x * &q.y - &q.x * &p.y;
        }
        assert!(!area2.is_zero(), "face cycle with zero area");
        let reversed_ring = |d: usize| match darts[d].src {
            SegSource::Boundary(e) if d % 2 == 1 => Some(e.ring),
            _ => None,
        };
        if area2.is_negative() {
            assert!(unbounded.is_none(), "two unbounded faces");
            assert!(
                walk.iter().all(|&d| reversed_ring(d) == Some(0)),
                "unbounded face touches more than the outer ring"
            );
            unbounded = Some(cid);
            continue;
        }
        let rings: BTreeSet<Option<usize>> = walk.iter().map(|&d| reversed_ring(d)).collect();
        if rings.len() == 1 {
            if let Some(r) = rings.into_iter().next().unwrap() {
                assert!(r >= 1, "outer ring traversed backwards inside the polygon");
                assert!(hole_rings.insert(r), "hole ring bounds two faces");
                continue;
            }
        }
        let ring: Vec<Point> = walk.iter().map(|&d| points[darts[d].from].clone()).collect();
        for &d in walk {
            if let SegSource::Boundary(_) = darts[d].src {
                assert_eq!(d % 2, 0, "cell walks a boundary edge against its ring");
            }
        }
        let tris = triangulate_rings(&[ring.clone()]);
        if tris.is_empty() {
            return Err(Error::Inconsistent(format!(
                "face {} has no interior triangles",
                cid
            )));
        }
        let rep = representative_point(&tris);
        cell_of_cycle[cid] = Some(cells.len());
        cells.push(Cell {
            rep,
            visible: VertexSet::with_capacity(poly.vertex_count()),
            ring,
        });
    }
    assert!(unbounded.is_some(), "no unbounded face traced");
    assert_eq!(hole_rings.len(), h, "hole faces do not match the holes");

    for (d, dart) in darts.iter_mut().enumerate() {
        dart.cell = cell_of_cycle[cycle_of[d]];
    }

    // Window sub-edges and the cells they separate. Even darts run from
    // base toward end, so their left cell lies on the positive side of the
    // owner's ray.
    let mut adjacency = Vec::new();
    for d in (0..darts.len()).step_by(2) {
        if let SegSource::Window(wi) = darts[d].src {
            let left = darts[d].cell.expect("window sub-edge borders the outside");
            let right = darts[d ^ 1].cell.expect("window sub-edge borders the outside");
            adjacency.push((left, right, wi));
        }
    }

    Ok(Decomposition {
        poly: poly.clone(),
        windows,
        crossing_count: pl.crossings,
        cells,
        adjacency,
        labeled: false,
    })
}

/// Convenience: windows, subdivision, and visible sets in one call.
pub fn decompose(poly: &PolygonWithHoles) -> Result<Decomposition> {
    let mut d = build_decomposition(poly, collect_windows(poly))?;
    d.assign_visible_sets()?;
    Ok(d)
}

impl Decomposition {
    pub fn polygon(&self) -> &PolygonWithHoles {
        &self.poly
    }

    pub fn windows(&self) -> &[Window] {
        &self.windows
    }

    /// Distinct points where windows cross in the interior.
    pub fn crossing_count(&self) -> usize {
        self.crossing_count
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Labels every cell with its visible vertex set by spreading outward
    /// from cell 0, whose set is computed directly. Crossing a window's
    /// sub-edge toggles the window owner and nothing else; any disagreement
    /// between two propagation paths is reported as an error.
    pub fn assign_visible_sets(&mut self) -> Result<()> {
        let seed = visible_set(&self.poly, &self.cells[0].rep);
        if seed.is_empty() {
            return Err(Error::Inconsistent("cell 0 sees no vertex".into()));
        }

        let mut adj: Vec<Vec<(usize, usize, i32)>> = vec![Vec::new(); self.cells.len()];
        for &(left, right, wi) in &self.adjacency {
            adj[left].push((right, wi, 1));
            adj[right].push((left, wi, -1));
        }
        let hidden: Vec<i32> = self
            .windows
            .iter()
            .map(|w| w.hidden_side(&self.poly))
            .collect();
        let owner_id: Vec<usize> = self
            .windows
            .iter()
            .map(|w| self.poly.vertex_id(w.owner))
            .collect();

        let mut label: Vec<Option<VertexSet>> = vec![None; self.cells.len()];
        label[0] = Some(seed);
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            let here = label[c].clone().unwrap();
            for &(other, wi, my_side) in &adj[c] {
                let mut next = here.clone();
                let o = owner_id[wi];
                if -my_side == hidden[wi] {
                    if !next.contains(o) {
                        return Err(Error::Inconsistent(format!(
                            "window {} owner missing on its visible side at cell {}",
                            wi, c
                        )));
                    }
                    next.remove(o);
                } else {
                    if next.contains(o) {
                        return Err(Error::Inconsistent(format!(
                            "window {} owner already visible on its hidden side at cell {}",
                            wi, c
                        )));
                    }
                    next.insert(o);
                }
                match &label[other] {
                    Some(seen) => {
                        if *seen != next {
                            return Err(Error::Inconsistent(format!(
                                "cells {} and {} disagree across window {}",
                                c, other, wi
                            )));
                        }
                    }
                    None => {
                        label[other] = Some(next);
                        queue.push_back(other);
                    }
                }
            }
        }

        for (i, l) in label.into_iter().enumerate() {
            match l {
                Some(set) => {
                    if set.is_empty() {
                        return Err(Error::Inconsistent(format!("cell {} sees no vertex", i)));
                    }
                    self.cells[i].visible = set;
                }
                None => {
                    return Err(Error::Inconsistent(format!(
                        "cell {} unreachable across windows",
                        i
                    )))
                }
            }
        }
        self.labeled = true;
        Ok(())
    }

    /// Recomputes every cell's set directly with `sees` at the
    /// representative and compares against the propagated labels.
    pub fn verify_visible_sets(&self) -> Result<()> {
        if !self.labeled {
            return Err(Error::Inconsistent("visible sets not assigned".into()));
        }
        for (i, cell) in self.cells.iter().enumerate() {
            let direct = visible_set(&self.poly, &cell.rep);
            if direct != cell.visible {
                return Err(Error::Inconsistent(format!(
                    "cell {} label {} differs from direct recomputation {}",
                    i, cell.visible, direct
                )));
            }
        }
        Ok(())
    }
}

/// The dual of the decomposition: one node per cell, an edge across every
/// window sub-edge, directed toward the smaller visible set.
pub struct DualGraph {
    pub cell_count: usize,
    /// Deduplicated directed edges (from, to), visible(to) ⊂ visible(from).
    pub edges: Vec<(usize, usize)>,
}

pub fn build_dual(d: &Decomposition) -> Result<DualGraph> {
    if !d.labeled {
        return Err(Error::Inconsistent("visible sets not assigned".into()));
    }
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &(left, right, wi) in &d.adjacency {
        let a = &d.cells[left].visible;
        let b = &d.cells[right].visible;
        let (from, to) = if b.is_subset(a) && b.len() + 1 == a.len() {
            (left, right)
        } else if a.is_subset(b) && a.len() + 1 == b.len() {
            (right, left)
        } else {
            return Err(Error::Inconsistent(format!(
                "cells {} and {} across window {} have incomparable sets {} and {}",
                left, right, wi, a, b
            )));
        };
        edges.insert((from, to));
    }
    Ok(DualGraph {
        cell_count: d.cell_count(),
        edges: edges.into_iter().collect(),
    })
}

impl DualGraph {
    /// Cells with no outgoing edge: the cells of minimal visibility.
    pub fn sinks(&self) -> Vec<usize> {
        let mut has_out = vec![false; self.cell_count];
        for &(from, _) in &self.edges {
            has_out[from] = true;
        }
        (0..self.cell_count).filter(|&c| !has_out[c]).collect()
    }
}
