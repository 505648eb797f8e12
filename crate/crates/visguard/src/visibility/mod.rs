//! Vertex visibility: the region of a polygon seen from one of its
//! vertices, the windows bounding that region, pockets hidden behind
//! non-transverse windows, and the first-hit component sequence of a
//! rotating ray.
//!
//! The main construction is an angular sweep. A ray anchored at the owner
//! vertex rotates counterclockwise through the interior cone, maintaining
//! the boundary edges it crosses ordered by distance. The visible boundary
//! follows the nearest edge; at vertex events the nearest edge changes, and
//! every radial jump of the visible boundary is a window.
//!
//! All of it assumes a validated polygon: no duplicate vertices and no
//! three collinear vertices anywhere. Those guarantees make every tie in
//! the sweep impossible, which the code checks eagerly with assertions.

pub mod naive;

use crate::geom::{
    ccw_cmp, orient, ring_area2, strictly_in_ccw_cone, EdgeRef, Point, PolygonWithHoles, Rat,
    Vector, VertexRef,
};
use crate::{Error, Result};
use num::{One, Signed, Zero};

/// Which side of the ray from the owner through the base hides the pocket,
/// or whether the window crosses between boundary components.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WindowKind {
    Left,
    Right,
    /// Base and far endpoint lie on different boundary rings.
    Trans,
}

/// A maximal segment of the visible-region boundary not on the polygon
/// boundary: it runs from a polygon vertex (the base) radially away from
/// the owner until the first proper boundary hit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Window {
    pub owner: VertexRef,
    pub base: VertexRef,
    /// Far endpoint, strictly inside `end_edge`.
    pub end: Point,
    pub end_edge: EdgeRef,
    pub kind: WindowKind,
}

impl Window {
    pub fn base_point<'a>(&self, poly: &'a PolygonWithHoles) -> &'a Point {
        poly.point(self.base)
    }

    /// Sign of `orient(owner, base, s)` for points `s` near the window that
    /// the owner does not see. The boundary turning at the base blocks the
    /// side its neighbors lie on, and both non-owner neighbors lie strictly
    /// on that one side. Left windows give +1, right windows -1; transverse
    /// windows follow the same neighbor rule.
    pub fn hidden_side(&self, poly: &PolygonWithHoles) -> i32 {
        base_block_side(poly, self.owner, self.base)
    }
}

/// The side of the directed line owner->base blocked at the base vertex:
/// the common side of the base's non-owner ring neighbors.
fn base_block_side(poly: &PolygonWithHoles, owner: VertexRef, base: VertexRef) -> i32 {
    let op = poly.point(owner);
    let bp = poly.point(base);
    let mut side = 0;
    for nb in [poly.next_vertex(base), poly.prev_vertex(base)] {
        if nb == owner {
            continue; // the owner itself gives no side information
        }
        let o = orient(op, bp, poly.point(nb));
        assert!(o != 0, "window neighbor collinear with the ray");
        if side == 0 {
            side = o;
        } else {
            assert_eq!(side, o, "window neighbors straddle the ray");
        }
    }
    assert!(side != 0);
    side
}

/// The region of the polygon visible from `owner`, as a closed chain
/// starting at the owner point, plus the windows on its boundary.
#[derive(Clone, Debug)]
pub struct VisibilityPolygon {
    pub owner: VertexRef,
    pub chain: Vec<Point>,
    pub windows: Vec<Window>,
}

/// The part of the polygon hidden behind a left or right window: the ring
/// runs from the window base along the boundary to the window end and is
/// closed by the window segment. Stored counterclockwise.
#[derive(Clone, Debug)]
pub struct Pocket {
    pub window: Window,
    pub ring: Vec<Point>,
}

impl Pocket {
    pub fn area2(&self) -> Rat {
        ring_area2(&self.ring)
    }
}

fn classify_window(
    poly: &PolygonWithHoles,
    owner: VertexRef,
    base: VertexRef,
    end_edge: EdgeRef,
) -> WindowKind {
    if end_edge.ring != base.ring {
        WindowKind::Trans
    } else if base_block_side(poly, owner, base) < 0 {
        WindowKind::Right
    } else {
        WindowKind::Left
    }
}

fn make_window(
    poly: &PolygonWithHoles,
    owner: VertexRef,
    base: VertexRef,
    end_edge: EdgeRef,
    end: Point,
) -> Window {
    let kind = classify_window(poly, owner, base, end_edge);
    Window {
        owner,
        base,
        end,
        end_edge,
        kind,
    }
}

/// Ray parameter of the crossing of `e` with the ray `v + s*d`, `s` in ray
/// units. The edge must not be parallel to the ray.
fn ray_param(poly: &PolygonWithHoles, vp: &Point, d: &Vector, e: EdgeRef) -> Rat {
    let seg = poly.edge_segment(e);
    let ed = seg.dir();
    let denom = d.cross(&ed);
    assert!(!denom.is_zero(), "edge parallel to the sweep ray");
    vp.to(&seg.a).cross(&ed) / denom
}

fn ray_point(poly: &PolygonWithHoles, vp: &Point, d: &Vector, e: EdgeRef) -> Point {
    let s = ray_param(poly, vp, d, e);
    vp.add(&d.scale(&s))
}

/// Computes the visibility polygon of a vertex by the angular sweep.
pub fn visibility_polygon(poly: &PolygonWithHoles, v: VertexRef) -> VisibilityPolygon {
    let one: Rat = One::one();
    let vp = poly.point(v).clone();
    let va = poly.next_vertex(v); // opening anchor
    let vb = poly.prev_vertex(v); // closing anchor
    let d_start = vp.to(poly.point(va));
    let d_end = vp.to(poly.point(vb));

    // Edges properly crossed by the opening ray, nearest first. The open
    // segment from the owner to the anchor is a boundary edge, so every
    // crossing lies beyond the anchor.
    let mut status: Vec<EdgeRef> = Vec::new();
    for (e, seg) in poly.edges() {
        let ed = seg.dir();
        let denom = d_start.cross(&ed);
        if denom.is_zero() {
            continue;
        }
        let t = vp.to(&seg.a).cross(&ed) / denom.clone();
        let u = vp.to(&seg.a).cross(&d_start) / denom;
        if t.is_positive() && u.is_positive() && u < one {
            assert!(t > one, "edge crosses the anchor boundary edge");
            status.push(e);
        }
    }
    status.sort_by(|&x, &y| {
        ray_param(poly, &vp, &d_start, x).cmp(&ray_param(poly, &vp, &d_start, y))
    });

    let mut chain = vec![vp.clone()];
    let mut windows: Vec<Window> = Vec::new();

    // Opening anchor: either the boundary turns at the anchor vertex into
    // its outgoing edge, or it turns away and the ray continues inside,
    // which opens a window based at the anchor.
    let na = poly.next_vertex(va);
    let c_open = d_start.cross(&vp.to(poly.point(na)));
    assert!(!c_open.is_zero(), "collinear vertices at the opening anchor");
    if c_open.is_positive() {
        chain.push(poly.point(va).clone());
        status.insert(
            0,
            EdgeRef {
                ring: va.ring,
                index: va.index,
            },
        );
    } else {
        assert!(!status.is_empty(), "window ray must exit the region");
        let front = status[0];
        let q = ray_point(poly, &vp, &d_start, front);
        windows.push(make_window(poly, v, va, front, q.clone()));
        chain.push(q);
    }

    // Interior events: every vertex strictly inside the cone, in
    // counterclockwise order. Directions are pairwise distinct.
    let mut events: Vec<VertexRef> = poly
        .vertices()
        .map(|(w, _)| w)
        .filter(|&w| w != v && w != va && w != vb)
        .filter(|&w| strictly_in_ccw_cone(&d_start, &d_end, &vp.to(poly.point(w))))
        .collect();
    events.sort_by(|&w1, &w2| {
        ccw_cmp(&d_start, &vp.to(poly.point(w1)), &vp.to(poly.point(w2)))
    });
    for pair in events.windows(2) {
        let d1 = vp.to(poly.point(pair[0]));
        let d2 = vp.to(poly.point(pair[1]));
        assert_ne!(
            ccw_cmp(&d_start, &d1, &d2),
            std::cmp::Ordering::Equal,
            "two events share a direction"
        );
    }

    for &w in &events {
        let wp = poly.point(w).clone();
        let dw = vp.to(&wp);
        // With the ray parametrized by dw, the event vertex sits at 1.
        let far_in = poly.prev_vertex(w);
        let far_out = poly.next_vertex(w);
        let e_in = EdgeRef {
            ring: w.ring,
            index: far_in.index,
        };
        let e_out = EdgeRef {
            ring: w.ring,
            index: w.index,
        };
        let mut starting: Vec<(EdgeRef, VertexRef)> = Vec::new();
        let mut ending: Vec<EdgeRef> = Vec::new();
        for (e, far) in [(e_in, far_in), (e_out, far_out)] {
            let c = dw.cross(&vp.to(poly.point(far)));
            assert!(!c.is_zero(), "incident edge collinear with the ray");
            if c.is_positive() {
                starting.push((e, far));
            } else {
                ending.push(e);
            }
        }
        // Order a sibling pair by distance just past the event: the edge
        // whose far end bends toward the owner is crossed nearer.
        if starting.len() == 2 {
            let u1 = poly.point(starting[0].1);
            let u2 = poly.point(starting[1].1);
            let d1 = dw.dot(&wp.to(u1));
            let n1 = dw.cross(&vp.to(u1));
            let d2 = dw.dot(&wp.to(u2));
            let n2 = dw.cross(&vp.to(u2));
            assert!(n1.is_positive() && n2.is_positive());
            if d1 * n2 > d2 * n1 {
                starting.swap(0, 1);
            }
        }

        assert!(!status.is_empty(), "sweep ray lost the boundary");
        let front_param = ray_param(poly, &vp, &dw, status[0]);
        if front_param < one {
            // Occluded event: maintain the status, the region is unchanged.
            let lo = status.partition_point(|&e| ray_param(poly, &vp, &dw, e) < one);
            let mut hi = lo;
            while hi < status.len() && ray_param(poly, &vp, &dw, status[hi]) == one {
                hi += 1;
            }
            let removed: Vec<EdgeRef> = status.drain(lo..hi).collect();
            assert_eq!(removed.len(), ending.len(), "status out of step");
            assert!(removed.iter().all(|e| ending.contains(e)));
            for (k, (e, _)) in starting.iter().enumerate() {
                status.insert(lo + k, *e);
            }
        } else if front_param == one {
            // The visible boundary arrives at the event vertex.
            chain.push(wp.clone());
            let mut hi = 0;
            while hi < status.len() && ray_param(poly, &vp, &dw, status[hi]) == one {
                hi += 1;
            }
            let removed: Vec<EdgeRef> = status.drain(0..hi).collect();
            assert_eq!(removed.len(), ending.len(), "status out of step");
            assert!(removed.iter().all(|e| ending.contains(e)));
            match starting.len() {
                1 => status.insert(0, starting[0].0),
                0 => {
                    // Both edges fall behind: the boundary jumps outward
                    // along the ray, opening a window.
                    assert!(!status.is_empty(), "window ray must exit the region");
                    let front = status[0];
                    assert!(ray_param(poly, &vp, &dw, front) > one);
                    let q = ray_point(poly, &vp, &dw, front);
                    windows.push(make_window(poly, v, w, front, q.clone()));
                    chain.push(q);
                }
                _ => unreachable!("an arriving front leaves at most one edge ahead"),
            }
        } else {
            // The event vertex pops in front of the boundary: the region
            // jumps inward along the ray, opening a window.
            assert!(ending.is_empty(), "an ending edge would already be in front");
            assert_eq!(starting.len(), 2);
            let front = status[0];
            let q = ray_point(poly, &vp, &dw, front);
            chain.push(q.clone());
            chain.push(wp.clone());
            windows.push(make_window(poly, v, w, front, q));
            for (k, (e, _)) in starting.iter().enumerate() {
                status.insert(k, *e);
            }
        }
    }

    // Closing anchor, mirror of the opening.
    let pb = poly.prev_vertex(vb);
    let c_close = d_end.cross(&vp.to(poly.point(pb)));
    assert!(!c_close.is_zero(), "collinear vertices at the closing anchor");
    if c_close.is_negative() {
        let e_last = EdgeRef {
            ring: vb.ring,
            index: pb.index,
        };
        assert!(!status.is_empty());
        assert_eq!(status[0], e_last, "closing edge is not in front");
        assert_eq!(ray_param(poly, &vp, &d_end, e_last), one);
        chain.push(poly.point(vb).clone());
    } else {
        assert!(!status.is_empty(), "window ray must exit the region");
        let front = status[0];
        assert!(ray_param(poly, &vp, &d_end, front) > one);
        let q = ray_point(poly, &vp, &d_end, front);
        windows.push(make_window(poly, v, vb, front, q.clone()));
        chain.push(q);
        chain.push(poly.point(vb).clone());
    }

    windows.sort_by_key(|w| (w.base.ring, w.base.index));
    VisibilityPolygon {
        owner: v,
        chain,
        windows,
    }
}

/// The windows of one owner, sorted by base vertex.
pub fn windows_of(poly: &PolygonWithHoles, v: VertexRef) -> Vec<Window> {
    visibility_polygon(poly, v).windows
}

/// All windows of all vertices.
pub fn all_windows(poly: &PolygonWithHoles) -> Vec<Window> {
    poly.vertices()
        .flat_map(|(v, _)| windows_of(poly, v))
        .collect()
}

/// The region hidden behind a left or right window, walked along the
/// boundary from the base to the far endpoint.
pub fn pocket_of(poly: &PolygonWithHoles, w: &Window) -> Result<Pocket> {
    if w.kind == WindowKind::Trans {
        return Err(Error::TransPocket);
    }
    assert_eq!(w.end_edge.ring, w.base.ring);
    let bp = poly.point(w.base);
    let next = poly.next_vertex(w.base);
    let prev = poly.prev_vertex(w.base);
    let u_next = bp.to(poly.point(next));
    let u_prev = bp.to(poly.point(prev));
    let c = u_next.cross(&u_prev);
    assert!(!c.is_zero());
    // The pocket-side neighbor is the one the boundary rotates into when
    // leaving the window: clockwise-most for a right window,
    // counterclockwise-most for a left window.
    let forward = match w.kind {
        WindowKind::Right => c.is_negative(),
        WindowKind::Left => c.is_positive(),
        WindowKind::Trans => unreachable!(),
    };
    let ring_len = poly.ring(w.base.ring).len();
    let stop = if forward {
        VertexRef::new(w.end_edge.ring, w.end_edge.index)
    } else {
        VertexRef::new(w.end_edge.ring, (w.end_edge.index + 1) % ring_len)
    };
    let mut ring = vec![bp.clone()];
    let mut cur = w.base;
    for _ in 0..ring_len {
        cur = if forward {
            poly.next_vertex(cur)
        } else {
            poly.prev_vertex(cur)
        };
        assert_ne!(cur, w.base, "pocket walk wrapped the whole ring");
        ring.push(poly.point(cur).clone());
        if cur == stop {
            break;
        }
    }
    assert_eq!(cur, stop, "pocket walk never reached the window end");
    ring.push(w.end.clone());
    if ring_area2(&ring).is_negative() {
        ring.reverse();
    }
    Ok(Pocket {
        window: w.clone(),
        ring,
    })
}

/// The sequence of boundary components first hit by a ray rotating
/// clockwise a full turn around `v`, starting inside the external cone.
/// Directions pointing out of the region at `v` hit `v`'s own ring.
/// Consecutive repeats are collapsed, so the sequence begins and ends with
/// the owner's component and changes exactly at transverse windows.
pub fn component_sequence(poly: &PolygonWithHoles, v: VertexRef) -> Vec<usize> {
    let vp = poly.point(v);
    let (dn, dp) = poly.neighbor_dirs(v);
    // A direction strictly inside the external cone: the external cone is
    // the reverse cone at a convex vertex and the neighbor wedge at a
    // reflex one.
    let r0 = if dn.cross(&dp).is_positive() {
        dn.add(&dp).neg()
    } else {
        dn.add(&dp)
    };
    assert!(!r0.is_zero());

    // Critical directions: every other vertex, plus the compass to keep
    // each gap under a quarter turn.
    let mut crit: Vec<Vector> = poly
        .vertices()
        .filter(|&(w, _)| w != v)
        .map(|(_, p)| vp.to(p))
        .collect();
    for (x, y) in [
        (1, 0),
        (1, 1),
        (0, 1),
        (-1, 1),
        (-1, 0),
        (-1, -1),
        (0, -1),
        (1, -1),
    ] {
        crit.push(Vector::new(crate::geom::ri(x), crate::geom::ri(y)));
    }
    // Clockwise order from r0: the group parallel to r0 first, then the
    // rest in reverse counterclockwise order.
    crit.sort_by(|a, b| ccw_cmp(&r0, a, b));
    crit.dedup_by(|a, b| ccw_cmp(&r0, a, b) == std::cmp::Ordering::Equal);
    let zero_group = crit
        .iter()
        .take_while(|u| crate::geom::ccw_class(&r0, u) == 0)
        .count();
    crit[zero_group..].reverse();

    let first_hit = |d: &Vector| -> usize {
        if !strictly_in_ccw_cone(&dn, &dp, d) {
            return v.ring;
        }
        let one: Rat = One::one();
        let mut best: Option<(Rat, usize)> = None;
        for (e, seg) in poly.edges() {
            let ed = seg.dir();
            let denom = d.cross(&ed);
            if denom.is_zero() {
                continue;
            }
            let t = vp.to(&seg.a).cross(&ed) / denom.clone();
            let u = vp.to(&seg.a).cross(d) / denom;
            if t.is_positive() && u.is_positive() && u < one {
                if best.as_ref().map_or(true, |(bt, _)| &t < bt) {
                    best = Some((t, e.ring));
                }
            }
        }
        best.expect("interior ray must exit the region").1
    };

    let m = crit.len();
    let mut comps = Vec::with_capacity(m + 1);
    // Clockwise arcs between consecutive criticals; a positive combination
    // of the two bounding directions lies strictly inside an arc shorter
    // than a half turn.
    let sample_arc = |i: usize, j: usize| -> usize {
        let mid = crit[i].add(&crit[j]);
        assert!(!mid.is_zero());
        first_hit(&mid)
    };
    if zero_group == 1 {
        for i in 0..m {
            comps.push(sample_arc(i, (i + 1) % m));
        }
    } else {
        // No critical parallel to r0: the wrap arc contains r0 and both
        // bounds the start and the close of the turn.
        comps.push(sample_arc(m - 1, 0));
        for i in 0..m - 1 {
            comps.push(sample_arc(i, i + 1));
        }
        comps.push(sample_arc(m - 1, 0));
    }
    comps.dedup();
    assert_eq!(*comps.first().unwrap(), v.ring);
    assert_eq!(*comps.last().unwrap(), v.ring);
    comps
}
