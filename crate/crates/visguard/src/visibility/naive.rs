//! Definitional window computation, kept as an independent check on the
//! angular sweep. Quadratic per owner, no shared machinery beyond the
//! window constructor itself.

use super::{make_window, Window};
use crate::geom::{EdgeRef, PolygonWithHoles, Rat, VertexRef};
use num::{One, Signed, Zero};

/// Windows of `v`, one candidate base at a time: a vertex `b` is a window
/// base when the owner sees it and the direction from the owner continues
/// past `b` strictly into the interior; the window then runs from `b` to
/// the first proper boundary crossing beyond it.
pub fn naive_windows(poly: &PolygonWithHoles, v: VertexRef) -> Vec<Window> {
    let one: Rat = One::one();
    let vp = poly.point(v);
    let mut out = Vec::new();
    for (b, bp) in poly.vertices() {
        if b == v {
            continue;
        }
        let d = vp.to(bp);
        if !poly.dir_strictly_interior(b, &d) {
            continue;
        }
        if !poly.sees(vp, bp) {
            continue;
        }
        // Nearest crossing strictly past the base (the base sits at 1 in
        // ray units). Edges incident to the base meet the ray at u = 0 or
        // u = 1, never strictly between, so they are skipped by the u test.
        let mut best: Option<(Rat, EdgeRef)> = None;
        for (e, seg) in poly.edges() {
            let ed = seg.dir();
            let denom = d.cross(&ed);
            if denom.is_zero() {
                continue;
            }
            let vy = vp.to(&seg.a);
            let t = vy.cross(&ed) / denom.clone();
            let u = vy.cross(&d) / denom;
            if t > one && u.is_positive() && u < one {
                if best.as_ref().map_or(true, |(bt, _)| &t < bt) {
                    best = Some((t, e));
                }
            }
        }
        let (t, e) = best.expect("window ray must exit the region");
        let end = vp.add(&d.scale(&t));
        out.push(make_window(poly, v, b, e, end));
    }
    out.sort_by_key(|w| (w.base.ring, w.base.index));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{rq, Point};

    #[test]
    fn naive_windows_on_a_notch() {
        let poly =
            PolygonWithHoles::from_ints(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 3), (0, 3)], &[])
                .unwrap();
        let ws = naive_windows(&poly, VertexRef::new(0, 5));
        assert_eq!(ws.len(), 1);
        assert_eq!(ws[0].base, VertexRef::new(0, 3));
        assert_eq!(ws[0].end, Point::new(rq(3, 2), rq(0, 1)));
    }
}
