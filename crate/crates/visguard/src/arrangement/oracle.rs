//! Reference face count for the decomposition, computed without the sweep
//! or the half-edge structure: split every pair of segments directly, then
//! count faces with Euler's relation and discard the unbounded face and the
//! hole interiors.

use super::sweep::planarize_pairs;
use crate::geom::{Point, PolygonWithHoles, Segment};
use crate::visibility::Window;
use std::collections::BTreeMap;

/// Number of subdivision faces lying inside the polygon.
///
/// For a planar graph with V vertices, E edges and C connected components,
/// V - E + F = 1 + C counting the unbounded face, so the interior face
/// count is E - V + C - hole_count.
pub fn interior_face_count(poly: &PolygonWithHoles, windows: &[Window]) -> usize {
    let mut segs: Vec<Segment> = poly.edges().map(|(_, s)| s.clone()).collect();
    for w in windows {
        segs.push(Segment::new(w.base_point(poly).clone(), w.end.clone()));
    }
    let pl = planarize_pairs(&segs);

    let mut ids: BTreeMap<Point, usize> = BTreeMap::new();
    let id = |p: &Point, ids: &mut BTreeMap<Point, usize>| {
        let n = ids.len();
        *ids.entry(p.clone()).or_insert(n)
    };
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for chain in &pl.splits {
        for pair in chain.windows(2) {
            let a = id(&pair[0], &mut ids);
            let b = id(&pair[1], &mut ids);
            edges.push((a, b));
        }
    }

    let mut parent: Vec<usize> = (0..ids.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(a, b) in &edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let mut roots: Vec<usize> = (0..ids.len()).map(|v| find(&mut parent, v)).collect();
    roots.sort_unstable();
    roots.dedup();
    let components = roots.len();

    edges.len() + components - ids.len() - poly.hole_count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_without_windows_has_one_face() {
        let poly =
            PolygonWithHoles::from_ints(&[(0, 0), (7, 1), (6, 6), (1, 5)], &[]).unwrap();
        assert_eq!(interior_face_count(&poly, &[]), 1);
    }

    #[test]
    fn four_windows_at_one_reflex_vertex_give_five_faces() {
        let poly =
            PolygonWithHoles::from_ints(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 3), (0, 3)], &[])
                .unwrap();
        let ws = crate::arrangement::collect_windows(&poly);
        assert_eq!(ws.len(), 4);
        assert_eq!(interior_face_count(&poly, &ws), 5);
    }
}
