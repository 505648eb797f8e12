//! Finite hitting-set instance extracted from the sinks of a decomposition.
//!
//! The elements are the vertex ids of the polygon and each range is the
//! visible set of one sink cell. A guard set covers the polygon exactly when
//! it hits every range, so the continuous guarding problem reduces to hitting
//! this range space. Identical sink sets are collapsed into a single range;
//! `origin` remembers which sink cells produced each one.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arrangement::{build_dual, decompose, Decomposition, DualGraph};
use crate::bitset::VertexSet;
use crate::geom::{triangulate_polygon, AreaSampler, Location, Point, PolygonWithHoles};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct RangeSpace {
    elements: Vec<usize>,
    ranges: Vec<VertexSet>,
    origin: Vec<Vec<usize>>,
}

impl RangeSpace {
    /// Builds a range space directly from a list of ranges over the universe
    /// `0..element_count`. Used by solvers and tests that do not start from a
    /// polygon; `origin` is left empty for every range.
    pub fn new(element_count: usize, ranges: Vec<VertexSet>) -> Result<Self> {
        for (i, r) in ranges.iter().enumerate() {
            if r.is_empty() {
                return Err(Error::Inconsistent(format!("range {i} is empty")));
            }
            if let Some(v) = r.iter().find(|&v| v >= element_count) {
                return Err(Error::Inconsistent(format!(
                    "range {i} contains {v}, outside the universe 0..{element_count}"
                )));
            }
        }
        let origin = vec![Vec::new(); ranges.len()];
        Ok(RangeSpace {
            elements: (0..element_count).collect(),
            ranges,
            origin,
        })
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn element_count(&self) -> usize {
        self.elements.len()
    }

    pub fn ranges(&self) -> &[VertexSet] {
        &self.ranges
    }

    /// Sink cell ids whose visible set equals `ranges[range]`, in ascending
    /// order. Empty for hand-built instances.
    pub fn origin(&self, range: usize) -> &[usize] {
        &self.origin[range]
    }
}

/// Extracts the range space of an already-built, labeled decomposition.
pub fn range_space_from(decomp: &Decomposition, dual: &DualGraph) -> Result<RangeSpace> {
    let n = decomp.polygon().vertex_count();
    let mut ranges: Vec<VertexSet> = Vec::new();
    let mut origin: Vec<Vec<usize>> = Vec::new();
    let mut index: BTreeMap<VertexSet, usize> = BTreeMap::new();
    for cell in dual.sinks() {
        let set = decomp.cells()[cell].visible.clone();
        if set.is_empty() {
            return Err(Error::Inconsistent(format!(
                "sink cell {cell} has an empty visible set"
            )));
        }
        match index.get(&set) {
            Some(&r) => origin[r].push(cell),
            None => {
                index.insert(set.clone(), ranges.len());
                origin.push(vec![cell]);
                ranges.push(set);
            }
        }
    }
    Ok(RangeSpace {
        elements: (0..n).collect(),
        ranges,
        origin,
    })
}

/// Decomposes the polygon and collapses its sink visible-sets into ranges,
/// ordered by the smallest sink cell id that realizes each set.
pub fn build_range_space(poly: &PolygonWithHoles) -> Result<RangeSpace> {
    let decomp = decompose(poly)?;
    let dual = build_dual(&decomp)?;
    range_space_from(&decomp, &dual)
}

/// True iff every range contains at least one guard, i.e. `guards` is a
/// hitting set. With ranges taken from sinks this is equivalent to `guards`
/// seeing all of the polygon.
pub fn covers(rs: &RangeSpace, guards: &VertexSet) -> bool {
    rs.ranges.iter().all(|r| r.intersects(guards))
}

/// Bipartite element-range adjacency with per-range hit flags. One solver run
/// owns one `Incidence`; marking an element hits all its incident ranges in
/// time proportional to their number.
pub struct Incidence {
    incident: Vec<Vec<usize>>,
    hit: Vec<bool>,
}

impl Incidence {
    pub fn new(rs: &RangeSpace) -> Self {
        let mut incident = vec![Vec::new(); rs.element_count()];
        for (ri, r) in rs.ranges().iter().enumerate() {
            for v in r.iter() {
                incident[v].push(ri);
            }
        }
        Incidence {
            incident,
            hit: vec![false; rs.ranges().len()],
        }
    }

    pub fn reset(&mut self) {
        self.hit.fill(false);
    }

    pub fn mark(&mut self, element: usize) {
        for &r in &self.incident[element] {
            self.hit[r] = true;
        }
    }

    pub fn mark_all(&mut self, guards: &VertexSet) {
        for v in guards.iter() {
            self.mark(v);
        }
    }

    pub fn incident_ranges(&self, element: usize) -> &[usize] {
        &self.incident[element]
    }

    pub fn is_hit(&self, range: usize) -> bool {
        self.hit[range]
    }

    /// Lowest-index range not yet hit, or None when everything is hit.
    pub fn first_unhit(&self) -> Option<usize> {
        self.hit.iter().position(|h| !h)
    }
}

/// Samples `samples` points uniformly by area and returns every point seen by
/// no guard. For a guard set that covers the range space the result must be
/// empty; a non-empty result is a concrete witness that coverage fails.
pub fn coverage_audit(
    poly: &PolygonWithHoles,
    guards: &VertexSet,
    samples: usize,
    seed: u64,
) -> Vec<Point> {
    let tris = triangulate_polygon(poly);
    let sampler = AreaSampler::new(&tris);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let guard_points: Vec<&Point> = guards
        .iter()
        .map(|g| poly.point(poly.vertex_from_id(g)))
        .collect();
    let mut failures = Vec::new();
    for _ in 0..samples {
        let p = sampler.sample(&mut rng);
        let lp = poly.locate(&p);
        // Guards are polygon vertices, so their location is always Boundary.
        if !guard_points
            .iter()
            .any(|g| poly.sees_located(g, Location::Boundary, &p, lp))
        {
            failures.push(p);
        }
    }
    failures
}
