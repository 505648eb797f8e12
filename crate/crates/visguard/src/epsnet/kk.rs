//! Fragmentation-schedule net finder for simple polygons.
//!
//! The vertex cycle is partitioned hierarchically by a fixed schedule derived
//! from epsilon; guards are then chosen for every pair of sibling fragments
//! (including the dummy sibling holding the rest of the cycle) by a pluggable
//! pair rule. The returned set is always checked to be an epsilon-net with
//! respect to the current weights and repaired deterministically if the
//! randomized rule fell short.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{sample_size, Eps, NetFinder, WeightMap, BG_DELTA};
use crate::bitset::VertexSet;
use crate::geom::PolygonWithHoles;
use crate::rangespace::{build_range_space, RangeSpace};
use crate::solvers::Method;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KkParams {
    pub t: u32,
    /// Branching factor per fragmentation step, b[0] applying at level 1.
    pub b: Vec<u128>,
    /// Cumulative fragment counts, f[0] = 1 for the root level.
    pub f: Vec<u128>,
}

fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Schedule parameters for a given epsilon: depth t = max(1, ceil(log2 log2
/// (1/eps))), per-level branching b_i, and fragment counts f_i with
/// f_i = f_{i-1} * b_i.
pub fn kk_params(eps: Eps) -> Result<KkParams> {
    let k = eps.neg_log2();
    if k < 2 {
        return Err(Error::EpsilonRange(
            eps.to_string(),
            "the fragmentation schedule needs epsilon at most 1/4".to_string(),
        ));
    }
    let t = ceil_log2(k as u64).max(1);
    assert!(1u64 << t <= 64, "schedule depth exponent out of range");
    let pow2 = |e: u64| -> u128 { 1u128 << e };
    let mut b = Vec::with_capacity(t as usize);
    // b_1 = 2^(2^(t-1)+1) * 4t * 2^(1-t), all powers folded into one shift.
    b.push(4 * t as u128 * pow2((1u64 << (t - 1)) + 2 - t as u64));
    for i in 2..=t as u64 {
        b.push(pow2((1u64 << (t as u64 - i)) + 1));
    }
    let mut f = vec![1u128];
    for i in 1..=t as u64 {
        let e = (1u64 << t) - (1u64 << (t as u64 - i)) - t as u64 + i + 1;
        f.push(4 * t as u128 * pow2(e));
    }
    for i in 1..=t as usize {
        assert_eq!(f[i], f[i - 1] * b[i - 1], "fragment counts must telescope");
    }
    assert_eq!(*f.last().unwrap(), 4 * t as u128 * pow2(1u64 << t));
    assert!(pow2(1u64 << t) <= u128::from(eps.inv()).pow(2));
    Ok(KkParams { t, b, f })
}

/// A contiguous run of `len` vertices starting at `start` in cyclic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fragment {
    pub start: usize,
    pub len: usize,
    /// Index of the parent fragment within the previous level.
    pub parent: usize,
}

impl Fragment {
    pub fn vertices(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        let start = self.start;
        (0..self.len).map(move |o| (start + o) % n)
    }
}

#[derive(Debug)]
pub struct FragmentTree {
    pub n: usize,
    /// levels[0] is the root; levels[i] holds the fragments of step i in
    /// parent order, so siblings are contiguous.
    pub levels: Vec<Vec<Fragment>>,
}

impl FragmentTree {
    /// The dummy sibling: the rest of the cycle outside `frag`, itself a
    /// contiguous cyclic run. None when the fragment is the whole cycle.
    pub fn dummy_of(&self, frag: &Fragment) -> Option<Fragment> {
        if frag.len == self.n {
            return None;
        }
        Some(Fragment {
            start: (frag.start + frag.len) % self.n,
            len: self.n - frag.len,
            parent: frag.parent,
        })
    }
}

/// Splits a cyclic run into `k` non-empty contiguous parts of near-equal
/// weight: each part closes as soon as its cumulative weight reaches its
/// proportional target, subject to leaving one vertex for every part behind
/// it.
fn split_weighted(
    start: usize,
    len: usize,
    k: usize,
    n: usize,
    weights: &WeightMap,
) -> Vec<(usize, usize)> {
    debug_assert!(k >= 1 && k <= len);
    let verts: Vec<usize> = (0..len).map(|o| (start + o) % n).collect();
    let total: u128 = verts.iter().map(|&v| weights.weight(v)).sum();
    let mut parts = Vec::with_capacity(k);
    let mut idx = 0;
    let mut acc = 0u128;
    for j in 0..k {
        let begin = idx;
        if j + 1 == k {
            idx = len;
        } else {
            let max_end = len - (k - j - 1);
            loop {
                acc += weights.weight(verts[idx]);
                idx += 1;
                if idx >= max_end || acc * k as u128 >= (j as u128 + 1) * total {
                    break;
                }
            }
        }
        parts.push((verts[begin], idx - begin));
    }
    parts
}

/// Builds the schedule's hierarchical partition of the vertex cycle. A
/// fragment with fewer vertices than its branching factor splits into
/// singletons instead.
pub fn fragment_tree(n: usize, weights: &WeightMap, params: &KkParams) -> FragmentTree {
    assert_eq!(weights.len(), n);
    let mut levels = vec![vec![Fragment {
        start: 0,
        len: n,
        parent: 0,
    }]];
    for bi in &params.b {
        let prev = levels.last().unwrap();
        let mut next = Vec::new();
        for (pi, parent) in prev.iter().enumerate() {
            let k = (*bi as usize).min(parent.len);
            for (start, len) in split_weighted(parent.start, parent.len, k, n, weights) {
                next.push(Fragment {
                    start,
                    len,
                    parent: pi,
                });
            }
        }
        levels.push(next);
    }
    FragmentTree { n, levels }
}

/// Symmetric vertex-to-vertex visibility, one row per vertex.
pub struct VisibilityMatrix {
    rows: Vec<VertexSet>,
}

impl VisibilityMatrix {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn sees(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    pub fn row(&self, i: usize) -> &VertexSet {
        &self.rows[i]
    }
}

pub fn visibility_matrix(poly: &PolygonWithHoles) -> VisibilityMatrix {
    let n = poly.vertex_count();
    let mut rows = vec![VertexSet::with_capacity(n); n];
    for i in 0..n {
        rows[i].insert(i);
        for j in i + 1..n {
            if poly.sees_vertices(poly.vertex_from_id(i), poly.vertex_from_id(j)) {
                rows[i].insert(j);
                rows[j].insert(i);
            }
        }
    }
    VisibilityMatrix { rows }
}

/// Chooses guards for one pair of sibling fragments. The matrix is supplied
/// for rules that reason about visibility between the two vertex runs.
pub trait PairGuardRule {
    fn pair_guards(
        &mut self,
        matrix: &VisibilityMatrix,
        weights: &WeightMap,
        u1: &[usize],
        u2: &[usize],
        eps: Eps,
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<usize>>;
}

/// Fallback rule: a weighted random sample of the prescribed net size drawn
/// from the pair's vertices only.
pub struct WeightedSampleRule;

impl PairGuardRule for WeightedSampleRule {
    fn pair_guards(
        &mut self,
        _matrix: &VisibilityMatrix,
        weights: &WeightMap,
        u1: &[usize],
        u2: &[usize],
        eps: Eps,
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<usize>> {
        let m = sample_size(eps.value(), BG_DELTA, 23)?;
        let mut union: Vec<usize> = u1.iter().chain(u2).copied().collect();
        union.sort_unstable();
        union.dedup();
        let masses: Vec<u128> = union.iter().map(|&v| weights.weight(v)).collect();
        let total: u128 = masses.iter().sum();
        let mut picks = std::collections::BTreeSet::new();
        for _ in 0..m {
            let mut r = rng.gen_range(0..total);
            for (v, mass) in union.iter().zip(&masses) {
                if r < *mass {
                    picks.insert(*v);
                    break;
                }
                r -= mass;
            }
        }
        Ok(picks.into_iter().collect())
    }
}

/// True iff `candidate` hits every range whose weight is at least an eps
/// fraction of the total, compared exactly in integers.
pub fn is_eps_net(rs: &RangeSpace, weights: &WeightMap, eps: Eps, candidate: &VertexSet) -> bool {
    rs.ranges().iter().all(|r| {
        let w: u128 = r.iter().map(|v| weights.weight(v)).sum();
        w * u128::from(eps.inv()) < weights.total() || r.intersects(candidate)
    })
}

pub struct KkNetFinder {
    matrix: VisibilityMatrix,
    rule: Box<dyn PairGuardRule>,
    /// Randomized attempts before the deterministic repair kicks in.
    retries: usize,
}

impl KkNetFinder {
    pub fn new(poly: &PolygonWithHoles) -> Result<KkNetFinder> {
        KkNetFinder::with_rule(poly, Box::new(WeightedSampleRule))
    }

    pub fn with_rule(poly: &PolygonWithHoles, rule: Box<dyn PairGuardRule>) -> Result<KkNetFinder> {
        if poly.hole_count() > 0 {
            return Err(Error::InvalidPolygon(
                "the fragmentation net finder needs a polygon without holes".to_string(),
            ));
        }
        Ok(KkNetFinder {
            matrix: visibility_matrix(poly),
            rule,
            retries: 8,
        })
    }

    fn one_pass(
        &mut self,
        tree: &FragmentTree,
        weights: &WeightMap,
        eps: Eps,
        rng: &mut ChaCha8Rng,
    ) -> Result<VertexSet> {
        let n = tree.n;
        let mut net = VertexSet::with_capacity(n);
        for level in 1..tree.levels.len() {
            let frags = &tree.levels[level];
            let mut group_start = 0;
            while group_start < frags.len() {
                let parent = frags[group_start].parent;
                let mut group_end = group_start;
                while group_end < frags.len() && frags[group_end].parent == parent {
                    group_end += 1;
                }
                let siblings: Vec<Vec<usize>> = frags[group_start..group_end]
                    .iter()
                    .map(|f| f.vertices(n).collect())
                    .collect();
                let dummy: Option<Vec<usize>> = tree
                    .dummy_of(&tree.levels[level - 1][parent])
                    .map(|d| d.vertices(n).collect());
                for a in 0..siblings.len() {
                    for b in a + 1..siblings.len() {
                        let picked = self.rule.pair_guards(
                            &self.matrix,
                            weights,
                            &siblings[a],
                            &siblings[b],
                            eps,
                            rng,
                        )?;
                        for v in picked {
                            net.insert(v);
                        }
                    }
                    if let Some(d) = &dummy {
                        let picked = self.rule.pair_guards(
                            &self.matrix,
                            weights,
                            &siblings[a],
                            d,
                            eps,
                            rng,
                        )?;
                        for v in picked {
                            net.insert(v);
                        }
                    }
                }
                group_start = group_end;
            }
        }
        Ok(net)
    }
}

impl NetFinder for KkNetFinder {
    /// Runs the schedule, verifies the result against the weighted ranges,
    /// retries with fresh randomness a few times, and finally repairs any
    /// still-unhit heavy range by adding its heaviest element (lowest id on
    /// ties), which restores the net property unconditionally.
    fn find_net(
        &mut self,
        rs: &RangeSpace,
        weights: &WeightMap,
        eps: Eps,
        rng: &mut ChaCha8Rng,
    ) -> Result<VertexSet> {
        assert_eq!(weights.len(), rs.element_count());
        let params = kk_params(eps)?;
        let tree = fragment_tree(rs.element_count(), weights, &params);
        let mut net = VertexSet::with_capacity(rs.element_count());
        for _ in 0..=self.retries {
            net = self.one_pass(&tree, weights, eps, rng)?;
            if is_eps_net(rs, weights, eps, &net) {
                return Ok(net);
            }
        }
        for r in rs.ranges() {
            let w: u128 = r.iter().map(|v| weights.weight(v)).sum();
            if w * u128::from(eps.inv()) >= weights.total() && !r.intersects(&net) {
                let heaviest = r
                    .iter()
                    .max_by_key(|&v| (weights.weight(v), std::cmp::Reverse(v)))
                    .expect("ranges are non-empty");
                net.insert(heaviest);
            }
        }
        debug_assert!(is_eps_net(rs, weights, eps, &net));
        Ok(net)
    }

    fn method(&self) -> Method {
        Method::Kk
    }
}

/// One-shot net extraction for a simple polygon: builds the sink ranges and
/// the visibility matrix, then runs the schedule once.
pub fn kk_net(
    poly: &PolygonWithHoles,
    eps: Eps,
    weights: &WeightMap,
    rng: &mut ChaCha8Rng,
) -> Result<VertexSet> {
    let rs = build_range_space(poly)?;
    let mut finder = KkNetFinder::new(poly)?;
    finder.find_net(&rs, weights, eps, rng)
}
