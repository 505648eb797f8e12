//! Hitting-set solvers over a [`RangeSpace`]: the greedy approximation, an
//! exact branch-and-bound oracle for small instances, and a combined
//! verification report.

use std::cmp::Reverse;
use std::time::{Duration, Instant};

use crate::bitset::VertexSet;
use crate::geom::{Point, PolygonWithHoles};
use crate::rangespace::{build_range_space, coverage_audit, covers, Incidence, RangeSpace};
use crate::{Error, Result};

pub const DEFAULT_ORACLE_CAP: usize = 20;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Method {
    Greedy,
    Exact,
    Bg,
    Kk,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Greedy => "greedy",
            Method::Exact => "exact",
            Method::Bg => "bg",
            Method::Kk => "kk",
        })
    }
}

#[derive(Clone, Debug)]
pub struct GuardSet {
    pub guards: VertexSet,
    pub method: Method,
    /// Greedy: number of guards picked. Exact: search nodes visited.
    pub iterations: usize,
    pub runtime: Duration,
}

/// Greedy hitting set: repeatedly pick the vertex contained in the most
/// currently-unhit ranges, breaking ties toward the lowest vertex id. Hit
/// counts are maintained incrementally, so the total work is proportional to
/// the incidence size plus one scan of the universe per pick.
pub fn greedy_guards(rs: &RangeSpace) -> GuardSet {
    let start = Instant::now();
    let inc = Incidence::new(rs);
    let n = rs.element_count();
    let mut unhit = vec![true; rs.ranges().len()];
    let mut remaining = rs.ranges().len();
    let mut count: Vec<usize> = (0..n).map(|v| inc.incident_ranges(v).len()).collect();
    let mut guards = VertexSet::with_capacity(n);
    let mut iterations = 0;
    while remaining > 0 {
        iterations += 1;
        let best = (0..n)
            .max_by_key(|&v| (count[v], Reverse(v)))
            .expect("universe is non-empty while ranges remain");
        assert!(count[best] > 0, "an unhit range has no elements");
        guards.insert(best);
        for &r in inc.incident_ranges(best) {
            if unhit[r] {
                unhit[r] = false;
                remaining -= 1;
                for v in rs.ranges()[r].iter() {
                    count[v] -= 1;
                }
            }
        }
    }
    GuardSet {
        guards,
        method: Method::Greedy,
        iterations,
        runtime: start.elapsed(),
    }
}

fn exact_dfs(rs: &RangeSpace, chosen: &mut Vec<usize>, size: usize, nodes: &mut usize) -> bool {
    *nodes += 1;
    let unhit = rs
        .ranges()
        .iter()
        .position(|r| !chosen.iter().any(|&v| r.contains(v)));
    let Some(ri) = unhit else {
        return true;
    };
    if chosen.len() == size {
        return false;
    }
    // Every hitting set must contain a member of this range, so branching on
    // its members ascending is exhaustive and deterministic.
    for v in rs.ranges()[ri].iter() {
        chosen.push(v);
        if exact_dfs(rs, chosen, size, nodes) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Minimum-cardinality hitting set by depth-first search at increasing target
/// sizes, branching on the lowest-indexed unhit range. The first witness
/// found is returned, making the output deterministic.
pub fn exact_guards_capped(rs: &RangeSpace, cap: usize) -> Result<GuardSet> {
    let n = rs.element_count();
    if n > cap {
        return Err(Error::OracleCap { n, cap });
    }
    let start = Instant::now();
    let mut nodes = 0;
    for size in 0..=n {
        let mut chosen = Vec::new();
        if exact_dfs(rs, &mut chosen, size, &mut nodes) {
            return Ok(GuardSet {
                guards: VertexSet::from_iter(n, chosen),
                method: Method::Exact,
                iterations: nodes,
                runtime: start.elapsed(),
            });
        }
    }
    unreachable!("the full universe hits every non-empty range");
}

pub fn exact_guards(rs: &RangeSpace) -> Result<GuardSet> {
    exact_guards_capped(rs, DEFAULT_ORACLE_CAP)
}

#[derive(Debug)]
pub struct VerifyReport {
    pub covers: bool,
    pub audit_failures: Vec<Point>,
    /// Exact optimum, when the instance fits under the oracle cap.
    pub opt: Option<usize>,
    pub ratio: Option<f64>,
}

/// Checks a candidate guard set against the polygon: range-space coverage,
/// an area-sampled audit, and the ratio to the exact optimum when the oracle
/// cap permits computing one.
pub fn verify_guard_set(
    poly: &PolygonWithHoles,
    guards: &VertexSet,
    samples: usize,
    seed: u64,
    oracle_cap: usize,
) -> Result<VerifyReport> {
    let rs = build_range_space(poly)?;
    let covers = covers(&rs, guards);
    let audit_failures = coverage_audit(poly, guards, samples, seed);
    let opt = match exact_guards_capped(&rs, oracle_cap) {
        Ok(g) => Some(g.guards.len()),
        Err(Error::OracleCap { .. }) => None,
        Err(e) => return Err(e),
    };
    let ratio = opt.map(|o| guards.len() as f64 / o as f64);
    Ok(VerifyReport {
        covers,
        audit_failures,
        opt,
        ratio,
    })
}
