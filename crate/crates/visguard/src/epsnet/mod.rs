//! Iterative-reweighting hitting-set solver: a weight map over the vertices
//! is doubled on ranges the sampled net misses, until some net hits every
//! range. Epsilon guesses are powers of 1/2, halved after each failed run.

pub mod kk;

use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::bitset::VertexSet;
use crate::rangespace::{Incidence, RangeSpace};
use crate::solvers::{GuardSet, Method};
use crate::{Error, Result};

/// Additive allowance in `vc_dim` for the vanishing term of the bound.
pub const VC_SLACK: u32 = 4;
/// Constant in the iteration cap `ceil(4 * (1/eps) * log2 |X|)`.
pub const BG_ITER_CONSTANT: f64 = 4.0;
/// Net-failure probability used inside the solver loop; failed draws are
/// retried by the loop itself, so any constant below 1 works.
pub const BG_DELTA: f64 = 0.5;

/// An epsilon restricted to powers of 1/2, stored as the negated exponent.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Eps {
    neg_log2: u32,
}

impl Eps {
    pub const ONE: Eps = Eps { neg_log2: 0 };
    pub const HALF: Eps = Eps { neg_log2: 1 };

    /// The value 2^(-k).
    pub fn pow2(neg_log2: u32) -> Eps {
        assert!(neg_log2 < 64, "epsilon exponent out of range");
        Eps { neg_log2 }
    }

    pub fn neg_log2(self) -> u32 {
        self.neg_log2
    }

    /// 1/epsilon as an integer.
    pub fn inv(self) -> u64 {
        1 << self.neg_log2
    }

    pub fn value(self) -> f64 {
        1.0 / self.inv() as f64
    }

    pub fn halved(self) -> Eps {
        Eps::pow2(self.neg_log2 + 1)
    }
}

impl std::fmt::Display for Eps {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.neg_log2 == 0 {
            f.write_str("1")
        } else {
            write!(f, "1/{}", self.inv())
        }
    }
}

impl std::str::FromStr for Eps {
    type Err = Error;

    fn from_str(s: &str) -> Result<Eps> {
        let bad = || Error::EpsilonRange(s.to_string(), "expected 1 or 1/2^k".to_string());
        if s == "1" {
            return Ok(Eps::ONE);
        }
        let den = s
            .strip_prefix("1/")
            .and_then(|d| d.parse::<u64>().ok())
            .ok_or_else(bad)?;
        if den < 2 || !den.is_power_of_two() {
            return Err(bad());
        }
        Ok(Eps::pow2(den.trailing_zeros()))
    }
}

/// VC-dimension bound for the sink range space of a polygon with `h` holes:
/// 23 for at most one hole, otherwise the hole-count bound with an additive
/// slack for its vanishing term, never below 23.
pub fn vc_dim(h: usize) -> u32 {
    vc_dim_with_slack(h, VC_SLACK)
}

pub fn vc_dim_with_slack(h: usize, slack: u32) -> u32 {
    if h <= 1 {
        return 23;
    }
    let l2h = (h as f64).log2();
    let main = (2.0 * l2h + 4.0 * l2h.max(1.0).log2()).ceil() as u32;
    (main + slack).max(23)
}

/// Net size `ceil(max(4/eps * log2(2/delta), 8d/eps * log2(13/eps)))`: a
/// random sample of this many weighted draws is an eps-net with probability
/// at least 1 - delta for a range space of VC-dimension d.
pub fn sample_size(epsilon: f64, delta: f64, d: u32) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::EpsilonRange(
            format!("{epsilon}"),
            "epsilon must lie in (0, 1]".to_string(),
        ));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::EpsilonRange(
            format!("{delta}"),
            "delta must lie in (0, 1]".to_string(),
        ));
    }
    let a = 4.0 / epsilon * (2.0 / delta).log2();
    let b = 8.0 * d as f64 / epsilon * (13.0 / epsilon).log2();
    Ok(a.max(b).ceil() as usize)
}

/// Element weights, each a power of 2, bucketed by exponent so that a
/// weighted draw picks a bucket proportionally to its mass and then a uniform
/// member. Total weight is capped at |X|^4.
#[derive(Clone, Debug)]
pub struct WeightMap {
    exponent: Vec<u32>,
    buckets: Vec<Vec<usize>>,
    pos: Vec<usize>,
    total: u128,
    cap: u128,
}

impl WeightMap {
    pub fn uniform(n: usize) -> WeightMap {
        assert!(n > 0, "weight map over an empty universe");
        WeightMap {
            exponent: vec![0; n],
            buckets: vec![(0..n).collect()],
            pos: (0..n).collect(),
            total: n as u128,
            cap: (n as u128).pow(4),
        }
    }

    pub fn len(&self) -> usize {
        self.exponent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponent.is_empty()
    }

    pub fn exponent(&self, v: usize) -> u32 {
        self.exponent[v]
    }

    pub fn weight(&self, v: usize) -> u128 {
        1u128 << self.exponent[v]
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    pub fn cap(&self) -> u128 {
        self.cap
    }

    fn bump(&mut self, v: usize) {
        let old = self.exponent[v] as usize;
        let idx = self.pos[v];
        let removed = self.buckets[old].swap_remove(idx);
        debug_assert_eq!(removed, v);
        if let Some(&swapped) = self.buckets[old].get(idx) {
            self.pos[swapped] = idx;
        }
        let new = old + 1;
        if self.buckets.len() <= new {
            self.buckets.resize(new + 1, Vec::new());
        }
        self.pos[v] = self.buckets[new].len();
        self.buckets[new].push(v);
        self.exponent[v] += 1;
    }

    /// Doubles the weight of every element of `set`. Returns false and leaves
    /// the map untouched if the new total would exceed the cap.
    pub fn try_double(&mut self, set: &VertexSet) -> bool {
        let added: u128 = set.iter().map(|v| self.weight(v)).sum();
        if self.total + added > self.cap {
            return false;
        }
        for v in set.iter() {
            self.bump(v);
        }
        self.total += added;
        true
    }

    /// One draw proportional to weight: a uniform integer below the total
    /// mass selects a bucket, and its high bits index uniformly within it.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        assert!(self.total > 0);
        let mut r = rng.gen_range(0..self.total);
        for (exp, bucket) in self.buckets.iter().enumerate() {
            let mass = (bucket.len() as u128) << exp;
            if r < mass {
                return bucket[(r >> exp) as usize];
            }
            r -= mass;
        }
        unreachable!("draw exceeded total bucket mass");
    }
}

/// `m` independent weighted draws, deduplicated.
pub fn sample_net<R: Rng>(weights: &WeightMap, m: usize, rng: &mut R) -> VertexSet {
    let mut net = VertexSet::with_capacity(weights.len());
    for _ in 0..m {
        net.insert(weights.sample(rng));
    }
    net
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    AllHit,
    /// Index of the first range missed by the candidate set.
    Unhit(usize),
}

pub fn verify_with(inc: &mut Incidence, candidate: &VertexSet) -> Verdict {
    inc.reset();
    inc.mark_all(candidate);
    match inc.first_unhit() {
        None => Verdict::AllHit,
        Some(i) => Verdict::Unhit(i),
    }
}

/// Checks a candidate against every range, reporting the first unhit one.
pub fn verify(rs: &RangeSpace, candidate: &VertexSet) -> Verdict {
    verify_with(&mut Incidence::new(rs), candidate)
}

/// Strategy producing candidate nets for the solver loop.
pub trait NetFinder {
    fn find_net(
        &mut self,
        rs: &RangeSpace,
        weights: &WeightMap,
        eps: Eps,
        rng: &mut ChaCha8Rng,
    ) -> Result<VertexSet>;

    fn method(&self) -> Method;
}

/// Random sampling at the size prescribed by the VC-dimension bound.
pub struct RandomNetFinder {
    d: u32,
}

impl RandomNetFinder {
    pub fn new(hole_count: usize) -> RandomNetFinder {
        RandomNetFinder {
            d: vc_dim(hole_count),
        }
    }

    pub fn with_dim(d: u32) -> RandomNetFinder {
        RandomNetFinder { d }
    }
}

impl NetFinder for RandomNetFinder {
    fn find_net(
        &mut self,
        _rs: &RangeSpace,
        weights: &WeightMap,
        eps: Eps,
        rng: &mut ChaCha8Rng,
    ) -> Result<VertexSet> {
        let m = sample_size(eps.value(), BG_DELTA, self.d)?;
        Ok(sample_net(weights, m, rng))
    }

    fn method(&self) -> Method {
        Method::Bg
    }
}

#[derive(Debug)]
pub enum BgOutcome {
    HittingSet(GuardSet),
    Failed { iterations: usize },
}

/// Iteration cap for one run at guess `eps`.
pub fn bg_max_iters(eps: Eps, n: usize) -> usize {
    (BG_ITER_CONSTANT * eps.inv() as f64 * (n as f64).log2())
        .ceil()
        .max(1.0) as usize
}

/// One run at a fixed epsilon guess: draw a net, verify it, and double the
/// weights of the first unhit range on failure. Gives up once the iteration
/// cap is reached or the weight total would exceed its cap.
pub fn bg_run(
    rs: &RangeSpace,
    eps: Eps,
    finder: &mut dyn NetFinder,
    max_iters: usize,
    rng: &mut ChaCha8Rng,
) -> Result<BgOutcome> {
    let start = Instant::now();
    let mut weights = WeightMap::uniform(rs.element_count());
    let mut inc = Incidence::new(rs);
    for iteration in 1..=max_iters {
        let candidate = finder.find_net(rs, &weights, eps, rng)?;
        match verify_with(&mut inc, &candidate) {
            Verdict::AllHit => {
                return Ok(BgOutcome::HittingSet(GuardSet {
                    guards: candidate,
                    method: finder.method(),
                    iterations: iteration,
                    runtime: start.elapsed(),
                }))
            }
            Verdict::Unhit(ri) => {
                if !weights.try_double(&rs.ranges()[ri]) {
                    return Ok(BgOutcome::Failed {
                        iterations: iteration,
                    });
                }
            }
        }
    }
    Ok(BgOutcome::Failed {
        iterations: max_iters,
    })
}

#[derive(Debug)]
pub struct BgSolution {
    pub guards: GuardSet,
    /// The guess the successful run terminated with; at least 1/(2*opt).
    pub epsilon: Eps,
    pub runs: usize,
}

/// Runs the solver at halving epsilon guesses starting from `start` until a
/// run succeeds. An epsilon below 1/(2n) means even the trivial hitting set
/// X was never found, which signals a broken finder rather than a hard
/// instance, so it is reported as an error.
pub fn bg_solve_from(
    rs: &RangeSpace,
    finder: &mut dyn NetFinder,
    start: Eps,
    rng: &mut ChaCha8Rng,
) -> Result<BgSolution> {
    let n = rs.element_count();
    let mut eps = start;
    let mut runs = 0;
    while u128::from(eps.inv()) <= 2 * n as u128 {
        runs += 1;
        match bg_run(rs, eps, finder, bg_max_iters(eps, n), rng)? {
            BgOutcome::HittingSet(guards) => {
                return Ok(BgSolution {
                    guards,
                    epsilon: eps,
                    runs,
                })
            }
            BgOutcome::Failed { .. } => eps = eps.halved(),
        }
    }
    Err(Error::EpsilonRange(
        format!("{eps}"),
        format!("no successful run before epsilon fell below 1/(2*{n})"),
    ))
}

pub fn bg_solve(
    rs: &RangeSpace,
    finder: &mut dyn NetFinder,
    rng: &mut ChaCha8Rng,
) -> Result<BgSolution> {
    bg_solve_from(rs, finder, Eps::HALF, rng)
}
