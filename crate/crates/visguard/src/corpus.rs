//! Named polygon fixtures shared by the integration suites.
//!
//! `small_corpus` is the oracle-scale collection: every entry has at most
//! 14 vertices and 2 holes so exact solvers and brute-force cross-checks
//! stay affordable. `growth_corpus` holds the larger generated families
//! used for envelope measurements. Both are fully deterministic.

use crate::generate;
use crate::geom::{rq, Point, PolygonWithHoles};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct CorpusEntry {
    pub name: &'static str,
    pub poly: PolygonWithHoles,
}

impl CorpusEntry {
    fn new(name: &'static str, poly: PolygonWithHoles) -> Self {
        CorpusEntry { name, poly }
    }
}

const JITTER_ATTEMPTS: usize = 64;

fn jittered_ring(pts: &[(i64, i64)], rng: &mut ChaCha8Rng) -> Vec<Point> {
    pts.iter()
        .map(|&(x, y)| {
            let dx = rng.gen_range(0..32i64);
            let dy = rng.gen_range(0..32i64);
            Point::new(rq(x, 1) + rq(dx, 256), rq(y, 1) + rq(dy, 256))
        })
        .collect()
}

/// Builds a polygon from integer coordinates after nudging every vertex by
/// a random fraction below 1/8. The nudge breaks the axis-aligned
/// collinearities of the sketch while leaving at least the half-unit
/// clearance every sketch provides, and the retry loop absorbs the rare
/// draw that still lands three points on a line.
fn jittered(name: &str, outer: &[(i64, i64)], holes: &[&[(i64, i64)]], seed: u64) -> PolygonWithHoles {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..JITTER_ATTEMPTS {
        let outer_pts = jittered_ring(outer, &mut rng);
        let hole_pts = holes.iter().map(|h| jittered_ring(h, &mut rng)).collect();
        if let Ok(p) = PolygonWithHoles::new(outer_pts, hole_pts) {
            return p;
        }
    }
    panic!("corpus entry {name} failed to validate after {JITTER_ATTEMPTS} jitter attempts")
}

fn plain(name: &str, outer: &[(i64, i64)], holes: &[&[(i64, i64)]]) -> PolygonWithHoles {
    PolygonWithHoles::from_ints(outer, holes)
        .unwrap_or_else(|e| panic!("corpus entry {name} is invalid: {e}"))
}

/// The small re-entrant hexagon used throughout the unit tests.
pub fn ell() -> PolygonWithHoles {
    plain("ell", &[(0, 0), (2, 0), (2, 1), (1, 1), (1, 3), (0, 3)], &[])
}

/// A convex quadrilateral around a single triangular hole.
pub fn quad_with_hole() -> PolygonWithHoles {
    plain(
        "quad-hole",
        &[(0, 0), (9, 1), (8, 8), (1, 7)],
        &[&[(3, 2), (6, 5), (4, 6)]],
    )
}

fn hand_entries() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    let mut add = |name: &'static str, poly: PolygonWithHoles| {
        out.push(CorpusEntry::new(name, poly));
    };

    add("triangle", plain("triangle", &[(0, 0), (5, 1), (2, 4)], &[]));
    add("square", plain("square", &[(0, 0), (4, 0), (4, 4), (0, 4)], &[]));
    add(
        "pentagon",
        plain("pentagon", &[(0, 0), (4, 1), (5, 4), (2, 6), (-2, 3)], &[]),
    );
    add(
        "hexagon",
        plain("hexagon", &[(0, 0), (4, -1), (7, 1), (8, 4), (3, 6), (-1, 3)], &[]),
    );
    add("ell", ell());
    add("quad-hole", quad_with_hole());

    add(
        "staircase",
        jittered(
            "staircase",
            &[(0, 0), (6, 0), (6, 5), (4, 5), (4, 3), (2, 3), (2, 2), (0, 2)],
            &[],
            2000,
        ),
    );

    add(
        "tee",
        jittered(
            "tee",
            &[(1, 0), (3, 0), (3, 3), (5, 3), (5, 5), (-1, 5), (-1, 3), (1, 3)],
            &[],
            2001,
        ),
    );
    add(
        "cross",
        jittered(
            "cross",
            &[
                (2, 0),
                (4, 0),
                (4, 2),
                (6, 2),
                (6, 4),
                (4, 4),
                (4, 6),
                (2, 6),
                (2, 4),
                (0, 4),
                (0, 2),
                (2, 2),
            ],
            &[],
            2002,
        ),
    );
    add(
        "zigzag",
        jittered(
            "zigzag",
            &[(0, 0), (10, 0), (10, 4), (8, 2), (6, 4), (4, 2), (2, 4), (0, 4)],
            &[],
            2003,
        ),
    );
    add(
        "aitch",
        jittered(
            "aitch",
            &[
                (0, 0),
                (2, 0),
                (2, 2),
                (4, 2),
                (4, 0),
                (6, 0),
                (6, 6),
                (4, 6),
                (4, 4),
                (2, 4),
                (2, 6),
                (0, 6),
            ],
            &[],
            2004,
        ),
    );
    add(
        "quad-two-holes",
        jittered(
            "quad-two-holes",
            &[(0, 0), (12, 1), (11, 9), (1, 8)],
            &[&[(3, 3), (5, 3), (4, 5)], &[(7, 4), (9, 4), (8, 6)]],
            2005,
        ),
    );
    add(
        "pentagon-square-hole",
        jittered(
            "pentagon-square-hole",
            &[(0, 0), (8, 1), (9, 5), (4, 8), (-1, 4)],
            &[&[(3, 3), (5, 3), (5, 5), (3, 5)]],
            2006,
        ),
    );
    add(
        "ell-with-hole",
        jittered(
            "ell-with-hole",
            &[(0, 0), (6, 0), (6, 3), (3, 3), (3, 9), (0, 9)],
            &[&[(1, 5), (2, 5), (2, 6), (1, 6)]],
            2007,
        ),
    );
    out
}

fn generated_entries() -> Vec<CorpusEntry> {
    let gen = |name: &'static str, poly: crate::Result<PolygonWithHoles>| {
        CorpusEntry::new(name, poly.unwrap_or_else(|e| panic!("generator for {name} failed: {e}")))
    };
    vec![
        gen("comb-1", generate::comb(1, 41)),
        gen("comb-2", generate::comb(2, 42)),
        gen("comb-3", generate::comb(3, 43)),
        gen("spiral-6", generate::spiral(6, 44)),
        gen("spiral-8", generate::spiral(8, 45)),
        gen("spiral-10", generate::spiral(10, 46)),
        gen("spiral-12", generate::spiral(12, 47)),
        gen("spiral-14", generate::spiral(14, 48)),
        gen("grid-10-1", generate::grid_holes(10, 1, 49)),
        gen("grid-12-2", generate::grid_holes(12, 2, 50)),
        gen("grid-14-1", generate::grid_holes(14, 1, 51)),
        gen("blob-8-0", generate::blob(8, 0, 52)),
        gen("blob-10-0", generate::blob(10, 0, 53)),
        gen("blob-11-1", generate::blob(11, 1, 54)),
        gen("blob-12-1", generate::blob(12, 1, 55)),
        gen("blob-13-1", generate::blob(13, 1, 56)),
        gen("blob-14-2", generate::blob(14, 2, 57)),
        gen("blob-7-0", generate::blob(7, 0, 58)),
    ]
}

/// The oracle-scale corpus: at least 30 distinct polygons, each with
/// n ≤ 14 and h ≤ 2.
pub fn small_corpus() -> Vec<CorpusEntry> {
    let mut out = hand_entries();
    out.extend(generated_entries());
    out
}

/// The subset of `small_corpus` entries that are convex.
pub fn convex_names() -> &'static [&'static str] {
    &["triangle", "square", "pentagon", "hexagon"]
}

/// Generated families for envelope measurements: every combination of
/// n in {20, 40, 80} and h in {0, 1, 2}.
pub fn growth_corpus() -> Vec<(String, PolygonWithHoles)> {
    let mut out = Vec::new();
    for &n in &[20usize, 40, 80] {
        for h in 0..=2usize {
            let seed = 900 + (n as u64) * 10 + h as u64;
            let poly = generate::blob(n, h, seed)
                .unwrap_or_else(|e| panic!("growth family blob({n},{h}) failed: {e}"));
            out.push((format!("blob-{n}-{h}"), poly));
        }
    }
    out
}
