//! Plane sweep splitting a set of segments at every point where they meet.
//!
//! A horizontal sweep line moves top to bottom, event points ordered by
//! descending y then ascending x. The status holds the segments crossing
//! the line, left to right; candidate intersections are only tested between
//! status neighbors, which is what keeps the sweep output-sensitive.
//!
//! Inputs may share endpoints and may touch in T-junctions, but collinear
//! overlap of positive length is not allowed and is asserted against.

use crate::geom::{segment_intersection, Point, Rat, Segment, SegmentIntersection};
use num::Zero;
use std::collections::{BTreeMap, BTreeSet};

/// Split points per input segment (endpoints included, ordered from `a` to
/// `b`), plus the count of points interior to at least two segments.
pub(crate) struct Planarization {
    pub splits: Vec<Vec<Point>>,
    pub crossings: usize,
}

/// Event order: higher points first, left to right within a row.
fn event_cmp(p: &Point, q: &Point) -> std::cmp::Ordering {
    q.y.cmp(&p.y).then_with(|| p.x.cmp(&q.x))
}

#[derive(Clone, PartialEq, Eq)]
struct EventKey(Point);

impl Ord for EventKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        event_cmp(&self.0, &other.0)
    }
}
impl PartialOrd for EventKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// x-coordinate where a non-horizontal segment crosses the line y = `y`.
fn x_at(seg: &Segment, y: &Rat) -> Rat {
    let dy = &seg.a.y - &seg.b.y;
    assert!(!dy.is_zero());
    &seg.a.x + (&seg.a.y - y) * (&seg.b.x - &seg.a.x) / dy
}

/// Sort key for segments leaving the event point downward: the rightward
/// drift per unit of descent. Horizontal continuations sort last.
fn below_cmp(p: &Point, s: &Segment, t: &Segment) -> std::cmp::Ordering {
    let ds = p.to(lower_end(s));
    let dt = p.to(lower_end(t));
    match (ds.y.is_zero(), dt.y.is_zero()) {
        (true, true) => panic!("two segments overlap to the right of an event"),
        (true, false) => std::cmp::Ordering::Greater,
        (false, true) => std::cmp::Ordering::Less,
        (false, false) => {
            let c = (&ds.x * -&dt.y).cmp(&(&dt.x * -&ds.y));
            assert_ne!(c, std::cmp::Ordering::Equal, "segments overlap below an event");
            c
        }
    }
}

fn lower_end(s: &Segment) -> &Point {
    if event_cmp(&s.a, &s.b) == std::cmp::Ordering::Less {
        &s.b
    } else {
        &s.a
    }
}

fn upper_end(s: &Segment) -> &Point {
    if event_cmp(&s.a, &s.b) == std::cmp::Ordering::Less {
        &s.a
    } else {
        &s.b
    }
}

pub(crate) fn planarize(segs: &[Segment]) -> Planarization {
    let mut queue: BTreeMap<EventKey, BTreeSet<usize>> = BTreeMap::new();
    for (i, s) in segs.iter().enumerate() {
        queue.entry(EventKey(upper_end(s).clone())).or_default().insert(i);
        queue.entry(EventKey(lower_end(s).clone())).or_default();
    }

    let mut status: Vec<usize> = Vec::new();
    let mut interior: Vec<Vec<Point>> = vec![Vec::new(); segs.len()];
    let mut crossings = 0usize;

    // Schedule the crossing of two status neighbors if it lies ahead.
    let schedule = |queue: &mut BTreeMap<EventKey, BTreeSet<usize>>, p: &Point, s: usize, t: usize| {
        match segment_intersection(&segs[s], &segs[t]) {
            SegmentIntersection::Empty => {}
            SegmentIntersection::Point(q) => {
                if event_cmp(&q, p) == std::cmp::Ordering::Greater {
                    queue.entry(EventKey(q)).or_default();
                }
            }
            SegmentIntersection::Overlap(_, _) => {
                panic!("collinear overlapping segments in the sweep input")
            }
        }
    };

    while let Some((EventKey(p), uppers)) = queue.pop_first() {
        // Segments in the status through p. They must form one contiguous
        // run; anything else means the status order has decayed.
        let through: Vec<usize> = (0..status.len())
            .filter(|&i| segs[status[i]].contains(&p))
            .collect();
        for w in through.windows(2) {
            assert_eq!(w[0] + 1, w[1], "status segments through an event are not adjacent");
        }

        let mut bundle: Vec<usize> = Vec::new();
        let mut interior_count = 0usize;
        for &i in &through {
            let s = status[i];
            if lower_end(&segs[s]) != &p {
                interior.get_mut(s).unwrap().push(p.clone());
                interior_count += 1;
                bundle.push(s); // continues below the event
            }
        }
        if interior_count >= 2 {
            crossings += 1;
        }
        for &s in &uppers {
            assert_ne!(upper_end(&segs[s]), lower_end(&segs[s]));
            bundle.push(s);
        }

        let pos = match through.first() {
            Some(&i) => {
                let first = i;
                status.drain(first..first + through.len());
                first
            }
            None => status.partition_point(|&s| {
                let x = x_at(&segs[s], &p.y);
                assert_ne!(x, p.x, "status segment through the event was not detected");
                x < p.x
            }),
        };

        bundle.sort_by(|&s, &t| below_cmp(&p, &segs[s], &segs[t]));
        for (k, &s) in bundle.iter().enumerate() {
            status.insert(pos + k, s);
        }

        if bundle.is_empty() {
            if pos > 0 && pos < status.len() {
                schedule(&mut queue, &p, status[pos - 1], status[pos]);
            }
        } else {
            if pos > 0 {
                schedule(&mut queue, &p, status[pos - 1], status[pos]);
            }
            let after = pos + bundle.len();
            if after < status.len() {
                schedule(&mut queue, &p, status[after - 1], status[after]);
            }
        }
    }
    assert!(status.is_empty(), "sweep finished with active segments");

    let splits = segs
        .iter()
        .zip(interior)
        .map(|(s, mut pts)| {
            let d = s.dir();
            pts.sort_by_key(|q| s.a.to(q).dot(&d));
            pts.dedup();
            let mut full = Vec::with_capacity(pts.len() + 2);
            full.push(s.a.clone());
            full.extend(pts);
            full.push(s.b.clone());
            full
        })
        .collect();
    Planarization { splits, crossings }
}

/// All-pairs reference for the sweep: intersect every pair directly.
pub(crate) fn planarize_pairs(segs: &[Segment]) -> Planarization {
    let mut interior: Vec<BTreeSet<Point>> = vec![BTreeSet::new(); segs.len()];
    for i in 0..segs.len() {
        for j in (i + 1)..segs.len() {
            match segment_intersection(&segs[i], &segs[j]) {
                SegmentIntersection::Empty => {}
                SegmentIntersection::Point(q) => {
                    for k in [i, j] {
                        let s = &segs[k];
                        if q != s.a && q != s.b {
                            interior[k].insert(q.clone());
                        }
                    }
                }
                SegmentIntersection::Overlap(_, _) => {
                    panic!("collinear overlapping segments in the sweep input")
                }
            }
        }
    }
    let mut by_point: BTreeMap<Point, usize> = BTreeMap::new();
    for pts in &interior {
        for q in pts {
            *by_point.entry(q.clone()).or_insert(0) += 1;
        }
    }
    let crossings = by_point.values().filter(|&&c| c >= 2).count();
    let splits = segs
        .iter()
        .zip(interior)
        .map(|(s, pts)| {
            let d = s.dir();
            let mut pts: Vec<Point> = pts.into_iter().collect();
            pts.sort_by_key(|q| s.a.to(q).dot(&d));
            let mut full = Vec::with_capacity(pts.len() + 2);
            full.push(s.a.clone());
            full.extend(pts);
            full.push(s.b.clone());
            full
        })
        .collect();
    Planarization { splits, crossings }
}
