//! Text format for polygons and guard lists.
//!
//! A polygon file is line-oriented: the outer vertex count, that many
//! coordinate lines, the hole count, then for each hole its own count and
//! coordinate lines. A coordinate line holds two rationals separated by
//! whitespace, each written as an integer, a decimal, or a fraction `a/b`.
//! Blank lines are ignored; anything else is an error with its line number.

use num::{BigInt, Zero};

use crate::bitset::VertexSet;
use crate::geom::{Point, PolygonWithHoles, Rat};
use crate::{Error, Result};

fn parse_rat(tok: &str) -> Option<Rat> {
    if let Some((a, b)) = tok.split_once('/') {
        let num: BigInt = a.parse().ok()?;
        let den: BigInt = b.parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rat::new(num, den));
    }
    if let Some((int, frac)) = tok.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let (neg, digits) = match int.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, int),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let scale = num::pow(BigInt::from(10), frac.len());
        let whole: BigInt = digits.parse().ok()?;
        let frac_digits: BigInt = frac.parse().ok()?;
        let mut numer = whole * &scale + frac_digits;
        if neg {
            numer = -numer;
        }
        return Some(Rat::new(numer, scale));
    }
    tok.parse::<BigInt>().ok().map(Rat::from_integer)
}

struct Cursor<'a> {
    lines: std::vec::IntoIter<(usize, &'a str)>,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Cursor<'a> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Cursor {
            lines: lines.into_iter(),
        }
    }

    fn take(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.lines.next().ok_or_else(|| Error::Parse {
            line: 0,
            msg: format!("unexpected end of file, expected {what}"),
        })
    }

    fn count(&mut self, what: &str) -> Result<usize> {
        let (line, text) = self.take(what)?;
        text.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("expected {what}, found {text:?}"),
        })
    }

    fn vertex(&mut self) -> Result<Point> {
        let (line, text) = self.take("a coordinate line")?;
        let mut toks = text.split_whitespace();
        let err = |msg: String| Error::Parse { line, msg };
        let x = toks
            .next()
            .and_then(parse_rat)
            .ok_or_else(|| err(format!("expected two rationals, found {text:?}")))?;
        let y = toks
            .next()
            .and_then(parse_rat)
            .ok_or_else(|| err(format!("expected two rationals, found {text:?}")))?;
        if toks.next().is_some() {
            return Err(err(format!("trailing tokens after a vertex: {text:?}")));
        }
        Ok(Point::new(x, y))
    }

    fn ring(&mut self, what: &str) -> Result<Vec<Point>> {
        let n = self.count(what)?;
        (0..n).map(|_| self.vertex()).collect()
    }

    fn finish(&mut self) -> Result<()> {
        match self.lines.next() {
            None => Ok(()),
            Some((line, text)) => Err(Error::Parse {
                line,
                msg: format!("trailing content after the polygon: {text:?}"),
            }),
        }
    }
}

pub fn parse_polygon(text: &str) -> Result<PolygonWithHoles> {
    let mut cur = Cursor::new(text);
    let outer = cur.ring("the outer vertex count")?;
    let h = cur.count("the hole count")?;
    let holes: Vec<Vec<Point>> = (0..h)
        .map(|_| cur.ring("a hole vertex count"))
        .collect::<Result<_>>()?;
    cur.finish()?;
    PolygonWithHoles::new(outer, holes)
}

/// Shortest exact text for a rational: plain integer or `a/b`.
pub fn write_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn push_ring(out: &mut String, pts: &[Point]) {
    out.push_str(&pts.len().to_string());
    out.push('\n');
    for p in pts {
        out.push_str(&write_rat(&p.x));
        out.push(' ');
        out.push_str(&write_rat(&p.y));
        out.push('\n');
    }
}

/// Renders the polygon in the same text format `parse_polygon` reads,
/// preserving coordinates exactly.
pub fn write_polygon(poly: &PolygonWithHoles) -> String {
    let mut out = String::new();
    push_ring(&mut out, poly.ring(0));
    out.push_str(&poly.hole_count().to_string());
    out.push('\n');
    for i in 1..=poly.hole_count() {
        push_ring(&mut out, poly.ring(i));
    }
    out
}

/// Parses a guard list: one vertex id per line, each below `n`.
pub fn parse_guards(text: &str, n: usize) -> Result<VertexSet> {
    let mut set = VertexSet::with_capacity(n);
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let id: usize = line.parse().map_err(|_| Error::Parse {
            line: i + 1,
            msg: format!("expected a vertex id, found {line:?}"),
        })?;
        if id >= n {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("vertex id {id} out of range for {n} vertices"),
            });
        }
        set.insert(id);
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::rq;

    fn same_polygon(a: &PolygonWithHoles, b: &PolygonWithHoles) -> bool {
        if a.hole_count() != b.hole_count() {
            return false;
        }
        (0..=a.hole_count()).all(|i| a.ring(i) == b.ring(i))
    }

    #[test]
    fn parses_the_unit_square() {
        let poly = parse_polygon("4\n0 0\n1 0\n1 1\n0 1\n0\n").unwrap();
        assert_eq!(poly.vertex_count(), 4);
        assert_eq!(poly.hole_count(), 0);
        assert_eq!(poly.ring(0)[2], Point::from_ints(1, 1));
    }

    #[test]
    fn parses_a_polygon_with_a_hole() {
        let text = "4\n0 0\n9 1\n8 8\n1 7\n1\n3\n3 2\n6 5\n4 6\n";
        let poly = parse_polygon(text).unwrap();
        assert_eq!(poly.hole_count(), 1);
        assert_eq!(poly.vertex_count(), 7);
        let direct = PolygonWithHoles::from_ints(
            &[(0, 0), (9, 1), (8, 8), (1, 7)],
            &[&[(3, 2), (6, 5), (4, 6)]],
        )
        .unwrap();
        assert!(same_polygon(&poly, &direct));
    }

    #[test]
    fn accepts_all_three_rational_forms() {
        let poly = parse_polygon("3\n1/2 0.25\n2.5 -3/4\n-7 9\n0\n").unwrap();
        let ring = poly.ring(0);
        let pts: Vec<&Point> = ring.iter().collect();
        assert!(pts.contains(&&Point::new(rq(1, 2), rq(1, 4))));
        assert!(pts.contains(&&Point::new(rq(5, 2), rq(-3, 4))));
        assert!(pts.contains(&&Point::new(rq(-7, 1), rq(9, 1))));
    }

    #[test]
    fn rejects_malformed_input_with_line_numbers() {
        match parse_polygon("4\n0 0\nx 0\n1 1\n0 1\n0\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected a parse error, got {other:?}"),
        }
        match parse_polygon("bogus\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected a parse error, got {other:?}"),
        }
        match parse_polygon("3\n0 0\n1 0\n0 1\n0\nextra\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("expected a parse error, got {other:?}"),
        }
        match parse_polygon("3\n0 0\n1 0\n") {
            Err(Error::Parse { .. }) => {}
            other => panic!("expected a parse error, got {other:?}"),
        }
        match parse_polygon("3\n1/0 0\n1 0\n0 1\n0\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected a parse error, got {other:?}"),
        }
        match parse_polygon("4\n0 0\n1 0\n2 0\n0 1\n0\n") {
            Err(Error::InvalidPolygon(msg)) => assert!(msg.contains("collinear")),
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn round_trips_exactly() {
        let cases = [
            PolygonWithHoles::from_ints(
                &[(0, 0), (2, 0), (2, 1), (1, 1), (1, 3), (0, 3)],
                &[],
            )
            .unwrap(),
            PolygonWithHoles::from_ints(
                &[(0, 0), (9, 1), (8, 8), (1, 7)],
                &[&[(3, 2), (6, 5), (4, 6)]],
            )
            .unwrap(),
            parse_polygon("3\n1/2 0.25\n2.5 -3/4\n-7 9\n0\n").unwrap(),
        ];
        for poly in &cases {
            let text = write_polygon(poly);
            let back = parse_polygon(&text).unwrap();
            assert!(same_polygon(poly, &back), "round trip changed:\n{text}");
            assert_eq!(text, write_polygon(&back));
        }
    }

    #[test]
    fn guard_lists_parse_and_validate() {
        assert_eq!(parse_guards("0\n3\n", 6).unwrap().to_vec(), vec![0, 3]);
        assert_eq!(parse_guards("", 6).unwrap().len(), 0);
        assert_eq!(parse_guards(" 5 \n\n1\n", 6).unwrap().to_vec(), vec![1, 5]);
        match parse_guards("0\nfive\n", 6) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected a parse error, got {other:?}"),
        }
        match parse_guards("9\n", 6) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected a range error, got {other:?}"),
        }
    }
}
