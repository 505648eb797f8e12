//! SVG rendering of a decomposition: sink cells shaded, windows colored by
//! kind, the boundary drawn on top, guard vertices marked last.
//!
//! Coordinates are exact rationals internally; for display they are
//! converted to f64 and snapped to a 1e-9 grid. The snap only affects the
//! emitted text, never any computation.

use crate::arrangement::Decomposition;
use crate::bitset::VertexSet;
use crate::geom::Point;
use crate::visibility::WindowKind;

pub const LEFT_COLOR: &str = "#1f6fd6";
pub const RIGHT_COLOR: &str = "#2a9d4e";
pub const TRANS_COLOR: &str = "#d63b2f";
pub const SINK_FILL: &str = "#f2c94c";
pub const BOUNDARY_COLOR: &str = "#111111";

fn quantize(v: f64) -> f64 {
    (v * 1e9).round() / 1e9
}

fn coord(v: f64) -> String {
    format!("{}", quantize(v))
}

struct Frame {
    max_y: f64,
    unit: f64,
}

impl Frame {
    fn map(&self, p: &Point) -> (f64, f64) {
        let (x, y) = p.approx();
        (x, self.max_y - y)
    }

    fn points_attr(&self, ring: &[Point]) -> String {
        let mut out = String::new();
        for (i, p) in ring.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let (x, y) = self.map(p);
            out.push_str(&coord(x));
            out.push(',');
            out.push_str(&coord(y));
        }
        out
    }
}

pub fn render_svg(decomp: &Decomposition, sinks: &[usize], guards: &VertexSet) -> String {
    let poly = decomp.polygon();

    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for ri in 0..=poly.hole_count() {
        for p in poly.ring(ri) {
            let (x, y) = p.approx();
            min_x = min_x.min(x);
            max_x = max_x.max(x);
            min_y = min_y.min(y);
            max_y = max_y.max(y);
        }
    }
    let unit = (max_x - min_x).max(max_y - min_y).max(1.0);
    let frame = Frame { max_y, unit };
    let margin = 0.05 * unit;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        coord(min_x - margin),
        coord(-margin),
        coord(max_x - min_x + 2.0 * margin),
        coord(max_y - min_y + 2.0 * margin),
    ));

    out.push_str(&format!(
        "  <g fill=\"{SINK_FILL}\" fill-opacity=\"0.45\" stroke=\"none\">\n"
    ));
    for &s in sinks {
        let cell = &decomp.cells()[s];
        out.push_str(&format!(
            "    <polygon points=\"{}\"/>\n",
            frame.points_attr(&cell.ring)
        ));
    }
    out.push_str("  </g>\n");

    out.push_str(&format!(
        "  <g stroke-width=\"{}\" stroke-linecap=\"round\">\n",
        coord(0.008 * frame.unit)
    ));
    for w in decomp.windows() {
        let color = match w.kind {
            WindowKind::Left => LEFT_COLOR,
            WindowKind::Right => RIGHT_COLOR,
            WindowKind::Trans => TRANS_COLOR,
        };
        let (x1, y1) = frame.map(w.base_point(poly));
        let (x2, y2) = frame.map(&w.end);
        out.push_str(&format!(
            "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\"/>\n",
            coord(x1),
            coord(y1),
            coord(x2),
            coord(y2),
        ));
    }
    out.push_str("  </g>\n");

    out.push_str(&format!(
        "  <g fill=\"none\" stroke=\"{BOUNDARY_COLOR}\" stroke-width=\"{}\">\n",
        coord(0.012 * frame.unit)
    ));
    for ri in 0..=poly.hole_count() {
        out.push_str(&format!(
            "    <polygon points=\"{}\"/>\n",
            frame.points_attr(poly.ring(ri))
        ));
    }
    out.push_str("  </g>\n");

    out.push_str(&format!("  <g fill=\"{BOUNDARY_COLOR}\">\n"));
    for id in guards.iter() {
        let p = poly.point(poly.vertex_from_id(id));
        let (x, y) = frame.map(p);
        out.push_str(&format!(
            "    <circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>\n",
            coord(x),
            coord(y),
            coord(0.02 * frame.unit)
        ));
    }
    out.push_str("  </g>\n");

    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{build_dual, decompose};
    use crate::corpus;
    use crate::geom::{rq, PolygonWithHoles};

    fn render(poly: &PolygonWithHoles, guards: &[usize]) -> String {
        let decomp = decompose(poly).unwrap();
        let dual = build_dual(&decomp).unwrap();
        let mut set = VertexSet::with_capacity(poly.vertex_count());
        for &g in guards {
            set.insert(g);
        }
        render_svg(&decomp, &dual.sinks(), &set)
    }

    #[test]
    fn the_document_is_well_formed_and_complete() {
        let svg = render(&corpus::quad_with_hole(), &[0, 2]);
        assert!(svg.starts_with("<svg "));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<g ").count(), svg.matches("</g>").count());
        assert_eq!(svg.matches("<circle ").count(), 2);
        assert!(!svg.contains("NaN"));

        let decomp = decompose(&corpus::quad_with_hole()).unwrap();
        assert_eq!(svg.matches("<line ").count(), decomp.windows().len());
        // Outer ring, one hole ring, and one shaded polygon per sink.
        let dual = build_dual(&decomp).unwrap();
        assert_eq!(
            svg.matches("<polygon ").count(),
            2 + dual.sinks().len()
        );
    }

    #[test]
    fn window_kinds_get_their_colors() {
        let svg = render(&corpus::quad_with_hole(), &[]);
        assert!(svg.contains(TRANS_COLOR), "hole polygons have trans windows");

        let ell = render(&corpus::ell(), &[0]);
        assert!(ell.contains(LEFT_COLOR));
        assert!(ell.contains(RIGHT_COLOR));
        assert!(!ell.contains(TRANS_COLOR), "no trans windows without holes");

        let convex =
            render(&PolygonWithHoles::from_ints(&[(0, 0), (3, 1), (1, 4)], &[]).unwrap(), &[]);
        assert_eq!(convex.matches("<line ").count(), 0);
    }

    #[test]
    fn display_coordinates_snap_to_the_grid() {
        assert_eq!(coord(1.0 / 3.0), "0.333333333");
        assert_eq!(coord(2.0000000004), "2");
        assert_eq!(coord(-0.1249999999999), "-0.125");

        let poly = PolygonWithHoles::new(
            vec![
                crate::geom::Point::new(rq(0, 1), rq(0, 1)),
                crate::geom::Point::new(rq(1, 3), rq(1, 7)),
                crate::geom::Point::new(rq(1, 9), rq(2, 1)),
            ],
            vec![],
        )
        .unwrap();
        let decomp = decompose(&poly).unwrap();
        let svg = render_svg(&decomp, &[], &VertexSet::with_capacity(3));
        assert!(svg.contains("0.333333333"), "{svg}");
    }
}
