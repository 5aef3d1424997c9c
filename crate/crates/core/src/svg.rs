//! SVG 1.1 rendering of a path and its arc/bridge structure.

use std::fmt::Write;

use crate::geometry::Point2;
use crate::path::{DiscretePath, Params};
use crate::typing::{analyze, Orientation};

fn bounds(points: &[Point2]) -> (f64, f64, f64, f64) {
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    (x0, y0, x1, y1)
}

/// The polyline in grey, arcs over it in colour (left blue, right red),
/// bridges dashed, start and end headings as short ticks. The y axis points
/// up. Structure is drawn only for feasible paths.
pub fn render(path: &DiscretePath, params: &Params) -> String {
    let (x0, y0, x1, y1) = bounds(&path.vertices);
    let size = (x1 - x0).max(y1 - y0).max(params.ell);
    let margin = 0.05 * size;
    let (w, h) = (x1 - x0 + 2.0 * margin + params.ell, y1 - y0 + 2.0 * margin + params.ell);
    let (vx, vy) = (x0 - margin - 0.5 * params.ell, -(y1 + margin + 0.5 * params.ell));
    let stroke = size / 300.0;
    let pt = |p: Point2| format!("{:.6},{:.6}", p.x, -p.y);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{vx:.6} {vy:.6} {w:.6} {h:.6}">"#
    );
    let line: Vec<String> = path.vertices.iter().map(|&p| pt(p)).collect();
    let _ = writeln!(
        s,
        r##"<polyline points="{}" fill="none" stroke="#888" stroke-width="{:.6}"/>"##,
        line.join(" "),
        stroke
    );
    if let Ok(structure) = analyze(path, params) {
        for arc in &structure.arcs {
            let colour = match arc.orientation {
                Orientation::Left => "#1f5fbf",
                Orientation::Right => "#bf1f1f",
            };
            let mut pts = vec![arc.start_pt];
            if let (Some(a), Some(b)) = (arc.first_vertex, arc.last_vertex) {
                pts.extend(path.vertices[a..=b].iter().copied());
            }
            pts.push(arc.end_pt);
            let pts: Vec<String> = pts.into_iter().map(pt).collect();
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="{:.6}"/>"#,
                pts.join(" "),
                2.5 * stroke
            );
        }
        for b in &structure.bridges {
            let _ = writeln!(
                s,
                r##"<line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}" stroke="#2a2" stroke-width="{:.6}" stroke-dasharray="{:.6}"/>"##,
                b.start_pt.x,
                -b.start_pt.y,
                b.end_pt.x,
                -b.end_pt.y,
                2.0 * stroke,
                6.0 * stroke
            );
        }
    }
    for c in [&path.start, &path.end] {
        let tip = c.point + c.heading * (0.5 * params.ell);
        let _ = writeln!(
            s,
            r##"<line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}" stroke="#000" stroke-width="{:.6}"/>"##,
            c.point.x,
            -c.point.y,
            tip.x,
            -tip.y,
            1.5 * stroke
        );
    }
    for p in &path.vertices {
        let _ = writeln!(
            s,
            r##"<circle cx="{:.6}" cy="{:.6}" r="{:.6}" fill="#000"/>"##,
            p.x,
            -p.y,
            2.0 * stroke
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::Configuration;
    use crate::Vec2;

    #[test]
    fn renders_a_well_formed_document() {
        let params = Params::from_n_sides(8, 1.0).unwrap();
        let u = Configuration::from_angle(0.0, 0.0, 0.0);
        let v = Configuration::from_angle(3.0, 0.0, 0.0);
        let p = DiscretePath::new(u, v, vec![u.point, Vec2::new(3.0, 0.0)]).unwrap();
        let svg = render(&p, &params);
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("stroke-dasharray"));
        assert_eq!(svg.matches("<circle").count(), 2);
    }
}
