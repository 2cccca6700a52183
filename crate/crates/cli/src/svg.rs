//! Plain SVG drawings of Newton polygons: one panel per polygon, hull as a closed
//! polyline, slope labels at edge midpoints.

use std::fmt::Write;

use qdiff::newton_ramis::{NewtonPolygon, Point};

const CELL: i64 = 40;
const PAD: i64 = 30;

fn label(a: Point, b: Point) -> String {
    if a.0 == b.0 {
        return "inf".into();
    }
    let (n, d) = (b.1 - a.1, b.0 - a.0);
    let g = num_integer::gcd(n, d);
    let (n, d) = if d / g < 0 { (-n / g, -d / g) } else { (n / g, d / g) };
    if d == 1 { n.to_string() } else { format!("{n}/{d}") }
}

fn panel(out: &mut String, title: &str, p: &NewtonPolygon, x0: i64, vmax: i64) -> i64 {
    let hull = p.hull();
    // closed polygons extend to u = −∞; leave one column for the rays
    let umin = p.points.iter().map(|h| h.0).min().unwrap_or(0) - i64::from(p.closed_left);
    let umax = p.points.iter().map(|h| h.0).max().unwrap_or(0);
    let px = |u: i64| x0 + PAD + (u - umin) * CELL;
    let py = |v: i64| PAD + (vmax - v) * CELL;
    let _ = writeln!(out, r##"<text x="{}" y="14" font-size="12">{}</text>"##, x0 + 4, title);
    let pts: Vec<String> = hull.iter().map(|&(u, v)| format!("{},{}", px(u), py(v))).collect();
    let shape = if p.closed_left { "polyline" } else { "polygon" };
    let _ = writeln!(out, r##"<{shape} points="{}" fill="none" stroke="#234" stroke-width="1.5"/>"##, pts.join(" "));
    if p.closed_left {
        for end in [hull.first(), hull.last()].into_iter().flatten() {
            let _ = writeln!(
                out,
                r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#234" stroke-dasharray="4 3"/>"##,
                px(end.0),
                py(end.1),
                px(umin),
                py(end.1)
            );
        }
    }
    for &(u, v) in &p.points {
        let _ = writeln!(out, r##"<circle cx="{}" cy="{}" r="3" fill="#a22"/>"##, px(u), py(v));
    }
    let edges = if p.closed_left { hull.len().saturating_sub(1) } else { hull.len() };
    for i in 0..edges {
        let (a, b) = (hull[i], hull[(i + 1) % hull.len()]);
        if a == b {
            continue;
        }
        let (mx, my) = ((px(a.0) + px(b.0)) / 2, (py(a.1) + py(b.1)) / 2);
        let _ = writeln!(out, r##"<text x="{}" y="{}" font-size="11" fill="#555">{}</text>"##, mx + 3, my - 3, label(a, b));
    }
    ((umax - umin).max(1) * CELL + 2 * PAD).max(160)
}

pub fn polygons(items: &[(String, NewtonPolygon)]) -> String {
    let mut body = String::new();
    let mut x = 0;
    let vmax = items.iter().flat_map(|(_, p)| p.points.iter().map(|h| h.1)).max().unwrap_or(0).max(1);
    let height = vmax * CELL + 2 * PAD;
    for (title, p) in items {
        x += panel(&mut body, title, p, x, vmax) + PAD;
    }
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{x}\" height=\"{height}\" viewBox=\"0 0 {x} {height}\">\n{body}</svg>\n"
    )
}
