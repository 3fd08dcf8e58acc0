//! Contour plots as standalone SVG, via marching squares.
//!
//! Output carries no timestamp or other run-dependent data, so identical grids
//! render to identical bytes.

use std::fmt::Write as _;

use crate::analysis::ContourGrid;

/// Offsets above the grid minimum at which level sets are drawn.
pub const DEFAULT_LEVEL_OFFSETS: [f64; 9] = [0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0];

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 48.0;

pub fn default_levels(grid: &ContourGrid) -> Vec<f64> {
    let m = grid.minimum().value;
    DEFAULT_LEVEL_OFFSETS.iter().map(|d| m + d).collect()
}

type Segment = ((f64, f64), (f64, f64));

/// Level-set segments in `(a, b)` coordinates.
pub fn level_segments(grid: &ContourGrid, level: f64) -> Vec<Segment> {
    let v = &grid.values;
    let (a, b) = (&grid.a_axis, &grid.b_axis);
    let mut segs = Vec::new();
    for i in 0..a.len().saturating_sub(1) {
        for j in 0..b.len().saturating_sub(1) {
            // corners counter-clockwise from (i, j)
            let corners = [
                (a[i], b[j], v[i][j]),
                (a[i + 1], b[j], v[i + 1][j]),
                (a[i + 1], b[j + 1], v[i + 1][j + 1]),
                (a[i], b[j + 1], v[i][j + 1]),
            ];
            if corners.iter().any(|c| !c.2.is_finite()) {
                continue;
            }
            let mut crossings = Vec::with_capacity(4);
            for k in 0..4 {
                let (p, q) = (corners[k], corners[(k + 1) % 4]);
                if (p.2 < level) != (q.2 < level) {
                    let t = (level - p.2) / (q.2 - p.2);
                    crossings.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
                }
            }
            match crossings.len() {
                2 => segs.push((crossings[0], crossings[1])),
                4 => {
                    // saddle: resolve with the cell-centre average
                    let centre = corners.iter().map(|c| c.2).sum::<f64>() / 4.0;
                    if (centre < level) == (corners[0].2 < level) {
                        segs.push((crossings[0], crossings[3]));
                        segs.push((crossings[1], crossings[2]));
                    } else {
                        segs.push((crossings[0], crossings[1]));
                        segs.push((crossings[2], crossings[3]));
                    }
                }
                _ => {}
            }
        }
    }
    segs
}

fn colour(k: usize, n: usize) -> String {
    // dark blue for low levels through to orange for high ones
    let t = if n > 1 { k as f64 / (n - 1) as f64 } else { 0.0 };
    let r = (30.0 + t * 210.0).round() as u8;
    let g = (60.0 + t * 80.0).round() as u8;
    let b = (160.0 - t * 130.0).round() as u8;
    format!("#{r:02x}{g:02x}{b:02x}")
}

/// Renders level sets of `grid` with `a` horizontal and `b` vertical.
pub fn render_svg(grid: &ContourGrid, levels: &[f64]) -> String {
    let (a0, a1) = (grid.a_spec.lo, grid.a_spec.hi);
    let (b0, b1) = (grid.b_spec.lo, grid.b_spec.hi);
    let px = |a: f64| MARGIN + (a - a0) / (a1 - a0) * (WIDTH - 2.0 * MARGIN);
    let py = |b: f64| HEIGHT - MARGIN - (b - b0) / (b1 - b0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="none" stroke="black"/>"#,
        MARGIN,
        MARGIN,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    for (k, &level) in levels.iter().enumerate() {
        let segs = level_segments(grid, level);
        if segs.is_empty() {
            continue;
        }
        let mut d = String::new();
        for ((xa, ya), (xb, yb)) in segs {
            let _ = write!(d, "M{:.3} {:.3}L{:.3} {:.3}", px(xa), py(ya), px(xb), py(yb));
        }
        let _ = writeln!(
            s,
            r#"<path data-level="{level:.6}" d="{d}" fill="none" stroke="{}" stroke-width="1"/>"#,
            colour(k, levels.len())
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="{:.3}" font-family="sans-serif" font-size="12" text-anchor="middle">a</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.3}" font-family="sans-serif" font-size="12" text-anchor="middle">b</text>"#,
        HEIGHT / 2.0
    );
    for (x, label) in [(px(a0), a0), (px(a1), a1)] {
        let _ = writeln!(
            s,
            r#"<text x="{x:.3}" y="{:.3}" font-family="sans-serif" font-size="10" text-anchor="middle">{label}</text>"#,
            HEIGHT - MARGIN + 14.0
        );
    }
    for (y, label) in [(py(b0), b0), (py(b1), b1)] {
        let _ = writeln!(
            s,
            r#"<text x="{:.3}" y="{y:.3}" font-family="sans-serif" font-size="10" text-anchor="end">{label}</text>"#,
            MARGIN - 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="24" font-family="sans-serif" font-size="12" text-anchor="middle">L = {}, lambda = {}</text>"#,
        WIDTH / 2.0,
        grid.l_slice,
        grid.lambda
    );
    s.push_str("</svg>\n");
    s
}
