//! Static SVG figures: planar chessboard colorings and parity tables.

use std::fmt::Write;

use num_traits::{One, Zero};

use crate::arrangement::Arrangement;
use crate::config::ColoredPointConfig;
use crate::error::{Error, Result};
use crate::geom::{side, Color, OrientedHyperplane, Point};
use crate::measures::chessboard_cells;
use crate::rat::{self, Rat};

const WIDTH: f64 = 800.0;
const LIGHT: &str = "#f3efe4";
const DARK: &str = "#5b6475";
const PALETTE: [&str; 8] = ["#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#17becf", "#e377c2", "#bcbd22"];

struct View {
    lo: Point,
    hi: Point,
    height: f64,
}

impl View {
    fn px(&self, p: &[Rat]) -> (f64, f64) {
        let w = rat::to_f64(&(&self.hi[0] - &self.lo[0]));
        let h = rat::to_f64(&(&self.hi[1] - &self.lo[1]));
        let x = rat::to_f64(&(&p[0] - &self.lo[0])) / w * WIDTH;
        let y = rat::to_f64(&(&self.hi[1] - &p[1])) / h * self.height;
        (x, y)
    }

    fn corners(&self) -> Vec<Point> {
        let (lo, hi) = (&self.lo, &self.hi);
        vec![
            vec![lo[0].clone(), lo[1].clone()],
            vec![hi[0].clone(), lo[1].clone()],
            vec![hi[0].clone(), hi[1].clone()],
            vec![lo[0].clone(), hi[1].clone()],
        ]
    }
}

/// Bounding box of the points, padded by 10% of its extent on each side.
fn viewport(config: &ColoredPointConfig) -> View {
    let pts: Vec<&Point> = config.colors.iter().flatten().collect();
    let mut lo: Point = pts[0].clone();
    let mut hi: Point = pts[0].clone();
    for p in &pts {
        for i in 0..2 {
            lo[i] = lo[i].clone().min(p[i].clone());
            hi[i] = hi[i].clone().max(p[i].clone());
        }
    }
    for i in 0..2 {
        let extent = &hi[i] - &lo[i];
        let pad = if extent.is_zero() { Rat::one() } else { extent / rat::int(10) };
        lo[i] -= &pad;
        hi[i] += pad;
    }
    let ratio = rat::to_f64(&((&hi[1] - &lo[1]) / (&hi[0] - &lo[0])));
    View { lo, hi, height: (WIDTH * ratio).clamp(100.0, 4.0 * WIDTH) }
}

/// Where a line leaves the convex viewport, when it crosses it.
fn chord(h: &OrientedHyperplane, corners: &[Point]) -> Option<(Point, Point)> {
    let mut hits: Vec<Point> = Vec::new();
    for i in 0..corners.len() {
        let (p, q) = (&corners[i], &corners[(i + 1) % corners.len()]);
        let (vp, vq) = (h.value(p), h.value(q));
        if vp.is_zero() {
            hits.push(p.clone());
        } else if !vq.is_zero() && (vp > Rat::zero()) != (vq > Rat::zero()) {
            let t = &vp / (&vp - &vq);
            hits.push(p.iter().zip(q).map(|(a, b)| a + &t * (b - a)).collect());
        }
    }
    hits.sort();
    hits.dedup();
    (hits.len() >= 2).then(|| (hits[0].clone(), hits[hits.len() - 1].clone()))
}

/// Planar chessboard coloring of an arrangement over the configuration: A
/// light, B dark, lines drawn, points as disks, incident points ringed.
pub fn render_svg(config: &ColoredPointConfig, arrangement: &Arrangement) -> Result<String> {
    if config.dim != 2 {
        return Err(Error::Dimension { expected: 2, got: config.dim });
    }
    if config.total_points() == 0 {
        return Err(Error::InvalidInput("nothing to draw".into()));
    }
    let view = viewport(config);
    let hyperplanes = arrangement.hyperplanes();
    let radius = WIDTH / 160.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{:.0}" viewBox="0 0 {WIDTH:.0} {:.0}">"#,
        view.height, view.height
    );
    for (cell, color) in chessboard_cells(&view.corners(), &hyperplanes) {
        let fill = if color == Color::A { LIGHT } else { DARK };
        let pts: Vec<String> = cell.iter().map(|p| view.px(p)).map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
        let _ = writeln!(out, r#"<polygon points="{}" fill="{fill}"/>"#, pts.join(" "));
    }
    for h in &hyperplanes {
        if let Some((a, b)) = chord(h, &view.corners()) {
            let ((x1, y1), (x2, y2)) = (view.px(&a), view.px(&b));
            let _ = writeln!(out, r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="black" stroke-width="1.5"/>"#);
        }
    }
    for (c, class) in config.colors.iter().enumerate() {
        let fill = PALETTE[c % PALETTE.len()];
        for p in class {
            let (x, y) = view.px(p);
            let _ = writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{radius:.3}" fill="{fill}" stroke="white" stroke-width="0.8"/>"#);
            if hyperplanes.iter().any(|h| side(h, p) == 0) {
                let _ = writeln!(
                    out,
                    r#"<circle cx="{x:.3}" cy="{y:.3}" r="{:.3}" fill="none" stroke="black" stroke-width="1.5"/>"#,
                    radius * 1.9
                );
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Parity grid as black (odd) and white (even) squares, rows top to bottom.
pub fn render_parity_table(grid: &[Vec<u8>]) -> String {
    let cell = 12;
    let rows = grid.len();
    let cols = grid.first().map_or(0, Vec::len);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = cols * cell,
        h = rows * cell
    );
    let _ = writeln!(out, r#"<rect width="{}" height="{}" fill="white"/>"#, cols * cell, rows * cell);
    for (i, row) in grid.iter().enumerate() {
        for (j, &bit) in row.iter().enumerate() {
            if bit == 1 {
                let _ = writeln!(out, r#"<rect x="{}" y="{}" width="{cell}" height="{cell}" fill="black"/>"#, j * cell, i * cell);
            }
        }
    }
    out.push_str("</svg>\n");
    out
}
