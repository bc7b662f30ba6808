//! Anti-aliased rasterization of strokes, polygons and stroke-font text.
//!
//! Foreground is 1.0 on a 0.0 background. Stroke coverage falls off linearly
//! over one pixel at the stroke boundary.

use std::f64::consts::{PI, TAU};

use rpn_core::Frame;

pub type Point = (f64, f64);

/// Accumulating canvas; overlapping marks take the maximum coverage.
#[derive(Debug, Clone)]
pub struct Canvas {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let (vx, vy) = (b.0 - a.0, b.1 - a.1);
    let (wx, wy) = (p.0 - a.0, p.1 - a.1);
    let len2 = vx * vx + vy * vy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        ((wx * vx + wy * vy) / len2).clamp(0.0, 1.0)
    };
    let (dx, dy) = (wx - t * vx, wy - t * vy);
    (dx * dx + dy * dy).sqrt()
}

impl Canvas {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            pixels: vec![0.0; width * height],
        }
    }

    pub fn center(&self) -> Point {
        ((self.width as f64 - 1.0) / 2.0, (self.height as f64 - 1.0) / 2.0)
    }

    fn plot(&mut self, x: usize, y: usize, v: f64) {
        let p = &mut self.pixels[y * self.width + x];
        *p = p.max(v.clamp(0.0, 1.0));
    }

    fn bounds(&self, lo: Point, hi: Point) -> (usize, usize, usize, usize) {
        let clampx = |v: f64| v.clamp(0.0, self.width as f64 - 1.0) as usize;
        let clampy = |v: f64| v.clamp(0.0, self.height as f64 - 1.0) as usize;
        (
            clampx(lo.0.floor()),
            clampx(hi.0.ceil()),
            clampy(lo.1.floor()),
            clampy(hi.1.ceil()),
        )
    }

    pub fn segment(&mut self, a: Point, b: Point, width: f64) {
        let pad = width / 2.0 + 1.0;
        let lo = (a.0.min(b.0) - pad, a.1.min(b.1) - pad);
        let hi = (a.0.max(b.0) + pad, a.1.max(b.1) + pad);
        if hi.0 < 0.0 || hi.1 < 0.0 || lo.0 > self.width as f64 || lo.1 > self.height as f64 {
            return;
        }
        let (x0, x1, y0, y1) = self.bounds(lo, hi);
        for y in y0..=y1 {
            for x in x0..=x1 {
                let d = segment_distance((x as f64, y as f64), a, b);
                self.plot(x, y, width / 2.0 + 0.5 - d);
            }
        }
    }

    pub fn polyline(&mut self, points: &[Point], width: f64) {
        for w in points.windows(2) {
            self.segment(w[0], w[1], width);
        }
        if let [p] = points {
            self.segment(*p, *p, width);
        }
    }

    pub fn closed(&mut self, points: &[Point], width: f64) {
        self.polyline(points, width);
        if points.len() > 2 {
            self.segment(points[points.len() - 1], points[0], width);
        }
    }

    /// Even-odd fill, 4×4 supersampled.
    pub fn fill(&mut self, points: &[Point]) {
        if points.len() < 3 {
            return;
        }
        let lo = points.iter().fold((f64::MAX, f64::MAX), |m, p| (m.0.min(p.0), m.1.min(p.1)));
        let hi = points.iter().fold((f64::MIN, f64::MIN), |m, p| (m.0.max(p.0), m.1.max(p.1)));
        let (x0, x1, y0, y1) = self.bounds((lo.0 - 1.0, lo.1 - 1.0), (hi.0 + 1.0, hi.1 + 1.0));
        for y in y0..=y1 {
            for x in x0..=x1 {
                let mut hits = 0;
                for sy in 0..4 {
                    for sx in 0..4 {
                        let p = (x as f64 + (sx as f64 - 1.5) / 4.0, y as f64 + (sy as f64 - 1.5) / 4.0);
                        hits += inside(points, p) as u32;
                    }
                }
                if hits > 0 {
                    self.plot(x, y, hits as f64 / 16.0);
                }
            }
        }
    }

    pub fn disc(&mut self, c: Point, r: f64) {
        self.fill(&regular_polygon(c, r, 64, 0.0));
    }

    pub fn into_frame(self) -> Frame {
        Frame::new(self.width, self.height, self.pixels).expect("canvas pixels are finite")
    }
}

fn inside(poly: &[Point], p: Point) -> bool {
    let mut c = false;
    let mut j = poly.len() - 1;
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[j]);
        if (a.1 > p.1) != (b.1 > p.1) && p.0 < (b.0 - a.0) * (p.1 - a.1) / (b.1 - a.1) + a.0 {
            c = !c;
        }
        j = i;
    }
    c
}

/// Vertices of a regular polygon with circumradius `r`; `phase` rotates the
/// first vertex away from the +x axis.
pub fn regular_polygon(c: Point, r: f64, sides: usize, phase: f64) -> Vec<Point> {
    (0..sides)
        .map(|k| {
            let a = phase + TAU * k as f64 / sides as f64;
            (c.0 + r * a.cos(), c.1 + r * a.sin())
        })
        .collect()
}

/// Axis-aligned square with half side `h`, corners first at top-left.
pub fn square(c: Point, h: f64) -> Vec<Point> {
    vec![
        (c.0 - h, c.1 - h),
        (c.0 + h, c.1 - h),
        (c.0 + h, c.1 + h),
        (c.0 - h, c.1 + h),
    ]
}

/// Star with `points` tips alternating between radii `outer` and `inner`.
pub fn star(c: Point, outer: f64, inner: f64, points: usize) -> Vec<Point> {
    (0..2 * points)
        .map(|k| {
            let r = if k % 2 == 0 { outer } else { inner };
            let a = -PI / 2.0 + PI * k as f64 / points as f64;
            (c.0 + r * a.cos(), c.1 + r * a.sin())
        })
        .collect()
}

/// Evenly spaced points along an elliptical arc from `a0` to `a1` radians.
pub fn arc(c: Point, rx: f64, ry: f64, a0: f64, a1: f64, steps: usize) -> Vec<Point> {
    (0..=steps)
        .map(|k| {
            let a = a0 + (a1 - a0) * k as f64 / steps as f64;
            (c.0 + rx * a.cos(), c.1 + ry * a.sin())
        })
        .collect()
}

/// Stroke-font glyphs on a 4 × 6 cell, y pointing down.
fn glyph(ch: char) -> Option<&'static [&'static [Point]]> {
    const O: &[Point] = &[(1.0, 0.0), (3.0, 0.0), (4.0, 1.0), (4.0, 5.0), (3.0, 6.0), (1.0, 6.0), (0.0, 5.0), (0.0, 1.0), (1.0, 0.0)];
    const P: &[Point] = &[(0.0, 6.0), (0.0, 0.0), (3.0, 0.0), (4.0, 1.0), (4.0, 2.0), (3.0, 3.0), (0.0, 3.0)];
    let strokes: &'static [&'static [Point]] = match ch.to_ascii_uppercase() {
        'A' => &[&[(0.0, 6.0), (2.0, 0.0), (4.0, 6.0)], &[(0.7, 4.0), (3.3, 4.0)]],
        'B' => &[
            &[(0.0, 0.0), (0.0, 6.0), (3.0, 6.0), (4.0, 5.0), (4.0, 4.0), (3.0, 3.0), (0.0, 3.0)],
            &[(0.0, 0.0), (3.0, 0.0), (4.0, 1.0), (4.0, 2.0), (3.0, 3.0)],
        ],
        'C' => &[&[(4.0, 1.0), (3.0, 0.0), (1.0, 0.0), (0.0, 1.0), (0.0, 5.0), (1.0, 6.0), (3.0, 6.0), (4.0, 5.0)]],
        'D' => &[&[(0.0, 0.0), (0.0, 6.0), (2.5, 6.0), (4.0, 4.5), (4.0, 1.5), (2.5, 0.0), (0.0, 0.0)]],
        'E' => &[&[(4.0, 0.0), (0.0, 0.0), (0.0, 6.0), (4.0, 6.0)], &[(0.0, 3.0), (3.0, 3.0)]],
        'F' => &[&[(4.0, 0.0), (0.0, 0.0), (0.0, 6.0)], &[(0.0, 3.0), (3.0, 3.0)]],
        'G' => &[&[(4.0, 1.0), (3.0, 0.0), (1.0, 0.0), (0.0, 1.0), (0.0, 5.0), (1.0, 6.0), (3.0, 6.0), (4.0, 5.0), (4.0, 3.5), (2.5, 3.5)]],
        'H' => &[&[(0.0, 0.0), (0.0, 6.0)], &[(4.0, 0.0), (4.0, 6.0)], &[(0.0, 3.0), (4.0, 3.0)]],
        'I' => &[&[(1.0, 0.0), (3.0, 0.0)], &[(2.0, 0.0), (2.0, 6.0)], &[(1.0, 6.0), (3.0, 6.0)]],
        'J' => &[&[(1.0, 0.0), (4.0, 0.0)], &[(3.0, 0.0), (3.0, 5.0), (2.0, 6.0), (1.0, 6.0), (0.0, 5.0)]],
        'K' => &[&[(0.0, 0.0), (0.0, 6.0)], &[(4.0, 0.0), (0.0, 3.5)], &[(1.3, 2.6), (4.0, 6.0)]],
        'L' => &[&[(0.0, 0.0), (0.0, 6.0), (4.0, 6.0)]],
        'M' => &[&[(0.0, 6.0), (0.0, 0.0), (2.0, 3.5), (4.0, 0.0), (4.0, 6.0)]],
        'N' => &[&[(0.0, 6.0), (0.0, 0.0), (4.0, 6.0), (4.0, 0.0)]],
        'O' => &[O],
        'P' => &[P],
        'Q' => &[O, &[(2.5, 4.5), (4.0, 6.0)]],
        'R' => &[P, &[(2.0, 3.0), (4.0, 6.0)]],
        'S' => &[&[(4.0, 1.0), (3.0, 0.0), (1.0, 0.0), (0.0, 1.0), (0.0, 2.0), (1.0, 3.0), (3.0, 3.0), (4.0, 4.0), (4.0, 5.0), (3.0, 6.0), (1.0, 6.0), (0.0, 5.0)]],
        'T' => &[&[(0.0, 0.0), (4.0, 0.0)], &[(2.0, 0.0), (2.0, 6.0)]],
        'U' => &[&[(0.0, 0.0), (0.0, 5.0), (1.0, 6.0), (3.0, 6.0), (4.0, 5.0), (4.0, 0.0)]],
        'V' => &[&[(0.0, 0.0), (2.0, 6.0), (4.0, 0.0)]],
        'W' => &[&[(0.0, 0.0), (1.0, 6.0), (2.0, 2.5), (3.0, 6.0), (4.0, 0.0)]],
        'X' => &[&[(0.0, 0.0), (4.0, 6.0)], &[(4.0, 0.0), (0.0, 6.0)]],
        'Y' => &[&[(0.0, 0.0), (2.0, 3.0), (4.0, 0.0)], &[(2.0, 3.0), (2.0, 6.0)]],
        'Z' => &[&[(0.0, 0.0), (4.0, 0.0), (0.0, 6.0), (4.0, 6.0)]],
        '0' => &[O, &[(0.5, 5.0), (3.5, 1.0)]],
        '1' => &[&[(1.0, 1.0), (2.0, 0.0), (2.0, 6.0)], &[(1.0, 6.0), (3.0, 6.0)]],
        '2' => &[&[(0.0, 1.0), (1.0, 0.0), (3.0, 0.0), (4.0, 1.0), (4.0, 2.0), (0.0, 6.0), (4.0, 6.0)]],
        '3' => &[
            &[(0.0, 1.0), (1.0, 0.0), (3.0, 0.0), (4.0, 1.0), (4.0, 2.0), (3.0, 3.0), (1.5, 3.0)],
            &[(3.0, 3.0), (4.0, 4.0), (4.0, 5.0), (3.0, 6.0), (1.0, 6.0), (0.0, 5.0)],
        ],
        '4' => &[&[(3.0, 6.0), (3.0, 0.0), (0.0, 4.0), (4.0, 4.0)]],
        '5' => &[&[(4.0, 0.0), (0.0, 0.0), (0.0, 3.0), (3.0, 3.0), (4.0, 4.0), (4.0, 5.0), (3.0, 6.0), (1.0, 6.0), (0.0, 5.0)]],
        '6' => &[&[(3.5, 0.0), (1.0, 0.0), (0.0, 1.0), (0.0, 5.0), (1.0, 6.0), (3.0, 6.0), (4.0, 5.0), (4.0, 4.0), (3.0, 3.0), (0.0, 3.0)]],
        '7' => &[&[(0.0, 0.0), (4.0, 0.0), (1.5, 6.0)]],
        '8' => &[
            &[(1.0, 0.0), (3.0, 0.0), (4.0, 1.0), (4.0, 2.0), (3.0, 3.0), (1.0, 3.0), (0.0, 4.0), (0.0, 5.0), (1.0, 6.0), (3.0, 6.0), (4.0, 5.0), (4.0, 4.0), (3.0, 3.0)],
            &[(1.0, 3.0), (0.0, 2.0), (0.0, 1.0), (1.0, 0.0)],
        ],
        '9' => &[&[(4.0, 3.0), (1.0, 3.0), (0.0, 2.0), (0.0, 1.0), (1.0, 0.0), (3.0, 0.0), (4.0, 1.0), (4.0, 5.0), (3.0, 6.0), (0.5, 6.0)]],
        ' ' => &[],
        _ => return None,
    };
    Some(strokes)
}

pub fn is_renderable(text: &str) -> bool {
    !text.is_empty() && text.chars().all(|c| glyph(c).is_some())
}

/// Draw `text` centered on the canvas, `height` pixels tall (shrunk if it
/// would be wider than `max_width`).
pub fn text(canvas: &mut Canvas, text: &str, height: f64, max_width: f64, stroke: f64) {
    let n = text.chars().count() as f64;
    let cell_w = 5.0 * n - 1.0;
    let scale = (height / 6.0).min(max_width / cell_w);
    let (cx, cy) = canvas.center();
    let origin = (cx - cell_w * scale / 2.0, cy - 3.0 * scale);
    for (i, ch) in text.chars().enumerate() {
        let Some(strokes) = glyph(ch) else { continue };
        let dx = origin.0 + 5.0 * scale * i as f64;
        for s in strokes {
            let pts: Vec<Point> = s.iter().map(|(x, y)| (dx + x * scale, origin.1 + y * scale)).collect();
            canvas.polyline(&pts, stroke);
        }
    }
}
