//! Generated test corpus: letters, digits, words, geometric shapes and simple
//! face and fish silhouettes, all centered.

use std::f64::consts::{FRAC_PI_8, PI};
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rpn_core::Frame;

use crate::io::{load_frame, save_pgm};
use crate::render::{arc, regular_polygon, square, star, text, Canvas, Point};

pub const DEFAULT_SIZE: usize = 200;

const WORDS: [&str; 8] = ["RPN", "CAT", "DOG", "FISH", "SUN", "WAVE", "HI", "EYE"];

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusImage {
    pub id: String,
    pub category: &'static str,
    pub frame: Frame,
}

fn outline_stroke(size: usize) -> f64 {
    (size as f64 / 30.0).max(1.5)
}

/// A single glyph (or several) at the standard letter height.
pub fn render_text(size: usize, s: &str) -> Frame {
    let mut c = Canvas::new(size, size);
    let sz = size as f64;
    let stroke = if s.chars().count() > 1 { sz / 28.0 } else { sz / 22.0 };
    text(&mut c, s, 0.55 * sz, 0.85 * sz, stroke);
    c.into_frame()
}

/// Half side of the demo square; its corners sit at 85% of the frame half-width.
fn demo_half(size: usize) -> f64 {
    0.85 * (size as f64 / 2.0) / 2f64.sqrt()
}

pub fn square_outline(size: usize) -> Frame {
    let mut c = Canvas::new(size, size);
    c.closed(&square(c.center(), demo_half(size)), outline_stroke(size));
    c.into_frame()
}

/// Regular octagon with flat sides facing the axes, as wide as the demo square.
pub fn octagon_outline(size: usize) -> Frame {
    let mut c = Canvas::new(size, size);
    let r = demo_half(size) / FRAC_PI_8.cos();
    c.closed(&regular_polygon(c.center(), r, 8, FRAC_PI_8), outline_stroke(size));
    c.into_frame()
}

/// Square sides drawn as `dashes` strokes each, with a dash on every corner.
pub fn dashed_square(size: usize, dashes: usize) -> Frame {
    let mut c = Canvas::new(size, size);
    let corners = square(c.center(), demo_half(size));
    let parts = (2 * dashes - 1) as f64;
    for k in 0..4 {
        let (a, b) = (corners[k], corners[(k + 1) % 4]);
        let lerp = |t: f64| (a.0 + (b.0 - a.0) * t, a.1 + (b.1 - a.1) * t);
        for d in 0..dashes {
            let t0 = 2.0 * d as f64 / parts;
            c.segment(lerp(t0), lerp(t0 + 1.0 / parts), outline_stroke(size));
        }
    }
    c.into_frame()
}

/// Square whose sides keep only their central `keep` fraction.
pub fn corner_cut_square(size: usize, keep: f64) -> Frame {
    let mut c = Canvas::new(size, size);
    let corners = square(c.center(), demo_half(size));
    let lo = (1.0 - keep) / 2.0;
    for k in 0..4 {
        let (a, b) = (corners[k], corners[(k + 1) % 4]);
        let lerp = |t: f64| (a.0 + (b.0 - a.0) * t, a.1 + (b.1 - a.1) * t);
        c.segment(lerp(lo), lerp(1.0 - lo), outline_stroke(size));
    }
    c.into_frame()
}

fn shape(size: usize, name: &str) -> Frame {
    let mut c = Canvas::new(size, size);
    let ctr = c.center();
    let r = 0.38 * size as f64;
    let w = outline_stroke(size);
    match name {
        "square" => return square_outline(size),
        "octagon" => return octagon_outline(size),
        "dashed-square" => return dashed_square(size, 4),
        "corner-cut-square" => return corner_cut_square(size, 0.5),
        "triangle" => c.closed(&regular_polygon(ctr, r, 3, -PI / 2.0), w),
        "pentagon" => c.closed(&regular_polygon(ctr, r, 5, -PI / 2.0), w),
        "hexagon" => c.closed(&regular_polygon(ctr, r, 6, 0.0), w),
        "circle" => c.closed(&regular_polygon(ctr, r, 96, 0.0), w),
        "star" => c.closed(&star(ctr, r, 0.45 * r, 5), w),
        "diamond" => c.fill(&regular_polygon(ctr, r, 4, 0.0)),
        "filled-square" => c.fill(&square(ctr, 0.6 * r)),
        "filled-disc" => c.disc(ctr, 0.7 * r),
        "cross" => {
            let a = 0.25 * r;
            c.fill(&[
                (ctr.0 - a, ctr.1 - r),
                (ctr.0 + a, ctr.1 - r),
                (ctr.0 + a, ctr.1 - a),
                (ctr.0 + r, ctr.1 - a),
                (ctr.0 + r, ctr.1 + a),
                (ctr.0 + a, ctr.1 + a),
                (ctr.0 + a, ctr.1 + r),
                (ctr.0 - a, ctr.1 + r),
                (ctr.0 - a, ctr.1 + a),
                (ctr.0 - r, ctr.1 + a),
                (ctr.0 - r, ctr.1 - a),
                (ctr.0 - a, ctr.1 - a),
            ])
        }
        "rings" => {
            c.closed(&regular_polygon(ctr, r, 96, 0.0), w);
            c.closed(&regular_polygon(ctr, 0.5 * r, 64, 0.0), w);
        }
        _ => unreachable!("unknown shape {name}"),
    }
    c.into_frame()
}

const SHAPES: [&str; 14] = [
    "square",
    "octagon",
    "dashed-square",
    "corner-cut-square",
    "triangle",
    "pentagon",
    "hexagon",
    "circle",
    "star",
    "diamond",
    "filled-square",
    "filled-disc",
    "cross",
    "rings",
];

fn offset(pts: &[Point], c: Point) -> Vec<Point> {
    pts.iter().map(|p| (p.0 + c.0, p.1 + c.1)).collect()
}

fn face(size: usize, smile: bool) -> Frame {
    let mut c = Canvas::new(size, size);
    let ctr = c.center();
    let r = 0.36 * size as f64;
    let w = outline_stroke(size);
    c.closed(&arc(ctr, 0.85 * r, r, 0.0, 2.0 * PI, 96), w);
    c.disc((ctr.0 - 0.35 * r, ctr.1 - 0.25 * r), 0.12 * r);
    c.disc((ctr.0 + 0.35 * r, ctr.1 - 0.25 * r), 0.12 * r);
    let mouth = if smile {
        arc((ctr.0, ctr.1 + 0.1 * r), 0.45 * r, 0.35 * r, 0.15 * PI, 0.85 * PI, 24)
    } else {
        arc((ctr.0, ctr.1 + 0.65 * r), 0.45 * r, 0.3 * r, 1.15 * PI, 1.85 * PI, 24)
    };
    c.polyline(&mouth, w);
    c.into_frame()
}

fn fish(size: usize, slim: bool) -> Frame {
    let mut c = Canvas::new(size, size);
    let ctr = c.center();
    let s = size as f64;
    let (rx, ry) = if slim { (0.28 * s, 0.11 * s) } else { (0.25 * s, 0.16 * s) };
    let body_c = (ctr.0 - 0.06 * s, ctr.1);
    c.fill(&arc(body_c, rx, ry, 0.0, 2.0 * PI, 96));
    let tail = [(0.0, 0.0), (0.16 * s, -0.13 * s), (0.16 * s, 0.13 * s)];
    c.fill(&offset(&tail, (body_c.0 + rx - 0.04 * s, body_c.1)));
    // Hollow eye.
    let mut frame = c.into_frame();
    let eye = (body_c.0 - 0.6 * rx, body_c.1 - 0.25 * ry);
    let er = 0.035 * s;
    frame = Frame::from_fn(size, size, |x, y| {
        let d = ((x as f64 - eye.0).powi(2) + (y as f64 - eye.1).powi(2)).sqrt();
        if d < er {
            0.0
        } else {
            frame.get(x, y)
        }
    });
    frame
}

/// The full corpus in a fixed order.
pub fn generate(size: usize) -> Vec<CorpusImage> {
    let mut out = Vec::new();
    for ch in ('A'..='Z').chain('0'..='9') {
        let category = if ch.is_ascii_digit() { "digit" } else { "letter" };
        out.push(CorpusImage {
            id: format!("{category}-{ch}"),
            category,
            frame: render_text(size, &ch.to_string()),
        });
    }
    for w in WORDS {
        out.push(CorpusImage {
            id: format!("word-{}", w.to_lowercase()),
            category: "word",
            frame: render_text(size, w),
        });
    }
    for s in SHAPES {
        out.push(CorpusImage {
            id: format!("shape-{s}"),
            category: "shape",
            frame: shape(size, s),
        });
    }
    for (id, frame) in [
        ("face-smile", face(size, true)),
        ("face-frown", face(size, false)),
        ("fish-round", fish(size, false)),
        ("fish-slim", fish(size, true)),
    ] {
        out.push(CorpusImage {
            id: id.to_string(),
            category: "silhouette",
            frame,
        });
    }
    out
}

/// Write the corpus as binary PGM files named `<id>.pgm`.
pub fn write(dir: &Path, size: usize) -> Result<Vec<String>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut ids = Vec::new();
    for img in generate(size) {
        save_pgm(&img.frame, &dir.join(format!("{}.pgm", img.id)))?;
        ids.push(img.id);
    }
    Ok(ids)
}

/// Load every `.pgm` / `.png` in `dir`, sorted by file name.
pub fn load_dir(dir: &Path) -> Result<Vec<(String, Frame)>> {
    let mut paths: Vec<_> = fs::read_dir(dir)
        .with_context(|| format!("reading corpus directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            matches!(
                p.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref(),
                Some("pgm" | "png")
            )
        })
        .collect();
    paths.sort();
    if paths.is_empty() {
        bail!("no .pgm or .png images in {}", dir.display());
    }
    paths
        .into_iter()
        .map(|p| {
            let id = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            Ok((id, load_frame(&p)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_has_at_least_sixty_distinct_images() {
        let corpus = generate(64);
        assert!(corpus.len() >= 60);
        let mut ids: Vec<&str> = corpus.iter().map(|c| c.id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), corpus.len());
        for img in &corpus {
            let ink: f64 = img.frame.pixels().iter().sum();
            assert!(ink > 10.0, "{} is blank", img.id);
        }
    }

    #[test]
    fn corner_cut_square_stays_inside_the_square() {
        let full = square_outline(100);
        let cut = corner_cut_square(100, 0.5);
        for (a, b) in full.pixels().iter().zip(cut.pixels()) {
            assert!(b <= a);
        }
        assert!(full.get(20, 20) > 0.5);
        assert_eq!(cut.get(20, 20), 0.0);
    }
}
