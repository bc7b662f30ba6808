//! Geometric image transforms about the frame center. Samples falling outside
//! the source frame read as background (0).

use serde::{Deserialize, Serialize};

use rpn_core::Frame;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Interpolation {
    Nearest,
    #[default]
    Bilinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TransformKind {
    Rotation,
    Scale,
    Shift,
}

impl TransformKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Rotation => "rotation",
            Self::Scale => "scale",
            Self::Shift => "shift",
        }
    }
}

fn sample(src: &Frame, x: f64, y: f64, interp: Interpolation) -> f64 {
    let (w, h) = (src.width() as isize, src.height() as isize);
    let at = |xi: isize, yi: isize| {
        if xi < 0 || yi < 0 || xi >= w || yi >= h {
            0.0
        } else {
            src.get(xi as usize, yi as usize)
        }
    };
    match interp {
        Interpolation::Nearest => at(x.round() as isize, y.round() as isize),
        Interpolation::Bilinear => {
            let (x0, y0) = (x.floor(), y.floor());
            let (fx, fy) = (x - x0, y - y0);
            let (xi, yi) = (x0 as isize, y0 as isize);
            let top = at(xi, yi) * (1.0 - fx) + at(xi + 1, yi) * fx;
            let bottom = at(xi, yi + 1) * (1.0 - fx) + at(xi + 1, yi + 1) * fx;
            top * (1.0 - fy) + bottom * fy
        }
    }
}

/// Inverse-map every output pixel through `f` (output offset from center to
/// source offset from center).
fn warp(src: &Frame, interp: Interpolation, f: impl Fn(f64, f64) -> (f64, f64)) -> Frame {
    let (cx, cy) = src.center();
    Frame::from_fn(src.width(), src.height(), |x, y| {
        let (sx, sy) = f(x as f64 - cx, y as f64 - cy);
        sample(src, sx + cx, sy + cy, interp)
    })
}

/// Rotate content by `angle` radians about the center. Positive angles increase
/// `atan2(dy, dx)`, which is clockwise on screen.
pub fn rotate(src: &Frame, angle: f64, interp: Interpolation) -> Frame {
    if angle == 0.0 {
        return src.clone();
    }
    let (s, c) = angle.sin_cos();
    warp(src, interp, |dx, dy| (c * dx + s * dy, -s * dx + c * dy))
}

/// Magnify content by `factor` about the center.
pub fn scale(src: &Frame, factor: f64, interp: Interpolation) -> Frame {
    if factor == 1.0 {
        return src.clone();
    }
    warp(src, interp, |dx, dy| (dx / factor, dy / factor))
}

/// Translate content by whole pixels.
pub fn shift(src: &Frame, dx: isize, dy: isize) -> Frame {
    let (w, h) = (src.width() as isize, src.height() as isize);
    Frame::from_fn(src.width(), src.height(), |x, y| {
        let (sx, sy) = (x as isize - dx, y as isize - dy);
        if sx < 0 || sy < 0 || sx >= w || sy >= h {
            0.0
        } else {
            src.get(sx as usize, sy as usize)
        }
    })
}

/// Apply one sweep step. Shift values are fractions of the frame width and
/// move content along +x.
pub fn apply(src: &Frame, kind: TransformKind, value: f64, interp: Interpolation) -> Frame {
    match kind {
        TransformKind::Rotation => rotate(src, value, interp),
        TransformKind::Scale => scale(src, value, interp),
        TransformKind::Shift => shift(src, (value * src.width() as f64).round() as isize, 0),
    }
}
