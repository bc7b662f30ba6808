use serde::{Deserialize, Serialize};

use crate::error::{Result, RpnError};

/// Row-major real-valued grayscale image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl Frame {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(RpnError::invalid("frame", "width and height must be >= 1"));
        }
        if pixels.len() != width * height {
            return Err(RpnError::DimensionMismatch {
                expected: format!("{} pixels", width * height),
                actual: format!("{} pixels", pixels.len()),
            });
        }
        if let Some(i) = pixels.iter().position(|p| !p.is_finite()) {
            return Err(RpnError::invalid(
                "pixels",
                format!("non-finite value at index {i}"),
            ));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        Self::new(width, height, vec![value; width * height]).expect("valid constant frame")
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels).expect("from_fn produced an invalid frame")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<f64> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    /// Geometric center in pixel coordinates.
    pub fn center(&self) -> (f64, f64) {
        (
            (self.width as f64 - 1.0) / 2.0,
            (self.height as f64 - 1.0) / 2.0,
        )
    }

    /// Quarter turns clockwise on screen (x right, y down).
    pub fn rotate90(&self, quarter_turns: usize) -> Frame {
        let mut out = self.clone();
        for _ in 0..quarter_turns % 4 {
            let (w, h) = (out.width, out.height);
            let mut pixels = vec![0.0; w * h];
            // (x, y) -> (h - 1 - y, x)
            for y in 0..h {
                for x in 0..w {
                    pixels[x * h + (h - 1 - y)] = out.pixels[y * w + x];
                }
            }
            out = Frame {
                width: h,
                height: w,
                pixels,
            };
        }
        out
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Frame {
        Frame {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|&p| f(p)).collect(),
        }
    }
}
